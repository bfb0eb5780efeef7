/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/model.hpp>

#include <mipfolio/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mipfolio {

namespace {

enum class Section { none, name, objsense, rows, columns, rhs, ranges, bounds, endata };

struct RowInfo {
  char type;  // 'N', 'L', 'G', 'E'
  std::size_t index;  // position among constrained rows
};

struct PendingRow {
  std::string name;
  char type;
  std::vector<Term> terms;
  double rhs = 0.0;
  std::optional<double> range;
};

std::vector<std::string_view> tokenize(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) { ++i; }
    if (i >= line.size()) { break; }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) { ++j; }
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail_at(Errc code, std::size_t line, const std::string& msg)
{
  fail(code, "line " + std::to_string(line) + ": " + msg);
}

double parse_number(std::string_view tok, std::size_t line)
{
  std::string s(tok);
  // strtod accepts "inf"/"Infinity" and exponent forms like 1e+30.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    fail_at(Errc::malformed_section, line, "expected a number, got '" + s + "'");
  }
  if (v >= 1e30) { return kInf; }
  if (v <= -1e30) { return -kInf; }
  return v;
}

Section section_of(std::string_view head, std::size_t line)
{
  if (head == "NAME") { return Section::name; }
  if (head == "OBJSENSE") { return Section::objsense; }
  if (head == "ROWS") { return Section::rows; }
  if (head == "COLUMNS") { return Section::columns; }
  if (head == "RHS") { return Section::rhs; }
  if (head == "RANGES") { return Section::ranges; }
  if (head == "BOUNDS") { return Section::bounds; }
  if (head == "ENDATA") { return Section::endata; }
  fail_at(Errc::malformed_section, line, "unknown section '" + std::string(head) + "'");
}

bool parse_sense(std::string_view tok, Sense& sense)
{
  if (tok == "MAX" || tok == "MAXIMIZE" || tok == "MAXIMISE") {
    sense = Sense::maximize;
    return true;
  }
  if (tok == "MIN" || tok == "MINIMIZE" || tok == "MINIMISE") {
    sense = Sense::minimize;
    return true;
  }
  return false;
}

class MpsReader {
 public:
  MipModel read(std::istream& in)
  {
    std::string raw;
    std::size_t lineno = 0;
    Section section = Section::none;
    while (std::getline(in, raw)) {
      ++lineno;
      if (!raw.empty() && raw.back() == '\r') { raw.pop_back(); }
      std::string_view line(raw);
      if (line.empty() || line.front() == '*') { continue; }
      auto toks = tokenize(line);
      if (toks.empty()) { continue; }

      if (!std::isspace(static_cast<unsigned char>(line.front()))) {
        section = section_of(toks[0], lineno);
        if (section == Section::name) {
          name_ = toks.size() > 1 ? std::string(toks[1]) : std::string();
        } else if (section == Section::objsense && toks.size() > 1) {
          if (!parse_sense(toks[1], sense_)) {
            fail_at(Errc::malformed_section, lineno, "unknown objective sense '" + std::string(toks[1]) + "'");
          }
        } else if (section == Section::endata) {
          return finish();
        }
        continue;
      }

      switch (section) {
        case Section::none:
        case Section::name:
        case Section::endata:
          fail_at(Errc::malformed_section, lineno, "data line outside of a section");
        case Section::objsense:
          if (!parse_sense(toks[0], sense_)) {
            fail_at(Errc::malformed_section, lineno, "unknown objective sense '" + std::string(toks[0]) + "'");
          }
          break;
        case Section::rows: row_line(toks, lineno); break;
        case Section::columns: column_line(toks, lineno); break;
        case Section::rhs: rhs_line(toks, lineno, false); break;
        case Section::ranges: rhs_line(toks, lineno, true); break;
        case Section::bounds: bound_line(toks, lineno); break;
      }
    }
    fail_at(Errc::malformed_section, lineno + 1, "unexpected end of input, ENDATA missing");
  }

 private:
  void row_line(const std::vector<std::string_view>& toks, std::size_t lineno)
  {
    if (toks.size() != 2 || toks[0].size() != 1) {
      fail_at(Errc::malformed_section, lineno, "ROWS entry needs a type and a name");
    }
    const char type = static_cast<char>(std::toupper(static_cast<unsigned char>(toks[0][0])));
    std::string name(toks[1]);
    if (row_lookup_.count(name) != 0) { fail_at(Errc::duplicate_name, lineno, "row '" + name + "'"); }
    if (type == 'N') {
      if (!objective_row_) {
        objective_row_ = name;
        row_lookup_[name] = RowInfo{'N', SIZE_MAX};
      } else {
        free_rows_.insert(name);
        row_lookup_[name] = RowInfo{'F', SIZE_MAX};
      }
      return;
    }
    if (type != 'L' && type != 'G' && type != 'E') {
      fail_at(Errc::malformed_section, lineno, "unknown row type '" + std::string(toks[0]) + "'");
    }
    row_lookup_[name] = RowInfo{type, rows_.size()};
    rows_.push_back(PendingRow{name, type, {}, 0.0, std::nullopt});
  }

  std::size_t column_index(std::string_view col)
  {
    auto it = col_lookup_.find(std::string(col));
    if (it != col_lookup_.end()) { return it->second; }
    const std::size_t j = vars_.size();
    Variable v;
    v.name = std::string(col);
    v.kind = in_integer_block_ ? VarKind::integer : VarKind::continuous;
    vars_.push_back(v);
    col_lookup_.emplace(v.name, j);
    return j;
  }

  const RowInfo& lookup_row(std::string_view row, std::size_t lineno)
  {
    auto it = row_lookup_.find(std::string(row));
    if (it == row_lookup_.end()) {
      fail_at(Errc::dangling_reference, lineno, "unknown row '" + std::string(row) + "'");
    }
    return it->second;
  }

  void column_line(const std::vector<std::string_view>& toks, std::size_t lineno)
  {
    if (toks.size() >= 3 && toks[1] == "'MARKER'") {
      if (toks[2] == "'INTORG'") {
        in_integer_block_ = true;
      } else if (toks[2] == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        fail_at(Errc::malformed_section, lineno, "unknown marker " + std::string(toks[2]));
      }
      return;
    }
    if (toks.size() != 3 && toks.size() != 5) {
      fail_at(Errc::malformed_section, lineno, "truncated COLUMNS entry");
    }
    const std::size_t j = column_index(toks[0]);
    for (std::size_t k = 1; k + 1 < toks.size(); k += 2) {
      const RowInfo& row = lookup_row(toks[k], lineno);
      const double value = parse_number(toks[k + 1], lineno);
      if (!std::isfinite(value)) { fail_at(Errc::malformed_section, lineno, "infinite coefficient"); }
      if (row.type == 'F') { continue; }
      auto& terms = row.type == 'N' ? objective_terms_ : rows_[row.index].terms;
      if (std::any_of(terms.begin(), terms.end(), [j](const Term& t) { return t.var == j; })) {
        fail_at(Errc::duplicate_name, lineno,
                "repeated entry for column '" + std::string(toks[0]) + "' in row '" + std::string(toks[k]) + "'");
      }
      terms.push_back(Term{j, value});
    }
  }

  void rhs_line(const std::vector<std::string_view>& toks, std::size_t lineno, bool ranges)
  {
    // Set name is optional: an odd token count means it is present.
    const std::size_t first = toks.size() % 2 == 1 ? 1 : 0;
    if (toks.size() < first + 2) {
      fail_at(Errc::malformed_section, lineno, ranges ? "truncated RANGES entry" : "truncated RHS entry");
    }
    for (std::size_t k = first; k + 1 < toks.size(); k += 2) {
      const RowInfo& row = lookup_row(toks[k], lineno);
      const double value = parse_number(toks[k + 1], lineno);
      if (row.type == 'F') { continue; }
      if (row.type == 'N') {
        if (ranges) { fail_at(Errc::malformed_section, lineno, "RANGES entry on the objective row"); }
        objective_offset_ = -value;
        continue;
      }
      if (ranges) {
        rows_[row.index].range = value;
      } else {
        rows_[row.index].rhs = value;
      }
    }
  }

  void bound_line(const std::vector<std::string_view>& toks, std::size_t lineno)
  {
    if (toks.empty()) { return; }
    std::string type(toks[0]);
    const bool needs_value = type == "UP" || type == "LO" || type == "FX" || type == "LI" || type == "UI";
    const bool no_value = type == "FR" || type == "MI" || type == "PL";
    const bool binary = type == "BV";
    if (!needs_value && !no_value && !binary) {
      fail_at(Errc::malformed_section, lineno, "unknown bound type '" + type + "'");
    }
    std::size_t col_pos = 0;
    std::optional<double> value;
    if (needs_value) {
      if (toks.size() == 4) {
        col_pos = 2;
      } else if (toks.size() == 3) {
        col_pos = 1;
      } else {
        fail_at(Errc::malformed_section, lineno, "truncated BOUNDS entry");
      }
      value = parse_number(toks[col_pos + 1], lineno);
    } else if (no_value) {
      if (toks.size() == 3) {
        col_pos = 2;
      } else if (toks.size() == 2) {
        col_pos = 1;
      } else {
        fail_at(Errc::malformed_section, lineno, "malformed BOUNDS entry");
      }
    } else {
      if (toks.size() == 4) {
        col_pos = 2;
      } else if (toks.size() == 3) {
        col_pos = 2;
      } else if (toks.size() == 2) {
        col_pos = 1;
      } else {
        fail_at(Errc::malformed_section, lineno, "malformed BOUNDS entry");
      }
    }
    auto it = col_lookup_.find(std::string(toks[col_pos]));
    if (it == col_lookup_.end()) {
      fail_at(Errc::dangling_reference, lineno, "bound on unknown column '" + std::string(toks[col_pos]) + "'");
    }
    Variable& v = vars_[it->second];
    if (type == "UP" || type == "UI") {
      if (*value < 0.0 && v.lower == 0.0) { v.lower = -kInf; }
      v.upper = *value;
      if (type == "UI") { v.kind = VarKind::integer; }
    } else if (type == "LO" || type == "LI") {
      v.lower = *value;
      if (type == "LI") { v.kind = VarKind::integer; }
    } else if (type == "FX") {
      v.lower = *value;
      v.upper = *value;
    } else if (type == "FR") {
      v.lower = -kInf;
      v.upper = kInf;
    } else if (type == "MI") {
      v.lower = -kInf;
    } else if (type == "PL") {
      v.upper = kInf;
    } else {
      v.kind = VarKind::binary;
      v.lower = 0.0;
      v.upper = 1.0;
    }
  }

  MipModel finish()
  {
    if (!objective_row_) { fail(Errc::malformed_section, "no objective (N) row declared"); }
    for (auto& v : vars_) {
      if (v.kind == VarKind::integer && v.lower == 0.0 && v.upper == 1.0) { v.kind = VarKind::binary; }
    }
    std::vector<LinearConstraint> constraints;
    std::unordered_set<std::string> names;
    for (auto& r : rows_) { names.insert(r.name); }
    auto emit = [&](std::string name, const std::vector<Term>& terms, Relation rel, double rhs) {
      if (normalize_terms(terms).empty()) {
        const bool ok = (rel == Relation::le && 0.0 <= rhs + kFeasibilityTol) ||
                        (rel == Relation::ge && 0.0 >= rhs - kFeasibilityTol) ||
                        (rel == Relation::eq && std::abs(rhs) <= kFeasibilityTol);
        if (!ok) { fail(Errc::invalid_model, "empty row '" + name + "' is violated by every point"); }
        return;
      }
      constraints.push_back(LinearConstraint{std::move(name), terms, rel, rhs});
    };
    for (auto& r : rows_) {
      if (!r.range) {
        const Relation rel = r.type == 'L' ? Relation::le : r.type == 'G' ? Relation::ge : Relation::eq;
        emit(r.name, r.terms, rel, r.rhs);
        continue;
      }
      const double R = *r.range;
      double lo, hi;
      if (r.type == 'L') {
        lo = r.rhs - std::abs(R);
        hi = r.rhs;
      } else if (r.type == 'G') {
        lo = r.rhs;
        hi = r.rhs + std::abs(R);
      } else if (R >= 0.0) {
        lo = r.rhs;
        hi = r.rhs + R;
      } else {
        lo = r.rhs + R;
        hi = r.rhs;
      }
      const std::string lo_name = r.name + "__rlo";
      const std::string hi_name = r.name + "__rhi";
      if (names.count(lo_name) != 0 || names.count(hi_name) != 0) {
        fail(Errc::duplicate_name, "range split of row '" + r.name + "' collides with an existing row");
      }
      emit(lo_name, r.terms, Relation::ge, lo);
      emit(hi_name, r.terms, Relation::le, hi);
    }
    return MipModel(name_, sense_, std::move(vars_), std::move(constraints),
                    Objective{objective_terms_, objective_offset_});
  }

  std::string name_;
  Sense sense_ = Sense::minimize;
  std::optional<std::string> objective_row_;
  std::unordered_set<std::string> free_rows_;
  std::unordered_map<std::string, RowInfo> row_lookup_;
  std::vector<PendingRow> rows_;
  std::unordered_map<std::string, std::size_t> col_lookup_;
  std::vector<Variable> vars_;
  std::vector<Term> objective_terms_;
  double objective_offset_ = 0.0;
  bool in_integer_block_ = false;
};

std::string fmt_num(double v)
{
  if (v == kInf) { return "1e+30"; }
  if (v == -kInf) { return "-1e+30"; }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MipModel parse_mps(std::istream& in) { return MpsReader{}.read(in); }

MipModel parse_mps_string(std::string_view text)
{
  std::istringstream in{std::string(text)};
  return parse_mps(in);
}

MipModel read_mps_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) { fail(Errc::io_error, "cannot open '" + path + "'"); }
  return parse_mps(in);
}

std::string write_mps(const MipModel& model)
{
  std::unordered_set<std::string> row_names;
  for (const auto& c : model.constraints()) { row_names.insert(c.name); }
  std::string obj_row = "OBJ";
  while (row_names.count(obj_row) != 0) { obj_row += '_'; }

  std::ostringstream out;
  out << "NAME" << (model.name().empty() ? "" : " " + model.name()) << '\n';
  if (model.sense() == Sense::maximize) { out << "OBJSENSE\n    MAX\n"; }
  out << "ROWS\n N  " << obj_row << '\n';
  for (const auto& c : model.constraints()) {
    const char* t = c.relation == Relation::le ? "L" : c.relation == Relation::ge ? "G" : "E";
    out << ' ' << t << "  " << c.name << '\n';
  }

  const std::size_t n = model.num_variables();
  std::vector<std::vector<std::pair<std::size_t, double>>> columns(n);  // (row, coef), row SIZE_MAX = objective
  for (const auto& t : model.objective().terms) { columns[t.var].emplace_back(SIZE_MAX, t.coef); }
  for (std::size_t i = 0; i < model.num_constraints(); ++i) {
    for (const auto& t : model.constraints()[i].terms) { columns[t.var].emplace_back(i, t.coef); }
  }

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  const auto& vars = model.variables();
  for (std::size_t j = 0; j < n; ++j) {
    if (vars[j].is_integral() != in_int) {
      in_int = vars[j].is_integral();
      out << "    MARKER" << marker++ << " 'MARKER' " << (in_int ? "'INTORG'" : "'INTEND'") << '\n';
    }
    if (columns[j].empty()) {
      out << "    " << vars[j].name << ' ' << obj_row << " 0\n";
      continue;
    }
    for (const auto& [row, coef] : columns[j]) {
      out << "    " << vars[j].name << ' ' << (row == SIZE_MAX ? obj_row : model.constraints()[row].name)
          << ' ' << fmt_num(coef) << '\n';
    }
  }
  if (in_int) { out << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n"; }

  out << "RHS\n";
  if (model.objective().offset != 0.0) {
    out << "    RHS " << obj_row << ' ' << fmt_num(-model.objective().offset) << '\n';
  }
  for (const auto& c : model.constraints()) {
    if (c.rhs != 0.0) { out << "    RHS " << c.name << ' ' << fmt_num(c.rhs) << '\n'; }
  }

  out << "BOUNDS\n";
  for (const auto& v : vars) {
    const std::string& nm = v.name;
    if (v.kind == VarKind::binary) {
      out << " BV BND " << nm << '\n';
      if (v.lower != 0.0) { out << " LO BND " << nm << ' ' << fmt_num(v.lower) << '\n'; }
      if (v.upper != 1.0) { out << " UP BND " << nm << ' ' << fmt_num(v.upper) << '\n'; }
      continue;
    }
    if (v.lower == v.upper) {
      out << " FX BND " << nm << ' ' << fmt_num(v.lower) << '\n';
      continue;
    }
    if (v.lower == -kInf && v.upper == kInf) {
      out << " FR BND " << nm << '\n';
      continue;
    }
    if (v.lower == -kInf) {
      out << " MI BND " << nm << '\n';
    } else if (v.lower != 0.0) {
      out << " LO BND " << nm << ' ' << fmt_num(v.lower) << '\n';
    }
    if (v.upper != kInf) { out << " UP BND " << nm << ' ' << fmt_num(v.upper) << '\n'; }
  }
  out << "ENDATA\n";
  return out.str();
}

std::string model_to_json(const MipModel& model)
{
  using nlohmann::json;
  auto num = [](double v) -> json {
    if (v == kInf) { return "inf"; }
    if (v == -kInf) { return "-inf"; }
    return v;
  };
  auto terms = [&](const std::vector<Term>& ts) {
    json arr = json::array();
    for (const auto& t : ts) { arr.push_back({{"var", model.variables()[t.var].name}, {"coef", t.coef}}); }
    return arr;
  };
  json j;
  j["name"] = model.name();
  j["sense"] = model.sense() == Sense::minimize ? "minimize" : "maximize";
  j["variables"] = json::array();
  for (const auto& v : model.variables()) {
    const char* kind = v.kind == VarKind::continuous ? "continuous" : v.kind == VarKind::integer ? "integer" : "binary";
    j["variables"].push_back({{"name", v.name}, {"kind", kind}, {"lower", num(v.lower)}, {"upper", num(v.upper)}});
  }
  j["constraints"] = json::array();
  for (const auto& c : model.constraints()) {
    const char* rel = c.relation == Relation::le ? "<=" : c.relation == Relation::ge ? ">=" : "=";
    j["constraints"].push_back({{"name", c.name}, {"terms", terms(c.terms)}, {"relation", rel}, {"rhs", c.rhs}});
  }
  j["objective"] = {{"terms", terms(model.objective().terms)}, {"offset", model.objective().offset}};
  return j.dump(2);
}

}  // namespace mipfolio
