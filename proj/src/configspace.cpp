/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/configspace.hpp>

#include <mipfolio/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace mipfolio {

using nlohmann::json;

namespace {

std::string rounded(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return std::string(buf) == "-0.000000" ? "0.000000" : buf;
}

void require_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view what)
{
  if (!j.is_object()) { fail(Errc::invalid_config, std::string(what) + " must be a JSON object"); }
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(Errc::invalid_config, "unknown key '" + key + "' in " + std::string(what));
    }
  }
}

template <class T>
T field(const json& j, const char* key, std::string_view what)
{
  if (!j.contains(key)) { fail(Errc::invalid_config, std::string(what) + " is missing '" + key + "'"); }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(Errc::invalid_config, std::string(what) + " has a malformed '" + key + "'");
  }
}

json to_json_value(const Configuration& c)
{
  json ops = json::array();
  for (const auto& op : c.destroy_ops) { ops.push_back(op.id()); }
  json acc{{"kind", to_string(c.acceptance.kind)}};
  if (c.acceptance.kind == AcceptKind::simulated_annealing) { acc["step"] = c.acceptance.step; }
  json pol{{"kind", to_string(c.policy.kind)}};
  if (c.policy.kind == PolicyKind::epsilon_greedy) { pol["epsilon"] = c.policy.value; }
  if (c.policy.kind == PolicyKind::softmax) { pol["tau"] = c.policy.value; }
  const auto& r = c.rewards;
  return json{{"id", c.id},
              {"destroy_ops", ops},
              {"acceptance", acc},
              {"policy", pol},
              {"rewards", json::array({r.best, r.better, r.accept, r.reject})}};
}

Configuration from_json_value(const json& j)
{
  require_keys(j, {"id", "destroy_ops", "acceptance", "policy", "rewards"}, "configuration");
  Configuration c;
  c.id = field<std::string>(j, "id", "configuration");
  for (const auto& op : field<std::vector<std::string>>(j, "destroy_ops", "configuration")) {
    c.destroy_ops.push_back(OperatorSpec::parse(op));
  }

  const json& acc = j.at("acceptance");
  require_keys(acc, {"kind", "step"}, "acceptance");
  const auto akind = field<std::string>(acc, "kind", "acceptance");
  if (akind == "hill_climbing") {
    if (acc.contains("step")) { fail(Errc::invalid_config, "hill_climbing takes no step"); }
    c.acceptance = AcceptanceCriterion::hill_climbing();
  } else if (akind == "simulated_annealing") {
    c.acceptance = AcceptanceCriterion::simulated_annealing(field<double>(acc, "step", "acceptance"));
  } else {
    fail(Errc::invalid_config, "unknown acceptance kind '" + akind + "'");
  }

  const json& pol = j.at("policy");
  require_keys(pol, {"kind", "epsilon", "tau"}, "policy");
  const auto pkind = field<std::string>(pol, "kind", "policy");
  if (pkind == "epsilon_greedy" && !pol.contains("tau")) {
    c.policy = {PolicyKind::epsilon_greedy, field<double>(pol, "epsilon", "policy")};
  } else if (pkind == "softmax" && !pol.contains("epsilon")) {
    c.policy = {PolicyKind::softmax, field<double>(pol, "tau", "policy")};
  } else if (pkind == "thompson" && !pol.contains("epsilon") && !pol.contains("tau")) {
    c.policy = {PolicyKind::thompson, 0.0};
  } else {
    fail(Errc::invalid_config, "malformed policy '" + pkind + "'");
  }

  const auto r = field<std::vector<double>>(j, "rewards", "configuration");
  if (r.size() != 4) { fail(Errc::invalid_config, "rewards must have four entries"); }
  c.rewards = RewardVector{r[0], r[1], r[2], r[3]};
  c.validate();
  return c;
}

json parse_json(std::string_view text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(Errc::invalid_config, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

void Configuration::validate() const
{
  if (destroy_ops.size() < kMinDestroyOps || destroy_ops.size() > kMaxDestroyOps) {
    fail(Errc::invalid_config, "configuration '" + id + "' needs 4 to 16 destroy operators");
  }
  std::set<std::string> seen;
  std::set<Family> families;
  for (const auto& op : destroy_ops) {
    op.validate();
    if (!seen.insert(op.id()).second) {
      fail(Errc::invalid_config, "configuration '" + id + "' repeats operator " + op.id());
    }
    families.insert(op.family);
  }
  if (destroy_ops.size() >= kFamilies.size() && families.size() != kFamilies.size()) {
    fail(Errc::invalid_config, "configuration '" + id + "' must cover every destroy family");
  }
  acceptance.validate();
  if (acceptance.kind == AcceptKind::simulated_annealing && acceptance.temperature != 1.0) {
    fail(Errc::invalid_config, "annealing starts at temperature 1");
  }
  policy.validate();
  if (!rewards.in_pool()) { fail(Errc::invalid_config, "reward vector is not in the pool"); }
  if (policy.kind == PolicyKind::thompson && !rewards.is_binary()) {
    fail(Errc::invalid_config, "Thompson sampling needs a binary reward vector");
  }
}

std::string Configuration::fingerprint() const
{
  std::vector<std::string> ids;
  for (const auto& op : destroy_ops) { ids.push_back(op.id()); }
  std::sort(ids.begin(), ids.end());
  std::string s;
  for (const auto& i : ids) { s += i + ","; }
  s += "|" + std::string(to_string(acceptance.kind));
  if (acceptance.kind == AcceptKind::simulated_annealing) { s += ":" + rounded(acceptance.step); }
  s += "|" + std::string(to_string(policy.kind));
  if (policy.kind != PolicyKind::thompson) { s += ":" + rounded(policy.value); }
  s += "|" + rounded(rewards.best) + "," + rounded(rewards.better) + "," + rounded(rewards.accept) + "," +
       rounded(rewards.reject);
  return s;
}

std::vector<OperatorSpec> sample_destroy_set(Rng& rng, std::optional<std::size_t> forced_count)
{
  const std::size_t n = forced_count ? *forced_count : kMinDestroyOps + rng.index(kMaxDestroyOps - kMinDestroyOps + 1);
  if (n < kMinDestroyOps || n > kMaxDestroyOps) { fail(Errc::invalid_argument, "destroy set size outside [4, 16]"); }

  std::vector<OperatorSpec> out;
  if (n >= kFamilies.size()) {
    for (Family f : kFamilies) {
      const auto members = family_members(f);
      out.push_back(members[rng.index(members.size())]);
    }
    std::vector<OperatorSpec> rest;
    for (const auto& op : operator_catalog()) {
      if (std::find(out.begin(), out.end(), op) == out.end()) { rest.push_back(op); }
    }
    for (std::size_t k : rng.sample_without_replacement(rest.size(), n - kFamilies.size())) { out.push_back(rest[k]); }
  } else {
    for (std::size_t k : rng.sample_without_replacement(kFamilies.size(), n)) {
      const auto members = family_members(kFamilies[k]);
      out.push_back(members[rng.index(members.size())]);
    }
  }
  return out;
}

Configuration sample_config(Rng& rng)
{
  Configuration c;
  c.destroy_ops = sample_destroy_set(rng);
  c.acceptance  = rng.index(2) == 0 ? AcceptanceCriterion::hill_climbing()
                                    : AcceptanceCriterion::simulated_annealing(rng.uniform(0.01, 1.0));
  switch (rng.index(3)) {
    case 0: c.policy = {PolicyKind::epsilon_greedy, rng.uniform(0.0, 0.5)}; break;
    case 1: c.policy = {PolicyKind::softmax, rng.uniform(1.0, 3.0)}; break;
    default: c.policy = {PolicyKind::thompson, 0.0}; break;
  }
  const auto pool = c.policy.kind == PolicyKind::thompson ? RewardVector::binary_pool() : RewardVector::pool();
  c.rewards       = pool[rng.index(pool.size())];
  return c;
}

std::vector<Configuration> generate_pool(std::size_t size, std::uint64_t seed)
{
  if (size == 0 || size > kMaxPoolSize) { fail(Errc::invalid_argument, "pool size must be in [1, 1000000]"); }
  const int width = std::max(3, static_cast<int>(std::to_string(size - 1).size()));
  Rng rng(seed);
  std::unordered_set<std::string> seen;
  std::vector<Configuration> pool;
  pool.reserve(size);
  for (std::size_t slot = 0; slot < size; ++slot) {
    bool placed = false;
    for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
      Configuration c = sample_config(rng);
      if (!seen.insert(c.fingerprint()).second) { continue; }
      const std::string digits = std::to_string(slot);
      c.id = "cfg_" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
      pool.push_back(std::move(c));
      placed = true;
    }
    if (!placed) { fail(Errc::pool_exhausted, "no distinct configuration for slot " + std::to_string(slot)); }
  }
  return pool;
}

Configuration default_config()
{
  Configuration c;
  c.id = "default";
  for (const char* op : {"c", "m_10", "m_30", "lb_10", "lb_30", "p_05", "p_15", "r_30", "ri_30"}) {
    c.destroy_ops.push_back(OperatorSpec::parse(op));
  }
  c.acceptance = AcceptanceCriterion::hill_climbing();
  c.policy     = {PolicyKind::epsilon_greedy, 0.15};
  c.rewards    = RewardVector{8, 4, 2, 1};
  return c;
}

std::string config_to_json(const Configuration& config) { return to_json_value(config).dump(2) + "\n"; }

Configuration config_from_json(std::string_view text) { return from_json_value(parse_json(text)); }

std::string pool_to_json(const std::vector<Configuration>& pool)
{
  json arr = json::array();
  for (const auto& c : pool) { arr.push_back(to_json_value(c)); }
  return arr.dump(2) + "\n";
}

std::vector<Configuration> pool_from_json(std::string_view text)
{
  const json j = parse_json(text);
  if (!j.is_array() || j.empty()) { fail(Errc::invalid_config, "a pool file is a non-empty JSON array"); }
  std::vector<Configuration> pool;
  std::set<std::string> ids;
  for (const auto& item : j) {
    pool.push_back(from_json_value(item));
    if (!ids.insert(pool.back().id).second) { fail(Errc::invalid_config, "duplicate configuration id " + pool.back().id); }
  }
  return pool;
}

std::vector<Configuration> read_pool_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) { fail(Errc::io_error, "cannot open '" + path + "'"); }
  std::stringstream ss;
  ss << in.rdbuf();
  return pool_from_json(ss.str());
}

void write_pool_file(const std::vector<Configuration>& pool, const std::string& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { fail(Errc::io_error, "cannot write '" + path + "'"); }
  out << pool_to_json(pool);
}

}  // namespace mipfolio
