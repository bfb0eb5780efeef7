/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The mipfolio Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <mipfolio/bandit.hpp>

#include <mipfolio/error.hpp>

#include <algorithm>
#include <cmath>

namespace mipfolio {

namespace {

constexpr std::array<RewardVector, 8> kPool{{
  {8, 4, 2, 1},
  {3, 2, 1, 0},
  {5, 2, 1, 0},
  {16, 4, 2, 1},
  {8, 3, 1, 0},
  {5, 4, 2, 0},
  {1, 1, 1, 0},
  {1, 1, 0, 0},
}};

std::size_t argmax_lowest(std::span<const double> v)
{
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) { best = i; }
  }
  return best;
}

}  // namespace

std::string_view to_string(Outcome outcome)
{
  switch (outcome) {
    case Outcome::best: return "best";
    case Outcome::better: return "better";
    case Outcome::accept: return "accept";
    case Outcome::reject: return "reject";
  }
  return "unknown";
}

double RewardVector::operator[](Outcome o) const
{
  switch (o) {
    case Outcome::best: return best;
    case Outcome::better: return better;
    case Outcome::accept: return accept;
    case Outcome::reject: return reject;
  }
  return 0.0;
}

double RewardVector::max() const { return std::max({best, better, accept, reject}); }

bool RewardVector::is_binary() const
{
  auto bin = [](double r) { return r == 0.0 || r == 1.0; };
  return bin(best) && bin(better) && bin(accept) && bin(reject);
}

std::span<const RewardVector> RewardVector::pool() { return kPool; }

std::span<const RewardVector> RewardVector::binary_pool() { return std::span<const RewardVector>(kPool).subspan(6, 2); }

bool RewardVector::in_pool() const { return std::find(kPool.begin(), kPool.end(), *this) != kPool.end(); }

std::string_view to_string(PolicyKind kind)
{
  switch (kind) {
    case PolicyKind::epsilon_greedy: return "epsilon_greedy";
    case PolicyKind::softmax: return "softmax";
    case PolicyKind::thompson: return "thompson";
  }
  return "unknown";
}

void PolicyParams::validate() const
{
  switch (kind) {
    case PolicyKind::epsilon_greedy:
      if (!(value >= 0.0 && value <= 0.5)) { fail(Errc::invalid_config, "epsilon outside [0, 0.5]"); }
      break;
    case PolicyKind::softmax:
      if (!(value >= 1.0 && value <= 3.0)) { fail(Errc::invalid_config, "tau outside [1, 3]"); }
      break;
    case PolicyKind::thompson: break;
  }
}

std::vector<double> softmax_distribution(std::span<const double> means, double tau)
{
  std::vector<double> p(means.size());
  if (means.empty()) { return p; }
  const double top = *std::max_element(means.begin(), means.end());
  double total     = 0.0;
  for (std::size_t i = 0; i < means.size(); ++i) {
    p[i] = std::exp((means[i] - top) / tau);
    total += p[i];
  }
  for (auto& v : p) { v /= total; }
  return p;
}

PolicyState::PolicyState(PolicyParams params, std::size_t arms) : params_(params), arms_(arms)
{
  params_.validate();
  if (arms == 0) { fail(Errc::invalid_config, "a policy needs at least one arm"); }
}

double PolicyState::mean(std::size_t i) const
{
  const auto& a = arms_[i];
  return a.pulls == 0 ? 0.0 : a.reward_sum / static_cast<double>(a.pulls);
}

std::vector<double> PolicyState::means() const
{
  std::vector<double> out(arms_.size());
  for (std::size_t i = 0; i < arms_.size(); ++i) { out[i] = mean(i); }
  return out;
}

std::size_t PolicyState::select_arm(Rng& rng) const
{
  for (std::size_t i = 0; i < arms_.size(); ++i) {
    if (arms_[i].pulls == 0) { return i; }
  }
  switch (params_.kind) {
    case PolicyKind::epsilon_greedy: {
      if (rng.uniform01() < params_.value) { return rng.index(arms_.size()); }
      const auto m = means();
      return argmax_lowest(m);
    }
    case PolicyKind::softmax: {
      const auto p = softmax_distribution(means(), params_.value);
      const double u = rng.uniform01();
      double acc     = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) { return i; }
      }
      return p.size() - 1;
    }
    case PolicyKind::thompson: {
      std::vector<double> draws(arms_.size());
      for (std::size_t i = 0; i < arms_.size(); ++i) {
        draws[i] = rng.beta(1.0 + static_cast<double>(arms_[i].successes), 1.0 + static_cast<double>(arms_[i].failures));
      }
      return argmax_lowest(draws);
    }
  }
  return 0;
}

void PolicyState::update(std::size_t arm, Outcome outcome, const RewardVector& rewards)
{
  if (arm >= arms_.size()) { fail(Errc::invalid_argument, "arm index out of range"); }
  const double r = rewards[outcome];
  auto& a        = arms_[arm];
  if (params_.kind == PolicyKind::thompson) {
    if (!rewards.is_binary()) {
      fail(Errc::non_binary_reward_for_thompson, "Thompson sampling needs a 0/1 reward vector");
    }
    if (r == 1.0) {
      ++a.successes;
    } else {
      ++a.failures;
    }
  }
  ++a.pulls;
  const double scale = rewards.max();
  a.reward_sum += scale > 0.0 ? r / scale : 0.0;
}

}  // namespace mipfolio
