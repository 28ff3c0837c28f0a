// SPDX-License-Identifier: Apache-2.0
#include "femtocap/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace femtocap {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Plain water-filling of `budget` over the sub-channels listed in `idx`.
// Returns the water level; floors are read through `idx`.
double water_level(const std::vector<double>& floors, std::vector<std::size_t> idx, double budget) {
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return floors[a] < floors[b]; });
  double prefix = 0.0;
  double level = floors[idx.front()];
  for (std::size_t k = 0; k < idx.size(); ++k) {
    prefix += floors[idx[k]];
    level = (budget + prefix) / static_cast<double>(k + 1);
    if (k + 1 == idx.size() || level <= floors[idx[k + 1]]) break;
  }
  return level;
}

AllocationResult finish(const ChannelState& state, std::vector<double> powers, double level) {
  AllocationResult r;
  r.powers = std::move(powers);
  r.water_level = level;
  r.sum_rate = sum_rate(state, r.powers);
  r.certificate = check_kkt(state, r);
  return r;
}

}  // namespace

void ChannelState::validate() const {
  if (floors.size() != caps.size())
    throw std::invalid_argument("floors and caps differ in length (" + std::to_string(floors.size()) +
                                " vs " + std::to_string(caps.size()) + ")");
  if (floors.empty()) throw std::invalid_argument("channel state has no sub-channels");
  for (double f : floors)
    if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("floors must be positive and finite");
  for (double k : caps)
    if (!(k >= 0.0)) throw std::invalid_argument("caps must be >= 0");
  if (!(total_power >= 0.0) || !std::isfinite(total_power))
    throw std::invalid_argument("total power must be >= 0 and finite");
}

ChannelState ChannelState::uncapped(std::vector<double> floors, double total_power) {
  ChannelState s;
  s.caps.assign(floors.size(), kNoCap);
  s.floors = std::move(floors);
  s.total_power = total_power;
  return s;
}

double sum_rate(const ChannelState& state, std::span<const double> powers) {
  double r = 0.0;
  for (std::size_t n = 0; n < powers.size(); ++n) r += std::log2(1.0 + powers[n] / state.floors[n]);
  return r;
}

AllocationResult waterfill_capped_iterative(const ChannelState& state) {
  state.validate();
  const std::size_t n = state.size();
  std::vector<double> powers(n, 0.0);
  std::vector<std::size_t> free(n);
  std::iota(free.begin(), free.end(), std::size_t{0});
  double budget = state.total_power;
  double level = kNoCap;

  // each round pins at least one sub-channel, so N rounds suffice
  for (std::size_t round = 0; round < n && !free.empty(); ++round) {
    level = water_level(state.floors, free, budget);
    std::vector<std::size_t> keep;
    keep.reserve(free.size());
    double pinned = 0.0;
    for (std::size_t i : free) {
      if (level - state.floors[i] > state.caps[i]) {
        powers[i] = state.caps[i];
        pinned += state.caps[i];
      } else {
        keep.push_back(i);
      }
    }
    if (keep.size() == free.size()) {
      for (std::size_t i : free) powers[i] = std::max(0.0, level - state.floors[i]);
      return finish(state, std::move(powers), level);
    }
    budget -= pinned;
    free = std::move(keep);
  }
  // every sub-channel sits at its cap with budget to spare
  return finish(state, std::move(powers), kNoCap);
}

AllocationResult waterfill_capped_bisection(const ChannelState& state, double tol) {
  state.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  const std::size_t n = state.size();
  const double cap_sum = std::accumulate(state.caps.begin(), state.caps.end(), 0.0);
  if (cap_sum <= state.total_power) return finish(state, state.caps, kNoCap);

  const double target = state.total_power;
  auto fill = [&](double level) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::min(state.caps[i], std::max(0.0, level - state.floors[i]));
    return s;
  };
  const auto [fmin, fmax] = std::minmax_element(state.floors.begin(), state.floors.end());
  double lo = *fmin;
  double hi = *fmax + state.total_power;
  double mid = lo;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    const double got = fill(mid);
    if (std::abs(got - target) <= tol * state.total_power) break;
    (got < target ? lo : hi) = mid;
    if (hi - lo <= 0.0) break;
  }
  if (target == 0.0) mid = *fmin;

  std::vector<double> powers(n);
  for (std::size_t i = 0; i < n; ++i) powers[i] = std::min(state.caps[i], std::max(0.0, mid - state.floors[i]));
  return finish(state, std::move(powers), mid);
}

namespace {

// Budget multiplier implied by the powers alone: mean marginal over the
// sub-channels strictly between 0 and their cap, else the boundary value.
double infer_lambda(const ChannelState& state, const std::vector<double>& powers, double used, double eps) {
  double interior = 0.0, lo = 0.0, hi = kNoCap;
  std::size_t count = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double p = powers[i];
    const double marginal = 1.0 / (std::max(0.0, p) + state.floors[i]);
    if (p <= eps) {
      lo = std::max(lo, marginal);
    } else if (state.caps[i] - p <= eps) {
      hi = std::min(hi, marginal);
    } else {
      interior += marginal;
      ++count;
    }
  }
  if (count > 0) return interior / static_cast<double>(count);
  if (state.total_power - used > eps) return 0.0;
  return std::isinf(hi) ? lo : hi;
}

}  // namespace

KktCertificate check_kkt(const ChannelState& state, const AllocationResult& result, double tol) {
  const std::size_t n = state.size();
  if (result.powers.size() != n)
    throw std::invalid_argument("allocation length does not match the channel state");

  KktCertificate c;
  c.mu.assign(n, 0.0);
  c.nu.assign(n, 0.0);
  const double scale = state.total_power > 0.0 ? state.total_power : 1.0;
  const double used = std::accumulate(result.powers.begin(), result.powers.end(), 0.0);

  auto infeasible = [&] {
    c.max_residual = kNoCap;
    c.residuals.primal = kNoCap;
    return c;
  };
  if (used - state.total_power > tol * scale) return infeasible();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = result.powers[i];
    if (!std::isfinite(p) || p < -tol * scale || p - state.caps[i] > tol * scale) return infeasible();
  }
  if (std::isnan(result.water_level)) return infeasible();

  KktResiduals& r = c.residuals;
  r.primal = std::max(0.0, used - state.total_power) / scale;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = result.powers[i];
    r.primal = std::max({r.primal, -p / scale, (p - state.caps[i]) / scale});
  }

  c.lambda = result.water_level > 0.0 ? (std::isinf(result.water_level) ? 0.0 : 1.0 / result.water_level)
                                      : infer_lambda(state, result.powers, used, tol * scale);
  r.dual = std::max(0.0, -c.lambda);
  r.complementary = std::abs(c.lambda * (state.total_power - used));

  for (std::size_t i = 0; i < n; ++i) {
    const double p = std::max(0.0, result.powers[i]);
    const double marginal = 1.0 / (p + state.floors[i]);
    // closed intervals at both bounds: whichever multiplier the sign calls for
    c.nu[i] = std::max(0.0, marginal - c.lambda);
    c.mu[i] = std::max(0.0, c.lambda - marginal);
    // caps above the budget can never bind, so slack beyond it is not informative
    const double cap_slack = std::min(state.caps[i] - p, state.total_power);
    r.complementary = std::max({r.complementary, c.mu[i] * p, c.nu[i] * std::max(0.0, cap_slack)});
    const double station = -marginal + c.lambda + c.nu[i] - c.mu[i];
    r.stationarity = std::max(r.stationarity, std::abs(station) * (p + state.floors[i]));
  }
  c.max_residual = std::max({r.primal, r.dual, r.complementary, r.stationarity});
  for (double v : {r.primal, r.dual, r.complementary, r.stationarity})
    if (std::isnan(v)) c.max_residual = kNoCap;
  return c;
}

GridOracleResult oracle_grid_search(const ChannelState& state, std::size_t resolution) {
  state.validate();
  const std::size_t n = state.size();
  if (n > 4) throw std::invalid_argument("grid oracle refuses N > 4 (got " + std::to_string(n) + ")");
  if (resolution == 0) throw std::invalid_argument("grid resolution must be >= 1");

  GridOracleResult best;
  best.objective = -kNoCap;
  const double budget = state.total_power;
  const double step = budget / static_cast<double>(resolution);
  std::vector<double> p(n, 0.0);

  auto rec = [&](auto&& self, std::size_t i, double remaining) -> void {
    if (i + 1 == n) {
      p[i] = std::min(state.caps[i], std::max(0.0, remaining));
      const double obj = sum_rate(state, p);
      if (obj > best.objective) {
        best.objective = obj;
        best.powers = p;
      }
      return;
    }
    const double upper = std::min(state.caps[i], remaining);
    for (std::size_t k = 0;; ++k) {
      const double v = static_cast<double>(k) * step;
      if (v > upper) break;
      p[i] = v;
      self(self, i + 1, remaining - v);
    }
  };
  rec(rec, 0, budget);

  for (std::size_t i = 0; i + 1 < n; ++i) best.bound += step / (state.floors[i] * kLn2);
  return best;
}

}  // namespace femtocap
