#include "risdmac/capacity.hpp"

#include <algorithm>
#include <cmath>

#include "risdmac/errors.hpp"
#include "risdmac/streams.hpp"

namespace risdmac {
namespace {

std::vector<RatePair> merge_coincident(std::vector<RatePair> v) {
  std::vector<RatePair> out;
  for (const auto& p : v) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  while (out.size() > 1 && out.back() == out.front()) out.pop_back();
  return out;
}

RateRegion doubly_from_cap(double sum_cap) {
  RateRegion r;
  r.kind = MacModel::doubly;
  r.sum_cap = sum_cap;
  r.vertices = merge_coincident({{0.0, 0.0}, {sum_cap, 0.0}, {0.0, sum_cap}});
  return r;
}

RateRegion single_from_caps(double sum_cap, double r2_cap) {
  RateRegion r;
  r.kind = MacModel::single;
  r.sum_cap = sum_cap;
  r.r2_cap = r2_cap;
  r.vertices = merge_coincident(
      {{0.0, 0.0}, {sum_cap, 0.0}, {sum_cap - r2_cap, r2_cap}, {0.0, r2_cap}});
  return r;
}

double mean_snr(const AvgSnrPair& avg, int m) {
  const double mu = m * kProductMean;
  return avg.direct.value() + avg.ris.value() * (m * kProductVariance + mu * mu);
}

struct CapSums {
  double min_cap = 0.0;
  double user1_cap = 0.0;
};

}  // namespace

RateRegion doubly_dirty_region(SnrLinear g1, SnrLinear g2) {
  return doubly_from_cap(std::log2(1.0 + std::min(g1.value(), g2.value())));
}

RateRegion single_dirty_region(SnrLinear g1, SnrLinear g2) {
  return single_from_caps(std::log2(1.0 + g1.value()),
                          std::log2(1.0 + std::min(g1.value(), g2.value())));
}

RateRegion region_for(MacModel model, SnrLinear g1, SnrLinear g2) {
  return model == MacModel::doubly ? doubly_dirty_region(g1, g2) : single_dirty_region(g1, g2);
}

bool contains(const RateRegion& region, RatePair p, double tol) {
  if (p.r1 < -tol || p.r2 < -tol) return false;
  if (p.r1 + p.r2 > region.sum_cap + tol) return false;
  if (region.r2_cap && p.r2 > *region.r2_cap + tol) return false;
  return true;
}

bool region_nested(const RateRegion& inner, const RateRegion& outer, double tol) {
  return std::all_of(inner.vertices.begin(), inner.vertices.end(),
                     [&](const RatePair& v) { return contains(outer, v, tol); });
}

std::string to_string(RegionMode mode) {
  switch (mode) {
    case RegionMode::mean_snr: return "mean-snr";
    case RegionMode::per_realization: return "per-realization";
    case RegionMode::ergodic_mc: return "ergodic-mc";
  }
  return "unknown";
}

std::string to_string(MacModel model) {
  return model == MacModel::doubly ? "doubly" : "single";
}

RateRegion ergodic_region(const Scenario& s, MacModel model, RegionMode mode,
                          const ErgodicOptions& options) {
  s.validate();
  const auto avg = average_snrs(s);

  switch (mode) {
    case RegionMode::mean_snr:
      return region_for(model, SnrLinear(mean_snr(avg[0], s.ris_elements[0])),
                        SnrLinear(mean_snr(avg[1], s.ris_elements[1])));
    case RegionMode::per_realization: {
      auto rng = substream(options.seed, 0);
      const auto g = instantaneous_snrs(sample_fading(rng, s), avg);
      return region_for(model, g[0], g[1]);
    }
    case RegionMode::ergodic_mc:
      break;
  }

  if (options.n_trials < 1) {
    throw ValidationError("mc.n_trials", "must be >= 1");
  }
  const auto blocks = run_blocks<CapSums>(
      options.n_trials, options.seed, options.workers,
      [&](std::mt19937_64& rng, std::uint64_t first, std::uint64_t last) {
        CapSums acc;
        for (std::uint64_t t = first; t < last; ++t) {
          const auto u1 = draw_user_gains(rng, s.ris_elements[0]);
          const auto u2 = draw_user_gains(rng, s.ris_elements[1]);
          const double g1 = avg[0].direct.value() * u1.direct_power +
                            avg[0].ris.value() * u1.cascade * u1.cascade;
          const double g2 = avg[1].direct.value() * u2.direct_power +
                            avg[1].ris.value() * u2.cascade * u2.cascade;
          acc.min_cap += std::log2(1.0 + std::min(g1, g2));
          acc.user1_cap += std::log2(1.0 + g1);
        }
        return acc;
      });
  CapSums total;
  for (const auto& b : blocks) {
    total.min_cap += b.min_cap;
    total.user1_cap += b.user1_cap;
  }
  const double n = static_cast<double>(options.n_trials);
  if (model == MacModel::doubly) return doubly_from_cap(total.min_cap / n);
  return single_from_caps(total.user1_cap / n, total.min_cap / n);
}

}  // namespace risdmac
