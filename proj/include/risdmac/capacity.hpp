#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risdmac/channel.hpp"
#include "risdmac/mathcore.hpp"

namespace risdmac {

enum class MacModel { doubly, single };

struct RatePair {
  double r1 = 0.0;
  double r2 = 0.0;

  bool operator==(const RatePair&) const = default;
};

// Capacity region under strong interference, as a closed counterclockwise
// polygon. Doubly dirty: R1 + R2 <= sum_cap. Single dirty additionally
// bounds R2 <= r2_cap. Coincident corners are merged, so a zero-SNR input
// yields the single vertex (0, 0).
struct RateRegion {
  MacModel kind = MacModel::doubly;
  std::vector<RatePair> vertices;
  double sum_cap = 0.0;
  std::optional<double> r2_cap;
};

RateRegion doubly_dirty_region(SnrLinear g1, SnrLinear g2);

RateRegion single_dirty_region(SnrLinear g1, SnrLinear g2);

RateRegion region_for(MacModel model, SnrLinear g1, SnrLinear g2);

bool contains(const RateRegion& region, RatePair p, double tol = 1e-12);

/// True when every vertex of `inner` lies in `outer`.
bool region_nested(const RateRegion& inner, const RateRegion& outer, double tol = 1e-12);

enum class RegionMode { mean_snr, per_realization, ergodic_mc };

std::string to_string(RegionMode mode);
std::string to_string(MacModel model);

struct ErgodicOptions {
  std::uint64_t n_trials = 1;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// mean_snr: region at E[gamma_i]. per_realization: region of one fading
/// draw (stream 0 of the seed). ergodic_mc: caps averaged over n_trials
/// draws.
RateRegion ergodic_region(const Scenario& s, MacModel model, RegionMode mode,
                          const ErgodicOptions& options = {});

}  // namespace risdmac
