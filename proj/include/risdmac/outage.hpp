#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "risdmac/capacity.hpp"
#include "risdmac/channel.hpp"
#include "risdmac/gaindist.hpp"
#include "risdmac/mathcore.hpp"

namespace risdmac {

// Target rates in bps/Hz. rho weights the two single-dirty outage events
// and has no default: a single-model query without it fails validation.
struct OutageQuery {
  MacModel model = MacModel::doubly;
  double rt_doubly = 1.0;
  double rt_single = 1.0;
  double r2_single = 0.5;
  std::optional<double> rho;

  void validate() const;
};

struct McEstimate {
  double estimate = 0.0;
  double half_width = 0.0;  // largest distance from estimate to an interval end
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t n_trials = 0;
};

struct OutageResult {
  Probability closed_form;
  std::optional<McEstimate> mc;
  std::optional<Probability> quadrature_check;

  /// |closed - mc| <= max(3 half-width, tol) and likewise for quadrature
  /// (against tol only); vacuously true for absent fields.
  bool consistent(double tol) const;
};

enum class CdfMethod { closed, quadrature };

Probability op_doubly_closed(const SnrDistribution& d1, const SnrDistribution& d2, double rt,
                             CdfMethod method = CdfMethod::closed);

Probability op_single_component1(const SnrDistribution& d1, const SnrDistribution& d2, double r2,
                                 CdfMethod method = CdfMethod::closed);

Probability op_single_component2(const SnrDistribution& d1, double rt,
                                 CdfMethod method = CdfMethod::closed);

Probability op_single_closed(const SnrDistribution& d1, const SnrDistribution& d2,
                             const OutageQuery& q, CdfMethod method = CdfMethod::closed);

/// Dispatches on q.model.
Probability outage_probability(const SnrDistribution& d1, const SnrDistribution& d2,
                               const OutageQuery& q, CdfMethod method = CdfMethod::closed);

struct McOptions {
  std::uint64_t n_trials = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
};

/// Normal-approximation 95% interval for k successes in n, switching to
/// the Wilson score interval when fewer than 10 successes or failures.
McEstimate bernoulli_interval(std::uint64_t k, std::uint64_t n);

McEstimate op_montecarlo(const Scenario& s, const OutageQuery& q, const McOptions& options);

/// One Monte Carlo pass shared by every point: point p multiplies user i's
/// average SNRs (direct and RIS alike) by scales[p][i]. Results are
/// independent of options.workers.
std::vector<McEstimate> op_montecarlo_sweep(const Scenario& s, const OutageQuery& q,
                                            const std::vector<std::array<double, kUsers>>& scales,
                                            const McOptions& options);

}  // namespace risdmac
