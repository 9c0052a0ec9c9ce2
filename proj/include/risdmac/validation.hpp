#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "risdmac/channel.hpp"
#include "risdmac/config.hpp"
#include "risdmac/gaindist.hpp"

namespace risdmac {

/// n instantaneous SNRs of one user, gamma = direct |h|^2 + ris H^2 with
/// H an exact sum of Rayleigh products. Deterministic in (seed, n).
std::vector<double> sample_user_snrs(const AvgSnrPair& avg, int m_elements, std::uint64_t n,
                                     std::uint64_t seed, unsigned workers = 0);

/// Same, but H drawn from its CLT Gaussian N(M pi/4, M (1 - pi^2/16)): the
/// law the closed form actually describes. Used to separate CLT error from
/// algebra error.
std::vector<double> sample_user_snrs_gaussian_cascade(const AvgSnrPair& avg, int m_elements,
                                                      std::uint64_t n, std::uint64_t seed,
                                                      unsigned workers = 0);

// Kolmogorov-Smirnov distance between an empirical sample and a continuous
// CDF. The CDF is evaluated only at `grid` sample quantiles; monotonicity
// brackets the exact statistic between `lower` and `upper`.
struct KsBounds {
  double lower = 0.0;
  double upper = 0.0;
};

KsBounds ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                     std::size_t grid = 4000);

struct CheckRow {
  std::string check;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<CheckRow> rows;

  bool all_pass() const;
};

/// Runs the oracle battery on the configured scenario: incomplete gamma
/// against quadrature, H^2 density normalization and change of variables,
/// closed-form CDF against quadrature, pdf against finite differences,
/// Monte Carlo KS, M = 0 analytic reductions, region nesting and
/// single-dirty geometry.
ValidationReport run_validation(const RunConfig& cfg);

}  // namespace risdmac
