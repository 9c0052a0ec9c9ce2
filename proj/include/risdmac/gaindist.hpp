#pragma once

#include <optional>
#include <string>
#include <vector>

#include "risdmac/channel.hpp"
#include "risdmac/mathcore.hpp"

namespace risdmac {

// Distribution of the aligned cascade power H^2 and of the composite SNR
// gamma = direct |h|^2 + ris H^2.
//
// By the CLT, H = sum_m h_m g_m is approximated as Gaussian with mean
// M pi/4 and variance M (1 - pi^2/16), so H^2 is noncentral chi-square with
// one degree of freedom:
//
//   f(x) = lambda x^(-1/4) e^(-zeta x) I_(-1/2)(sigma sqrt(x))
//        = sum_l beta_l x^(kappa_l - 1) e^(-zeta x),   kappa_l = l - 1/2,
//
// with zeta = 1 / (2 Var H) and sigma = E[H] / Var H. The weight of the
// l-th gamma kernel, beta_l Gamma(kappa_l) / zeta^kappa_l, is a Poisson
// pmf at l - 1 with mean M pi^2 / (2 (16 - pi^2)); the truncation length
// needed therefore grows linearly with M.

enum class TruncationPolicy { fixed, adaptive };

// Which zeta the mixture uses. `printed_argument` substitutes the mean of
// H^2 for the density argument in 8 x / (M (16 - pi^2)); it exists only as
// a negative control for the validation battery.
enum class ZetaForm { corrected, printed_argument };

struct MixtureOptions {
  TruncationPolicy policy = TruncationPolicy::adaptive;
  int fixed_terms = 50;
  double relative_tolerance = 1e-14;
  int max_terms = 200;
  ZetaForm zeta_form = ZetaForm::corrected;
};

struct MixtureTerm {
  double log_beta = 0.0;  // beta_l may underflow for large l; its log does not
  double kappa = 0.0;
  double log_mass = 0.0;  // log(beta_l Gamma(kappa_l) / zeta^kappa_l)

  double beta() const;
  double mass() const;
};

struct MixtureGammaParams {
  int m_elements = 0;
  double lambda = 0.0;
  double sigma = 0.0;
  double zeta = 0.0;
  std::vector<MixtureTerm> terms;

  int truncation() const { return static_cast<int>(terms.size()); }

  /// 1 - sum of term masses: probability lost to truncation.
  double mass_deficit() const;

  double cascade_mean() const;      // E[H]
  double cascade_variance() const;  // Var[H]
};

MixtureGammaParams build_mixture_params(int m_elements, const MixtureOptions& options = {});

/// Exact density of H^2 for Gaussian H via the closed form of I_(-1/2).
/// Returns +inf at x = 0, where the density diverges like x^(-1/2).
double pdf_H2_exact(double x, const MixtureGammaParams& params);

/// Truncated mixture-of-gammas series for the same density.
double pdf_H2_mixture(double x, const MixtureGammaParams& params);

// SNR law of one user. With no RIS elements the SNR is exponential with
// mean avg.direct and `params` is empty.
class SnrDistribution {
 public:
  SnrDistribution(int m_elements, AvgSnrPair avg, const MixtureOptions& options = {});
  SnrDistribution(std::optional<MixtureGammaParams> params, AvgSnrPair avg);

  int m_elements() const { return m_elements_; }
  const std::optional<MixtureGammaParams>& params() const { return params_; }
  const AvgSnrPair& avg() const { return avg_; }

  /// (zeta direct - ris) / (direct ris); 0 when there is no RIS.
  double omega() const { return omega_; }

  double mean() const;

  /// Same mixture, both average SNRs multiplied by factor.
  SnrDistribution scaled(double factor) const;

  /// True when the CLT behind the mixture is questionable (M < 8).
  bool clt_warning() const { return m_elements_ > 0 && m_elements_ < 8; }

 private:
  int m_elements_ = 0;
  std::optional<MixtureGammaParams> params_;
  AvgSnrPair avg_;
  double omega_ = 0.0;
};

/// Closed-form CDF from the mixture. Throws NumericalError when the raw
/// value leaves [-1e-9, 1 + 1e-9]; otherwise clamps into [0, 1].
Probability cdf_gamma_closed(SnrLinear g, const SnrDistribution& dist);

/// Same CDF by adaptive Gauss-Kronrod quadrature of the exact H^2 density
/// against the exponential direct path. Throws NumericalError if the
/// achieved error estimate exceeds 1e-9.
Probability cdf_gamma_quadrature(SnrLinear g, const SnrDistribution& dist);

/// Term-by-term derivative of cdf_gamma_closed.
double pdf_gamma(SnrLinear g, const SnrDistribution& dist);

namespace detail {

// log of the integral of t^(kappa-1) e^(-a t) over [0, 1], for every kappa
// in `kappas` (ascending, unit spacing) and any real a. Exposed for tests.
std::vector<double> log_tilted_kernel(const std::vector<double>& kappas, double a);

}  // namespace detail

}  // namespace risdmac
