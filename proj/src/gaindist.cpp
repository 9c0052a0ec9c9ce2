#include "risdmac/gaindist.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "risdmac/errors.hpp"

namespace risdmac {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSixteenMinusPiSq = 16.0 - kPi * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Range-check tolerance applied before clamping a computed CDF.
constexpr double kCdfSlack = 1e-9;

double log_cosh(double z) { return z + std::log1p(std::exp(-2.0 * z)) - std::numbers::ln2; }

// Sum over n >= 0 of (-a)^n / (n! (kappa + n)) for |a| <= 1.
double small_argument_kernel(double kappa, double a) {
  double term = 1.0;
  double sum = 1.0 / kappa;
  for (int n = 1; n < 200; ++n) {
    term *= -a / n;
    const double contrib = term / (kappa + n);
    sum += contrib;
    if (std::abs(contrib) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// log Pois(n; y). Past n = 100 the Stirling form keeps n log y - lgamma(n + 1)
// from cancelling catastrophically when n and y are large.
double log_poisson_pmf(double n, double y) {
  if (n < 100.0) return n * std::log(y) - y - log_gamma(n + 1.0);
  const double inv = 1.0 / n, inv2 = inv * inv;
  const double stirling_tail = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0)));
  return -n * std::log1p((n - y) / y) + (n - y) - 0.5 * std::log(2.0 * kPi * n) - stirling_tail;
}

// D(kappa, y) = sum_n Pois(n; y) / (kappa + n) = e^-y int_0^1 t^(kappa-1) e^(y t) dt,
// returned as a logarithm.
double log_poisson_inverse_mean(double kappa, double y) {
  if (y > 1e5 && y > 100.0 * (kappa + 1.0) * (kappa + 1.0)) {
    // Watson's lemma on int_0^1 (1-s)^(kappa-1) e^(-y s) ds:
    // sum_j (1-kappa)_j / y^(j+1). The e^-y endpoint term is far below rounding.
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 60; ++j) {
      term *= (j - kappa) / y;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return std::log(sum) - std::log(y);
  }
  // Sum outward from the Poisson mode.
  const double mode = std::floor(y);
  const double log_peak = log_poisson_pmf(mode, y);
  double sum = 1.0 / (kappa + mode);
  double w = 1.0;
  for (double n = mode + 1.0;; n += 1.0) {
    w *= y / n;
    sum += w / (kappa + n);
    if (w < 1e-18) break;
  }
  w = 1.0;
  for (double n = mode; n > 0.0; n -= 1.0) {
    w *= n / y;
    sum += w / (kappa + n - 1.0);
    if (w < 1e-18) break;
  }
  return log_peak + std::log(sum);
}

}  // namespace

double MixtureTerm::beta() const { return std::exp(log_beta); }
double MixtureTerm::mass() const { return std::exp(log_mass); }

double MixtureGammaParams::mass_deficit() const {
  double total = 0.0;
  for (const auto& t : terms) total += t.mass();
  return 1.0 - total;
}

double MixtureGammaParams::cascade_mean() const { return m_elements * kProductMean; }

double MixtureGammaParams::cascade_variance() const { return m_elements * kProductVariance; }

MixtureGammaParams build_mixture_params(int m_elements, const MixtureOptions& options) {
  if (m_elements < 1) {
    throw DomainError("mixture needs at least one RIS element, got " + std::to_string(m_elements));
  }
  const double m = m_elements;
  MixtureGammaParams p;
  p.m_elements = m_elements;
  const double log_lambda = std::log(4.0) + 0.5 * std::log(kPi * m) -
                            m * kPi * kPi / (2.0 * kSixteenMinusPiSq) -
                            std::log(m * kSixteenMinusPiSq);
  p.lambda = std::exp(log_lambda);
  p.sigma = 4.0 * kPi / kSixteenMinusPiSq;
  p.zeta = 8.0 / (m * kSixteenMinusPiSq);
  if (options.zeta_form == ZetaForm::printed_argument) {
    const double mean_h2 = p.cascade_variance() + p.cascade_mean() * p.cascade_mean();
    p.zeta = 8.0 * mean_h2 / (m * kSixteenMinusPiSq);
  }

  const double log_half_sigma = std::log(p.sigma / 2.0);
  const double log_zeta = std::log(p.zeta);
  auto make_term = [&](int l) {
    MixtureTerm t;
    t.kappa = l - 0.5;
    t.log_beta = log_lambda + (2.0 * l - 2.5) * log_half_sigma - log_gamma(l) - log_gamma(t.kappa);
    t.log_mass = t.log_beta + log_gamma(t.kappa) - t.kappa * log_zeta;
    return t;
  };

  if (options.policy == TruncationPolicy::fixed) {
    if (options.fixed_terms < 1) {
      throw DomainError("mixture truncation L must be >= 1");
    }
    p.terms.reserve(options.fixed_terms);
    for (int l = 1; l <= options.fixed_terms; ++l) p.terms.push_back(make_term(l));
    return p;
  }

  // Term masses follow a Poisson pmf with this mean, so they only decay past it.
  // Mass alone under-resolves the right tail of the density, where ever later
  // terms dominate, so the pointwise series is also required to have
  // converged at E[H^2] + 10 sd(H^2).
  const double poisson_mean = p.sigma * p.sigma / (4.0 * p.zeta);
  const double mu = p.cascade_mean(), s2 = p.cascade_variance();
  const double x_hi = mu * mu + s2 + 10.0 * std::sqrt(4.0 * mu * mu * s2 + 2.0 * s2 * s2);
  const double log_x_hi = std::log(x_hi);
  const double log_tol = std::log(options.relative_tolerance);
  double accumulated = 0.0;
  double log_local_sum = -kInf;
  double prev_local = -kInf;
  for (int l = 1; l <= options.max_terms; ++l) {
    const auto t = make_term(l);
    p.terms.push_back(t);
    const double mass = t.mass();
    accumulated += mass;
    const double local = t.log_beta + (t.kappa - 1.0) * log_x_hi;  // e^(-zeta x) omitted
    const double hi = std::max(log_local_sum, local);
    log_local_sum = hi + std::log(std::exp(log_local_sum - hi) + std::exp(local - hi));
    const bool local_done = local < prev_local && local - log_local_sum < log_tol;
    prev_local = local;
    if (l >= poisson_mean && mass < options.relative_tolerance * accumulated && local_done) {
      return p;
    }
  }
  throw NumericalError("mixture truncation did not converge within " +
                       std::to_string(options.max_terms) + " terms for M = " +
                       std::to_string(m_elements));
}

double pdf_H2_exact(double x, const MixtureGammaParams& params) {
  if (!(x >= 0.0)) throw DomainError("pdf_H2_exact: x must be nonnegative");
  if (x == 0.0) return kInf;
  const double z = params.sigma * std::sqrt(x);
  const double log_bessel = 0.5 * std::log(2.0 / (kPi * z)) + log_cosh(z);
  return std::exp(std::log(params.lambda) - 0.25 * std::log(x) - params.zeta * x + log_bessel);
}

double pdf_H2_mixture(double x, const MixtureGammaParams& params) {
  if (!(x >= 0.0)) throw DomainError("pdf_H2_mixture: x must be nonnegative");
  if (x == 0.0) return kInf;
  const double log_x = std::log(x);
  double sum = 0.0;
  for (const auto& t : params.terms) {
    sum += std::exp(t.log_beta + (t.kappa - 1.0) * log_x - params.zeta * x);
  }
  return sum;
}

namespace detail {

std::vector<double> log_tilted_kernel(const std::vector<double>& kappas, double a) {
  std::vector<double> out(kappas.size());
  if (a == 0.0) {
    for (std::size_t l = 0; l < kappas.size(); ++l) out[l] = -std::log(kappas[l]);
    return out;
  }
  if (std::abs(a) <= 1.0) {
    // Also covers the omega -> 0 limit, where the kernel tends to 1 / kappa.
    for (std::size_t l = 0; l < kappas.size(); ++l) {
      out[l] = std::log(small_argument_kernel(kappas[l], a));
    }
    return out;
  }
  if (a > 0.0) {
    const double log_a = std::log(a);
    for (std::size_t l = 0; l < kappas.size(); ++l) {
      const double k = kappas[l];
      out[l] = log_gamma(k) + log_regularized_lower_gamma(k, a) - k * log_a;
    }
    return out;
  }

  // a < -1: the kernel is e^y D(kappa, y). D obeys
  //   D(kappa + 1) = (1 - kappa D(kappa)) / y,
  // stable upward while kappa < y and downward once kappa >= y.
  const double y = -a;
  const std::size_t n = kappas.size();
  std::vector<double> d(n);
  std::size_t split = 0;
  while (split < n && kappas[split] < y) ++split;
  if (split > 0) {
    d[0] = std::exp(log_poisson_inverse_mean(kappas[0], y));
    for (std::size_t l = 1; l < split; ++l) {
      d[l] = (1.0 - kappas[l - 1] * d[l - 1]) / y;
    }
  }
  if (split < n) {
    d[n - 1] = std::exp(log_poisson_inverse_mean(kappas[n - 1], y));
    for (std::size_t l = n - 1; l-- > split;) {
      d[l] = (1.0 - y * d[l + 1]) / kappas[l];
    }
  }
  for (std::size_t l = 0; l < n; ++l) out[l] = y + std::log(d[l]);
  return out;
}

}  // namespace detail

SnrDistribution::SnrDistribution(int m_elements, AvgSnrPair avg, const MixtureOptions& options)
    : SnrDistribution(m_elements > 0 ? std::optional(build_mixture_params(m_elements, options))
                                     : std::nullopt,
                      avg) {
  if (m_elements < 0) throw DomainError("RIS element count must be >= 0");
}

SnrDistribution::SnrDistribution(std::optional<MixtureGammaParams> params, AvgSnrPair avg)
    : m_elements_(params ? params->m_elements : 0), params_(std::move(params)), avg_(avg) {
  if (!(avg_.direct.value() > 0.0)) {
    throw DomainError("direct-path average SNR must be positive");
  }
  if (params_) {
    if (!(avg_.ris.value() > 0.0)) {
      throw DomainError("RIS-path average SNR must be positive when M >= 1");
    }
    omega_ = params_->zeta / avg_.ris.value() - 1.0 / avg_.direct.value();
  }
}

double SnrDistribution::mean() const {
  if (!params_) return avg_.direct.value();
  const double mu = params_->cascade_mean();
  return avg_.direct.value() + avg_.ris.value() * (params_->cascade_variance() + mu * mu);
}

SnrDistribution SnrDistribution::scaled(double factor) const {
  if (!(factor > 0.0)) throw DomainError("scale factor must be positive");
  return SnrDistribution(params_, AvgSnrPair{SnrLinear(avg_.direct.value() * factor),
                                             SnrLinear(avg_.ris.value() * factor)});
}

namespace {

struct ClosedFormSums {
  double incomplete = 0.0;  // sum of mass_l P(kappa_l, zeta T)
  double tilted = 0.0;      // e^(-g/direct) times the tilted partial integral
};

ClosedFormSums closed_form_sums(double g, const SnrDistribution& dist) {
  const auto& p = *dist.params();
  const double direct = dist.avg().direct.value();
  const double ris = dist.avg().ris.value();
  const double t = g / ris;
  const double log_t = std::log(t);

  std::vector<double> kappas;
  kappas.reserve(p.terms.size());
  for (const auto& term : p.terms) kappas.push_back(term.kappa);
  const auto log_kernel = detail::log_tilted_kernel(kappas, dist.omega() * g);

  ClosedFormSums s;
  for (std::size_t l = 0; l < p.terms.size(); ++l) {
    const auto& term = p.terms[l];
    s.incomplete +=
        std::exp(term.log_mass + log_regularized_lower_gamma(term.kappa, p.zeta * t));
    s.tilted += std::exp(term.log_beta + term.kappa * log_t - g / direct + log_kernel[l]);
  }
  return s;
}

void require_snr(double g) {
  if (!(g >= 0.0)) throw DomainError("SNR argument must be nonnegative");
}

}  // namespace

Probability cdf_gamma_closed(SnrLinear g, const SnrDistribution& dist) {
  const double x = g.value();
  if (x == 0.0) return Probability(0.0);
  if (std::isinf(x)) return Probability(dist.params() ? 1.0 - dist.params()->mass_deficit() : 1.0);
  if (!dist.params()) {
    return Probability(-std::expm1(-x / dist.avg().direct.value()));
  }
  const auto s = closed_form_sums(x, dist);
  const double f = s.incomplete - s.tilted;
  if (!(f >= -kCdfSlack && f <= 1.0 + kCdfSlack)) {
    throw NumericalError("closed-form CDF left [0, 1]: " + std::to_string(f));
  }
  return Probability(std::clamp(f, 0.0, 1.0));
}

double pdf_gamma(SnrLinear g, const SnrDistribution& dist) {
  const double x = g.value();
  const double direct = dist.avg().direct.value();
  if (!dist.params()) return std::exp(-x / direct) / direct;
  if (x == 0.0) return 0.0;
  return closed_form_sums(x, dist).tilted / direct;
}

Probability cdf_gamma_quadrature(SnrLinear g, const SnrDistribution& dist) {
  const double x = g.value();
  require_snr(x);
  const double direct = dist.avg().direct.value();
  if (x == 0.0) return Probability(0.0);
  if (!dist.params()) {
    return Probability(-std::expm1(-x / direct));
  }
  const double ris = dist.avg().ris.value();
  // The density comes from the Gaussian moments of H alone, independent of
  // the mixture constants. Substituting x = u^2 removes the x^(-1/2)
  // singularity: f_{H^2}(u^2) 2u = phi_H(u) + phi_H(-u).
  const double mu = dist.params()->cascade_mean();
  const double sd = std::sqrt(dist.params()->cascade_variance());
  const double norm = 1.0 / (sd * std::sqrt(2.0 * kPi));
  auto integrand = [&](double u) {
    const double zp = (u - mu) / sd;
    const double zm = (u + mu) / sd;
    const double density = norm * (std::exp(-0.5 * zp * zp) + std::exp(-0.5 * zm * zm));
    return density * -std::expm1(-(x - ris * u * u) / direct);
  };

  const double upper = std::sqrt(x / ris);
  // The direct-path factor rises from 0 within a layer of relative width
  // ~direct / x below the upper limit; when direct << x that layer is far
  // thinner than the Gaussian scale and needs its own breakpoints.
  std::vector<double> candidates{mu - 10.0 * sd, mu - 3.0 * sd, mu, mu + 3.0 * sd, mu + 10.0 * sd};
  for (double k : {0.5, 2.0, 8.0, 40.0}) {
    if (k * direct < x) candidates.push_back(std::sqrt((x - k * direct) / ris));
  }
  std::sort(candidates.begin(), candidates.end());
  std::vector<double> cuts{0.0};
  for (double c : candidates) {
    if (c > cuts.back() && c < upper) cuts.push_back(c);
  }
  cuts.push_back(upper);

  double total = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    double piece_error = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, cuts[k], cuts[k + 1], 10, 1e-13, &piece_error);
    error += piece_error;
  }
  if (error > 1e-9) {
    throw NumericalError("CDF quadrature did not reach 1e-9 absolute error", error);
  }
  if (!(total >= -kCdfSlack && total <= 1.0 + kCdfSlack)) {
    throw NumericalError("quadrature CDF left [0, 1]: " + std::to_string(total));
  }
  return Probability(std::clamp(total, 0.0, 1.0));
}

}  // namespace risdmac
