#include "risdmac/mathcore.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "risdmac/errors.hpp"

namespace risdmac {
namespace {

constexpr int kMaxIterations = 100000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void require_domain(double s, double x) {
  if (!(s > 0.0)) {
    throw DomainError("incomplete gamma: shape must be positive, got " +
                      std::to_string(s));
  }
  if (!(x >= 0.0)) {
    throw DomainError("incomplete gamma: argument must be nonnegative, got " +
                      std::to_string(x));
  }
}

// Sum of x^n / ((s+1)(s+2)...(s+n)) for n >= 0, used when x < s + 1.
double lower_series_sum(double s, double x) {
  double term = 1.0;
  double sum = 1.0;
  double denom = s;
  for (int n = 0; n < kMaxIterations; ++n) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (term < sum * kEps) {
      return sum;
    }
  }
  throw NumericalError("incomplete gamma series did not converge");
}

// Continued fraction for Gamma(s, x) e^x x^-s, used when x >= s + 1.
double upper_continued_fraction(double s, double x) {
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return h;
    }
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

// log of x^s e^-x / Gamma(s + 1)
double log_prefactor(double s, double x) {
  return s * std::log(x) - x - log_gamma(s + 1.0);
}

}  // namespace

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("probability outside [0, 1]: " + std::to_string(value));
  }
}

SnrLinear::SnrLinear(double value) : value_(value) {
  if (!(value >= 0.0)) {
    throw DomainError("SNR must be nonnegative: " + std::to_string(value));
  }
}

double log_gamma(double s) {
  if (!(s > 0.0)) {
    throw DomainError("log_gamma: argument must be positive");
  }
  return boost::math::lgamma(s);
}

double gamma_function(double s) {
  if (!(s > 0.0)) {
    throw DomainError("gamma_function: argument must be positive, got " +
                      std::to_string(s));
  }
  return std::tgamma(s);
}

double log_regularized_lower_gamma(double s, double x) {
  require_domain(s, x);
  if (x == 0.0) {
    return -std::numeric_limits<double>::infinity();
  }
  if (std::isinf(x)) {
    return 0.0;
  }
  if (x < s + 1.0) {
    return log_prefactor(s, x) + std::log(lower_series_sum(s, x));
  }
  const double q =
      std::exp(s * std::log(x) - x - log_gamma(s)) * upper_continued_fraction(s, x);
  return std::log1p(-q);
}

double regularized_lower_gamma(double s, double x) {
  require_domain(s, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < s + 1.0) {
    return std::exp(log_prefactor(s, x)) * lower_series_sum(s, x);
  }
  return 1.0 - regularized_upper_gamma(s, x);
}

double regularized_upper_gamma(double s, double x) {
  require_domain(s, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < s + 1.0) {
    return 1.0 - regularized_lower_gamma(s, x);
  }
  return std::exp(s * std::log(x) - x - log_gamma(s)) * upper_continued_fraction(s, x);
}

double lower_incomplete_gamma(double s, double x) {
  require_domain(s, x);
  if (x == 0.0) return 0.0;
  if (x < s + 1.0) {
    // x^s e^-x / s * sum; stays finite where Gamma(s) alone would overflow.
    return std::exp(s * std::log(x) - x - std::log(s)) * lower_series_sum(s, x);
  }
  const double upper =
      std::exp(s * std::log(x) - x) * upper_continued_fraction(s, x);
  return gamma_function(s) - upper;
}

double dbm_to_linear(double dbm) { return std::pow(10.0, dbm / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

SnrLinear rate_to_threshold(double rate_bps_hz) {
  if (!(rate_bps_hz >= 0.0)) {
    throw DomainError("rate must be nonnegative, got " + std::to_string(rate_bps_hz));
  }
  return SnrLinear(std::exp2(rate_bps_hz) - 1.0);
}

}  // namespace risdmac
