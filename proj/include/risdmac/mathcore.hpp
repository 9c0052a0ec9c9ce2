#pragma once

#include <compare>

namespace risdmac {

/// A value in [0, 1]. Construction throws DomainError outside that range
/// (NaN included).
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr auto operator<=>(const Probability&) const = default;

 private:
  double value_ = 0.0;
};

/// Dimensionless linear power ratio, nonnegative.
class SnrLinear {
 public:
  constexpr SnrLinear() = default;
  explicit SnrLinear(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr auto operator<=>(const SnrLinear&) const = default;

 private:
  double value_ = 0.0;
};

/// Lower incomplete gamma function, the integral of t^(s-1) e^(-t) over
/// [0, x]. Evaluated by the power series for x < s + 1 and by the Lentz
/// continued fraction for the upper function otherwise. Overflows to +inf
/// only when Gamma(s) itself does.
double lower_incomplete_gamma(double s, double x);

/// Regularized forms P(s, x) = gamma(s, x) / Gamma(s) and Q = 1 - P.
double regularized_lower_gamma(double s, double x);
double regularized_upper_gamma(double s, double x);

/// log P(s, x), accurate when P underflows. Returns -inf at x = 0.
double log_regularized_lower_gamma(double s, double x);

double gamma_function(double s);

/// log Gamma(s) for s > 0. Reentrant (does not touch signgam).
double log_gamma(double s);

double dbm_to_linear(double dbm);
double linear_to_db(double linear);

/// SNR threshold 2^r - 1 at which a rate of r bps/Hz is supported.
SnrLinear rate_to_threshold(double rate_bps_hz);

}  // namespace risdmac
