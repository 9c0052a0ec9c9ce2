#pragma once

// Independent reference computations shared by the unit tests. None of
// these touch the mixture constants: they work from the Gaussian moments of
// the cascade amplitude directly.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <vector>
#include <numbers>

namespace oracle {

inline double cascade_mean(int m) { return m * std::numbers::pi / 4.0; }
inline double cascade_var(int m) { return m * (1.0 - std::numbers::pi * std::numbers::pi / 16.0); }

inline double normal_pdf(double x, double mu, double sd) {
  const double z = (x - mu) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

// Density of H^2 for H ~ N(mu, s^2) by change of variables.
inline double pdf_h2(double x, int m) {
  const double mu = cascade_mean(m), sd = std::sqrt(cascade_var(m)), r = std::sqrt(x);
  return (normal_pdf(r, mu, sd) + normal_pdf(-r, mu, sd)) / (2.0 * r);
}

// P(direct Exp + ris H^2 <= g) by Gauss-Kronrod over the Gaussian H,
// written without the x = u^2 substitution used in the library.
inline double snr_cdf(double g, int m, double direct, double ris) {
  const double mu = cascade_mean(m), sd = std::sqrt(cascade_var(m));
  if (m == 0) return -std::expm1(-g / direct);
  const double edge = std::sqrt(g / ris);
  auto f = [&](double h) { return normal_pdf(h, mu, sd) * -std::expm1(-(g - ris * h * h) / direct); };
  std::vector<double> cuts{mu - 8.0 * sd, mu, mu + 8.0 * sd};
  // Resolve the thin layer below the edge where the direct-path factor rises.
  for (double k : {1.0, 10.0, 50.0}) {
    if (k * direct < g) cuts.push_back(std::sqrt((g - k * direct) / ris));
  }
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  double lo = -edge;
  for (double cut : cuts) {
    if (cut > lo && cut < edge) {
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, cut, 10, 1e-13);
      lo = cut;
    }
  }
  return total + boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, edge, 10, 1e-13);
}

// Integral of t^(k-1) e^(-a t) over [0, 1].
inline double tilted_kernel(double k, double a) {
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate([&](double t) { return std::pow(t, k - 1.0) * std::exp(-a * t); }, 0.0, 1.0);
}

}  // namespace oracle
