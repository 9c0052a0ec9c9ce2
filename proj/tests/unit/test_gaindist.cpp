#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "risdmac/errors.hpp"
#include "risdmac/gaindist.hpp"

using namespace risdmac;

namespace {

constexpr double kPi = std::numbers::pi;

// Fig. 3 geometry: P = 50 dBm, N = 10 dBm, d = 20 m, exponents 3/3/3.5.
const AvgSnrPair kFig3{SnrLinear(1.14134411781803752), SnrLinear(0.260967647969816205)};

MixtureOptions fixed_terms(int l) {
  MixtureOptions o;
  o.policy = TruncationPolicy::fixed;
  o.fixed_terms = l;
  return o;
}

}  // namespace

TEST(MixtureParams, Constants) {
  const auto p = build_mixture_params(32);
  EXPECT_NEAR(p.sigma, 4.0 * kPi / (16.0 - kPi * kPi), 1e-15);
  EXPECT_NEAR(p.sigma, 2.04985, 1e-5);
  EXPECT_NEAR(p.zeta, 0.0407804024987269146, 1e-15);
  EXPECT_NEAR(p.zeta, 1.0 / (2.0 * p.cascade_variance()), 1e-15);
  EXPECT_NEAR(p.cascade_mean(), 8.0 * kPi, 1e-13);
  EXPECT_NEAR(p.cascade_variance(), 12.2607911978212828, 1e-12);
  EXPECT_NEAR(build_mixture_params(7).sigma, p.sigma, 0.0);
}

TEST(MixtureParams, TermMassesArePoisson) {
  // Kernel l carries Poisson(l - 1; nu) of the mass, nu = M pi^2 / (2 (16 - pi^2)).
  for (int m : {1, 8, 32, 64}) {
    const auto p = build_mixture_params(m, fixed_terms(150));
    const double nu = m * kPi * kPi / (2.0 * (16.0 - kPi * kPi));
    for (int l = 1; l <= 150; l += 7) {
      const double pois = std::exp(-nu + (l - 1) * std::log(nu) - std::lgamma(l));
      EXPECT_NEAR(p.terms[l - 1].mass(), pois, 1e-13 + 1e-12 * pois) << "M=" << m << " l=" << l;
      EXPECT_DOUBLE_EQ(p.terms[l - 1].kappa, l - 0.5);
    }
  }
}

TEST(MixtureParams, AdaptiveReachesTolerance) {
  for (int m : {1, 16, 32, 64}) {
    const auto p = build_mixture_params(m);
    EXPECT_LT(p.mass_deficit(), 1e-13) << "M=" << m;
  }
  EXPECT_GT(build_mixture_params(64).truncation(), 100);
  // Larger surfaces need more than the default 200-term cap.
  EXPECT_THROW(build_mixture_params(128), NumericalError);
  MixtureOptions wide;
  wide.max_terms = 400;
  EXPECT_LT(build_mixture_params(128, wide).mass_deficit(), 1e-13);
}

TEST(MixtureParams, FixedPolicyKeepsL) {
  EXPECT_EQ(build_mixture_params(32, fixed_terms(50)).truncation(), 50);
  // L = 50 leaves most of the mass out once M reaches 64.
  EXPECT_GT(build_mixture_params(64, fixed_terms(50)).mass_deficit(), 0.5);
}

TEST(MixtureParams, Errors) {
  EXPECT_THROW(build_mixture_params(0), DomainError);
  EXPECT_THROW(build_mixture_params(-3), DomainError);
  MixtureOptions capped;
  capped.max_terms = 40;
  EXPECT_THROW(build_mixture_params(64, capped), NumericalError);
}

TEST(PdfH2Exact, IntegratesToOne) {
  for (int m : {1, 4, 32, 64}) {
    const auto p = build_mixture_params(m);
    // x = u^2 removes the endpoint singularity.
    auto f = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * pdf_H2_exact(u * u, p); };
    const double mu = oracle::cascade_mean(m), sd = std::sqrt(oracle::cascade_var(m));
    double total = 0.0, lo = 0.0;
    for (double hi : {std::max(mu - 10 * sd, 0.5 * mu), mu, mu + 12 * sd}) {
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-14);
      lo = hi;
    }
    EXPECT_NEAR(total, 1.0, 1e-8) << "M=" << m;
  }
}

TEST(PdfH2Exact, MatchesChangeOfVariables) {
  for (int m : {1, 2, 16, 32, 64}) {
    const auto p = build_mixture_params(m);
    const double top = std::pow(oracle::cascade_mean(m) + 10 * std::sqrt(oracle::cascade_var(m)), 2);
    for (int k = 1; k <= 400; ++k) {
      const double x = top * k / 400.0;
      EXPECT_NEAR(pdf_H2_exact(x, p), oracle::pdf_h2(x, m), 1e-12) << "M=" << m << " x=" << x;
    }
  }
}

TEST(PdfH2Exact, FrozenValues) {
  const auto p = build_mixture_params(32);
  // mpmath, 30 digits
  EXPECT_NEAR(pdf_H2_exact(100.0, p) / 5.010397574017267362e-7, 1.0, 1e-12);
  EXPECT_NEAR(pdf_H2_exact(631.65, p) / 0.0022666401197378159662, 1.0, 1e-12);
  EXPECT_NEAR(pdf_H2_exact(900.0, p) / 0.00072265217130656139892, 1.0, 1e-12);
}

TEST(PdfH2Exact, EdgeCases) {
  const auto p = build_mixture_params(8);
  EXPECT_EQ(pdf_H2_exact(0.0, p), INFINITY);
  EXPECT_THROW(pdf_H2_exact(-1.0, p), DomainError);
  EXPECT_THROW(pdf_H2_mixture(-1.0, p), DomainError);
  // Far tail underflows cleanly rather than producing NaN.
  EXPECT_EQ(pdf_H2_exact(1e8, p), 0.0);
}

TEST(PdfH2Exact, ChiSquareGoodnessOfFit) {
  // 10^6 draws of H^2 with H Gaussian, 60 equiprobable-ish bins.
  const int m = 32;
  const auto p = build_mixture_params(m);
  const double mu = oracle::cascade_mean(m), sd = std::sqrt(oracle::cascade_var(m));
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> h(mu, sd);
  const int n = 1000000, bins = 60;
  const double lo = std::pow(mu - 4 * sd, 2), hi = std::pow(mu + 4 * sd, 2);
  std::vector<int> counts(bins + 2, 0);
  for (int t = 0; t < n; ++t) {
    const double x = std::pow(h(rng), 2);
    const int b = x < lo ? 0 : x >= hi ? bins + 1 : 1 + static_cast<int>((x - lo) / (hi - lo) * bins);
    ++counts[std::min(b, bins + 1)];
  }
  auto cdf = [&](double x) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double u) { return 2.0 * u * pdf_H2_exact(u * u, p); }, 0.0, std::sqrt(x), 15, 1e-13);
  };
  std::vector<double> edges{0.0};
  for (int b = 0; b <= bins; ++b) edges.push_back(lo + (hi - lo) * b / bins);
  double stat = 0.0;
  int used = 0;
  double prev = 0.0;
  for (int b = 0; b <= bins + 1; ++b) {
    const double next = b <= bins ? cdf(edges[b + 1]) : 1.0;
    const double expected = n * (next - prev);
    prev = next;
    if (expected < 5.0) continue;
    stat += std::pow(counts[b] - expected, 2) / expected;
    ++used;
  }
  const double pvalue = boost::math::cdf(boost::math::complement(boost::math::chi_squared(used - 1), stat));
  EXPECT_GT(pvalue, 0.01) << "chi2=" << stat << " bins=" << used;
}

TEST(PdfH2Mixture, AdaptiveMatchesExactOnBulk) {
  for (int m : {4, 16, 32, 64}) {
    const auto p = build_mixture_params(m);
    const double mu = oracle::cascade_mean(m), s2 = oracle::cascade_var(m);
    const double mean = mu * mu + s2;
    const double sd_h2 = std::sqrt(4 * mu * mu * s2 + 2 * s2 * s2);
    for (int k = 1; k <= 300; ++k) {
      const double x = (mean + 10 * sd_h2) * k / 300.0;
      const double exact = pdf_H2_exact(x, p);
      if (exact < 1e-300) continue;
      EXPECT_NEAR(pdf_H2_mixture(x, p) / exact, 1.0, 1e-10) << "M=" << m << " x=" << x;
    }
  }
}

TEST(PdfH2Mixture, SingleTermUnderestimates) {
  const int m = 32;
  const double x = std::pow(m * kPi / 4.0, 2);
  const auto full = build_mixture_params(m);
  EXPECT_LT(pdf_H2_mixture(x, build_mixture_params(m, fixed_terms(1))), pdf_H2_exact(x, full));
}

TEST(PdfH2Mixture, MoreTermsNeverDecrease) {
  for (int m : {8, 32}) {
    for (double x : {1.0, 50.0, 400.0, 700.0, 1500.0}) {
      double prev = 0.0;
      for (int l : {1, 2, 4, 8, 16, 32, 64, 128}) {
        const double v = pdf_H2_mixture(x, build_mixture_params(m, fixed_terms(l)));
        EXPECT_GE(v, prev) << "M=" << m << " x=" << x << " L=" << l;
        prev = v;
      }
    }
  }
}

TEST(TiltedKernel, MatchesQuadratureOnAllBranches) {
  std::vector<double> kappas;
  for (int l = 1; l <= 120; ++l) kappas.push_back(l - 0.5);
  for (double a : {0.0, 1e-12, -1e-12, 0.3, -0.7, 1.0, -1.0, 2.5, -3.0, 37.0, -45.0, 180.0, -260.0}) {
    const auto logs = detail::log_tilted_kernel(kappas, a);
    ASSERT_EQ(logs.size(), kappas.size());
    for (std::size_t i = 0; i < kappas.size(); i += 9) {
      const double ref = oracle::tilted_kernel(kappas[i], a);
      EXPECT_NEAR(std::exp(logs[i] - std::log(ref)), 1.0, 1e-11) << "a=" << a << " kappa=" << kappas[i];
    }
  }
}

TEST(TiltedKernel, LargeNegativeArgument) {
  // For a = -y the integral is e^y times int_0^y (1 - v/y)^(kappa-1) e^-v dv / y;
  // the rescaled integral is well conditioned for any y.
  std::vector<double> kappas;
  for (int l = 1; l <= 150; ++l) kappas.push_back(l - 0.5);
  for (double y : {1e3, 9.9e4, 2e5, 5e6, 1e9, 1e18}) {
    const auto logs = detail::log_tilted_kernel(kappas, -y);
    for (std::size_t i = 0; i < kappas.size(); i += 13) {
      const double k = kappas[i];
      const double upper = std::min(y, 800.0 + 50.0 * k);
      const double rest = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double v) { return std::exp((k - 1.0) * std::log1p(-v / y) - v); }, 0.0, upper, 15, 1e-15);
      const double ref = y + std::log(rest) - std::log(y);
      EXPECT_NEAR(logs[i] - ref, 0.0, 1e-11 + 1e-15 * std::abs(ref))
          << "y=" << y << " kappa=" << k;
    }
  }
}

TEST(TiltedKernel, NearZeroOmegaIsContinuous) {
  // omega -> 0 must not blow up: the kernel tends to 1 / kappa.
  const std::vector<double> kappas{0.5, 1.5, 2.5};
  for (double a : {1e-9, -1e-9, 1e-15}) {
    const auto logs = detail::log_tilted_kernel(kappas, a);
    for (std::size_t i = 0; i < kappas.size(); ++i) {
      EXPECT_NEAR(std::exp(logs[i]) * kappas[i], 1.0, 1e-8);
    }
  }
}

TEST(SnrCdf, Boundaries) {
  const SnrDistribution d(32, kFig3);
  EXPECT_EQ(cdf_gamma_closed(SnrLinear(0.0), d).value(), 0.0);
  EXPECT_EQ(cdf_gamma_quadrature(SnrLinear(0.0), d).value(), 0.0);
  EXPECT_NEAR(cdf_gamma_closed(SnrLinear(INFINITY), d).value(), 1.0, 1e-13);
  EXPECT_NEAR(cdf_gamma_closed(SnrLinear(1e6), d).value(), 1.0, 1e-13);
}

TEST(SnrCdf, FrozenValuesFig3) {
  // Two-dimensional mpmath quadrature of the defining integral, 30 digits.
  struct Row { int m; double g, cdf; };
  const Row rows[] = {
      {16, 21.975769094753821714, 0.072014471878694999649},
      {16, 43.951538189507643429, 0.53863114013301092219},
      {16, 87.903076379015286857, 0.98886756909112725235},
      {32, 84.591225281716007734, 0.019245986139753148021},
      {32, 169.18245056343201547, 0.52761185654644883197},
      {32, 203.01894067611841105, 0.77794753090827087535},
      {64, 333.45321510899252897, 0.0016184497402652974263},
      {64, 666.90643021798505794, 0.51959349906924061594},
      {64, 1333.8128604359701159, 0.99999066133746864527},
      {32, 1.0, 4.830819688168563797e-12},
  };
  for (const auto& r : rows) {
    const SnrDistribution d(r.m, kFig3);
    EXPECT_NEAR(cdf_gamma_closed(SnrLinear(r.g), d).value(), r.cdf, 1e-12 + 1e-10 * r.cdf)
        << "M=" << r.m << " g=" << r.g;
    EXPECT_NEAR(cdf_gamma_quadrature(SnrLinear(r.g), d).value(), r.cdf, 1e-12 + 1e-10 * r.cdf);
  }
}

TEST(SnrCdf, ClosedMatchesIndependentOracle) {
  for (int m : {1, 2, 8, 16, 32, 64}) {
    for (const auto& avg : {kFig3, AvgSnrPair{SnrLinear(1141.3), SnrLinear(260.97)},
                            AvgSnrPair{SnrLinear(0.01), SnrLinear(5.0)}}) {
      const SnrDistribution d(m, avg);
      const double top = 20.0 * d.mean();
      for (int k = 1; k <= 100; k += 3) {
        const double g = top * k / 100.0;
        const double ref = oracle::snr_cdf(g, m, avg.direct.value(), avg.ris.value());
        EXPECT_NEAR(cdf_gamma_closed(SnrLinear(g), d).value(), ref, 1e-9) << "M=" << m << " g=" << g;
      }
    }
  }
}

TEST(SnrCdf, MonotoneOnFineGrid) {
  for (int m : {16, 32, 64}) {
    const SnrDistribution d(m, kFig3);
    double prev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double v = cdf_gamma_closed(SnrLinear(20.0 * d.mean() * k / 1000.0), d).value();
      EXPECT_GE(v, prev - 1e-15) << "M=" << m << " k=" << k;
      prev = v;
    }
  }
}

TEST(SnrCdf, NoRisIsExponential) {
  const SnrDistribution d(0, kFig3);
  EXPECT_FALSE(d.params().has_value());
  for (double g : {0.1, 1.0, 4.0}) {
    EXPECT_NEAR(cdf_gamma_closed(SnrLinear(g), d).value(), -std::expm1(-g / kFig3.direct.value()), 1e-15);
  }
  EXPECT_DOUBLE_EQ(d.mean(), kFig3.direct.value());
}

TEST(SnrCdf, PrintedZetaBreaksAgreement) {
  MixtureOptions printed;
  printed.zeta_form = ZetaForm::printed_argument;
  const SnrDistribution bad(32, kFig3, printed);
  const SnrDistribution good(32, kFig3);
  double worst = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const SnrLinear g(20.0 * good.mean() * k / 100.0);
    double closed = 0.0;
    try {
      closed = cdf_gamma_closed(g, bad).value();
    } catch (const NumericalError&) {
      closed = 2.0;  // escaped [0, 1]: certainly not agreeing
    }
    worst = std::max(worst, std::abs(closed - cdf_gamma_quadrature(g, bad).value()));
  }
  EXPECT_GT(worst, 1e-3);
}

TEST(SnrCdf, DomainErrors) {
  const SnrDistribution d(4, kFig3);
  EXPECT_THROW(cdf_gamma_closed(SnrLinear(-1.0), d), DomainError);
  EXPECT_THROW(pdf_gamma(SnrLinear(-1.0), d), DomainError);
  EXPECT_THROW(SnrDistribution(4, AvgSnrPair{SnrLinear(0.0), SnrLinear(1.0)}), DomainError);
}

TEST(SnrPdf, IntegratesToOne) {
  for (int m : {1, 16, 64}) {
    const SnrDistribution d(m, kFig3);
    auto f = [&](double g) { return pdf_gamma(SnrLinear(g), d); };
    double total = 0.0, lo = 0.0;
    for (double hi : {0.5 * d.mean(), d.mean(), 2.0 * d.mean(), 40.0 * d.mean()}) {
      total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-13);
      lo = hi;
    }
    EXPECT_NEAR(total, 1.0, 1e-6) << "M=" << m;
  }
}

TEST(SnrPdf, MatchesFiniteDifferenceOfCdf) {
  for (int m : {4, 32, 64}) {
    const SnrDistribution d(m, kFig3);
    double peak = 0.0;
    for (int k = 1; k <= 200; ++k) peak = std::max(peak, pdf_gamma(SnrLinear(5.0 * d.mean() * k / 200.0), d));
    for (int k = 1; k <= 100; ++k) {
      const double g = 5.0 * d.mean() * k / 100.0;
      const double h = 1e-4 * d.mean();
      // Fourth-order central difference.
      auto F = [&](double x) { return cdf_gamma_closed(SnrLinear(x), d).value(); };
      const double fd = (-F(g + 2 * h) + 8 * F(g + h) - 8 * F(g - h) + F(g - 2 * h)) / (12 * h);
      EXPECT_NEAR(pdf_gamma(SnrLinear(g), d), fd, 1e-6 * peak) << "M=" << m << " g=" << g;
    }
  }
}

TEST(SnrPdf, VanishesAtOrigin) {
  for (int m : {1, 32}) {
    const SnrDistribution d(m, kFig3);
    EXPECT_EQ(pdf_gamma(SnrLinear(0.0), d), 0.0);
    // P(ris H^2 <= g) ~ sqrt(g) near the origin, and so is the density.
    const double a = pdf_gamma(SnrLinear(1e-12), d), b = pdf_gamma(SnrLinear(1e-10), d);
    EXPECT_LT(a, 1e-4);
    EXPECT_NEAR(b / a, 10.0, 1e-3);
  }
  // Exponential law at the origin: 1 / direct.
  EXPECT_NEAR(pdf_gamma(SnrLinear(0.0), SnrDistribution(0, kFig3)), 1.0 / kFig3.direct.value(), 1e-15);
}

TEST(SnrDistribution, ScalingAndWarnings) {
  const SnrDistribution d(32, kFig3);
  const auto s = d.scaled(10.0);
  EXPECT_NEAR(s.mean(), 10.0 * d.mean(), 1e-9 * d.mean());
  EXPECT_NEAR(cdf_gamma_closed(SnrLinear(10.0 * 150.0), s).value(),
              cdf_gamma_closed(SnrLinear(150.0), d).value(), 1e-13);
  EXPECT_TRUE(SnrDistribution(2, kFig3).clt_warning());
  EXPECT_FALSE(SnrDistribution(8, kFig3).clt_warning());
  EXPECT_FALSE(SnrDistribution(0, kFig3).clt_warning());
}
