#include <gtest/gtest.h>

#include <cmath>

#include "risdmac/errors.hpp"
#include "risdmac/outage.hpp"

using namespace risdmac;

namespace {

Scenario fig3(double p1, double p2, int m) {
  auto s = Scenario::symmetric_layout(20.0, 20.0);
  s.tx_power_dbm = {p1, p2};
  s.noise_power_dbm = 10.0;
  s.ris_elements = {m, m};
  return s;
}

std::array<SnrDistribution, 2> dists(const Scenario& s) {
  const auto avg = average_snrs(s);
  return {SnrDistribution(s.ris_elements[0], avg[0]), SnrDistribution(s.ris_elements[1], avg[1])};
}

OutageQuery single_query(double rho) {
  OutageQuery q;
  q.model = MacModel::single;
  q.rho = rho;
  return q;
}

}  // namespace

TEST(OutageClosed, ZeroRateNeverOutage) {
  const auto [d1, d2] = dists(fig3(50, 50, 32));
  EXPECT_EQ(op_doubly_closed(d1, d2, 0.0).value(), 0.0);
  EXPECT_EQ(op_single_component1(d1, d2, 0.0).value(), 0.0);
  EXPECT_EQ(op_single_component2(d1, 0.0).value(), 0.0);
}

TEST(OutageClosed, HugeRateAlwaysOutage) {
  const auto [d1, d2] = dists(fig3(50, 50, 32));
  EXPECT_NEAR(op_single_component2(d1, 60.0).value(), 1.0, 1e-12);
  EXPECT_NEAR(op_doubly_closed(d1, d2, 60.0).value(), 1.0, 1e-12);
}

TEST(OutageClosed, NoRisReduction) {
  const auto s = fig3(50, 40, 0);
  const auto avg = average_snrs(s);
  const auto [d1, d2] = dists(s);
  for (double rt : {0.25, 1.0, 2.0, 4.0}) {
    const double gt = std::exp2(rt) - 1.0;
    const double inv = 1.0 / avg[0].direct.value() + 1.0 / avg[1].direct.value();
    EXPECT_NEAR(op_doubly_closed(d1, d2, rt).value(), -std::expm1(-gt * inv), 1e-12);
    EXPECT_NEAR(op_single_component2(d1, rt).value(), -std::expm1(-gt / avg[0].direct.value()), 1e-12);
  }
}

TEST(OutageClosed, FrozenFig3Point) {
  // 1 - (1 - F)^2 with F from a 30-digit mpmath quadrature at gamma_t = 1.
  const auto [d1, d2] = dists(fig3(50, 50, 32));
  EXPECT_NEAR(op_doubly_closed(d1, d2, 1.0).value(), 9.6616393763137907751e-12, 1e-16);
}

TEST(OutageClosed, ComponentIdentities) {
  const auto [d1, d2] = dists(fig3(50, 40, 32));
  for (double r : {0.1, 0.5, 1.0, 3.0}) {
    EXPECT_EQ(op_single_component1(d1, d2, r).value(), op_doubly_closed(d1, d2, r).value());
    EXPECT_EQ(op_single_component2(d1, r).value(),
              cdf_gamma_closed(rate_to_threshold(r), d1).value());
  }
}

TEST(OutageClosed, RhoEndpoints) {
  const auto s = fig3(40, 50, 32);
  auto [d1, d2] = dists(s);
  d1 = d1.scaled(1e3);
  d2 = d2.scaled(1e3);
  auto q = single_query(1.0);
  EXPECT_EQ(op_single_closed(d1, d2, q).value(), op_single_component1(d1, d2, q.r2_single).value());
  q.rho = 0.0;
  EXPECT_EQ(op_single_closed(d1, d2, q).value(), op_single_component2(d1, q.rt_single).value());
  q.rho = 0.5;
  const double mid = 0.5 * op_single_component1(d1, d2, q.r2_single).value() +
                     0.5 * op_single_component2(d1, q.rt_single).value();
  EXPECT_NEAR(outage_probability(d1, d2, q).value(), mid, 1e-15);
}

TEST(OutageClosed, QuadratureMethodAgrees) {
  const auto [d1, d2] = dists(fig3(50, 50, 64));
  for (double c : {1e2, 1e3, 3e3, 1e4}) {
    const auto a = d1.scaled(c), b = d2.scaled(c);
    EXPECT_NEAR(op_doubly_closed(a, b, 1.0).value(),
                op_doubly_closed(a, b, 1.0, CdfMethod::quadrature).value(), 1e-9);
    auto q = single_query(0.5);
    EXPECT_NEAR(op_single_closed(a, b, q).value(),
                op_single_closed(a, b, q, CdfMethod::quadrature).value(), 1e-9);
  }
}

TEST(OutageClosed, MonotoneInRateAndScale) {
  const auto [d1, d2] = dists(fig3(50, 50, 32));
  const auto a = d1.scaled(2e3), b = d2.scaled(2e3);
  double prev = 0.0;
  for (double r = 0.0; r < 12.0; r += 0.25) {
    const double v = op_doubly_closed(a, b, r).value();
    EXPECT_GE(v, prev - 1e-15);
    prev = v;
  }
  prev = 1.0;
  for (double c = 1.0; c < 1e5; c *= 1.5) {
    const double v = op_doubly_closed(d1.scaled(c), d2.scaled(c), 1.0).value();
    EXPECT_LE(v, prev + 1e-15);
    prev = v;
  }
}

TEST(Query, SingleNeedsRho) {
  OutageQuery q;
  q.model = MacModel::single;
  try {
    q.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key(), "query.rho");
  }
  q.rho = 1.5;
  EXPECT_THROW(q.validate(), ValidationError);
  q.rho = 0.5;
  q.rt_single = -1.0;
  EXPECT_THROW(q.validate(), ValidationError);
}

TEST(BernoulliInterval, NormalAndWilson) {
  const auto mid = bernoulli_interval(50, 100);
  EXPECT_DOUBLE_EQ(mid.estimate, 0.5);
  EXPECT_NEAR(mid.half_width, 1.959963984540054 * 0.05, 1e-15);
  // Wilson at k = 0: interval [0, z^2 / (n + z^2)].
  const auto none = bernoulli_interval(0, 100);
  const double z2 = 1.959963984540054 * 1.959963984540054;
  EXPECT_EQ(none.estimate, 0.0);
  EXPECT_NEAR(none.ci_high, z2 / (100 + z2), 1e-15);
  EXPECT_GE(none.ci_low, 0.0);
  const auto all = bernoulli_interval(100, 100);
  EXPECT_NEAR(all.ci_low, 1.0 - z2 / (100 + z2), 1e-15);
  EXPECT_THROW(bernoulli_interval(0, 0), ValidationError);
}

TEST(OutageMc, ZeroRatesExactlyZero) {
  OutageQuery q;
  q.rt_doubly = 0.0;
  const auto e = op_montecarlo(fig3(50, 50, 32), q, {10000, 1, 1});
  EXPECT_EQ(e.estimate, 0.0);
  EXPECT_EQ(e.half_width, 0.0);
  auto qs = single_query(0.5);
  qs.rt_single = 0.0;
  qs.r2_single = 0.0;
  const auto es = op_montecarlo(fig3(50, 50, 32), qs, {10000, 1, 1});
  EXPECT_EQ(es.estimate, 0.0);
  EXPECT_EQ(es.half_width, 0.0);
}

TEST(OutageMc, IndependentOfWorkerCount) {
  const auto s = fig3(50, 40, 8);
  const auto q = single_query(0.3);
  const auto a = op_montecarlo(s, q, {300000, 42, 1});
  for (unsigned w : {4u, 16u}) {
    const auto b = op_montecarlo(s, q, {300000, 42, w});
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.half_width, b.half_width);
  }
  const std::vector<std::array<double, 2>> scales{{1.0, 1.0}, {10.0, 10.0}, {100.0, 1.0}};
  EXPECT_EQ(op_montecarlo_sweep(s, q, scales, {200000, 3, 1})[1].estimate,
            op_montecarlo_sweep(s, q, scales, {200000, 3, 16})[1].estimate);
}

TEST(OutageMc, SweepPointMatchesSingleRun) {
  const auto s = fig3(50, 50, 16);
  OutageQuery q;
  const auto sweep = op_montecarlo_sweep(s, q, {{1.0, 1.0}}, {100000, 8, 1});
  EXPECT_EQ(sweep.at(0).estimate, op_montecarlo(s, q, {100000, 8, 1}).estimate);
}

TEST(OutageMc, AgreesWithClosedFormWithoutRis) {
  // M = 0 has no CLT step, so the closed form is exact.
  const auto s = fig3(50, 40, 0);
  const auto [d1, d2] = dists(s);
  std::vector<std::array<double, 2>> scales;
  for (double db = -5.0; db <= 10.0; db += 2.5) scales.push_back({std::pow(10.0, db / 10), std::pow(10.0, db / 10)});
  for (const auto& q : {OutageQuery{}, single_query(0.5)}) {
    const auto mc = op_montecarlo_sweep(s, q, scales, {400000, 12, 0});
    for (std::size_t k = 0; k < scales.size(); ++k) {
      const double closed = outage_probability(d1.scaled(scales[k][0]), d2.scaled(scales[k][1]), q).value();
      EXPECT_LE(std::abs(closed - mc[k].estimate), 3.0 * mc[k].half_width) << "point " << k;
    }
  }
}

TEST(OutageMc, RejectsZeroTrials) {
  EXPECT_THROW(op_montecarlo(fig3(50, 50, 0), OutageQuery{}, {0, 1, 1}), ValidationError);
}
