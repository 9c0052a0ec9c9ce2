#include "risdmac/outage.hpp"

#include <algorithm>
#include <cmath>

#include "risdmac/errors.hpp"
#include "risdmac/streams.hpp"

namespace risdmac {
namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::uint64_t kSmallCount = 10;

double cdf(double g, const SnrDistribution& d, CdfMethod method) {
  return method == CdfMethod::closed ? cdf_gamma_closed(SnrLinear(g), d).value()
                                     : cdf_gamma_quadrature(SnrLinear(g), d).value();
}

double min_outage(const SnrDistribution& d1, const SnrDistribution& d2, double rate,
                  CdfMethod method) {
  const double threshold = rate_to_threshold(rate).value();
  const double survive = (1.0 - cdf(threshold, d1, method)) * (1.0 - cdf(threshold, d2, method));
  return std::clamp(1.0 - survive, 0.0, 1.0);
}

struct EventCounts {
  std::uint64_t doubly = 0;
  std::uint64_t single1 = 0;
  std::uint64_t single2 = 0;
  std::uint64_t single_both = 0;
};

McEstimate exact_zero(std::uint64_t n) {
  McEstimate e;
  e.n_trials = n;
  return e;
}

McEstimate from_counts(const EventCounts& c, const OutageQuery& q, std::uint64_t n,
                       const std::array<double, 3>& thresholds) {
  if (q.model == MacModel::doubly) {
    return thresholds[0] == 0.0 ? exact_zero(n) : bernoulli_interval(c.doubly, n);
  }
  const double rho = *q.rho;
  const McEstimate e1 = thresholds[1] == 0.0 ? exact_zero(n) : bernoulli_interval(c.single1, n);
  const McEstimate e2 = thresholds[2] == 0.0 ? exact_zero(n) : bernoulli_interval(c.single2, n);
  if (rho == 1.0) return e1;
  if (rho == 0.0) return e2;

  const double nn = static_cast<double>(n);
  const double p1 = c.single1 / nn;
  const double p2 = c.single2 / nn;
  const double p12 = c.single_both / nn;
  McEstimate e;
  e.n_trials = n;
  e.estimate = rho * p1 + (1.0 - rho) * p2;
  const double second_moment =
      rho * rho * p1 + (1.0 - rho) * (1.0 - rho) * p2 + 2.0 * rho * (1.0 - rho) * p12;
  const double variance = std::max(0.0, second_moment - e.estimate * e.estimate);
  double hw = kZ95 * std::sqrt(variance / nn);
  auto small = [&](std::uint64_t k) { return k < kSmallCount || n - k < kSmallCount; };
  if (small(c.single1) || small(c.single2)) {
    hw = std::max(hw, rho * e1.half_width + (1.0 - rho) * e2.half_width);
  }
  e.half_width = hw;
  e.ci_low = std::max(0.0, e.estimate - hw);
  e.ci_high = std::min(1.0, e.estimate + hw);
  return e;
}

}  // namespace

void OutageQuery::validate() const {
  if (!(rt_doubly >= 0.0)) throw ValidationError("query.rt_doubly", "rate must be >= 0");
  if (!(rt_single >= 0.0)) throw ValidationError("query.rt_single", "rate must be >= 0");
  if (!(r2_single >= 0.0)) throw ValidationError("query.r2_single", "rate must be >= 0");
  if (rho && !(*rho >= 0.0 && *rho <= 1.0)) {
    throw ValidationError("query.rho", "must lie in [0, 1]");
  }
  if (model == MacModel::single && !rho) {
    throw ValidationError("query.rho", "required for the single dirty model");
  }
}

bool OutageResult::consistent(double tol) const {
  if (mc && std::abs(closed_form.value() - mc->estimate) > std::max(3.0 * mc->half_width, tol)) {
    return false;
  }
  if (quadrature_check && std::abs(closed_form.value() - quadrature_check->value()) > tol) {
    return false;
  }
  return true;
}

Probability op_doubly_closed(const SnrDistribution& d1, const SnrDistribution& d2, double rt,
                             CdfMethod method) {
  return Probability(min_outage(d1, d2, rt, method));
}

Probability op_single_component1(const SnrDistribution& d1, const SnrDistribution& d2, double r2,
                                 CdfMethod method) {
  return Probability(min_outage(d1, d2, r2, method));
}

Probability op_single_component2(const SnrDistribution& d1, double rt, CdfMethod method) {
  return Probability(cdf(rate_to_threshold(rt).value(), d1, method));
}

Probability op_single_closed(const SnrDistribution& d1, const SnrDistribution& d2,
                             const OutageQuery& q, CdfMethod method) {
  q.validate();
  const double rho = q.rho.value_or(1.0);
  const double p1 = op_single_component1(d1, d2, q.r2_single, method).value();
  const double p2 = op_single_component2(d1, q.rt_single, method).value();
  return Probability(std::clamp(rho * p1 + (1.0 - rho) * p2, 0.0, 1.0));
}

Probability outage_probability(const SnrDistribution& d1, const SnrDistribution& d2,
                               const OutageQuery& q, CdfMethod method) {
  q.validate();
  if (q.model == MacModel::doubly) return op_doubly_closed(d1, d2, q.rt_doubly, method);
  return op_single_closed(d1, d2, q, method);
}

McEstimate bernoulli_interval(std::uint64_t k, std::uint64_t n) {
  if (n < 1) throw ValidationError("mc.n_trials", "must be >= 1");
  const double nn = static_cast<double>(n);
  McEstimate e;
  e.n_trials = n;
  e.estimate = k / nn;
  const double p = e.estimate;
  if (k < kSmallCount || n - k < kSmallCount) {
    const double z2 = kZ95 * kZ95;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double spread = kZ95 / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    e.ci_low = std::max(0.0, center - spread);
    e.ci_high = std::min(1.0, center + spread);
  } else {
    const double hw = kZ95 * std::sqrt(p * (1.0 - p) / nn);
    e.ci_low = p - hw;
    e.ci_high = p + hw;
  }
  e.half_width = std::max(p - e.ci_low, e.ci_high - p);
  return e;
}

McEstimate op_montecarlo(const Scenario& s, const OutageQuery& q, const McOptions& options) {
  return op_montecarlo_sweep(s, q, {{1.0, 1.0}}, options).front();
}

std::vector<McEstimate> op_montecarlo_sweep(const Scenario& s, const OutageQuery& q,
                                            const std::vector<std::array<double, kUsers>>& scales,
                                            const McOptions& options) {
  s.validate();
  q.validate();
  if (options.n_trials < 1) throw ValidationError("mc.n_trials", "must be >= 1");
  const auto avg = average_snrs(s);
  const std::array<double, 3> thresholds{rate_to_threshold(q.rt_doubly).value(),
                                         rate_to_threshold(q.r2_single).value(),
                                         rate_to_threshold(q.rt_single).value()};
  const std::size_t n_points = scales.size();

  using BlockCounts = std::vector<EventCounts>;
  const auto blocks = run_blocks<BlockCounts>(
      options.n_trials, options.seed, options.workers,
      [&](std::mt19937_64& rng, std::uint64_t first, std::uint64_t last) {
        BlockCounts counts(n_points);
        for (std::uint64_t t = first; t < last; ++t) {
          const auto u1 = draw_user_gains(rng, s.ris_elements[0]);
          const auto u2 = draw_user_gains(rng, s.ris_elements[1]);
          const double base1 = avg[0].direct.value() * u1.direct_power +
                               avg[0].ris.value() * u1.cascade * u1.cascade;
          const double base2 = avg[1].direct.value() * u2.direct_power +
                               avg[1].ris.value() * u2.cascade * u2.cascade;
          for (std::size_t p = 0; p < n_points; ++p) {
            const double g1 = base1 * scales[p][0];
            const double g2 = base2 * scales[p][1];
            const double gmin = std::min(g1, g2);
            auto& c = counts[p];
            c.doubly += gmin <= thresholds[0];
            const bool e1 = gmin <= thresholds[1];
            const bool e2 = g1 <= thresholds[2];
            c.single1 += e1;
            c.single2 += e2;
            c.single_both += e1 && e2;
          }
        }
        return counts;
      });

  std::vector<EventCounts> total(n_points);
  for (const auto& b : blocks) {
    for (std::size_t p = 0; p < n_points; ++p) {
      total[p].doubly += b[p].doubly;
      total[p].single1 += b[p].single1;
      total[p].single2 += b[p].single2;
      total[p].single_both += b[p].single_both;
    }
  }
  std::vector<McEstimate> out;
  out.reserve(n_points);
  for (const auto& c : total) out.push_back(from_counts(c, q, options.n_trials, thresholds));
  return out;
}

}  // namespace risdmac
