#include "risdmac/validation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <numbers>
#include <set>

#include "risdmac/capacity.hpp"
#include "risdmac/outage.hpp"
#include "risdmac/streams.hpp"

namespace risdmac {
namespace {

using boost::math::quadrature::gauss_kronrod;

template <class Draw>
std::vector<double> sample_snrs(std::uint64_t n, std::uint64_t seed, unsigned workers, Draw draw) {
  const auto blocks = run_blocks<std::vector<double>>(
      n, seed, workers, [&](std::mt19937_64& rng, std::uint64_t first, std::uint64_t last) {
        std::vector<double> out;
        out.reserve(last - first);
        for (std::uint64_t t = first; t < last; ++t) out.push_back(draw(rng));
        return out;
      });
  std::vector<double> all;
  all.reserve(n);
  for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
  return all;
}

std::string m_label(const char* name, int m) { return fmt::format("{}[M={}]", name, m); }

std::string m_user_label(const char* name, int m, int user) {
  return fmt::format("{}[M={},user={}]", name, m, user);
}

CheckRow make_row(std::string name, double value, double threshold, std::string note = {}) {
  return CheckRow{std::move(name), value <= threshold, value, threshold, std::move(note)};
}

double incomplete_gamma_check() {
  boost::math::quadrature::tanh_sinh<double> integrator;
  double worst = 0.0;
  for (double s = 0.5; s < 30.0; s += 1.0) {
    for (double x : {0.25, 1.0, 3.0, 10.0, 31.5, 100.0}) {
      const double oracle = integrator.integrate(
          [s](double t) { return std::exp((s - 1.0) * std::log(t) - t); }, 0.0, x, 1e-15);
      const double value = lower_incomplete_gamma(s, x);
      worst = std::max(worst, std::abs(value - oracle) / oracle);
    }
  }
  return worst;
}

double pdf_h2_normalization(const MixtureGammaParams& p) {
  const double mu = p.cascade_mean();
  const double sd = std::sqrt(p.cascade_variance());
  auto f = [&](double u) { return u == 0.0 ? 0.0 : 2.0 * u * pdf_H2_exact(u * u, p); };
  const double hi = mu + 40.0 * sd;
  double total = 0.0;
  std::vector<double> cuts{0.0};
  for (double c : {mu - 8.0 * sd, mu, mu + 8.0 * sd}) {
    if (c > cuts.back()) cuts.push_back(c);
  }
  cuts.push_back(hi);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    total += gauss_kronrod<double, 61>::integrate(f, cuts[k], cuts[k + 1], 20, 1e-15);
  }
  return std::abs(total - 1.0);
}

double pdf_h2_change_of_variables(const MixtureGammaParams& p) {
  const double mu = p.cascade_mean();
  const double sd = std::sqrt(p.cascade_variance());
  const double norm = 1.0 / (sd * std::sqrt(2.0 * std::numbers::pi));
  double worst = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double u = (mu + 6.0 * sd) * k / 200.0;
    const double x = u * u;
    const double oracle = norm *
                          (std::exp(-0.5 * std::pow((u - mu) / sd, 2)) +
                           std::exp(-0.5 * std::pow((u + mu) / sd, 2))) /
                          (2.0 * u);
    if (oracle < 1e-290) continue;
    worst = std::max(worst, std::abs(pdf_H2_exact(x, p) - oracle) / oracle);
  }
  return worst;
}

std::vector<double> cdf_grid(const SnrDistribution& d, int points = 100) {
  std::vector<double> g;
  const double top = 20.0 * d.mean();
  for (int k = 1; k <= points; ++k) g.push_back(top * k / points);
  return g;
}

double closed_vs_quadrature(const SnrDistribution& d) {
  double worst = 0.0;
  for (double g : cdf_grid(d)) {
    worst = std::max(worst, std::abs(cdf_gamma_closed(SnrLinear(g), d).value() -
                                     cdf_gamma_quadrature(SnrLinear(g), d).value()));
  }
  return worst;
}

double pdf_vs_finite_difference(const SnrDistribution& d) {
  const double h = 1e-4 * d.mean();
  double worst = 0.0;
  double peak = 0.0;
  for (double g : cdf_grid(d)) {
    const double lo = std::max(0.0, g - h);
    const double fd = (cdf_gamma_closed(SnrLinear(g + h), d).value() -
                       cdf_gamma_closed(SnrLinear(lo), d).value()) /
                      (g + h - lo);
    const double pdf = pdf_gamma(SnrLinear(g), d);
    peak = std::max(peak, pdf);
    worst = std::max(worst, std::abs(fd - pdf));
  }
  return peak > 0.0 ? worst / peak : worst;
}

}  // namespace

std::vector<double> sample_user_snrs(const AvgSnrPair& avg, int m_elements, std::uint64_t n,
                                     std::uint64_t seed, unsigned workers) {
  return sample_snrs(n, seed, workers, [&](std::mt19937_64& rng) {
    const auto u = draw_user_gains(rng, m_elements);
    return avg.direct.value() * u.direct_power + avg.ris.value() * u.cascade * u.cascade;
  });
}

std::vector<double> sample_user_snrs_gaussian_cascade(const AvgSnrPair& avg, int m_elements,
                                                      std::uint64_t n, std::uint64_t seed,
                                                      unsigned workers) {
  const double mu = m_elements * kProductMean;
  const double sd = std::sqrt(m_elements * kProductVariance);
  return sample_snrs(n, seed, workers, [&](std::mt19937_64& rng) {
    std::exponential_distribution<double> power(1.0);
    std::normal_distribution<double> cascade(mu, sd);
    const double d = power(rng);
    const double h = m_elements > 0 ? cascade(rng) : 0.0;
    return avg.direct.value() * d + avg.ris.value() * h * h;
  });
}

KsBounds ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf,
                     std::size_t grid) {
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  if (n == 0) return {};
  const double nn = static_cast<double>(n);
  grid = std::clamp<std::size_t>(grid, 1, n);

  // 1-based sample indices where the CDF is evaluated, always including 1 and n.
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k <= grid; ++k) {
    const std::size_t i = std::max<std::size_t>(1, (k * n + grid / 2) / grid);
    if (idx.empty() || i > idx.back()) idx.push_back(i);
  }
  if (idx.back() != n) idx.push_back(n);

  std::vector<double> f(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) f[k] = cdf(samples[idx[k] - 1]);

  KsBounds b;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double i = static_cast<double>(idx[k]);
    const double d = std::max(f[k] - (i - 1.0) / nn, i / nn - f[k]);
    b.lower = std::max(b.lower, d);
    b.upper = std::max(b.upper, d);
    if (k + 1 < idx.size() && idx[k + 1] > idx[k] + 1) {
      // Samples strictly between two evaluated ones: a = idx[k], b = idx[k+1].
      const double a = i;
      const double c = static_cast<double>(idx[k + 1]);
      b.upper = std::max(b.upper, std::max(f[k + 1] - a / nn, (c - 1.0) / nn - f[k]));
    }
  }
  return b;
}

bool ValidationReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

ValidationReport run_validation(const RunConfig& cfg) {
  cfg.validate();
  ValidationReport report;
  auto& rows = report.rows;

  rows.push_back(make_row("incgamma_vs_quadrature", incomplete_gamma_check(), 1e-10));

  std::set<int> seen;
  for (int m_case : cfg.m_cases()) {
    const Scenario s = cfg.scenario_for(m_case);
    const auto avg = average_snrs(s);
    for (std::size_t user = 0; user < kUsers; ++user) {
      const int m = s.ris_elements[user];
      if (m < 1 || !seen.insert(m).second) continue;
      const std::string note = m < 8 ? "clt-warning: M < 8" : "";
      const auto params = build_mixture_params(m, cfg.mixture);
      rows.push_back(make_row(m_label("pdf_h2_normalization", m), pdf_h2_normalization(params),
                              1e-8, note));
      rows.push_back(make_row(m_label("pdf_h2_change_of_variables", m),
                              pdf_h2_change_of_variables(params), 1e-12, note));
      for (std::size_t u = 0; u < kUsers; ++u) {
        if (s.ris_elements[u] != m) continue;
        const SnrDistribution d(params, avg[u]);
        rows.push_back(make_row(m_user_label("cdf_closed_vs_quadrature", m, int(u) + 1),
                                closed_vs_quadrature(d), 1e-6, note));
      }
      const SnrDistribution d(params, avg[user]);
      rows.push_back(make_row(m_label("pdf_vs_finite_difference", m),
                              pdf_vs_finite_difference(d), 1e-6, note));
      const auto samples =
          sample_user_snrs(avg[user], m, cfg.mc.n_trials, cfg.mc.seed, cfg.mc.workers);
      const auto ks = ks_distance(
          samples, [&](double g) { return cdf_gamma_closed(SnrLinear(g), d).value(); });
      rows.push_back(make_row(m_label("mc_ks_rayleigh_products", m), ks.upper, 5e-3,
                              note.empty() ? "n=" + std::to_string(cfg.mc.n_trials)
                                           : note + "; n=" + std::to_string(cfg.mc.n_trials)));
    }
  }

  {
    const auto avg = average_snrs(cfg.scenario);
    const SnrDistribution d1(0, avg[0]);
    const SnrDistribution d2(0, avg[1]);
    const double gt_d = rate_to_threshold(cfg.query.rt_doubly).value();
    const double gt_s = rate_to_threshold(cfg.query.rt_single).value();
    const double g1 = avg[0].direct.value();
    const double g2 = avg[1].direct.value();
    const double want_d = -std::expm1(-gt_d * (1.0 / g1 + 1.0 / g2));
    const double want_s = -std::expm1(-gt_s / g1);
    rows.push_back(make_row("m0_reduction_doubly",
                            std::abs(op_doubly_closed(d1, d2, cfg.query.rt_doubly).value() - want_d),
                            1e-12));
    rows.push_back(make_row(
        "m0_reduction_single_sum_rate",
        std::abs(op_single_component2(d1, cfg.query.rt_single).value() - want_s), 1e-12));
  }

  {
    std::vector<int> ms;
    for (int m : cfg.m_cases()) ms.push_back(m < 0 ? std::min(cfg.scenario.ris_elements[0],
                                                              cfg.scenario.ris_elements[1])
                                                   : m);
    ms.push_back(0);
    std::sort(ms.begin(), ms.end());
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
    double violations = 0.0;
    for (MacModel model : {MacModel::doubly, MacModel::single}) {
      for (std::size_t k = 0; k + 1 < ms.size(); ++k) {
        const auto inner = ergodic_region(cfg.scenario_for(ms[k]), model, RegionMode::mean_snr);
        const auto outer = ergodic_region(cfg.scenario_for(ms[k + 1]), model, RegionMode::mean_snr);
        if (!region_nested(inner, outer)) violations += 1.0;
      }
    }
    rows.push_back(make_row("region_nesting_mean_snr", violations, 0.0,
                            fmt::format("M in {}", fmt::join(ms, "/"))));
  }

  {
    auto rng = substream(cfg.mc.seed, 0x6e6f6d);
    std::uniform_real_distribution<double> log_snr(-3.0, 6.0);
    double violations = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double g1 = std::pow(10.0, log_snr(rng));
      const double g2 = std::pow(10.0, log_snr(rng));
      const auto r = single_dirty_region(SnrLinear(g1), SnrLinear(g2));
      if (!(*r.r2_cap <= r.sum_cap)) violations += 1.0;
      const auto same = single_dirty_region(SnrLinear(g1), SnrLinear(g1));
      const auto tri = doubly_dirty_region(SnrLinear(g1), SnrLinear(g1));
      if (same.vertices.size() != tri.vertices.size()) {
        violations += 1.0;
        continue;
      }
      for (std::size_t v = 0; v < tri.vertices.size(); ++v) {
        if (std::abs(same.vertices[v].r1 - tri.vertices[v].r1) > 1e-12 ||
            std::abs(same.vertices[v].r2 - tri.vertices[v].r2) > 1e-12) {
          violations += 1.0;
          break;
        }
      }
    }
    rows.push_back(make_row("single_region_geometry", violations, 0.0, "10000 random SNR pairs"));
  }
  return report;
}

}  // namespace risdmac
