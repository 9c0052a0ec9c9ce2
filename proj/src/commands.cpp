#include "risdmac/commands.hpp"

#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include "json.hpp"

#include "risdmac/errors.hpp"

namespace risdmac {
namespace {

std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return fmt::format("{:.12g}", *d);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

void require_finite(const Table& table) {
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (const auto* d = std::get_if<double>(&row[k]); d && !std::isfinite(*d)) {
        throw NumericalError("non-finite value in column " + table.columns.at(k));
      }
    }
  }
}

struct PointSetup {
  double axis = 0.0;                  // value reported in the second column
  std::array<double, kUsers> scale{};  // multipliers on each user's average SNRs
  OutageQuery query;
};

std::vector<PointSetup> sweep_points(const RunConfig& cfg, const std::array<AvgSnrPair, kUsers>& avg) {
  std::vector<PointSetup> points;
  if (!cfg.sweep) {
    points.push_back({linear_to_db(avg[0].ris.value()), {1.0, 1.0}, cfg.query});
    return points;
  }
  const auto& sw = *cfg.sweep;
  const auto& sc = cfg.scenario;
  for (double v : sw.values()) {
    PointSetup p{v, {1.0, 1.0}, cfg.query};
    if (sw.parameter == "gamma_tilde_1") {
      const double target = sw.scale == SweepScale::db ? std::pow(10.0, v / 10.0) : v;
      const double c = target / avg[0].ris.value();
      p.scale = {c, sw.lock ? c : 1.0};
    } else if (sw.parameter == "scenario.tx_power1_dbm") {
      p.scale[0] = std::pow(10.0, (v - sc.tx_power_dbm[0]) / 10.0);
    } else if (sw.parameter == "scenario.tx_power2_dbm") {
      p.scale[1] = std::pow(10.0, (v - sc.tx_power_dbm[1]) / 10.0);
    } else if (sw.parameter == "scenario.noise_dbm") {
      const double c = std::pow(10.0, (sc.noise_power_dbm - v) / 10.0);
      p.scale = {c, c};
    } else if (sw.parameter == "query.rt_doubly") {
      p.query.rt_doubly = v;
    } else if (sw.parameter == "query.rt_single") {
      p.query.rt_single = v;
    } else if (sw.parameter == "query.r2_single") {
      p.query.r2_single = v;
    } else if (sw.parameter == "query.rho") {
      p.query.rho = v;
    }
    p.query.validate();
    points.push_back(p);
  }
  return points;
}

bool changes_query(const RunConfig& cfg) {
  return cfg.sweep && cfg.sweep->parameter.rfind("query.", 0) == 0;
}

Table outage_rows(const RunConfig& cfg, std::string axis_column) {
  Table t;
  t.columns = {"m", std::move(axis_column), "op_closed", "op_mc", "mc_halfwidth", "abs_diff"};
  for (int m_case : cfg.m_cases()) {
    const Scenario s = cfg.scenario_for(m_case);
    const auto avg = average_snrs(s);
    const SnrDistribution base1(s.ris_elements[0], avg[0], cfg.mixture);
    const SnrDistribution base2(s.ris_elements[1], avg[1], cfg.mixture);
    const auto points = sweep_points(cfg, avg);

    std::vector<McEstimate> mc;
    if (changes_query(cfg)) {
      for (const auto& p : points) mc.push_back(op_montecarlo(s, p.query, cfg.mc));
    } else {
      std::vector<std::array<double, kUsers>> scales;
      for (const auto& p : points) scales.push_back(p.scale);
      mc = op_montecarlo_sweep(s, cfg.query, scales, cfg.mc);
    }

    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& p = points[k];
      const auto d1 = base1.scaled(p.scale[0]);
      const auto d2 = base2.scaled(p.scale[1]);
      const double closed = outage_probability(d1, d2, p.query).value();
      t.rows.push_back({std::int64_t{s.ris_elements[0]}, p.axis, closed, mc[k].estimate,
                        mc[k].half_width, std::abs(closed - mc[k].estimate)});
    }
  }
  return t;
}

}  // namespace

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
  require_finite(table);
  if (format == OutputFormat::csv) {
    for (std::size_t k = 0; k < table.columns.size(); ++k) {
      out << (k ? "," : "") << table.columns[k];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t k = 0; k < row.size(); ++k) {
        out << (k ? "," : "") << format_cell(row[k]);
      }
      out << '\n';
    }
    return;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::visit([&](const auto& v) { obj[table.columns[k]] = v; }, row[k]);
    }
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

Table cmd_region(const RunConfig& cfg) {
  Table t;
  t.columns = {"m", "vertex_index", "r1_bps_hz", "r2_bps_hz", "mode"};
  const ErgodicOptions opts{cfg.mc.n_trials, cfg.mc.seed, cfg.mc.workers};
  for (int m_case : cfg.m_cases()) {
    const Scenario s = cfg.scenario_for(m_case);
    const auto region = ergodic_region(s, cfg.query.model, cfg.region_mode, opts);
    for (std::size_t v = 0; v < region.vertices.size(); ++v) {
      t.rows.push_back({std::int64_t{s.ris_elements[0]}, static_cast<std::int64_t>(v),
                        region.vertices[v].r1, region.vertices[v].r2, to_string(cfg.region_mode)});
    }
  }
  return t;
}

Table cmd_outage(const RunConfig& cfg) {
  if (cfg.sweep && cfg.sweep->parameter != "gamma_tilde_1") {
    throw ValidationError("sweep.parameter",
                          "outage sweeps gamma_tilde_1; use the sweep subcommand for '" +
                              cfg.sweep->parameter + "'");
  }
  if (cfg.sweep && cfg.sweep->scale != SweepScale::db) {
    throw ValidationError("sweep.scale", "outage reports gamma_tilde_db and needs a dB sweep");
  }
  return outage_rows(cfg, "gamma_tilde_db");
}

Table cmd_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw ValidationError("sweep", "the sweep subcommand needs a [sweep] section");
  std::string axis = cfg.sweep->parameter;
  if (axis == "gamma_tilde_1" && cfg.sweep->scale == SweepScale::db) axis = "gamma_tilde_db";
  return outage_rows(cfg, axis);
}

Table cmd_dist_check(const RunConfig& cfg) {
  Table t;
  t.columns = {"m", "user", "g", "cdf_closed", "cdf_quadrature", "abs_diff"};
  for (int m_case : cfg.m_cases()) {
    const Scenario s = cfg.scenario_for(m_case);
    const auto avg = average_snrs(s);
    for (std::size_t u = 0; u < kUsers; ++u) {
      const SnrDistribution d(s.ris_elements[u], avg[u], cfg.mixture);
      const double top = 20.0 * d.mean();
      for (int k = 1; k <= 100; ++k) {
        const double g = top * k / 100.0;
        const double closed = cdf_gamma_closed(SnrLinear(g), d).value();
        const double quad = cdf_gamma_quadrature(SnrLinear(g), d).value();
        t.rows.push_back({std::int64_t{s.ris_elements[u]}, static_cast<std::int64_t>(u + 1), g,
                          closed, quad, std::abs(closed - quad)});
      }
    }
  }
  return t;
}

Table validation_table(const ValidationReport& report) {
  Table t;
  t.columns = {"check", "status", "value", "threshold", "note"};
  for (const auto& r : report.rows) {
    t.rows.push_back({r.check, std::string(r.pass ? "pass" : "FAIL"), r.value, r.threshold, r.note});
  }
  return t;
}

void emit(const Table& table, const RunConfig& cfg, std::ostream& stdout_stream) {
  if (cfg.output_path.empty() || cfg.output_path == "-") {
    write_table(table, cfg.format, stdout_stream);
    return;
  }
  std::ofstream out(cfg.output_path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + cfg.output_path);
  write_table(table, cfg.format, out);
  if (!out) throw IoError("failed writing output file: " + cfg.output_path);
}

}  // namespace risdmac
