#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "risdmac/capacity.hpp"
#include "risdmac/channel.hpp"
#include "risdmac/gaindist.hpp"
#include "risdmac/outage.hpp"

namespace risdmac {

enum class SweepScale { linear, db };

struct SweepSpec {
  // gamma_tilde_1, scenario.tx_power1_dbm, scenario.tx_power2_dbm,
  // scenario.noise_dbm, query.rt_doubly, query.rt_single, query.r2_single
  // or query.rho.
  std::string parameter = "gamma_tilde_1";
  double start = 0.0;
  double stop = 0.0;
  int points = 2;
  SweepScale scale = SweepScale::db;
  // gamma_tilde_1 only: apply the same factor to both users. Off scales
  // user 1 alone.
  bool lock = true;

  /// Evenly spaced values from start to stop inclusive, in the units of
  /// `scale` (dB values stay in dB).
  std::vector<double> values() const;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  Scenario scenario;
  // RIS sizes to evaluate, applied to both users. Empty: use the scenario's
  // per-user ris_elements as a single case.
  std::vector<int> m_list;
  OutageQuery query;
  std::optional<SweepSpec> sweep;
  McOptions mc;
  MixtureOptions mixture;
  RegionMode region_mode = RegionMode::mean_snr;
  OutputFormat format = OutputFormat::csv;
  std::string output_path = "-";

  void validate() const;

  /// Scenario with both users' RIS sizes set to m.
  Scenario scenario_for(int m) const;

  /// The M cases to run; a negative entry means "as configured per user".
  std::vector<int> m_cases() const;
};

/// Parses the INI-style config at `path` (empty: built-in defaults), then
/// applies `overrides` of the form section.key=value in order. Throws
/// ParseError (with line) on malformed input and ValidationError naming the
/// offending key otherwise.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

/// Same, reading the config text from a string.
RunConfig load_config_text(const std::string& text,
                           const std::vector<std::string>& overrides = {});

MacModel parse_model(const std::string& s);
RegionMode parse_region_mode(const std::string& s);
OutputFormat parse_format(const std::string& s);

}  // namespace risdmac
