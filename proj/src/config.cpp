#include "risdmac/config.hpp"

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "risdmac/errors.hpp"

namespace risdmac {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario",
       {"receiver", "user1", "user2", "ris1", "ris2", "horizontal_distance1",
        "horizontal_distance2", "tx_power1_dbm", "tx_power2_dbm", "noise_dbm", "alpha_direct",
        "alpha_user_ris", "alpha_ris_rx", "ris_elements1", "ris_elements2", "m_list",
        "interference"}},
      {"query", {"model", "rt_doubly", "rt_single", "r2_single", "rho"}},
      {"sweep", {"parameter", "start", "stop", "points", "scale", "lock"}},
      {"mc", {"n_trials", "seed", "workers"}},
      {"mixture", {"policy", "L", "tolerance", "max_terms", "zeta_form"}},
      {"region", {"mode"}},
      {"output", {"format", "path"}},
  };
  return keys;
}

const std::set<std::string>& sweep_parameters() {
  static const std::set<std::string> params{
      "gamma_tilde_1",     "scenario.tx_power1_dbm", "scenario.tx_power2_dbm",
      "scenario.noise_dbm", "query.rt_doubly",       "query.rt_single",
      "query.r2_single",   "query.rho"};
  return params;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> raw(const std::string& key) const {
    auto v = tree_.get_optional<std::string>(key);
    if (!v) return std::nullopt;
    return boost::algorithm::trim_copy(*v);
  }

  template <class T>
  std::optional<T> number(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    return parse_number<T>(key, *s);
  }

  std::optional<bool> boolean(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    if (*s == "true" || *s == "1" || *s == "yes" || *s == "on") return true;
    if (*s == "false" || *s == "0" || *s == "no" || *s == "off") return false;
    throw ValidationError(key, "expected a boolean, got '" + *s + "'");
  }

  std::optional<Point3> point(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    const auto parts = split(*s);
    if (parts.size() != 3) throw ValidationError(key, "expected x,y,z");
    return Point3{parse_number<double>(key, parts[0]), parse_number<double>(key, parts[1]),
                  parse_number<double>(key, parts[2])};
  }

  std::optional<std::vector<int>> int_list(const std::string& key) const {
    auto s = raw(key);
    if (!s) return std::nullopt;
    std::vector<int> out;
    for (const auto& p : split(*s)) out.push_back(parse_number<int>(key, p));
    return out;
  }

 private:
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(boost::algorithm::trim_copy(item));
    return parts;
  }

  template <class T>
  static T parse_number(const std::string& key, const std::string& s) {
    T value{};
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || s.empty()) {
      throw ValidationError(key, "not a valid number: '" + s + "'");
    }
    return value;
  }

  const pt::ptree& tree_;
};

void check_keys(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      if (body.empty()) throw ValidationError(section, "keys must live in a [section]");
      throw ValidationError(section, "unknown section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ValidationError(section + "." + key, "unknown key");
    }
  }
}

void apply_override(pt::ptree& tree, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) {
    throw ValidationError(item, "override must have the form section.key=value");
  }
  const auto key = boost::algorithm::trim_copy(item.substr(0, eq));
  const auto value = boost::algorithm::trim_copy(item.substr(eq + 1));
  if (key.find('.') == std::string::npos) {
    throw ValidationError(key, "override key must be section.key");
  }
  tree.put(key, value);
}

RunConfig defaults() {
  RunConfig cfg;
  cfg.scenario = Scenario::symmetric_layout(20.0, 20.0);
  cfg.scenario.tx_power_dbm = {50.0, 50.0};
  cfg.scenario.noise_power_dbm = 10.0;
  cfg.scenario.ris_elements = {32, 32};
  return cfg;
}

RunConfig from_tree(const pt::ptree& tree) {
  check_keys(tree);
  Reader r(tree);
  RunConfig cfg = defaults();
  auto& sc = cfg.scenario;

  const auto d1 = r.number<double>("scenario.horizontal_distance1");
  const auto d2 = r.number<double>("scenario.horizontal_distance2");
  if (d1 || d2) {
    const auto layout = Scenario::symmetric_layout(d1.value_or(20.0), d2.value_or(20.0));
    sc.receiver_pos = layout.receiver_pos;
    sc.user_pos = layout.user_pos;
    sc.ris_pos = layout.ris_pos;
  }
  if (auto p = r.point("scenario.receiver")) sc.receiver_pos = *p;
  if (auto p = r.point("scenario.user1")) sc.user_pos[0] = *p;
  if (auto p = r.point("scenario.user2")) sc.user_pos[1] = *p;
  if (auto p = r.point("scenario.ris1")) sc.ris_pos[0] = *p;
  if (auto p = r.point("scenario.ris2")) sc.ris_pos[1] = *p;
  if (auto v = r.number<double>("scenario.tx_power1_dbm")) sc.tx_power_dbm[0] = *v;
  if (auto v = r.number<double>("scenario.tx_power2_dbm")) sc.tx_power_dbm[1] = *v;
  if (auto v = r.number<double>("scenario.noise_dbm")) sc.noise_power_dbm = *v;
  if (auto v = r.number<double>("scenario.alpha_direct")) sc.alpha_direct = *v;
  if (auto v = r.number<double>("scenario.alpha_user_ris")) sc.alpha_user_ris = *v;
  if (auto v = r.number<double>("scenario.alpha_ris_rx")) sc.alpha_ris_rx = *v;
  if (auto v = r.number<int>("scenario.ris_elements1")) sc.ris_elements[0] = *v;
  if (auto v = r.number<int>("scenario.ris_elements2")) sc.ris_elements[1] = *v;
  if (auto v = r.int_list("scenario.m_list")) cfg.m_list = *v;
  if (auto v = r.raw("scenario.interference")) {
    if (*v != "strong") {
      throw ValidationError("scenario.interference", "only the strong-interference regime is modelled");
    }
  }

  if (auto v = r.raw("query.model")) cfg.query.model = parse_model(*v);
  if (auto v = r.number<double>("query.rt_doubly")) cfg.query.rt_doubly = *v;
  if (auto v = r.number<double>("query.rt_single")) cfg.query.rt_single = *v;
  if (auto v = r.number<double>("query.r2_single")) cfg.query.r2_single = *v;
  if (auto v = r.number<double>("query.rho")) cfg.query.rho = *v;

  if (tree.get_child_optional("sweep")) {
    SweepSpec sw;
    if (auto v = r.raw("sweep.parameter")) sw.parameter = *v;
    auto start = r.number<double>("sweep.start");
    auto stop = r.number<double>("sweep.stop");
    if (!start) throw ValidationError("sweep.start", "required when [sweep] is present");
    if (!stop) throw ValidationError("sweep.stop", "required when [sweep] is present");
    sw.start = *start;
    sw.stop = *stop;
    if (auto v = r.number<int>("sweep.points")) sw.points = *v;
    if (auto v = r.raw("sweep.scale")) {
      if (*v == "dB" || *v == "db") {
        sw.scale = SweepScale::db;
      } else if (*v == "linear") {
        sw.scale = SweepScale::linear;
      } else {
        throw ValidationError("sweep.scale", "expected dB or linear");
      }
    }
    if (auto v = r.boolean("sweep.lock")) sw.lock = *v;
    cfg.sweep = sw;
  }

  // Parsed as signed so that a negative count is reported as such.
  if (auto v = r.number<long long>("mc.n_trials")) {
    if (*v < 1) throw ValidationError("mc.n_trials", "must be >= 1");
    cfg.mc.n_trials = static_cast<std::uint64_t>(*v);
  }
  if (auto v = r.number<std::uint64_t>("mc.seed")) cfg.mc.seed = *v;
  if (auto v = r.number<unsigned>("mc.workers")) cfg.mc.workers = *v;

  if (auto v = r.raw("mixture.policy")) {
    if (*v == "fixed") {
      cfg.mixture.policy = TruncationPolicy::fixed;
    } else if (*v == "adaptive") {
      cfg.mixture.policy = TruncationPolicy::adaptive;
    } else {
      throw ValidationError("mixture.policy", "expected fixed or adaptive");
    }
  }
  if (auto v = r.number<int>("mixture.L")) cfg.mixture.fixed_terms = *v;
  if (auto v = r.number<double>("mixture.tolerance")) cfg.mixture.relative_tolerance = *v;
  if (auto v = r.number<int>("mixture.max_terms")) cfg.mixture.max_terms = *v;
  if (auto v = r.raw("mixture.zeta_form")) {
    if (*v == "corrected") {
      cfg.mixture.zeta_form = ZetaForm::corrected;
    } else if (*v == "printed") {
      cfg.mixture.zeta_form = ZetaForm::printed_argument;
    } else {
      throw ValidationError("mixture.zeta_form", "expected corrected or printed");
    }
  }

  if (auto v = r.raw("region.mode")) cfg.region_mode = parse_region_mode(*v);
  if (auto v = r.raw("output.format")) cfg.format = parse_format(*v);
  if (auto v = r.raw("output.path")) cfg.output_path = *v;

  cfg.validate();
  return cfg;
}

RunConfig load_stream(std::istream& in, const std::vector<std::string>& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config parse error at line " + std::to_string(e.line()) + ": " +
                         e.message(),
                     e.line());
  }
  for (const auto& o : overrides) apply_override(tree, o);
  return from_tree(tree);
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  out.reserve(points);
  for (int k = 0; k < points; ++k) {
    out.push_back(points == 1 ? start : start + (stop - start) * k / (points - 1));
  }
  return out;
}

void RunConfig::validate() const {
  scenario.validate();
  query.validate();
  for (int m : m_list) {
    if (m < 0) throw ValidationError("scenario.m_list", "RIS sizes must be >= 0");
  }
  if (sweep) {
    if (sweep->points < 2) throw ValidationError("sweep.points", "must be >= 2");
    if (!sweep_parameters().count(sweep->parameter)) {
      throw ValidationError("sweep.parameter", "unsupported parameter '" + sweep->parameter + "'");
    }
    if (!std::isfinite(sweep->start) || !std::isfinite(sweep->stop)) {
      throw ValidationError("sweep.start", "sweep bounds must be finite");
    }
    if (sweep->parameter == "gamma_tilde_1" && sweep->scale == SweepScale::linear &&
        !(std::min(sweep->start, sweep->stop) > 0.0)) {
      throw ValidationError("sweep.start", "linear gamma_tilde_1 sweep needs positive bounds");
    }
  }
  if (mc.n_trials < 1) throw ValidationError("mc.n_trials", "must be >= 1");
  if (mixture.fixed_terms < 1) throw ValidationError("mixture.L", "must be >= 1");
  if (mixture.max_terms < 1) throw ValidationError("mixture.max_terms", "must be >= 1");
  if (!(mixture.relative_tolerance > 0.0)) {
    throw ValidationError("mixture.tolerance", "must be positive");
  }
}

Scenario RunConfig::scenario_for(int m) const {
  Scenario s = scenario;
  if (m >= 0) s.ris_elements = {m, m};
  return s;
}

std::vector<int> RunConfig::m_cases() const {
  if (m_list.empty()) return {-1};
  return m_list;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  if (path.empty()) return load_config_text("", overrides);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return load_stream(in, overrides);
}

RunConfig load_config_text(const std::string& text, const std::vector<std::string>& overrides) {
  std::istringstream in(text);
  return load_stream(in, overrides);
}

MacModel parse_model(const std::string& s) {
  if (s == "doubly") return MacModel::doubly;
  if (s == "single") return MacModel::single;
  throw ValidationError("query.model", "expected doubly or single, got '" + s + "'");
}

RegionMode parse_region_mode(const std::string& s) {
  if (s == "mean-snr") return RegionMode::mean_snr;
  if (s == "per-realization") return RegionMode::per_realization;
  if (s == "ergodic-mc") return RegionMode::ergodic_mc;
  throw ValidationError("region.mode", "expected mean-snr, per-realization or ergodic-mc");
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ValidationError("output.format", "expected csv or json, got '" + s + "'");
}

}  // namespace risdmac
