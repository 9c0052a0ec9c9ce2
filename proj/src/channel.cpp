#include "risdmac/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "risdmac/errors.hpp"

namespace risdmac {
namespace {

bool finite(const Point3& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

double rayleigh_amplitude(std::mt19937_64& rng) {
  std::exponential_distribution<double> power(1.0);
  return std::sqrt(power(rng));
}

double uniform_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  return phase(rng);
}

std::string user_key(const char* field, std::size_t i) {
  return std::string("scenario.") + field + std::to_string(i + 1);
}

}  // namespace

double distance(const Point3& a, const Point3& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

void Scenario::validate() const {
  if (!(alpha_direct > 0.0)) {
    throw ValidationError("scenario.alpha_direct", "path-loss exponent must be positive");
  }
  if (!(alpha_user_ris > 0.0)) {
    throw ValidationError("scenario.alpha_user_ris", "path-loss exponent must be positive");
  }
  if (!(alpha_ris_rx > 0.0)) {
    throw ValidationError("scenario.alpha_ris_rx", "path-loss exponent must be positive");
  }
  if (!finite(receiver_pos)) {
    throw ValidationError("scenario.receiver", "position must be finite");
  }
  if (!std::isfinite(noise_power_dbm)) {
    throw ValidationError("scenario.noise_dbm", "must be finite");
  }
  for (std::size_t i = 0; i < kUsers; ++i) {
    if (ris_elements[i] < 0) {
      throw ValidationError(user_key("ris_elements", i), "must be >= 0");
    }
    if (!finite(user_pos[i])) {
      throw ValidationError(user_key("user", i), "position must be finite");
    }
    if (!finite(ris_pos[i])) {
      throw ValidationError(user_key("ris", i), "position must be finite");
    }
    if (!std::isfinite(tx_power_dbm[i])) {
      throw ValidationError(user_key("tx_power_dbm", i), "must be finite");
    }
    if (user_pos[i] == receiver_pos) {
      throw DegenerateGeometryError(user_key("user", i) + " coincides with the receiver");
    }
    if (ris_pos[i] == receiver_pos) {
      throw DegenerateGeometryError(user_key("ris", i) + " coincides with the receiver");
    }
    if (ris_pos[i] == user_pos[i]) {
      throw DegenerateGeometryError(user_key("ris", i) + " coincides with its user");
    }
  }
}

Scenario Scenario::symmetric_layout(double horizontal_d1, double horizontal_d2) {
  Scenario s;
  s.receiver_pos = {0.0, 0.0, 6.0};
  s.user_pos = {Point3{horizontal_d1, 0.0, 1.0}, Point3{-horizontal_d2, 0.0, 1.0}};
  s.ris_pos = {Point3{horizontal_d1, 0.0, 2.0}, Point3{-horizontal_d2, 0.0, 2.0}};
  return s;
}

std::array<UserDistances, kUsers> distances(const Scenario& s) {
  std::array<UserDistances, kUsers> out;
  for (std::size_t i = 0; i < kUsers; ++i) {
    out[i].direct = distance(s.user_pos[i], s.receiver_pos);
    out[i].user_ris = distance(s.user_pos[i], s.ris_pos[i]);
    out[i].ris_rx = distance(s.ris_pos[i], s.receiver_pos);
    if (out[i].direct == 0.0 || out[i].user_ris == 0.0 || out[i].ris_rx == 0.0) {
      throw DegenerateGeometryError("zero-length link for user " + std::to_string(i + 1));
    }
  }
  return out;
}

std::array<AvgSnrPair, kUsers> average_snrs(const Scenario& s) {
  const auto d = distances(s);
  const double noise = dbm_to_linear(s.noise_power_dbm);
  std::array<AvgSnrPair, kUsers> out;
  for (std::size_t i = 0; i < kUsers; ++i) {
    const double p = dbm_to_linear(s.tx_power_dbm[i]);
    out[i].direct = SnrLinear(p / (std::pow(d[i].direct, s.alpha_direct) * noise));
    out[i].ris = SnrLinear(p / (std::pow(d[i].user_ris, s.alpha_user_ris) *
                                std::pow(d[i].ris_rx, s.alpha_ris_rx) * noise));
  }
  return out;
}

LinkRealization sample_fading(std::mt19937_64& rng, const Scenario& s) {
  LinkRealization lr;
  for (std::size_t i = 0; i < kUsers; ++i) {
    lr.direct_amp[i] = rayleigh_amplitude(rng);
    const auto m = static_cast<std::size_t>(s.ris_elements[i]);
    lr.cascade_amp[i].resize(m);
    lr.cascade_phase[i].resize(m);
    for (std::size_t k = 0; k < m; ++k) {
      lr.cascade_amp[i][k].user_to_ris = rayleigh_amplitude(rng);
      lr.cascade_amp[i][k].ris_to_rx = rayleigh_amplitude(rng);
      lr.cascade_phase[i][k].user_to_ris = uniform_phase(rng);
      lr.cascade_phase[i][k].ris_to_rx = uniform_phase(rng);
      lr.cascade_phase[i][k].ris_shift = uniform_phase(rng);
    }
  }
  return lr;
}

double cascade_sum(const LinkRealization& lr, std::size_t user) {
  double h = 0.0;
  for (const auto& a : lr.cascade_amp.at(user)) {
    h += a.user_to_ris * a.ris_to_rx;
  }
  return h;
}

double effective_gain(const LinkRealization& lr, std::size_t user, PhaseMode mode) {
  if (mode == PhaseMode::aligned) {
    return std::abs(lr.direct_amp.at(user)) + cascade_sum(lr, user);
  }
  std::complex<double> total(lr.direct_amp.at(user), 0.0);
  const auto& amp = lr.cascade_amp.at(user);
  const auto& phase = lr.cascade_phase.at(user);
  for (std::size_t k = 0; k < amp.size(); ++k) {
    const double angle = phase[k].ris_shift - phase[k].user_to_ris - phase[k].ris_to_rx;
    total += std::polar(amp[k].user_to_ris * amp[k].ris_to_rx, angle);
  }
  return std::abs(total);
}

std::array<SnrLinear, kUsers> instantaneous_snrs(const LinkRealization& lr,
                                                 const std::array<AvgSnrPair, kUsers>& avg) {
  std::array<SnrLinear, kUsers> out;
  for (std::size_t i = 0; i < kUsers; ++i) {
    const double h = cascade_sum(lr, i);
    out[i] = SnrLinear(avg[i].direct.value() * lr.direct_amp[i] * lr.direct_amp[i] +
                       avg[i].ris.value() * h * h);
  }
  return out;
}

UserGainDraw draw_user_gains(std::mt19937_64& rng, int ris_elements) {
  std::exponential_distribution<double> power(1.0);
  UserGainDraw out;
  out.direct_power = power(rng);
  for (int k = 0; k < ris_elements; ++k) {
    const double h = std::sqrt(power(rng));
    const double g = std::sqrt(power(rng));
    out.cascade += h * g;
  }
  return out;
}

}  // namespace risdmac
