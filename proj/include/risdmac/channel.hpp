#pragma once

#include <array>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "risdmac/mathcore.hpp"

namespace risdmac {

inline constexpr std::size_t kUsers = 2;

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Point3&) const = default;
};

double distance(const Point3& a, const Point3& b);

// Full experiment description. Powers in dBm; all derived quantities are
// linear. Each user is served by its own RIS; a user's signal reflected by
// the other user's RIS is taken to be zero at the receiver.
struct Scenario {
  Point3 receiver_pos{0.0, 0.0, 6.0};
  std::array<Point3, kUsers> user_pos{};
  std::array<Point3, kUsers> ris_pos{};
  std::array<double, kUsers> tx_power_dbm{0.0, 0.0};
  double noise_power_dbm = 0.0;
  double alpha_direct = 3.0;
  double alpha_user_ris = 3.0;
  double alpha_ris_rx = 3.5;
  std::array<int, kUsers> ris_elements{0, 0};
  // Interference variances are taken to infinity; kept only as a label.
  std::string interference_note = "strong (Q_i -> inf)";

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  /// Symmetric two-user layout: receiver at (0,0,6), user i at (+-d_i,0,1)
  /// and its RIS one metre above the user at (+-d_i,0,2).
  static Scenario symmetric_layout(double horizontal_d1, double horizontal_d2);
};

struct UserDistances {
  double direct = 0.0;    // user -> receiver
  double user_ris = 0.0;  // user -> serving RIS
  double ris_rx = 0.0;    // RIS -> receiver
};

struct AvgSnrPair {
  SnrLinear direct;  // mean SNR of the direct path
  SnrLinear ris;     // mean SNR per unit cascade power through the RIS
};

struct CascadeAmplitude {
  double user_to_ris = 0.0;  // h_im
  double ris_to_rx = 0.0;    // g_im
};

struct CascadePhase {
  double user_to_ris = 0.0;  // theta_im
  double ris_to_rx = 0.0;    // psi_im
  double ris_shift = 0.0;    // phi_im, the configured element phase
};

// One fading draw for both users.
struct LinkRealization {
  std::array<double, kUsers> direct_amp{};
  std::array<std::vector<CascadeAmplitude>, kUsers> cascade_amp;
  std::array<std::vector<CascadePhase>, kUsers> cascade_phase;
};

enum class PhaseMode { aligned, explicit_phases };

std::array<UserDistances, kUsers> distances(const Scenario& s);

std::array<AvgSnrPair, kUsers> average_snrs(const Scenario& s);

/// Every amplitude is Rayleigh with unit mean power (|CN(0,1)|) and every
/// phase uniform on [0, 2pi), all independent. Path loss is not applied
/// here; it lives in average_snrs.
LinkRealization sample_fading(std::mt19937_64& rng, const Scenario& s);

/// |h_i| + sum_m h_im g_im when aligned; otherwise the magnitude of the
/// coherent sum using the stored RIS phases.
double effective_gain(const LinkRealization& lr, std::size_t user, PhaseMode mode);

/// Sum over elements of h_im g_im, the aligned cascade amplitude H_i.
double cascade_sum(const LinkRealization& lr, std::size_t user);

/// gamma_i = direct_i |h_i|^2 + ris_i H_i^2 for each user.
std::array<SnrLinear, kUsers> instantaneous_snrs(const LinkRealization& lr,
                                                 const std::array<AvgSnrPair, kUsers>& avg);

// Squared direct amplitude and aligned cascade amplitude of one user; what
// the Monte Carlo engines need from a draw under ideal alignment.
struct UserGainDraw {
  double direct_power = 0.0;
  double cascade = 0.0;
};

/// Draws only the amplitudes needed for aligned SNRs. Same distribution as
/// sample_fading followed by |h_i|^2 and cascade_sum, without allocating.
UserGainDraw draw_user_gains(std::mt19937_64& rng, int ris_elements);

// Mean and variance of a product of two independent unit-power Rayleigh
// amplitudes.
inline constexpr double kProductMean = 0.78539816339744830962;  // pi / 4
inline constexpr double kProductVariance = 1.0 - kProductMean * kProductMean;

}  // namespace risdmac
