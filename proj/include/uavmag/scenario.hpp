#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavmag/vec3.hpp"

namespace uavmag {

/// M19 anti-tank mine moment (A*m^2).
inline constexpr Vec3 kM19Moment{-0.326, 0.087, -0.338};

/// mu0 / 4pi in nT*m/A, so dipole fields come out in nT for m in A*m^2 and r in m.
inline constexpr double kMu0Over4PiNanoTesla = 100.0;

enum class MotorKind { MechanicalRotation, PermanentMagnet, InducedField };

/// 0.055 / 0.39 / 2.0 Hz for the three interference mechanisms of a brushless motor.
double base_frequency(MotorKind kind);
std::string to_string(MotorKind kind);
MotorKind motor_kind_from_string(const std::string& name);

struct MineSource {
  Vec3 position;  // m; z <= 0 is burial depth
  Vec3 moment;    // A*m^2
};

struct MotorComponent {
  MotorKind kind = MotorKind::MechanicalRotation;
  double base_frequency = 0.0;    // Hz
  double chirp_factor = 1.0;      // final / initial instantaneous frequency
  double moment_amplitude = 0.0;  // A*m^2
  Vec3 axis{0.0, 0.0, 1.0};       // unit
  double phase = 0.0;             // rad
};

struct Motor {
  Vec3 offset;  // body frame, m
  std::array<MotorComponent, 3> components;
};

struct FlightPath {
  std::vector<Vec3> waypoints;
  double speed = 1.0;          // m/s
  double sample_rate = 100.0;  // Hz
  double altitude = 0.5;       // m

  [[nodiscard]] double length() const;
  [[nodiscard]] double duration() const { return length() / speed; }
  /// Samples at t = k / sample_rate for t in [0, duration).
  [[nodiscard]] std::size_t sample_count() const;
  [[nodiscard]] Vec3 position_at(double t) const;
};

struct Scenario {
  std::vector<MineSource> mines;
  std::array<Motor, 4> motors;
  FlightPath path;
  Vec3 sensor1_offset{0.0, 0.0, 0.0};
  Vec3 sensor2_offset{0.0, 0.0, -0.10};
  double noise_sigma = 10.0;  // nT, per axis
  Vec3 background_field;      // nT
  std::uint64_t seed = 0;
};

/// Time-aligned survey samples. truth1 is background plus mine fields at
/// sensor 1, without interference or noise.
struct SurveyRecord {
  double sample_rate = 100.0;
  std::vector<double> times;
  std::vector<Vec3> positions1;
  std::vector<Vec3> positions2;
  std::vector<Vec3> b1;
  std::vector<Vec3> b2;
  std::vector<Vec3> truth1;

  [[nodiscard]] std::size_t size() const { return times.size(); }
};

/// Knobs for scenario generation. Defaults reproduce the Benchmark-1 survey.
struct ScenarioParams {
  double grid_size = 10.0;  // m
  int n_lines = 10;
  double altitude = 0.5;  // m
  double speed = 1.0;     // m/s
  double sample_rate = 100.0;
  double noise_sigma = 10.0;
  double background_magnitude = 50000.0;  // nT
  double background_inclination_deg = 60.0;
  double min_separation = 2.0;  // m, horizontal
  double max_depth = 0.15;      // m
  Vec3 mine_moment = kM19Moment;
  double motor_side = 0.10;      // m, side of the motor square
  double sensor_spacing = 0.10;  // m, sensor 2 below sensor 1
  double min_chirp = 1.0;
  double max_chirp = 5.0;
  double min_motor_moment = 0.010;  // A*m^2
  double max_motor_moment = 0.040;
  int max_placement_attempts = 10000;

  void validate() const;
};

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point-dipole field in nT. Throws std::domain_error when obs == source.
Vec3 dipole_field(const Vec3& moment, const Vec3& source_pos, const Vec3& obs_pos);

/// Time-varying moment of one interference component.
double motor_component_moment(const MotorComponent& component, double t, double duration);

/// Field of the three components of one motor, observed at uav_pos + obs_offset.
Vec3 motor_field(const Motor& motor, const Vec3& uav_pos, const Vec3& obs_offset, double t, double duration);

FlightPath serpentine_path(double grid_size, int n_lines, double altitude, double speed, double sample_rate);

/// Background vector of the given magnitude, inclined below the +y (north) horizon.
Vec3 background_vector(double magnitude, double inclination_deg);

Scenario generate_random_scenario(std::uint64_t seed, int n_mines, const ScenarioParams& params = {});

/// Four mines at the corners of a 6 m square centred in the grid. Mines and
/// motors depend only on the seed, so altitude sweeps see identical draws.
Scenario fixed_corner_scenario(std::uint64_t seed, double altitude, const ScenarioParams& params = {});

SurveyRecord simulate(const Scenario& scenario);

/// Variant of simulate() with the noise stream disabled; used by oracles.
SurveyRecord simulate_noise_free(const Scenario& scenario);

/// Horizontal (XY) distance.
double horizontal_distance(const Vec3& a, const Vec3& b);

}  // namespace uavmag
