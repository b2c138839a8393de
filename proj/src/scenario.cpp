#include "uavmag/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uavmag/rng.hpp"

namespace uavmag {

namespace {

constexpr std::uint64_t kStreamLayout = 1;
constexpr std::uint64_t kStreamMotors = 2;
constexpr std::uint64_t kStreamNoise = 3;

std::array<Motor, 4> draw_motors(Rng& rng, const ScenarioParams& p) {
  const double h = 0.5 * p.motor_side;
  const std::array<Vec3, 4> offsets{Vec3{h, h, 0.0}, Vec3{-h, h, 0.0}, Vec3{-h, -h, 0.0}, Vec3{h, -h, 0.0}};
  constexpr std::array<MotorKind, 3> kinds{MotorKind::MechanicalRotation, MotorKind::PermanentMagnet,
                                           MotorKind::InducedField};
  std::array<Motor, 4> motors;
  for (std::size_t m = 0; m < motors.size(); ++m) {
    motors[m].offset = offsets[m];
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      MotorComponent& c = motors[m].components[k];
      c.kind = kinds[k];
      c.base_frequency = base_frequency(kinds[k]);
      c.chirp_factor = rng.uniform(p.min_chirp, p.max_chirp);
      c.moment_amplitude = rng.uniform(p.min_motor_moment, p.max_motor_moment);
      // Dipoles lie along the motor spin axis; only the polarity is random.
      c.axis = Vec3{0.0, 0.0, rng.uniform() < 0.5 ? -1.0 : 1.0};
      c.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
  }
  return motors;
}

Scenario base_scenario(std::uint64_t seed, double altitude, const ScenarioParams& p) {
  Scenario s;
  s.seed = seed;
  s.path = serpentine_path(p.grid_size, p.n_lines, altitude, p.speed, p.sample_rate);
  s.sensor1_offset = Vec3{};
  s.sensor2_offset = Vec3{0.0, 0.0, -p.sensor_spacing};
  s.noise_sigma = p.noise_sigma;
  s.background_field = background_vector(p.background_magnitude, p.background_inclination_deg);
  Rng motor_rng(mix_seed(seed, kStreamMotors));
  s.motors = draw_motors(motor_rng, p);
  return s;
}

SurveyRecord run_simulation(const Scenario& sc, bool with_noise) {
  const std::size_t n = sc.path.sample_count();
  const double duration = sc.path.duration();
  SurveyRecord rec;
  rec.sample_rate = sc.path.sample_rate;
  rec.times.resize(n);
  rec.positions1.resize(n);
  rec.positions2.resize(n);
  rec.b1.resize(n);
  rec.b2.resize(n);
  rec.truth1.resize(n);

  Rng noise(mix_seed(sc.seed, kStreamNoise));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sc.path.sample_rate;
    const Vec3 uav = sc.path.position_at(t);
    const Vec3 p1 = uav + sc.sensor1_offset;
    const Vec3 p2 = uav + sc.sensor2_offset;

    Vec3 mine1 = sc.background_field;
    Vec3 mine2 = sc.background_field;
    for (const auto& mine : sc.mines) {
      mine1 += dipole_field(mine.moment, mine.position, p1);
      mine2 += dipole_field(mine.moment, mine.position, p2);
    }
    Vec3 motor1;
    Vec3 motor2;
    for (const auto& motor : sc.motors) {
      motor1 += motor_field(motor, uav, sc.sensor1_offset, t, duration);
      motor2 += motor_field(motor, uav, sc.sensor2_offset, t, duration);
    }

    rec.times[i] = t;
    rec.positions1[i] = p1;
    rec.positions2[i] = p2;
    rec.truth1[i] = mine1;
    rec.b1[i] = mine1 + motor1;
    rec.b2[i] = mine2 + motor2;
    if (with_noise) {
      // Fixed draw order: sensor 1 xyz, then sensor 2 xyz.
      for (int a = 0; a < 3; ++a) rec.b1[i][a] += noise.normal(0.0, sc.noise_sigma);
      for (int a = 0; a < 3; ++a) rec.b2[i][a] += noise.normal(0.0, sc.noise_sigma);
    }
  }
  return rec;
}

}  // namespace

double base_frequency(MotorKind kind) {
  switch (kind) {
    case MotorKind::MechanicalRotation:
      return 0.055;
    case MotorKind::PermanentMagnet:
      return 0.39;
    case MotorKind::InducedField:
      return 2.0;
  }
  return 0.0;
}

std::string to_string(MotorKind kind) {
  switch (kind) {
    case MotorKind::MechanicalRotation:
      return "mechanical_rotation";
    case MotorKind::PermanentMagnet:
      return "permanent_magnet";
    case MotorKind::InducedField:
      return "induced_field";
  }
  return "unknown";
}

MotorKind motor_kind_from_string(const std::string& name) {
  if (name == "mechanical_rotation") return MotorKind::MechanicalRotation;
  if (name == "permanent_magnet") return MotorKind::PermanentMagnet;
  if (name == "induced_field") return MotorKind::InducedField;
  throw std::invalid_argument("unknown motor component kind: " + name);
}

double FlightPath::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += norm(waypoints[i] - waypoints[i - 1]);
  return total;
}

std::size_t FlightPath::sample_count() const {
  // Rounded to absorb floating-point error in length / speed * rate.
  return static_cast<std::size_t>(std::llround(duration() * sample_rate));
}

Vec3 FlightPath::position_at(double t) const {
  if (waypoints.empty()) return {};
  double remaining = std::max(0.0, t) * speed;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Vec3 seg = waypoints[i] - waypoints[i - 1];
    const double len = norm(seg);
    if (remaining <= len) return waypoints[i - 1] + seg * (remaining / len);
    remaining -= len;
  }
  return waypoints.back();
}

void ScenarioParams::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(key) + " must be positive");
  };
  positive(grid_size, "grid_size");
  positive(altitude, "altitude");
  positive(speed, "speed");
  positive(sample_rate, "sample_rate");
  positive(motor_side, "motor_side");
  positive(sensor_spacing, "sensor_spacing");
  if (n_lines < 2) throw std::invalid_argument("n_lines must be >= 2");
  if (!(noise_sigma >= 0.0)) throw std::invalid_argument("noise_sigma must be non-negative");
  if (!(background_magnitude >= 0.0)) throw std::invalid_argument("background_magnitude must be non-negative");
  if (!(min_separation >= 0.0)) throw std::invalid_argument("min_separation must be non-negative");
  if (!(max_depth >= 0.0)) throw std::invalid_argument("max_depth must be non-negative");
  if (!(min_chirp >= 1.0) || max_chirp < min_chirp) throw std::invalid_argument("chirp range must satisfy 1 <= min <= max");
  if (!(min_motor_moment >= 0.0) || max_motor_moment < min_motor_moment)
    throw std::invalid_argument("motor moment range must satisfy 0 <= min <= max");
  if (max_placement_attempts < 1) throw std::invalid_argument("max_placement_attempts must be >= 1");
}

Vec3 dipole_field(const Vec3& moment, const Vec3& source_pos, const Vec3& obs_pos) {
  const Vec3 r = obs_pos - source_pos;
  const double d = norm(r);
  if (d == 0.0) throw std::domain_error("dipole_field: observer coincides with source");
  const Vec3 rhat = r / d;
  return (3.0 * dot(moment, rhat) * rhat - moment) * (kMu0Over4PiNanoTesla / (d * d * d));
}

double motor_component_moment(const MotorComponent& c, double t, double duration) {
  // Linear instantaneous-frequency ramp f0 -> f0 * chirp over the flight; the
  // phase is its integral.
  const double sweep = duration > 0.0 ? (c.chirp_factor - 1.0) * t * t / (2.0 * duration) : 0.0;
  const double phase = 2.0 * std::numbers::pi * c.base_frequency * (t + sweep) + c.phase;
  return c.moment_amplitude * std::sin(phase);
}

Vec3 motor_field(const Motor& motor, const Vec3& uav_pos, const Vec3& obs_offset, double t, double duration) {
  const Vec3 source = uav_pos + motor.offset;
  const Vec3 obs = uav_pos + obs_offset;
  Vec3 total;
  for (const auto& c : motor.components) {
    const double m = motor_component_moment(c, t, duration);
    if (m == 0.0) continue;
    total += dipole_field(c.axis * m, source, obs);
  }
  return total;
}

FlightPath serpentine_path(double grid_size, int n_lines, double altitude, double speed, double sample_rate) {
  if (n_lines < 2) throw std::invalid_argument("serpentine_path: n_lines must be >= 2");
  if (!(grid_size > 0.0) || !(altitude > 0.0) || !(speed > 0.0) || !(sample_rate > 0.0))
    throw std::invalid_argument("serpentine_path: parameters must be positive");
  FlightPath path;
  path.speed = speed;
  path.sample_rate = sample_rate;
  path.altitude = altitude;
  const double spacing = grid_size / static_cast<double>(n_lines - 1);
  for (int line = 0; line < n_lines; ++line) {
    const double y = spacing * line;
    const bool forward = line % 2 == 0;
    path.waypoints.push_back(Vec3{forward ? 0.0 : grid_size, y, altitude});
    path.waypoints.push_back(Vec3{forward ? grid_size : 0.0, y, altitude});
  }
  return path;
}

Vec3 background_vector(double magnitude, double inclination_deg) {
  const double inc = inclination_deg * std::numbers::pi / 180.0;
  return Vec3{0.0, magnitude * std::cos(inc), -magnitude * std::sin(inc)};
}

Scenario generate_random_scenario(std::uint64_t seed, int n_mines, const ScenarioParams& params) {
  params.validate();
  if (n_mines < 0) throw std::invalid_argument("generate_random_scenario: n_mines must be non-negative");
  Scenario s = base_scenario(seed, params.altitude, params);

  Rng layout(mix_seed(seed, kStreamLayout));
  for (int m = 0; m < n_mines; ++m) {
    bool placed = false;
    for (int attempt = 0; attempt < params.max_placement_attempts && !placed; ++attempt) {
      const Vec3 candidate{layout.uniform(0.0, params.grid_size), layout.uniform(0.0, params.grid_size), 0.0};
      const bool clear = std::all_of(s.mines.begin(), s.mines.end(), [&](const MineSource& other) {
        return horizontal_distance(other.position, candidate) >= params.min_separation;
      });
      if (clear) {
        s.mines.push_back(MineSource{candidate, params.mine_moment});
        placed = true;
      }
    }
    if (!placed)
      throw PlacementError("could not place mine " + std::to_string(m + 1) + " of " + std::to_string(n_mines) +
                           " after " + std::to_string(params.max_placement_attempts) + " attempts (seed " +
                           std::to_string(seed) + ")");
  }
  for (auto& mine : s.mines) mine.position.z = -layout.uniform(0.0, params.max_depth);
  return s;
}

Scenario fixed_corner_scenario(std::uint64_t seed, double altitude, const ScenarioParams& params) {
  params.validate();
  if (!(altitude > 0.0)) throw std::invalid_argument("fixed_corner_scenario: altitude must be positive");
  Scenario s = base_scenario(seed, altitude, params);
  const double c = 0.5 * params.grid_size;
  const double half = 3.0;
  Rng layout(mix_seed(seed, kStreamLayout));
  for (const double dx : {-half, half}) {
    for (const double dy : {-half, half}) {
      s.mines.push_back(MineSource{Vec3{c + dx, c + dy, 0.0}, params.mine_moment});
    }
  }
  for (auto& mine : s.mines) mine.position.z = -layout.uniform(0.0, params.max_depth);
  return s;
}

SurveyRecord simulate(const Scenario& scenario) { return run_simulation(scenario, scenario.noise_sigma > 0.0); }

SurveyRecord simulate_noise_free(const Scenario& scenario) { return run_simulation(scenario, false); }

double horizontal_distance(const Vec3& a, const Vec3& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace uavmag
