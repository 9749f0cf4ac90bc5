// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "airrate/vec3.hpp"

namespace airrate {

struct FlightState {
    double t = 0.0;   // seconds
    Vec3 position;    // meters, z = altitude above ground plane
    Vec3 velocity;    // m/s
};

// Piecewise-linear constant-speed path. Waypoint z is altitude; the ground
// plane is z = 0. Altitude limits for UAV use are checked by the scenario
// validator, not here, so the same type can describe ground-client walks.
class Trajectory {
public:
    Trajectory(std::vector<Vec3> waypoints, std::vector<double> speeds);

    // Numerically static path that still spans at least `min_duration`
    // seconds, for hover scenarios and zero-velocity sweep points.
    static Trajectory hover(const Vec3& position, double min_duration);

    double duration() const { return times_.back(); }
    double path_length() const;
    const std::vector<Vec3>& waypoints() const { return waypoints_; }
    const std::vector<double>& speeds() const { return speeds_; }

    // Position/velocity at time t. Segment junctions take the velocity of
    // the later segment. Throws std::out_of_range outside [0, duration()].
    FlightState sample(double t) const;

    double max_speed() const;
    double min_altitude() const;
    double max_altitude() const;

private:
    std::vector<Vec3> waypoints_;
    std::vector<double> speeds_;
    std::vector<double> times_;  // arrival time at each waypoint, times_[0] = 0
};

inline FlightState sample_flight(const Trajectory& traj, double t) { return traj.sample(t); }

struct ClientSite {
    Vec3 position{0.0, 0.0, 1.0};  // z = antenna height d_c
    bool nlos = false;
    double nlos_penalty_db = 25.0;           // applied only when nlos
    std::optional<Trajectory> walk;          // optional client motion

    Vec3 position_at(double t) const {
        if (!walk) return position;
        double tc = std::min(t, walk->duration());
        return walk->sample(tc).position;
    }
    Vec3 velocity_at(double t) const {
        if (!walk || t > walk->duration()) return {};
        return walk->sample(t).velocity;
    }
};

struct RelativeState {
    double v = 0.0;        // |relative velocity| (m/s)
    Vec3 rel_position;     // UAV minus client
    double alpha = 0.0;    // angle between relative velocity and the UAV->client line
    double d_d = 0.0;      // direct-path distance

    double v_along_path() const { return v * std::abs(std::cos(alpha)); }
};

// Relative kinematics of the UAV with respect to a (possibly moving) client.
// Zero relative speed yields alpha = pi/2 so the along-path speed is zero.
RelativeState relative_state(const FlightState& uav, const Vec3& client_pos,
                             const Vec3& client_vel = {});
RelativeState relative_state(const FlightState& uav, const ClientSite& client);

struct SensorBroadcast {
    double t = 0.0;
    Vec3 position;
    Vec3 velocity;
};

struct BroadcastNoise {
    double sigma_pos_m = 0.0;
    double sigma_vel_mps = 0.0;
};

// Periodic state broadcasts at rate f_b over [0, duration). Noise fields draw
// from the seeded generator; sigma = 0 reproduces ground truth exactly.
std::vector<SensorBroadcast> broadcast_stream(const Trajectory& traj, double f_b,
                                              const BroadcastNoise& noise, std::uint64_t seed);

// Channel airtime consumed by the state broadcast: 24-byte payload at the
// 6 Mbps base rate plus a 100 us preamble header, per broadcast.
constexpr double kBroadcastPayloadBytes = 24.0;
constexpr double kBroadcastBaseRateBps = 6e6;
constexpr double kBroadcastPreambleS = 100e-6;

inline double broadcast_airtime_fraction(double f_b) {
    return (kBroadcastPayloadBytes * 8.0 / kBroadcastBaseRateBps + kBroadcastPreambleS) * f_b;
}

} // namespace airrate
