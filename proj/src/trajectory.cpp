// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace airrate {

Trajectory::Trajectory(std::vector<Vec3> waypoints, std::vector<double> speeds)
    : waypoints_(std::move(waypoints)), speeds_(std::move(speeds)) {
    if (waypoints_.size() < 2)
        throw std::invalid_argument("trajectory needs at least 2 waypoints");
    if (speeds_.size() != waypoints_.size() - 1)
        throw std::invalid_argument("trajectory needs one speed per segment");
    for (const auto& w : waypoints_)
        if (!w.finite()) throw std::invalid_argument("trajectory waypoint not finite");
    for (double s : speeds_)
        if (!(s > 0.0)) throw std::invalid_argument("trajectory segment speeds must be > 0");

    times_.resize(waypoints_.size());
    times_[0] = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i)
        times_[i + 1] = times_[i] + distance(waypoints_[i], waypoints_[i + 1]) / speeds_[i];
}

Trajectory Trajectory::hover(const Vec3& position, double min_duration) {
    if (!(min_duration > 0.0)) throw std::invalid_argument("hover duration must be > 0");
    // A displacement far below any wavelength of interest; the resulting
    // velocity is numerically indistinguishable from zero.
    const double step = 1e-12;
    Vec3 end = position;
    end.x += step;
    return Trajectory({position, end}, {step / (2.0 * min_duration)});
}

double Trajectory::path_length() const {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i)
        len += distance(waypoints_[i], waypoints_[i + 1]);
    return len;
}

FlightState Trajectory::sample(double t) const {
    if (!(t >= 0.0) || t > duration() * (1.0 + 1e-12) + 1e-12)
        throw std::out_of_range("sample time outside trajectory duration");
    t = std::min(t, duration());

    // First segment whose arrival time exceeds t; junctions belong to the
    // later segment so velocity is right-continuous.
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t seg = (it == times_.end()) ? waypoints_.size() - 2
                                           : static_cast<std::size_t>(it - times_.begin()) - 1;
    seg = std::min(seg, waypoints_.size() - 2);

    const Vec3 a = waypoints_[seg];
    const Vec3 b = waypoints_[seg + 1];
    const double seg_len = distance(a, b);
    Vec3 dir = seg_len > 0.0 ? (b - a) / seg_len : Vec3{};
    const double along = (t - times_[seg]) * speeds_[seg];

    FlightState s;
    s.t = t;
    s.position = a + dir * std::min(along, seg_len);
    s.velocity = dir * speeds_[seg];
    return s;
}

double Trajectory::max_speed() const {
    return *std::max_element(speeds_.begin(), speeds_.end());
}

double Trajectory::min_altitude() const {
    double m = waypoints_.front().z;
    for (const auto& w : waypoints_) m = std::min(m, w.z);
    return m;
}

double Trajectory::max_altitude() const {
    double m = waypoints_.front().z;
    for (const auto& w : waypoints_) m = std::max(m, w.z);
    return m;
}

RelativeState relative_state(const FlightState& uav, const Vec3& client_pos,
                             const Vec3& client_vel) {
    RelativeState r;
    r.rel_position = uav.position - client_pos;
    r.d_d = r.rel_position.norm();
    if (r.d_d <= 0.0) throw std::invalid_argument("UAV and client positions coincide");

    const Vec3 vrel = uav.velocity - client_vel;
    r.v = vrel.norm();
    if (r.v <= 0.0) {
        r.alpha = M_PI / 2.0;  // no motion along the path by convention
        return r;
    }
    const Vec3 to_client = (client_pos - uav.position) / r.d_d;
    double c = vrel.dot(to_client) / r.v;
    c = std::clamp(c, -1.0, 1.0);
    r.alpha = std::acos(c);
    return r;
}

RelativeState relative_state(const FlightState& uav, const ClientSite& client) {
    return relative_state(uav, client.position_at(uav.t), client.velocity_at(uav.t));
}

std::vector<SensorBroadcast> broadcast_stream(const Trajectory& traj, double f_b,
                                              const BroadcastNoise& noise, std::uint64_t seed) {
    if (!(f_b > 0.0)) throw std::invalid_argument("broadcast rate must be > 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<SensorBroadcast> out;
    const double duration = traj.duration();
    for (std::uint64_t k = 0;; ++k) {
        const double t = static_cast<double>(k) / f_b;
        if (t >= duration) break;
        const FlightState s = traj.sample(t);
        SensorBroadcast b;
        b.t = t;
        b.position = s.position;
        b.velocity = s.velocity;
        if (noise.sigma_pos_m > 0.0) {
            b.position.x += noise.sigma_pos_m * gauss(rng);
            b.position.y += noise.sigma_pos_m * gauss(rng);
            b.position.z += noise.sigma_pos_m * gauss(rng);
        }
        if (noise.sigma_vel_mps > 0.0) {
            b.velocity.x += noise.sigma_vel_mps * gauss(rng);
            b.velocity.y += noise.sigma_vel_mps * gauss(rng);
            b.velocity.z += noise.sigma_vel_mps * gauss(rng);
        }
        out.push_back(b);
    }
    return out;
}

} // namespace airrate
