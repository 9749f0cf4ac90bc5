// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/fading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airrate {

namespace {
constexpr double kRootTol = 1e-9;      // meters
constexpr double kDomainPad = 1e-6;    // keep clear of the geometric singularity
constexpr double kFarLimit = 1e7;      // beyond this a fade is treated as absent
} // namespace

double AxisGeometry::min_distance() const {
    if (axis == FlightAxis::horizontal) return std::abs(fixed - d_c);
    return fixed;  // vertical: d_d >= d_H
}

double AxisGeometry::path_ratio(double d) const {
    if (axis == FlightAxis::horizontal) {
        return std::sqrt(d * d + 4.0 * fixed * d_c) / d;
    }
    const double s = std::sqrt(std::max(d * d - fixed * fixed, 0.0));
    return std::sqrt(d * d + 4.0 * d_c * d_c + 4.0 * d_c * s) / d;
}

double AxisGeometry::path_ratio_slope(double d) const {
    if (axis == FlightAxis::horizontal) {
        const double c = 4.0 * fixed * d_c;
        return -c / (d * d * std::sqrt(d * d + c));
    }
    return (a0(d) - path_ratio(d) + 1.0) / d;
}

double AxisGeometry::a0(double d) const {
    if (axis == FlightAxis::horizontal) {
        return d / std::sqrt(d * d + 4.0 * fixed * d_c) - 1.0;
    }
    const double s = std::sqrt(std::max(d * d - fixed * fixed, 0.0));
    if (s <= 0.0) return std::numeric_limits<double>::infinity();
    const double f = path_ratio(d) * d;
    return d * (1.0 + 2.0 * d_c / s) / f - 1.0;
}

double two_ray_phase(const AxisGeometry& g, double d, double wavelength_m, double rho) {
    const double gamma = g.path_ratio(d);
    const double psi = 2.0 * M_PI * (gamma - 1.0) * d / wavelength_m;
    const double r = rho / gamma;
    return -2.0 * M_PI * d / wavelength_m + std::atan2(-r * std::sin(psi), 1.0 + r * std::cos(psi));
}

double two_ray_phase_derivative(const AxisGeometry& g, double d, double wavelength_m,
                                double rho) {
    const double gamma = g.path_ratio(d);
    const double gamma_p = g.path_ratio_slope(d);
    const double psi = 2.0 * M_PI * (gamma - 1.0) * d / wavelength_m;
    const double psi_p = 2.0 * M_PI * g.a0(d) / wavelength_m;
    const double r = rho / gamma;
    const double r_p = -rho * gamma_p / (gamma * gamma);
    const double num = r_p * std::sin(psi) + r * psi_p * std::cos(psi) + r * r * psi_p;
    const double den = 1.0 + r * r + 2.0 * r * std::cos(psi);
    return -2.0 * M_PI / wavelength_m - num / den;
}

double phase_derivative_destructive(const AxisGeometry& g, double d, double wavelength_m,
                                    double rho) {
    const double gamma = g.path_ratio(d);
    return -2.0 * M_PI / wavelength_m * (1.0 + g.a0(d) / (1.0 + gamma / rho));
}

double phase_derivative_constructive(const AxisGeometry& g, double d, double wavelength_m,
                                     double rho) {
    const double gamma = g.path_ratio(d);
    return -2.0 * M_PI / wavelength_m * (1.0 + g.a0(d) / (1.0 - gamma / rho));
}

std::optional<double> solve_fade_distance(const AxisGeometry& g, double target) {
    if (!(target > 0.0)) return std::nullopt;

    // fade_equation is strictly monotone on the physical domain: decreasing
    // for horizontal motion, increasing for vertical.
    const bool decreasing = (g.axis == FlightAxis::horizontal);
    double lo = std::max(g.min_distance(), kDomainPad) + kDomainPad;
    double f_lo = g.fade_equation(lo);

    double hi = std::max(2.0 * lo, 1.0);
    double f_hi = g.fade_equation(hi);
    int guard = 0;
    while (((decreasing && f_hi > target) || (!decreasing && f_hi < target)) && hi < kFarLimit) {
        hi *= 2.0;
        f_hi = g.fade_equation(hi);
        if (++guard > 64) break;
    }

    const bool lo_side = decreasing ? (f_lo >= target) : (f_lo <= target);
    const bool hi_side = decreasing ? (f_hi <= target) : (f_hi >= target);
    if (!lo_side || !hi_side) return std::nullopt;

    while (hi - lo > kRootTol) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = g.fade_equation(mid);
        const bool go_right = decreasing ? (f_mid > target) : (f_mid < target);
        if (go_right)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

FadeSeries fade_positions(const AxisGeometry& g, double wavelength_m, double d_min, double d_max,
                          bool constructive) {
    if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be > 0");
    if (!(d_max > d_min) || d_min < g.min_distance())
        throw std::invalid_argument("fade_positions range outside physical domain");

    FadeSeries series;
    series.axis = g.axis;
    series.constructive = constructive;

    const double f_a = g.fade_equation(std::max(d_min, g.min_distance() + kDomainPad));
    const double f_b = g.fade_equation(d_max);
    const double f_lo = std::min(f_a, f_b);
    const double f_hi = std::max(f_a, f_b);

    // Destructive: d (gamma - 1) = beta * lambda.
    // Constructive: d (gamma - 1) = (beta + 1/2) * lambda.
    const double shift = constructive ? 0.5 : 0.0;
    const int beta_lo = std::max(0, static_cast<int>(std::ceil(f_lo / wavelength_m - shift)));
    const int beta_hi = static_cast<int>(std::floor(f_hi / wavelength_m - shift));

    for (int beta = beta_lo; beta <= beta_hi; ++beta) {
        const double target = (beta + shift) * wavelength_m;
        if (auto d = solve_fade_distance(g, target); d && *d >= d_min - kRootTol &&
                                                     *d <= d_max + kRootTol)
            series.points.push_back({beta, *d});
    }
    std::sort(series.points.begin(), series.points.end(),
              [](const FadePoint& a, const FadePoint& b) { return a.beta < b.beta; });
    return series;
}

std::optional<std::pair<double, double>> fade_bracket(const AxisGeometry& g, double wavelength_m,
                                                      double d_d) {
    if (d_d <= g.min_distance()) return std::nullopt;
    const double frac = g.fade_equation(d_d) / wavelength_m;
    const int beta_lo = static_cast<int>(std::floor(frac));
    const int beta_hi = beta_lo + 1;
    if (beta_lo < 1) {
        // Horizontal geometry has no fade beyond the beta = 1 distance.
        if (g.axis == FlightAxis::horizontal) return std::nullopt;
    }

    const auto d_a = solve_fade_distance(g, beta_lo * wavelength_m);
    const auto d_b = solve_fade_distance(g, beta_hi * wavelength_m);
    if (!d_a || !d_b) return std::nullopt;
    const double lo = std::min(*d_a, *d_b);
    const double hi = std::max(*d_a, *d_b);
    if (hi - lo <= 0.0) return std::nullopt;
    return std::make_pair(lo, hi);
}

namespace {

FadingForecast axis_forecast(const AxisGeometry& g, double wavelength_m, double d_d,
                             double v_prime) {
    FadingForecast f;
    f.v_prime = v_prime;
    const auto bracket = fade_bracket(g, wavelength_m, d_d);
    if (!bracket || !(v_prime > 0.0)) return f;  // no fading expected
    f.delta_d_d = bracket->second - bracket->first;
    f.t_fading = f.delta_d_d / v_prime;
    f.axis = g.axis == FlightAxis::horizontal ? ForecastAxis::horizontal : ForecastAxis::vertical;
    return f;
}

} // namespace

FadingForecast predict_fading_interval(const SensorBroadcast& broadcast, const ClientSite& client,
                                       double wavelength_m, const Vec3& client_velocity,
                                       double axis_alignment) {
    FlightState state;
    state.t = broadcast.t;
    state.position = broadcast.position;
    state.velocity = broadcast.velocity;
    const Vec3 client_pos = client.position_at(broadcast.t);
    const RelativeState rel = relative_state(state, client_pos, client_velocity);

    FadingForecast none;
    none.t = broadcast.t;
    none.v_prime = rel.v_along_path();
    if (!(rel.v > 0.0) || !(none.v_prime > 1e-12)) return none;

    const Vec3 vrel = state.velocity - client_velocity;
    const double horiz_frac = vrel.horizontal_norm() / rel.v;
    const double vert_frac = std::abs(vrel.z) / rel.v;

    const AxisGeometry horiz{FlightAxis::horizontal, broadcast.position.z, client_pos.z};
    const AxisGeometry vert{FlightAxis::vertical, rel.rel_position.horizontal_norm(),
                            client_pos.z};

    FadingForecast f;
    if (vert_frac > axis_alignment) {
        f = axis_forecast(vert, wavelength_m, rel.d_d, none.v_prime);
    } else if (horiz_frac > axis_alignment) {
        f = axis_forecast(horiz, wavelength_m, rel.d_d, none.v_prime);
    } else {
        const FadingForecast fh = axis_forecast(horiz, wavelength_m, rel.d_d, none.v_prime);
        const FadingForecast fv = axis_forecast(vert, wavelength_m, rel.d_d, none.v_prime);
        f = (fh.t_fading <= fv.t_fading) ? fh : fv;
        if (f.fading_expected()) f.axis = ForecastAxis::oblique_min;
    }
    f.t = broadcast.t;
    f.v_prime = none.v_prime;
    return f;
}

} // namespace airrate
