// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "airrate/trajectory.hpp"

namespace airrate {

enum class FlightAxis { horizontal, vertical };

// Two-ray geometry restricted to motion along one axis. For horizontal
// motion the UAV height d_U is the fixed parameter; for vertical motion the
// horizontal offset d_H is fixed. d_c is the client antenna height.
struct AxisGeometry {
    FlightAxis axis = FlightAxis::horizontal;
    double fixed = 10.0;  // d_U (horizontal) or d_H (vertical), meters
    double d_c = 1.0;

    double min_distance() const;             // smallest physical direct distance
    double path_ratio(double d_d) const;     // gamma(d_d)
    double path_ratio_slope(double d_d) const;
    // d_d * (gamma - 1): the quantity whose multiples of lambda locate fades.
    double fade_equation(double d_d) const { return d_d * (path_ratio(d_d) - 1.0); }
    // gamma' d + gamma - 1, the slope of fade_equation.
    double a0(double d_d) const;
};

// Continuous total phase of the two-ray gain along the axis.
double two_ray_phase(const AxisGeometry& g, double d_d, double wavelength_m, double rho);

// Exact derivative of the phase with respect to d_d (rad/m).
double two_ray_phase_derivative(const AxisGeometry& g, double d_d, double wavelength_m,
                                double rho);

// Closed-form derivative values at exact constructive/destructive distances.
double phase_derivative_destructive(const AxisGeometry& g, double d_d, double wavelength_m,
                                    double rho);
double phase_derivative_constructive(const AxisGeometry& g, double d_d, double wavelength_m,
                                     double rho);

struct FadePoint {
    int beta = 0;
    double d_d = 0.0;
};

// Fade distances ordered by ascending beta. Horizontal-axis positions shrink
// as beta grows; vertical-axis positions grow.
struct FadeSeries {
    FlightAxis axis = FlightAxis::horizontal;
    bool constructive = false;
    std::vector<FadePoint> points;
};

// All destructive (or constructive) interference distances inside
// [d_min, d_max], solved from the implicit fade equation by bisection.
FadeSeries fade_positions(const AxisGeometry& g, double wavelength_m, double d_min, double d_max,
                          bool constructive = false);

// Solve fade_equation(d) = target for d, or nullopt when no root exists in
// the physical range. Bisection to 1e-9 m.
std::optional<double> solve_fade_distance(const AxisGeometry& g, double target);

// Adjacent destructive distances (lower, upper) enclosing d_d along the axis.
std::optional<std::pair<double, double>> fade_bracket(const AxisGeometry& g, double wavelength_m,
                                                      double d_d);

enum class ForecastAxis { horizontal, vertical, oblique_min, none };

struct FadingForecast {
    double t = 0.0;          // time the forecast was formed
    double t_fading = std::numeric_limits<double>::infinity();  // seconds
    double delta_d_d = 0.0;  // bracket width, meters
    double v_prime = 0.0;    // speed along the direct path, m/s
    ForecastAxis axis = ForecastAxis::none;

    bool fading_expected() const { return std::isfinite(t_fading); }
};

// Predict the time to traverse the current inter-fade bracket from the
// latest broadcast state. Near-axis motion uses that axis alone; oblique
// motion evaluates both axes and keeps the smaller interval.
FadingForecast predict_fading_interval(const SensorBroadcast& broadcast, const ClientSite& client,
                                       double wavelength_m, const Vec3& client_velocity = {},
                                       double axis_alignment = 0.95);

} // namespace airrate
