// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/radio.hpp"

#include <cmath>

namespace airrate {

AntennaArray AntennaArray::uniform_x(int n, double spacing_m) {
    AntennaArray a;
    for (int i = 0; i < n; ++i)
        a.offsets.push_back({i * spacing_m, 0.0, 0.0});
    return a;
}

void AntennaArray::validate(double wavelength_m) const {
    if (offsets.empty()) throw std::invalid_argument("antenna array is empty");
    for (std::size_t i = 0; i < offsets.size(); ++i)
        for (std::size_t j = i + 1; j < offsets.size(); ++j)
            if (distance(offsets[i], offsets[j]) < wavelength_m / 4.0)
                throw std::invalid_argument("antenna spacing below lambda/4");
}

std::complex<double> two_ray_gain(double d_d, double d_r, const RadioParams& params) {
    if (!(d_d > 0.0) || d_r < d_d)
        throw std::invalid_argument("two_ray_gain requires d_r >= d_d > 0");
    const double w = 2.0 * M_PI / params.wavelength_m;
    const std::complex<double> direct = std::polar(1.0 / d_d, -w * d_d);
    const std::complex<double> ground = std::polar(params.ground_rho / d_r, -w * d_r);
    return direct + ground;
}

std::complex<double> n_ray_gain(double d_d, double gamma0, std::span<const Reflector> reflectors,
                                const RadioParams& params) {
    if (!(d_d > 0.0) || !(gamma0 > 1.0))
        throw std::invalid_argument("n_ray_gain requires d_d > 0 and gamma0 > 1");
    const double w = 2.0 * M_PI / params.wavelength_m;
    std::complex<double> sum =
        1.0 + std::polar(params.ground_rho / gamma0, -w * (gamma0 - 1.0) * d_d);
    for (const auto& r : reflectors) {
        const double gi = r.k * gamma0;
        if (!(gi > 1.0)) throw std::invalid_argument("reflector path ratio must exceed 1");
        sum += std::polar(r.rho / gi, -w * (gi - 1.0) * d_d);
    }
    return std::polar(1.0 / d_d, -w * d_d) * sum;
}

PathGeometry geometry_paths(const Vec3& antenna_pos, const Vec3& client_pos) {
    if (!(antenna_pos.z > client_pos.z))
        throw std::invalid_argument("antenna must be above the client");
    PathGeometry g;
    g.d_d = distance(antenna_pos, client_pos);
    const double dh = (antenna_pos - client_pos).horizontal_norm();
    const double hsum = antenna_pos.z + client_pos.z;
    g.d_r = std::sqrt(dh * dh + hsum * hsum);
    g.gamma = g.d_r / g.d_d;
    return g;
}

double n_ray_deviation_db(double d_d, double gamma0, std::span<const Reflector> reflectors,
                          const RadioParams& params) {
    const double w = 2.0 * M_PI / params.wavelength_m;
    const std::complex<double> base =
        1.0 + std::polar(params.ground_rho / gamma0, -w * (gamma0 - 1.0) * d_d);
    std::complex<double> sum = base;
    for (const auto& r : reflectors) {
        const double gi = r.k * gamma0;
        sum += std::polar(r.rho / gi, -w * (gi - 1.0) * d_d);
    }
    return 20.0 * std::log10(std::abs(sum)) - 20.0 * std::log10(std::abs(base));
}

double mean_abs_n_ray_deviation_db(std::span<const Reflector> reflectors,
                                   const RadioParams& params, double d_lo, double d_hi,
                                   double step, double d_u, double d_c) {
    double acc = 0.0;
    std::size_t n = 0;
    for (double d = d_lo; d < d_hi; d += step) {
        const double gamma0 = std::sqrt(d * d + 4.0 * d_u * d_c) / d;
        acc += std::abs(n_ray_deviation_db(d, gamma0, reflectors, params));
        ++n;
    }
    return acc / static_cast<double>(n);
}

} // namespace airrate
