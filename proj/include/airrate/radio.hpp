// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "airrate/vec3.hpp"

namespace airrate {

struct RadioParams {
    double wavelength_m = 0.06;     // ~5 GHz band
    double ground_rho = -0.95;      // ground reflection coefficient, in (-1, 0)
    double ref_snr_db_at_1m = 40.0; // SNR of a unit free-space gain at 1 m

    void validate() const {
        if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be > 0");
        if (!(ground_rho > -1.0 && ground_rho < 0.0))
            throw std::invalid_argument("ground reflection coefficient must be in (-1, 0)");
    }

    // P/N0 in linear units; |h|^2 * snr_scale() is the linear SNR.
    double snr_scale() const { return std::pow(10.0, ref_snr_db_at_1m / 10.0); }
};

// Extra reflected path, parameterized relative to the ground path: its length
// ratio is k times the ground's path ratio gamma_0.
struct Reflector {
    double k = 1.5;     // gamma_i = k * gamma_0, must be > 0
    double rho = -0.7;  // reflection coefficient, in (-1, 0)
};

struct AntennaArray {
    std::vector<Vec3> offsets;  // relative to UAV body center, meters

    static AntennaArray uniform_x(int n, double spacing_m);
    int size() const { return static_cast<int>(offsets.size()); }
    void validate(double wavelength_m) const;
};

// Direct plus ground-reflected ray:
//   h = (1/d_d) e^{-j 2 pi d_d / lambda} + (rho/d_r) e^{-j 2 pi d_r / lambda}
std::complex<double> two_ray_gain(double d_d, double d_r, const RadioParams& params);

// Direct ray, ground ray at ratio gamma0, and extra reflected rays at ratios
// k_i * gamma0. With no reflectors this is exactly the two-ray gain.
std::complex<double> n_ray_gain(double d_d, double gamma0, std::span<const Reflector> reflectors,
                                const RadioParams& params);

struct PathGeometry {
    double d_d = 0.0;    // direct distance
    double d_r = 0.0;    // ground-bounce distance (image method)
    double gamma = 0.0;  // d_r / d_d
};

// Image-method path pair for a transmitter/receiver pair above the z = 0
// ground plane. Requires the antenna strictly above the client.
PathGeometry geometry_paths(const Vec3& antenna_pos, const Vec3& client_pos);

// dB deviation of the N-ray received power from the two-ray baseline at one
// direct distance. gamma0 is the ground path ratio at that distance.
double n_ray_deviation_db(double d_d, double gamma0, std::span<const Reflector> reflectors,
                          const RadioParams& params);

// Mean |deviation| across the canonical distance sweep used by the
// environment-tolerance study: d_d in [5, 45] m at 1 mm steps with the UAV at
// 10 m and the client at 1 m.
double mean_abs_n_ray_deviation_db(std::span<const Reflector> reflectors,
                                   const RadioParams& params, double d_lo = 5.0,
                                   double d_hi = 45.0, double step = 1e-3, double d_u = 10.0,
                                   double d_c = 1.0);

} // namespace airrate
