// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/mumimo.hpp"

#include <cmath>
#include <stdexcept>

namespace airrate {

namespace {

constexpr double kRankEps = 1e-12;

double norm_sq(std::span<const std::complex<double>> v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return s;
}

std::complex<double> inner(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b) {
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

// Modified Gram-Schmidt. Vectors that fall inside the accumulated span are
// skipped when `drop_dependent` is set, otherwise they are an error.
std::vector<Cvec> orthonormal_basis(std::span<const Cvec> vectors, bool drop_dependent) {
    std::vector<Cvec> basis;
    for (const auto& v : vectors) {
        const double n0 = norm_sq(v);
        if (n0 <= 0.0) throw std::invalid_argument("zero vector in subspace");
        Cvec r = v;
        for (const auto& e : basis) {
            const std::complex<double> c = inner(e, r);
            for (std::size_t i = 0; i < r.size(); ++i) r[i] -= c * e[i];
        }
        const double rn = norm_sq(r);
        if (rn <= kRankEps * n0) {
            if (drop_dependent) continue;
            throw std::invalid_argument("rank-deficient subspace");
        }
        const double inv = 1.0 / std::sqrt(rn);
        for (auto& c : r) c *= inv;
        basis.push_back(std::move(r));
    }
    return basis;
}

double cos2_against_basis(std::span<const std::complex<double>> dir,
                          std::span<const Cvec> basis) {
    const double n = norm_sq(dir);
    if (n <= 0.0) throw std::invalid_argument("zero direction vector");
    double proj = 0.0;
    for (const auto& e : basis) proj += std::norm(inner(e, dir));
    const double c2 = proj / n;
    // Snap numerically full alignment to exactly 1 so rank deficiency is
    // reported as such downstream.
    if (c2 >= 1.0 - kRankEps) return 1.0;
    return c2;
}

} // namespace

double cos_sq_theta(std::span<const std::complex<double>> dir, std::span<const Cvec> subspace) {
    if (subspace.empty()) return 0.0;
    for (const auto& v : subspace)
        if (v.size() != dir.size())
            throw std::invalid_argument("dimension mismatch in cos_sq_theta");
    const auto basis = orthonormal_basis(subspace, /*drop_dependent=*/false);
    return cos2_against_basis(dir, basis);
}

double cos_sq_theta(std::span<const std::complex<double>> a,
                    std::span<const std::complex<double>> b) {
    const double na = norm_sq(a);
    const double nb = norm_sq(b);
    if (na <= 0.0 || nb <= 0.0) throw std::invalid_argument("zero direction vector");
    if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in cos_sq_theta");
    return std::min(std::norm(inner(a, b)) / (na * nb), 1.0);
}

ProjectedSnr project_snr(double snr_orig_db, double cos2) {
    if (!(cos2 >= 0.0 && cos2 <= 1.0)) throw std::invalid_argument("cos2 outside [0, 1]");
    ProjectedSnr p;
    p.snr_orig_db = snr_orig_db;
    p.cos2 = cos2;
    if (cos2 >= 1.0) {
        p.snr_proj_db = -std::numeric_limits<double>::infinity();
        p.delta_snr_db = std::numeric_limits<double>::infinity();
        return p;
    }
    p.delta_snr_db = -10.0 * std::log10(1.0 - cos2);
    p.snr_proj_db = snr_orig_db - p.delta_snr_db;
    return p;
}

double power_backoff_db(double predicted_snr_orig_db, int join_index, double threshold_db) {
    if (join_index < 1) throw std::invalid_argument("join index must be >= 1");
    if (join_index == 1) return 0.0;
    if (predicted_snr_orig_db <= threshold_db) return 0.0;
    return threshold_db - predicted_snr_orig_db;
}

bool contention_gate(double snr_proj_db, double floor_db) {
    return snr_proj_db >= floor_db;
}

std::vector<double> sic_projected_snrs_db(std::span<const SicClient> clients, double snr_scale) {
    std::vector<double> snrs(clients.size());
    std::vector<Cvec> earlier;
    for (std::size_t k = 0; k < clients.size(); ++k) {
        const auto& c = clients[k];
        const double power = std::pow(10.0, c.power_scale_db / 10.0);
        const double snr_orig_db = 10.0 * std::log10(norm_sq(c.channel) * snr_scale * power);
        double cos2 = 0.0;
        if (!earlier.empty()) {
            // A dependent direction leaves the span unchanged, and the
            // offending client itself comes out fully aligned.
            const auto basis = orthonormal_basis(earlier, /*drop_dependent=*/true);
            cos2 = cos2_against_basis(c.channel, basis);
        }
        snrs[k] = project_snr(snr_orig_db, cos2).snr_proj_db;
        earlier.push_back(c.channel);
    }
    return snrs;
}

std::vector<SicOutcome> sic_decode_outcomes(std::span<const SicClient> clients,
                                            const RateTable& table, double bits,
                                            double snr_scale, std::mt19937_64* rng) {
    const std::vector<double> proj = sic_projected_snrs_db(clients, snr_scale);

    std::vector<SicOutcome> out(clients.size());
    // Decode from the last joiner to the first, carrying the propagated
    // error probability down the chain.
    double p_prev = 0.0;
    bool upstream_errored = false;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t i = clients.size(); i-- > 0;) {
        SicOutcome& o = out[i];
        o.snr_proj_db = proj[i];
        o.p_e = ber(proj[i], table[clients[i].rate_index]);
        o.p_bit = p_prev + (1.0 - p_prev) * o.p_e;
        p_prev = o.p_bit;
        o.success_prob = packet_success_prob(o.p_bit, bits);
        if (rng) {
            // Condition on the already-drawn upstream outcomes so sampled
            // failures propagate the same way the analytic chain does.
            if (upstream_errored) {
                o.packet_ok = false;
            } else {
                const double own_ok = packet_success_prob(o.p_e, bits);
                o.packet_ok = uni(*rng) < own_ok;
            }
            upstream_errored = upstream_errored || !o.packet_ok;
        } else {
            o.packet_ok = o.success_prob > 0.5;
        }
    }
    return out;
}

} // namespace airrate
