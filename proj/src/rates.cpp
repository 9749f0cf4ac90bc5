// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include "airrate/rates.hpp"

#include <cmath>

namespace airrate {

RateTable::RateTable(std::vector<RateEntry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("rate table is empty");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!(entries_[i].mbps > 0.0) || !(entries_[i].slope > 0.0))
            throw std::invalid_argument("rate table entry has non-positive rate or slope");
        if (i > 0 && (entries_[i].mbps <= entries_[i - 1].mbps ||
                      entries_[i].snr50_db <= entries_[i - 1].snr50_db))
            throw std::invalid_argument("rate table must increase in rate and snr50");
    }
}

RateTable RateTable::default_table() {
    return RateTable({
        {6.0, 5.0, 2.0},
        {9.0, 7.0, 2.0},
        {12.0, 9.0, 2.0},
        {18.0, 12.0, 2.0},
        {24.0, 16.0, 2.0},
        {36.0, 20.0, 2.0},
        {48.0, 23.0, 2.0},
        {54.0, 25.0, 2.0},
    });
}

double ber(double snr_db, const RateEntry& rate) {
    if (std::isinf(snr_db)) return snr_db > 0 ? 0.0 : 0.5;
    if (!std::isfinite(snr_db)) throw std::invalid_argument("ber: snr must be finite");
    // exp can overflow for very low snr; the limit is 0.5 either way.
    const double x = rate.slope * (snr_db - rate.snr50_db);
    if (x < -700.0) return 0.5;
    return 0.5 / (1.0 + std::exp(x));
}

double packet_success_prob(double p_e, double bits) {
    if (p_e <= 0.0) return 1.0;
    if (p_e >= 1.0) return 0.0;
    return std::exp(bits * std::log1p(-p_e));
}

double error_propagation(std::span<const double> pe) {
    double p = 0.0;
    for (double pk : pe) {
        if (pk < 0.0 || pk > 1.0) throw std::invalid_argument("bit error rate outside [0, 1]");
        p = p + (1.0 - p) * pk;
    }
    return p;
}

double error_propagation_product(std::span<const double> pe) {
    double prod = 1.0;
    for (double pk : pe) {
        if (pk < 0.0 || pk > 1.0) throw std::invalid_argument("bit error rate outside [0, 1]");
        prod *= 1.0 - pk;
    }
    return 1.0 - prod;
}

std::vector<char> sample_error_chain(std::span<const double> pe, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<char> errored(pe.size(), 0);
    bool upstream = false;
    for (std::size_t i = 0; i < pe.size(); ++i) {
        const bool own = uni(rng) < pe[i];
        upstream = upstream || own;
        errored[i] = upstream ? 1 : 0;
    }
    return errored;
}

double throughput_mbps(double rate_mbps, double p_k, double bits) {
    if (p_k < 0.0 || p_k > 1.0) throw std::invalid_argument("p_k outside [0, 1]");
    return rate_mbps * packet_success_prob(p_k, bits);
}

double rate_objective(double snr_proj_db, int join_index, const RateEntry& rate, double bits) {
    const double q = packet_success_prob(ber(snr_proj_db, rate), bits);
    // sum_{i=1..k} q^i
    double sum = 0.0;
    double term = 1.0;
    for (int i = 0; i < join_index; ++i) {
        term *= q;
        sum += term;
    }
    return rate.mbps * sum;
}

RateChoice select_rate(double snr_proj_db, int join_index, const RateTable& table, double bits) {
    if (join_index < 1) throw std::invalid_argument("join index must be >= 1");

    RateChoice choice;
    double best = -1.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const double obj = rate_objective(snr_proj_db, join_index, table[i], bits);
        if (obj > best) {
            best = obj;
            choice.index = static_cast<int>(i);
        }
    }
    if (best < 1e-9) {
        choice.index = 0;
        choice.starved = true;
    }
    return choice;
}

} // namespace airrate
