// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#pragma once

#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace airrate {

struct RateEntry {
    double mbps = 6.0;
    double snr50_db = 5.0;  // SNR at which the bit error rate is 0.25
    double slope = 2.0;     // waterfall steepness, 1/dB
};

class RateTable {
public:
    explicit RateTable(std::vector<RateEntry> entries);
    static RateTable default_table();

    const std::vector<RateEntry>& entries() const { return entries_; }
    const RateEntry& operator[](std::size_t i) const { return entries_[i]; }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<RateEntry> entries_;
};

struct PacketModel {
    double bits = 12000.0;  // 1500-byte packets
};

// Logistic SNR-to-BER waterfall: 0.5 / (1 + exp(slope * (snr - snr50))).
double ber(double snr_db, const RateEntry& rate);

// (1 - p)^L evaluated in log space.
double packet_success_prob(double p_e, double bits);

// Effective bit error rate of a stream when decoding proceeds through the
// preceding streams: p_k = p_{k+1} + (1 - p_{k+1}) p_e^k. `pe` is ordered
// from the first-decoded stream to the stream of interest.
double error_propagation(std::span<const double> pe);

// Same quantity as 1 - prod(1 - p_e^i); kept as an independent route.
double error_propagation_product(std::span<const double> pe);

// One Monte Carlo draw of the per-stream effective error events; entry i is
// the error indicator for the stream whose own BER is pe[i], after
// propagation from streams decoded before it.
std::vector<char> sample_error_chain(std::span<const double> pe, std::mt19937_64& rng);

double throughput_mbps(double rate_mbps, double p_k, double bits);

struct RateChoice {
    int index = 0;
    bool starved = false;  // no rate had a usable expected throughput
};

// Distributed per-client rate choice for a client joining at position k.
// Maximizes R * sum_{i=1..k} q^i with q = (1 - ber(snr_proj, R))^L, i.e. the
// joint objective under the assumption that the other concurrent clients
// share this client's error rate.
RateChoice select_rate(double snr_proj_db, int join_index, const RateTable& table, double bits);

double rate_objective(double snr_proj_db, int join_index, const RateEntry& rate, double bits);

} // namespace airrate
