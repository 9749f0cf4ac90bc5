// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include <doctest.h>

#include <random>

#include "airrate/mumimo.hpp"

using namespace airrate;

namespace {

Cvec vec(std::initializer_list<std::complex<double>> v) { return Cvec(v); }

} // namespace

TEST_CASE("angle between canonical direction pairs") {
    CHECK(cos_sq_theta(vec({1, 0}), vec({0, 1})) == doctest::Approx(0.0));
    CHECK(cos_sq_theta(vec({1, 1}), vec({1, 1})) == doctest::Approx(1.0));
    CHECK(cos_sq_theta(vec({1, 0}), vec({1, 1})) == doctest::Approx(0.5));
}

TEST_CASE("cos^2 is invariant under complex scaling") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 100; ++rep) {
        Cvec a{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
        Cvec b{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
        const double base = cos_sq_theta(a, b);
        const std::complex<double> sa{u(rng) + 3.0, u(rng)};
        const std::complex<double> sb{u(rng) - 3.0, u(rng)};
        Cvec a2 = a, b2 = b;
        for (auto& c : a2) c *= sa;
        for (auto& c : b2) c *= sb;
        CHECK(cos_sq_theta(a2, b2) == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("one-interferer subspace form reduces to the pairwise form") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int rep = 0; rep < 50; ++rep) {
        Cvec a{{u(rng), u(rng)}, {u(rng), u(rng)}};
        Cvec b{{u(rng), u(rng)}, {u(rng), u(rng)}};
        const std::vector<Cvec> sub{b};
        CHECK(cos_sq_theta(a, std::span<const Cvec>(sub)) ==
              doctest::Approx(cos_sq_theta(a, b)).epsilon(1e-10));
    }
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(cos_sq_theta(vec({0, 0}), vec({1, 0})), std::invalid_argument);
    const std::vector<Cvec> dependent{vec({1, 1, 0}), vec({2, 2, 0})};
    CHECK_THROWS_AS(cos_sq_theta(vec({1, 0, 0}), std::span<const Cvec>(dependent)),
                    std::invalid_argument);
}

TEST_CASE("projection loss values") {
    // 90 degrees: no loss, exactly.
    const ProjectedSnr p90 = project_snr(20.0, 0.0);
    CHECK(p90.delta_snr_db == 0.0);
    CHECK(p90.snr_proj_db == 20.0);
    // 45 degrees: 3.01 dB.
    const ProjectedSnr p45 = project_snr(20.0, 0.5);
    CHECK(p45.delta_snr_db == doctest::Approx(3.0103).epsilon(1e-4));
    // cos^2 = 0.9: 10 dB.
    CHECK(project_snr(20.0, 0.9).delta_snr_db == doctest::Approx(10.0).epsilon(1e-9));
    // Fully aligned: projected power vanishes.
    const ProjectedSnr p0 = project_snr(20.0, 1.0);
    CHECK(p0.fully_aligned());
    CHECK(std::isinf(p0.snr_proj_db));
    CHECK(p0.snr_proj_db < 0);
}

TEST_CASE("projection loss is monotone in alignment") {
    double prev = -1.0;
    for (double c2 = 0.0; c2 < 1.0; c2 += 0.01) {
        const double d = project_snr(10.0, c2).delta_snr_db;
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("power backoff rules") {
    CHECK(power_backoff_db(30.0, 1) == 0.0);                       // first joiner
    CHECK(power_backoff_db(30.0, 2) == doctest::Approx(-4.0));     // cap at 26
    CHECK(power_backoff_db(20.0, 2) == 0.0);                       // below threshold
    CHECK(power_backoff_db(26.0, 3) == 0.0);                       // boundary
}

TEST_CASE("contention gate boundary") {
    CHECK(!contention_gate(3.9));
    CHECK(contention_gate(4.0));
    CHECK(contention_gate(4.1));
    CHECK(!contention_gate(-std::numeric_limits<double>::infinity()));
}

TEST_CASE("single stream decodes against nothing") {
    const RateTable table = RateTable::default_table();
    std::vector<SicClient> clients{{vec({1.0, 0.5}), 0.0, 3}};
    const auto out = sic_decode_outcomes(clients, table, 12000.0, 100.0);
    REQUIRE(out.size() == 1);
    const double snr_orig = 10.0 * std::log10((1.0 + 0.25) * 100.0);
    CHECK(out[0].snr_proj_db == doctest::Approx(snr_orig));
    CHECK(out[0].p_bit == doctest::Approx(out[0].p_e));
}

TEST_CASE("propagated packet error follows the union rule") {
    // Orthogonal channels so the projections change nothing; rates chosen
    // so the per-stream BERs are easy to steer via SNR.
    const RateTable table = RateTable::default_table();
    std::vector<SicClient> clients{
        {vec({1.0, 0.0}), 0.0, 0},
        {vec({0.0, 1.0}), 0.0, 0},
    };
    const auto out = sic_decode_outcomes(clients, table, 12000.0, 1000.0);
    REQUIRE(out.size() == 2);
    // Client 2 decodes first: own BER only. Client 1 inherits it.
    CHECK(out[1].p_bit == doctest::Approx(out[1].p_e));
    CHECK(out[0].p_bit ==
          doctest::Approx(out[1].p_e + (1.0 - out[1].p_e) * out[0].p_e).epsilon(1e-12));
}

TEST_CASE("an aligned later joiner is the stream that fails") {
    const RateTable table = RateTable::default_table();
    std::vector<SicClient> clients{
        {vec({1.0, 1.0}), 0.0, 2},
        {vec({2.0, 2.0}), 0.0, 2},  // same direction as the first joiner
    };
    const auto out = sic_decode_outcomes(clients, table, 12000.0, 1e4);
    CHECK(std::isinf(out[1].snr_proj_db));
    CHECK(out[1].p_e == doctest::Approx(0.5));
    CHECK(out[1].success_prob == doctest::Approx(0.0));
    // The first joiner still projects against an empty span, but inherits
    // the failed subtraction through the error chain.
    CHECK(out[0].snr_proj_db == doctest::Approx(10.0 * std::log10(2.0 * 1e4)));
    CHECK(out[0].p_bit >= 0.5);
}

TEST_CASE("sampled outcomes reproduce the analytic chain in distribution") {
    const RateTable table = RateTable::default_table();
    std::vector<SicClient> clients{
        {vec({1.0, 0.1}), 0.0, 4},
        {vec({0.12, 0.9}), 0.0, 4},
    };
    // Choose a scale where packet success sits away from 0 and 1.
    const double scale = 3.5e3;
    const auto expect = sic_decode_outcomes(clients, table, 12000.0, scale);

    std::mt19937_64 rng(61);
    const int trials = 20000;
    std::array<long, 2> ok{0, 0};
    for (int i = 0; i < trials; ++i) {
        const auto out = sic_decode_outcomes(clients, table, 12000.0, scale, &rng);
        for (int k = 0; k < 2; ++k) ok[k] += out[k].packet_ok ? 1 : 0;
    }
    for (int k = 0; k < 2; ++k) {
        const double p = expect[k].success_prob;
        const double sigma = std::sqrt(p * (1.0 - p) / trials);
        CHECK(std::abs(ok[k] / double(trials) - p) <= 4.0 * sigma + 1e-9);
    }
}
