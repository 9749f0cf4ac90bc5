// SPDX-License-Identifier: Apache-2.0
//
// airrate: link-level simulator for sensor-assisted UAV MU-MIMO rate adaptation

#include <doctest.h>

#include <random>

#include "airrate/trajectory.hpp"

using namespace airrate;

TEST_CASE("straight segment sampling") {
    Trajectory traj({{0, 0, 10}, {40, 0, 10}}, {2.0});
    const FlightState s = sample_flight(traj, 5.0);
    CHECK(s.position.x == doctest::Approx(10.0));
    CHECK(s.position.y == doctest::Approx(0.0));
    CHECK(s.position.z == doctest::Approx(10.0));
    CHECK(s.velocity.x == doctest::Approx(2.0));
    CHECK(s.velocity.y == doctest::Approx(0.0));
}

TEST_CASE("t = 0 gives the first waypoint and first segment velocity") {
    Trajectory traj({{1, 2, 5}, {1, 2, 9}}, {4.0});
    const FlightState s = sample_flight(traj, 0.0);
    CHECK(s.position.x == doctest::Approx(1.0));
    CHECK(s.position.z == doctest::Approx(5.0));
    CHECK(s.velocity.z == doctest::Approx(4.0));
}

TEST_CASE("segment junction takes the later segment's velocity") {
    Trajectory traj({{0, 0, 5}, {2, 0, 5}, {2, 8, 5}}, {1.0, 4.0});
    const FlightState s = sample_flight(traj, 2.0);  // exactly at the junction
    CHECK(s.position.x == doctest::Approx(2.0));
    CHECK(s.position.y == doctest::Approx(0.0));
    CHECK(s.velocity.x == doctest::Approx(0.0));
    CHECK(s.velocity.y == doctest::Approx(4.0));
}

TEST_CASE("sampling outside the duration throws") {
    Trajectory traj({{0, 0, 5}, {2, 0, 5}}, {1.0});
    CHECK_THROWS_AS(traj.sample(2.5), std::out_of_range);
    CHECK_THROWS_AS(traj.sample(-0.1), std::out_of_range);
}

TEST_CASE("integrated speed over a segment matches its length") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-30.0, 30.0);
    std::uniform_real_distribution<double> spd(0.5, 8.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Vec3> wps;
        std::vector<double> speeds;
        for (int i = 0; i < 4; ++i) wps.push_back({coord(rng), coord(rng), 10.0 + i});
        for (int i = 0; i < 3; ++i) speeds.push_back(spd(rng));
        Trajectory traj(wps, speeds);

        // Midpoint-rule integral of |velocity| within each segment's time
        // window; speeds are constant there so this is exact to rounding.
        double t0 = 0.0;
        for (std::size_t seg = 0; seg + 1 < wps.size(); ++seg) {
            const double seg_len = distance(wps[seg], wps[seg + 1]);
            const double t1 = t0 + seg_len / speeds[seg];
            const int n = 1000;
            const double dt = (t1 - t0) / n;
            double integral = 0.0;
            for (int i = 0; i < n; ++i)
                integral += traj.sample(t0 + (i + 0.5) * dt).velocity.norm() * dt;
            CHECK(integral == doctest::Approx(seg_len).epsilon(1e-9));
            t0 = t1;
        }
    }
}

TEST_CASE("relative state: pure radial approach") {
    FlightState uav;
    uav.position = {0, 0, 11};
    uav.velocity = {0, 0, -2};
    const RelativeState r = relative_state(uav, Vec3{0, 0, 1});
    CHECK(r.d_d == doctest::Approx(10.0));
    CHECK(r.v == doctest::Approx(2.0));
    CHECK(std::cos(r.alpha) == doctest::Approx(1.0));
    CHECK(r.v_along_path() == doctest::Approx(2.0));
}

TEST_CASE("relative state: tangential motion has zero along-path speed") {
    FlightState uav;
    uav.position = {0, 0, 11};
    uav.velocity = {3, 0, 0};
    const RelativeState r = relative_state(uav, Vec3{0, 0, 1});
    CHECK(r.v_along_path() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("relative state matches direct vector arithmetic") {
    FlightState uav;
    uav.position = {3, 4, 2};  // client at origin-height 1: offset (3,4,1)
    uav.velocity = {1, 0, 0};
    const Vec3 client{0, 0, 1};
    const RelativeState r = relative_state(uav, client);

    const double d = std::sqrt(3.0 * 3.0 + 4.0 * 4.0 + 1.0);
    CHECK(r.d_d == doctest::Approx(d));
    // cos(alpha) = v . (client - uav) / (|v| d)
    const double expect_cos = (-3.0) / d;
    CHECK(std::cos(r.alpha) == doctest::Approx(expect_cos));
    CHECK(r.v == doctest::Approx(1.0));
}

TEST_CASE("along-path speed never exceeds total speed") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int rep = 0; rep < 200; ++rep) {
        FlightState uav;
        uav.position = {u(rng), u(rng), 12.0 + std::abs(u(rng))};
        uav.velocity = {u(rng), u(rng), u(rng)};
        const RelativeState r = relative_state(uav, Vec3{u(rng), u(rng), 1.0});
        CHECK(r.v_along_path() <= r.v + 1e-12);
    }
}

TEST_CASE("zero relative velocity uses the alpha = pi/2 convention") {
    FlightState uav;
    uav.position = {5, 0, 10};
    uav.velocity = {0, 0, 0};
    const RelativeState r = relative_state(uav, Vec3{0, 0, 1});
    CHECK(r.alpha == doctest::Approx(M_PI / 2));
    CHECK(r.v_along_path() == 0.0);
}

TEST_CASE("broadcast stream covers [0, duration) at the requested rate") {
    Trajectory traj({{0, 0, 10}, {2, 0, 10}}, {2.0});  // 1 s
    const auto bs = broadcast_stream(traj, 50.0, {}, 1);
    REQUIRE(bs.size() == 50);
    CHECK(bs[0].t == doctest::Approx(0.0));
    CHECK(bs[1].t == doctest::Approx(0.02));
    CHECK(bs.back().t == doctest::Approx(0.98));
}

TEST_CASE("noiseless broadcasts reproduce ground truth") {
    Trajectory traj({{0, 0, 10}, {4, 0, 10}}, {2.0});
    const auto bs = broadcast_stream(traj, 25.0, {}, 99);
    for (const auto& b : bs) {
        const FlightState s = traj.sample(b.t);
        CHECK(b.position.x == doctest::Approx(s.position.x));
        CHECK(b.velocity.x == doctest::Approx(s.velocity.x));
    }
}

TEST_CASE("broadcast stream is reproducible for a fixed seed") {
    Trajectory traj({{0, 0, 10}, {4, 0, 10}}, {2.0});
    BroadcastNoise noise{0.5, 0.1};
    const auto a = broadcast_stream(traj, 50.0, noise, 1234);
    const auto b = broadcast_stream(traj, 50.0, noise, 1234);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].position.x == b[i].position.x);
        CHECK(a[i].position.y == b[i].position.y);
        CHECK(a[i].velocity.z == b[i].velocity.z);
    }
    const auto c = broadcast_stream(traj, 50.0, noise, 1235);
    CHECK(a[0].position.x != c[0].position.x);
}

TEST_CASE("broadcast rate must be positive") {
    Trajectory traj({{0, 0, 10}, {4, 0, 10}}, {2.0});
    CHECK_THROWS_AS(broadcast_stream(traj, 0.0, {}, 1), std::invalid_argument);
}

TEST_CASE("broadcast airtime arithmetic") {
    // 24 bytes at 6 Mbps plus a 100 us preamble, 50 times a second.
    CHECK(broadcast_airtime_fraction(50.0) == doctest::Approx(6600e-6).epsilon(1e-12));
    CHECK(broadcast_airtime_fraction(100.0) == doctest::Approx(13200e-6).epsilon(1e-12));
}
