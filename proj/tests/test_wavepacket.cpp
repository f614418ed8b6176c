#include <catch2/catch_amalgamated.hpp>

#include "stawsim/io.hpp"
#include "stawsim/wavepacket.hpp"

#include "oracles.hpp"

using namespace stawsim;

TEST_CASE("two-peak construction", "[wavepacket]") {
    const double r2 = 1.0 / std::sqrt(2.0);
    auto p = make_two_peak(r2, cplx(0.0, -r2));
    CHECK(p.even_only());
    CHECK_THAT(p.norm_sq(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::imag(p.amp(0) * std::conj(p.amp(2))), Catch::Matchers::WithinAbs(0.5, 1e-15));

    auto unsplit = make_two_peak(1.0, 0.0);
    CHECK(unsplit.amp(0) == cplx(1.0, 0.0));
    CHECK(unsplit.amplitudes.size() == 1);

    auto scaled = make_two_peak(0.6, cplx(0.0, 0.8));
    CHECK_THAT(scaled.norm_sq(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::abs(scaled.amp(0)), Catch::Matchers::WithinAbs(0.6, 1e-15));

    CHECK_THROWS_AS(make_two_peak(0.0, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian packet follows the discrete profile", "[wavepacket]") {
    GaussianSpec spec{10.0, pi, +1};
    double raw_err = -1.0;
    auto p = make_gaussian(spec, &raw_err);

    CHECK(p.even_only());
    CHECK_THAT(p.norm_sq(), Catch::Matchers::WithinAbs(1.0, 1e-12));
    // Riemann sum of a wide Gaussian sits within 1e-6 of 1 before renormalizing
    CHECK(raw_err >= 0.0);
    CHECK(raw_err < 1e-6);

    // |amplitude_{2m}|^2 proportional to exp(-m^2/10), symmetric in m
    double a0 = std::norm(p.amp(0));
    for (int m = 1; m <= 8; ++m) {
        INFO("m=" << m);
        CHECK_THAT(std::norm(p.amp(2 * m)) / a0, Catch::Matchers::WithinRel(std::exp(-m * m / 10.0), 1e-12));
        CHECK_THAT(std::norm(p.amp(-2 * m)), Catch::Matchers::WithinRel(std::norm(p.amp(2 * m)), 1e-12));
    }
}

TEST_CASE("gaussian phase ramp is exactly linear", "[wavepacket]") {
    auto g = oracles::rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        double alpha = oracles::uniform(g, -3.0, 3.0);
        int sign = trial % 2 ? +1 : -1;
        auto p = make_gaussian({10.0, alpha, sign});
        double expected = alpha + sign * pi / 2.0;
        for (int m = -5; m < 5; ++m) {
            double step = std::arg(p.amp(2 * (m + 1)) * std::conj(p.amp(2 * m)));
            double diff = std::remainder(step - expected, 2.0 * pi);
            INFO("alpha=" << alpha << " sign=" << sign << " m=" << m);
            CHECK(std::abs(diff) <= 1e-12);
        }
    }
}

TEST_CASE("gaussian raw-sum oracle by direct summation", "[wavepacket]") {
    // independent direct sum of the unnormalized profile
    for (double M : {5.0, 10.0, 20.0}) {
        double raw = 0.0;
        for (int m = -200; m <= 200; ++m)
            raw += std::exp(-static_cast<double>(m) * m / M) / std::sqrt(pi * M);
        double raw_err = -1.0;
        make_gaussian({M, 0.7, +1}, &raw_err);
        INFO("M=" << M);
        CHECK(std::abs(raw - 1.0) < 1e-6);
        CHECK_THAT(raw_err, Catch::Matchers::WithinAbs(std::abs(raw - 1.0), 1e-13));
    }
}

TEST_CASE("gaussian rejects bad parameters", "[wavepacket]") {
    CHECK_THROWS_AS(make_gaussian({0.0, 0.0, +1}), std::invalid_argument);
    CHECK_THROWS_AS(make_gaussian({-3.0, 0.0, +1}), std::invalid_argument);
    CHECK_THROWS_AS(make_gaussian({10.0, 0.0, 0}), std::invalid_argument);
}

TEST_CASE("resonant mapping keeps sites and probability", "[wavepacket]") {
    const double r2 = 1.0 / std::sqrt(2.0);
    auto tp = make_two_peak(r2, cplx(0.0, -r2));
    auto s = to_resonant_vector(tp);
    CHECK(s.amp(0) == tp.amp(0));
    CHECK(s.amp(2) == tp.amp(2));
    CHECK(s.amplitudes.size() == 2);
    CHECK_THAT(s.norm_sq(), Catch::Matchers::WithinAbs(1.0, 1e-12));

    auto unsplit = to_resonant_vector(make_two_peak(1.0, 0.0));
    CHECK(unsplit.amp(0) == cplx(1.0, 0.0));

    // Gaussian M -> effective half-width M1 = 4M on the integer lattice,
    // measured as twice the variance of |s|^2
    auto sg = to_resonant_vector(make_gaussian({10.0, pi, +1}));
    double var = 0.0, mean = 0.0;
    for (const auto& [n, a] : sg.amplitudes) mean += n * std::norm(a);
    for (const auto& [n, a] : sg.amplitudes) var += (n - mean) * (n - mean) * std::norm(a);
    CHECK_THAT(2.0 * var, Catch::Matchers::WithinRel(40.0, 1e-6));

    WavePacket odd;
    odd.amplitudes[1] = 1.0;
    CHECK_THROWS_AS(to_resonant_vector(odd), std::invalid_argument);
}

TEST_CASE("packet json round trip", "[wavepacket]") {
    auto g = oracles::rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        WavePacket p;
        p.parity = Parity::even_only;
        p.p0 = oracles::uniform(g, -2.0, 2.0);
        int sites = 1 + static_cast<int>(oracles::uniform(g, 1.0, 8.0));
        for (int k = 0; k < sites; ++k)
            p.amplitudes[2 * static_cast<int>(oracles::uniform(g, -10.0, 10.0))] = oracles::random_unit_cplx(g);
        p.normalize();

        auto j = io::packet_to_json(p);
        REQUIRE(j.contains("p0"));
        REQUIRE(j.contains("entries"));
        auto q = io::packet_from_json(j);
        CHECK(q.p0 == p.p0);
        REQUIRE(q.amplitudes.size() == p.amplitudes.size());
        for (const auto& [n, a] : p.amplitudes) {
            INFO("site " << n);
            CHECK(std::abs(q.amp(n) - a) <= 1e-15);
        }
    }
    CHECK_THROWS_AS(io::packet_from_json(nlohmann::json{{"p0", 0.0}}), std::invalid_argument);
}
