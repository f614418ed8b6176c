#include <catch2/catch_amalgamated.hpp>

#include "stawsim/adiabatic.hpp"
#include "stawsim/io.hpp"

#include "oracles.hpp"

using namespace stawsim;
using namespace stawsim::adiabatic;

namespace {
const cplx fig1_a0 = 1.0 / std::sqrt(2.0);
const cplx fig1_a2 = cplx(0.0, -1.0) / std::sqrt(2.0);

double max_pointwise_dev(const DiffractionPattern& a, const DiffractionPattern& b) {
    double worst = 0.0;
    for (const auto& [n, w] : a.probabilities) worst = std::max(worst, std::abs(w - b.w(n)));
    for (const auto& [n, w] : b.probabilities) worst = std::max(worst, std::abs(w - a.w(n)));
    return worst;
}
} // namespace

TEST_CASE("pulse area", "[adiabatic]") {
    CHECK(pulse_area({1.0, 1.0, Envelope::rectangular, 1.0, 1.0}) == 1.0);
    CHECK(pulse_area({1.0, 1.0, Envelope::rectangular, 0.0, 1.0}) == 0.0);

    // quadrature oracle for the sin^2 envelope: integral of sin^4(pi t)
    double oracle = oracles::simpson([](double t) {
        double s = std::sin(oracles::pi * t);
        return s * s * s * s;
    }, 0.0, 1.0, 2000);
    CHECK_THAT(pulse_area({1.0, 1.0, Envelope::sin2_ramp, 1.0, 1.0}),
               Catch::Matchers::WithinAbs(oracle, 1e-12));
    CHECK_THAT(pulse_area({1.0, 1.0, Envelope::sin2_ramp, 1.0, 1.0}),
               Catch::Matchers::WithinAbs(0.375, 1e-15));

    PulseParams bad{1.0, 1.0, Envelope::rectangular, -0.5, 1.0};
    CHECK_THROWS_AS(pulse_area(bad), std::invalid_argument);
}

TEST_CASE("interaction parameter", "[adiabatic]") {
    // |Delta| tau = 500, U0 tau = 50 (rectangular, tau = 1) gives u = 10
    PulseParams p{50.0, -500.0, Envelope::rectangular, 1.0, 1.0};
    auto q = interaction_parameter(p);
    CHECK_THAT(q.u, Catch::Matchers::WithinAbs(10.0, 1e-12));
    CHECK(q.detuning_sign == -1);

    p.rabi_peak = 0.0;
    CHECK(interaction_parameter(p).u == 0.0);

    // doubling tau doubles u
    PulseParams p2{50.0, -500.0, Envelope::rectangular, 2.0, 1.0};
    CHECK_THAT(interaction_parameter(p2).u, Catch::Matchers::WithinRel(20.0, 1e-12));

    PulseParams resonant{50.0, 0.0, Envelope::rectangular, 1.0, 1.0};
    CHECK_THROWS_AS(interaction_parameter(resonant), regime_error);
}

TEST_CASE("diffract reduces to the symmetric pattern for unsplit packets", "[adiabatic]") {
    auto unsplit = make_two_peak(1.0, 0.0);
    for (double u : {0.8, 7.3, 21.0}) {
        auto pat = diffract(unsplit, {u, +1});
        INFO("u=" << u);
        CHECK_THAT(pat.total() + pat.dropped_mass, Catch::Matchers::WithinAbs(1.0, 1e-12));
        CHECK(pat.dropped_mass < 1e-12);
        double worst = 0.0;
        for (const auto& [n, w] : pat.probabilities) {
            REQUIRE(n % 2 == 0);
            double j = specfun::bessel_j(n / 2, u);
            worst = std::max(worst, std::abs(w - j * j));
        }
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("diffract at u = 0 returns the input distribution", "[adiabatic]") {
    auto p = make_gaussian({10.0, 0.4, -1});
    auto pat = diffract(p, {0.0, -1});
    for (const auto& [n, a] : p.amplitudes) {
        INFO("n=" << n);
        CHECK_THAT(pat.w(n), Catch::Matchers::WithinAbs(std::norm(a), 1e-15));
    }
}

TEST_CASE("diffract rejects odd-support packets", "[adiabatic]") {
    WavePacket odd;
    odd.amplitudes[1] = 1.0;
    odd.parity = Parity::general;
    CHECK_THROWS_AS(diffract(odd, {1.0, +1}), std::invalid_argument);
}

TEST_CASE("two-peak closed form equals the general engine", "[adiabatic]") {
    auto g = oracles::rng(314159);
    for (int trial = 0; trial < 100; ++trial) {
        cplx a0 = oracles::random_unit_cplx(g);
        cplx a2 = oracles::random_unit_cplx(g);
        AdiabaticParams q{oracles::uniform(g, 0.0, 20.0), trial % 2 ? +1 : -1};
        auto direct = two_peak_diffract(a0, a2, q);
        auto general = diffract(make_two_peak(a0, a2), q);
        INFO("trial " << trial << " u=" << q.u);
        CHECK(max_pointwise_dev(direct, general) <= 1e-12);
    }
}

TEST_CASE("two-peak pattern invariances", "[adiabatic]") {
    // a2 = 0 falls back to the symmetric pattern
    auto sym = two_peak_diffract(1.0, 0.0, {5.0, -1});
    CHECK_THAT(asymmetry(sym), Catch::Matchers::WithinAbs(0.0, 1e-13));

    // flipping both the detuning sign and the splitting phase leaves W alone
    auto g = oracles::rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        cplx a0 = oracles::random_unit_cplx(g);
        cplx a2 = oracles::random_unit_cplx(g);
        double u = oracles::uniform(g, 0.1, 15.0);
        auto plus = two_peak_diffract(a0, a2, {u, +1});
        auto minus = two_peak_diffract(std::conj(a0), std::conj(a2), {u, -1}); // conjugation flips Im(a0 a2*)
        INFO("trial " << trial);
        CHECK(max_pointwise_dev(plus, minus) <= 1e-13);
    }
}

TEST_CASE("asymmetry closed form against the direct sum", "[adiabatic]") {
    auto g = oracles::rng(88);
    for (int trial = 0; trial < 60; ++trial) {
        cplx a0 = oracles::random_unit_cplx(g);
        cplx a2 = oracles::random_unit_cplx(g);
        AdiabaticParams q{oracles::uniform(g, 1e-3, 50.0), trial % 2 ? +1 : -1};
        double direct = asymmetry(two_peak_diffract(a0, a2, q));
        double closed = asymmetry_closed_form(a0, a2, q);
        INFO("trial " << trial << " u=" << q.u);
        CHECK_THAT(closed, Catch::Matchers::WithinAbs(direct, 1e-10));
    }
    CHECK(asymmetry_closed_form(fig1_a0, fig1_a2, {0.0, -1}) == 0.0);
    CHECK(asymmetry_closed_form(1.0, 0.0, {4.0, +1}) == 0.0);
}

TEST_CASE("interference kernel matches its quadrature form", "[adiabatic]") {
    // S(u) = (1/u) int_0^u x (J0^2 + J1^2) dx, oracle by composite Simpson
    for (double u : {1.0, 5.0, 17.3}) {
        double oracle = oracles::simpson([](double x) {
            double j0 = specfun::bessel_j(0, x), j1 = specfun::bessel_j(1, x);
            return x * (j0 * j0 + j1 * j1);
        }, 0.0, u, 4000) / u;
        INFO("u=" << u);
        CHECK_THAT(interference_kernel(u), Catch::Matchers::WithinAbs(oracle, 1e-9));
    }
    CHECK(interference_kernel(0.0) == 0.0);
}

TEST_CASE("asymmetry saturates at 2/pi", "[adiabatic]") {
    auto pat = two_peak_diffract(fig1_a0, fig1_a2, {400.0, -1});
    CHECK(std::abs(std::abs(asymmetry(pat)) - 2.0 / pi) <= 0.01);
    CHECK_THAT(asymmetry_closed_form(fig1_a0, fig1_a2, {400.0, -1}),
               Catch::Matchers::WithinAbs(asymmetry(pat), 1e-10));
}

TEST_CASE("vanishing-interference splittings lose their asymmetry at large u", "[adiabatic]") {
    // Im(a0 a2*) = 0: Delta W = |a2|^2 (J0^2 + J1^2) exactly, which decays
    auto g = oracles::rng(4243);
    for (int trial = 0; trial < 10; ++trial) {
        double x0 = oracles::uniform(g, 0.2, 1.0), x2 = oracles::uniform(g, 0.2, 1.0);
        double u = oracles::uniform(g, 100.0, 300.0);
        auto pat = two_peak_diffract(x0, x2, {u, +1});
        double j0 = specfun::bessel_j(0, u), j1 = specfun::bessel_j(1, u);
        double a2sq = x2 * x2 / (x0 * x0 + x2 * x2);
        INFO("u=" << u);
        CHECK_THAT(asymmetry(pat), Catch::Matchers::WithinAbs(a2sq * (j0 * j0 + j1 * j1), 1e-12));
        CHECK(std::abs(asymmetry(pat)) < 0.01);
    }
}

TEST_CASE("maximum asymmetry sits at quarter-phase splitting", "[adiabatic]") {
    // |a0| = |a2| = 1/sqrt(2), scan the relative phase; |Delta W| at large u
    // peaks where |Im(a0 a2*)| = 1/2
    const double u = 200.0;
    double best = -1.0, best_phase = 0.0;
    for (int k = 0; k < 48; ++k) {
        double phase = 2.0 * pi * k / 48.0;
        auto pat = two_peak_diffract(1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), phase), {u, +1});
        double a = std::abs(asymmetry(pat));
        if (a > best) { best = a; best_phase = phase; }
    }
    double im = std::abs(std::imag(cplx(1.0 / std::sqrt(2.0)) *
                                   std::conj(std::polar(1.0 / std::sqrt(2.0), best_phase))));
    CHECK_THAT(im, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("deflected fraction exceeds 80 percent at u = 100", "[adiabatic]") {
    auto pat = two_peak_diffract(fig1_a0, fig1_a2, {100.0, -1});
    CHECK(pat.forward_fraction() >= 0.80);
}

TEST_CASE("mean momentum", "[adiabatic]") {
    // unsplit packets acquire none
    CHECK_THAT(mean_momentum(make_two_peak(1.0, 0.0), {9.0, +1}),
               Catch::Matchers::WithinAbs(0.0, 1e-12));

    // the pinned two-peak scenario: Im = 1/2, |a2|^2 = 1/2, sign = -1, u = 10
    auto packet = make_two_peak(fig1_a0, fig1_a2);
    CHECK_THAT(mean_momentum(packet, {10.0, -1}), Catch::Matchers::WithinRel(11.0, 1e-10));
    CHECK_THAT(mean_momentum_closed_form(fig1_a0, fig1_a2, {10.0, -1}),
               Catch::Matchers::WithinRel(11.0, 1e-14));

    // real splittings: exactly 2 |a2|^2, independent of u
    for (double u : {1.0, 7.0, 19.0}) {
        INFO("u=" << u);
        CHECK_THAT(mean_momentum(make_two_peak(0.8, 0.6), {u, +1}),
                   Catch::Matchers::WithinAbs(2.0 * 0.36, 1e-11));
    }

    // closed form vs direct first moment over random states
    auto g = oracles::rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        cplx a0 = oracles::random_unit_cplx(g);
        cplx a2 = oracles::random_unit_cplx(g);
        AdiabaticParams q{oracles::uniform(g, 1e-6, 20.0), trial % 2 ? +1 : -1};
        double direct = mean_momentum(make_two_peak(a0, a2), q);
        double closed = mean_momentum_closed_form(a0, a2, q);
        INFO("trial " << trial << " u=" << q.u);
        CHECK(std::abs(direct - closed) <= 1e-10 * std::max(1.0, std::abs(closed)));
    }
}

TEST_CASE("raman-nath validity check", "[adiabatic]") {
    // sodium-like: m = 23 amu, lambda = 0.5 um -> omega_rec ~ 2.18e5 rad/s
    const double hbar = 1.054571817e-34, amu = 1.66053906660e-27;
    const double k = 2.0 * pi / 0.5e-6;
    const double omega_rec = hbar * k * k / (2.0 * 23.0 * amu);
    CHECK_THAT(omega_rec, Catch::Matchers::WithinRel(2.18e5, 0.01));

    // the two-peak drive (u = 10) realized at tau = t = 1e-9 s
    const double tau = 1e-9;
    PulseParams p{50.0 / tau, -500.0 / tau, Envelope::rectangular, tau, omega_rec};
    auto v = raman_nath_check(p);
    CHECK_THAT(v.u, Catch::Matchers::WithinRel(10.0, 1e-12));
    CHECK(v.n_max == 20);
    CHECK(v.ratio <= 0.1);
    CHECK(v.valid);

    // u = 0 is trivially valid
    PulseParams off{0.0, -500.0 / tau, Envelope::rectangular, tau, omega_rec};
    auto v0 = raman_nath_check(off);
    CHECK(v0.lhs == 0.0);
    CHECK(v0.valid);

    // monotonicity: scaling the recoil frequency up by 1000 breaks validity
    PulseParams heavy = p;
    heavy.recoil_frequency *= 1000.0;
    CHECK_FALSE(raman_nath_check(heavy).valid);
}

TEST_CASE("pattern serialization", "[adiabatic]") {
    auto pat = two_peak_diffract(fig1_a0, fig1_a2, {3.0, -1});
    auto csv = io::pattern_to_csv(pat);
    CHECK(csv.rfind("n,W\n", 0) == 0);
    // sorted by n and written with 17 significant digits
    auto second_line = csv.substr(csv.find('\n') + 1);
    int first_n = std::stoi(second_line);
    CHECK(first_n == -static_cast<int>(pat.truncation_bound));

    auto j = io::pattern_to_json(pat, 3.0, -1);
    CHECK(j["u"] == 3.0);
    CHECK(j["detuning_sign"] == -1);
    CHECK(j.contains("dropped_mass"));
    CHECK(j["entries"].is_array());
}
