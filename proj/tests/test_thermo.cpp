#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "twostroke/error.hpp"
#include "twostroke/permutation.hpp"
#include "twostroke/thermo.hpp"

using namespace twostroke;

namespace {

const std::array<double, 1> kNoCatalyst{1.0};

PopulationVector qubit_pair(double bh, double wh, double bc, double wc) {
    return product_state(kNoCatalyst, gibbs_populations(Spectrum::qubit(wh), bh),
                         gibbs_populations(Spectrum::qubit(wc), bc));
}

}  // namespace

TEST_CASE("spectrum validation") {
    CHECK_THROWS_AS(Spectrum({}), Error);
    CHECK_THROWS_AS(Spectrum({0.5, 1.0}), Error);
    CHECK_THROWS_AS(Spectrum({0.0, NAN}), Error);
    CHECK(Spectrum::qubit(2.0)[1] == 2.0);
    CHECK(Spectrum::trivial(3).dim() == 3);
}

TEST_CASE("inverse temperatures require beta_c > beta_h > 0") {
    CHECK_THROWS_AS(InverseTemperatures(1.0, 1.0), Error);
    CHECK_THROWS_AS(InverseTemperatures(2.0, 1.0), Error);
    CHECK_THROWS_AS(InverseTemperatures(0.0, 1.0), Error);
    CHECK(InverseTemperatures(1.0, 4.0).carnot_efficiency() == doctest::Approx(0.75));
}

TEST_CASE("gibbs populations of a qubit") {
    const auto p = gibbs_populations(Spectrum::qubit(1.0), 2.0);
    const double a = std::exp(-2.0);
    CHECK(p[0] == doctest::Approx(1.0 / (1.0 + a)).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(a / (1.0 + a)).epsilon(1e-15));
    CHECK_THROWS_AS(gibbs_populations(Spectrum::qubit(1.0), -1.0), Error);
}

TEST_CASE("large beta-energy products stay finite") {
    const auto p = gibbs_populations(Spectrum({0.0, 1e6}), 1e3);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
}

TEST_CASE("product state ordering is catalyst, hot, cold") {
    const double bh = 1.0, wh = 1.0, bc = 3.0, wc = 0.5;
    const double ah = std::exp(-bh * wh), ac = std::exp(-bc * wc);
    const double norm = 1.0 / ((1.0 + ah) * (1.0 + ac));
    const auto rho = qubit_pair(bh, wh, bc, wc);
    CHECK(rho[0] == doctest::Approx(norm));
    CHECK(rho[1] == doctest::Approx(norm * ac));
    CHECK(rho[2] == doctest::Approx(norm * ah));
    CHECK(rho[3] == doctest::Approx(norm * ah * ac));
}

TEST_CASE("population vector validation") {
    CHECK_THROWS_AS(PopulationVector({0.5, 0.6}, {1, 2, 1}), Error);
    CHECK_THROWS_AS(PopulationVector({-0.1, 1.1}, {1, 2, 1}), Error);
    CHECK_THROWS_AS(PopulationVector({1.0}, {1, 2, 1}), Error);
    const PopulationVector p({0.1, 0.2, 0.3, 0.4}, {2, 2, 1});
    CHECK(p.catalyst_marginal()[0] == doctest::Approx(0.3));
    CHECK(p.hot_marginal()[1] == doctest::Approx(0.6));
}

TEST_CASE("identity stroke is degenerate") {
    const auto rho = qubit_pair(1.0, 1.0, 3.0, 0.5);
    const auto r = stroke_report(rho, rho, Spectrum::qubit(1.0), Spectrum::qubit(0.5), {1.0, 3.0});
    CHECK(r.work == 0.0);
    CHECK(r.heat_hot == 0.0);
    CHECK(r.heat_cold == 0.0);
    CHECK_FALSE(r.efficiency.has_value());
    CHECK(r.modes.contains(Mode::degenerate));
}

TEST_CASE("otto swap report") {
    const double bh = 1.0, wh = 1.0, bc = 3.0, wc = 0.5;
    const double ah = std::exp(-bh * wh), ac = std::exp(-bc * wc);
    const double norm = 1.0 / ((1.0 + ah) * (1.0 + ac));
    const auto rho = qubit_pair(bh, wh, bc, wc);
    const auto r = stroke_report(rho, apply_permutation(rho, otto_swap()), Spectrum::qubit(wh),
                                 Spectrum::qubit(wc), {bh, bc});
    CHECK(r.work == doctest::Approx(norm * (ah - ac) * (wh - wc)).epsilon(1e-13));
    CHECK(r.heat_hot == doctest::Approx(norm * (ah - ac) * wh).epsilon(1e-13));
    CHECK(r.heat_cold == doctest::Approx(-norm * (ah - ac) * wc).epsilon(1e-13));
    REQUIRE(r.efficiency);
    CHECK(*r.efficiency == doctest::Approx(1.0 - wc / wh).epsilon(1e-13));
    CHECK(r.modes == ModeSet{Mode::engine});
}

TEST_CASE("catalyst must return to its initial marginal") {
    const std::array<double, 2> cat{0.7, 0.3};
    const auto rho = product_state(cat, gibbs_populations(Spectrum::qubit(1.0), 1.0),
                                   gibbs_populations(Spectrum::qubit(0.5), 3.0));
    const auto moved = apply_permutation(rho, PermutationMap::transposition(8, 0, 4));
    try {
        stroke_report(rho, moved, Spectrum::qubit(1.0), Spectrum::qubit(0.5), {1.0, 3.0});
        FAIL("expected cyclicity violation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::cyclicity_violated);
    }
}

TEST_CASE("mode classification") {
    CHECK(classify_modes(1.0, 2.0, -1.0) == ModeSet{Mode::engine});
    CHECK(classify_modes(-1.0, -2.0, 1.0) == ModeSet{Mode::cooler});
    CHECK(classify_modes(-1.0, 0.5, -1.5) == ModeSet{Mode::accelerator});
    CHECK(classify_modes(0.0, 0.0, 0.0) == ModeSet{Mode::accelerator, Mode::degenerate});
    CHECK(classify_modes(1e-13, 0.0, 0.0).contains(Mode::degenerate));
    CHECK(to_string(Mode::cooler) == "cooler");
}

TEST_CASE("cycle report json") {
    CycleReport r;
    r.work = 1.0;
    r.heat_hot = 2.0;
    r.heat_cold = -1.0;
    r.efficiency = 0.5;
    r.modes = {Mode::engine};
    const nlohmann::json j = r;
    CHECK(j["work"] == 1.0);
    CHECK(j["efficiency"] == 0.5);
    CHECK(j["modes"][0] == "engine");
    r.efficiency.reset();
    CHECK(nlohmann::json(r)["efficiency"].is_null());
}

TEST_CASE("first law holds for block-local permutations") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Spectrum hot({0.0, u(rng), 2.5 + u(rng)});
        const Spectrum cold({0.0, u(rng)});
        const InverseTemperatures beta(u(rng), 2.5 + u(rng));
        const std::array<double, 2> cat{0.4, 0.6};
        const auto rho = product_state(cat, gibbs_populations(hot, beta.hot()), gibbs_populations(cold, beta.cold()));
        std::vector<std::size_t> image(12);
        for (std::size_t s = 0; s < 2; ++s) {
            std::vector<std::size_t> local{0, 1, 2, 3, 4, 5};
            std::shuffle(local.begin(), local.end(), rng);
            for (std::size_t x = 0; x < 6; ++x) image[6 * s + x] = 6 * s + local[x];
        }
        const auto r = stroke_report(rho, apply_permutation(rho, PermutationMap(image)), hot, cold, beta);
        CHECK(std::abs(r.work - (r.heat_hot + r.heat_cold)) <= 1e-12);
        CHECK(clausius_lhs(r.heat_hot, r.heat_cold, beta) <= 1e-10);
    }
}
