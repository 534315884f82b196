#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zml/initial_data.hpp"
#include "zml/operators.hpp"

using namespace zml;

TEST_CASE("all constructions have zero mass") {
    GridSpec g(1, 60.0, 2048);
    CHECK(std::fabs(integrate(make_fractional_bump(g, 0.5, 1.0, 1.0).field)) <= 1e-12);
    CHECK(std::fabs(integrate(make_dipole(g, 0, 1.0, 1.0).field)) <= 1e-12);
    CHECK(std::fabs(integrate(make_miyakawa(g, 0.5, {}).field)) <= 1e-12);
    RealField bad = sample(g, [](double x) { return std::exp(-x * x); });
    CHECK_THROWS_AS(make_custom(std::move(bad), 0.5), NonZeroMass);
}

TEST_CASE("fractional bump reports A = mass of phi and compute_A recovers it") {
    GridSpec g(1, 60.0, 2048);
    for (double mass : {0.5, 1.0, 3.0}) {
        InitialDatum d = make_fractional_bump(g, 0.5, mass, 1.0);
        REQUIRE(d.amplitude_A.has_value());
        CHECK(*d.amplitude_A == doctest::Approx(mass).epsilon(1e-12));
        AmplitudeEstimate est = compute_A(d, 0.5);
        // shell extrapolation has O(|xi|) bias from the Gaussian factor
        CHECK(est.value == doctest::Approx(mass).epsilon(0.02));
        CHECK(est.error_bar <= 0.1 * std::fabs(mass));
    }
}

TEST_CASE("compute_A flags a misdeclared beta") {
    // shell estimates scale like |xi|^{beta_true - beta_declared}; across the
    // three smallest shells a mismatch of 0.8 spreads them well past the 50%
    // consistency gate
    GridSpec g(1, 60.0, 2048);
    InitialDatum d = make_fractional_bump(g, 0.1, 1.0, 1.0);
    CHECK_THROWS_AS(compute_A(d, 0.9), InconsistentShells);
}

TEST_CASE("dipole is the closed-form Gaussian derivative") {
    GridSpec g(1, 60.0, 2048);
    InitialDatum d = make_dipole(g, 0, 2.0, 1.0);
    CHECK(d.beta == 1.0);
    RealField spec_d = partial_derivative(
        sample(g, [](double x) { return 2.0 * std::pow(4.0 * M_PI, -0.5) *
                                         std::exp(-x * x / 4.0); }),
        MultiIndex{1});
    double worst = 0.0;
    for (std::size_t i = 0; i < spec_d.values.size(); ++i)
        worst = std::max(worst, std::fabs(spec_d.values[i] - d.field.values[i]));
    CHECK(worst <= 1e-10);
    CHECK_THROWS(make_dipole(g, 1, 1.0, 1.0));  // axis 1 on a 1d grid
}

TEST_CASE("miyakawa bumps are compact and antisymmetric") {
    GridSpec g(1, 60.0, 1024);
    MiyakawaParams p;
    p.separation = 3.0;
    InitialDatum d = make_miyakawa(g, 0.5, p);
    const int N = g.points_per_dim;
    for (int i = 1; i < N; ++i) {
        CHECK(d.field.values[i] == doctest::Approx(-d.field.values[N - i]).epsilon(1e-12));
        if (std::fabs(g.coord(i)) > p.separation + p.width + 1e-9)
            CHECK(d.field.values[i] == 0.0);
    }
    MiyakawaParams wide;
    wide.separation = 10.0;
    CHECK_THROWS_AS(make_miyakawa(g, 0.5, wide), SupportTooLarge);
}

TEST_CASE("parameter validation") {
    GridSpec g(1, 60.0, 1024);
    CHECK_THROWS_AS(make_fractional_bump(g, 1.5, 1.0, 1.0), InvalidBeta);
    CHECK_THROWS_AS(make_fractional_bump(g, 0.5, 1.0, 20.0), WidthTooLarge);
    CHECK_THROWS_AS(make_dipole(g, 0, 1.0, 30.0), WidthTooLarge);
}

TEST_CASE("besov norm of a fractional bump is finite and peaks interior") {
    GridSpec g(1, 60.0, 2048);
    InitialDatum d = make_fractional_bump(g, 0.5, 1.0, 1.0);
    BesovResult r = besov_norm(d.field, 0.5, default_besov_grid(g));
    CHECK(r.value > 0.0);
    CHECK_FALSE(r.endpoint_warning);
    // s^{beta/2}||e^{s Delta} D^beta phi||_1 -> const * ||phi||_1 as s grows:
    // the sup should be of order the bump mass
    CHECK(r.value < 2.0);
    CHECK(r.value > 0.1);
}

TEST_CASE("besov norm of a dipole decays at the large-s end") {
    // beta-declared 0.5 but datum is beta = 1: s^{1/4}||e^{s}u0||_1 ~ s^{-1/4}
    GridSpec g(1, 60.0, 2048);
    InitialDatum d = make_dipole(g, 0, 1.0, 1.0);
    auto grid_s = log_spaced(1.0, 100.0, 10);
    BesovResult r = besov_norm(d.field, 0.5, grid_s);
    CHECK(r.argmax_s == grid_s.front());
    CHECK(r.endpoint_warning);
}

TEST_CASE("moment_beta computes the weighted integral") {
    // int |x|^{1/2} e^{-x^2} dx = Gamma(3/4); the |x|^{1/2} cusp at the
    // origin limits the Riemann sum to O(h^{3/2}) accuracy, so check the
    // value coarsely and the convergence rate under grid refinement
    auto value_at = [](int N) {
        GridSpec g(1, 30.0, N);
        RealField f = sample(g, [](double x) { return std::exp(-x * x); });
        return moment_beta(f, 0.5);
    };
    const double exact = std::tgamma(0.75);
    double e1 = std::fabs(value_at(1024) - exact);
    double e2 = std::fabs(value_at(4096) - exact);
    CHECK(e1 <= 0.01 * exact);
    CHECK(e2 <= 0.4 * e1);  // h^{3/2} predicts a factor of 8 per 4x refinement
}

TEST_CASE("log_spaced endpoints and monotonicity") {
    auto v = log_spaced(0.1, 1000.0, 17);
    CHECK(v.size() == 17);
    CHECK(v.front() == doctest::Approx(0.1));
    CHECK(v.back() == doctest::Approx(1000.0));
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
}
