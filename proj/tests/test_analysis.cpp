#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zml/analysis.hpp"
#include "zml/operators.hpp"

using namespace zml;

namespace {
std::vector<NormRecord> power_law(double alpha, double prefactor, int n = 20) {
    std::vector<NormRecord> recs;
    for (double t : log_spaced(1.0, 100.0, n)) {
        NormRecord r;
        r.t = t;
        r.l1 = prefactor * std::pow(t, -alpha);
        r.lq = 2.0 * prefactor * std::pow(t, -alpha);
        recs.push_back(r);
    }
    return recs;
}
}  // namespace

TEST_CASE("fit_decay is exact on synthetic power laws") {
    for (double alpha : {0.1, 0.25, 0.5, 1.0, 2.0}) {
        DecayFit f = fit_decay(power_law(alpha, 3.7), "l1", 1.0, 100.0);
        CHECK(std::fabs(f.exponent + alpha) <= 1e-10);
        CHECK(f.prefactor == doctest::Approx(3.7).epsilon(1e-10));
        CHECK(f.residual <= 1e-12);
    }
}

TEST_CASE("fit_decay norm-key dispatch and window errors") {
    auto recs = power_law(0.5, 1.0);
    CHECK(std::fabs(fit_decay(recs, "lq", 1.0, 100.0).exponent + 0.5) <= 1e-10);
    CHECK_THROWS_AS(fit_decay(recs, "l1", 90.0, 100.0), WindowTooNarrow);
    CHECK_THROWS(fit_decay(recs, "nonsense", 1.0, 100.0));
}

TEST_CASE("record_norms fills the requested entries") {
    GridSpec g(1, 30.0, 512);
    RealField f = gauss_kernel(g, 1.0);
    NormRecord r = record_norms(f, 2.5, 3.0, {1.5});
    CHECK(r.t == 2.5);
    CHECK(r.l1 == doctest::Approx(lp_norm(f, 1.0)));
    CHECK(r.lq == doctest::Approx(lp_norm(f, 3.0)));
    CHECK(r.linf == doctest::Approx(lp_norm(f, INFINITY)));
    CHECK(r.mass == doctest::Approx(integrate(f)));
    REQUIRE(r.lp_extra.count(1.5) == 1);
    CHECK(r.lp_extra.at(1.5) == doctest::Approx(lp_norm(f, 1.5)));
}

TEST_CASE("profile_distance vanishes on the exact profile") {
    GridSpec g(1, 100.0, 2048);
    const double A = 2.0, beta = 0.5, t = 4.0;
    RealField u = self_similar_profile(g, beta, MultiIndex{}, t);
    for (auto& v : u.values) v *= A;
    ProfileDistance d = profile_distance(u, t, A, beta, 1.0);
    CHECK(d.value <= 1e-12);
    // wrong amplitude leaves a scaled residual equal to |A - A'| times the
    // scaled profile norm
    ProfileDistance d2 = profile_distance(u, t, 0.5 * A, beta, 1.0);
    CHECK(d2.value > 0.1);
}

TEST_CASE("scaling_collapse identities") {
    GridSpec g(1, 100.0, 1024);
    RealField u = self_similar_profile(g, 0.5, MultiIndex{}, 4.0);
    CHECK(scaling_collapse(u, u, 3.0, 3.0, 0.5) == 0.0);
    RealField u16 = self_similar_profile(g, 0.5, MultiIndex{}, 16.0);
    CHECK(scaling_collapse(u, u16, 4.0, 16.0, 0.5) <= 1e-6);
    CHECK_THROWS(scaling_collapse(u, u16, 4.0, 10.0, 0.5));  // lambda not integer
    GridSpec g2(1, 50.0, 1024);
    RealField w(g2);
    CHECK_THROWS_AS(scaling_collapse(u, w, 4.0, 16.0, 0.5), GridMismatch);
}

TEST_CASE("scaling_collapse detects non-self-similar pairs") {
    GridSpec g(1, 100.0, 1024);
    RealField a = gauss_kernel(g, 1.0);
    RealField b = gauss_kernel(g, 1.1);  // not the 4x dilate
    CHECK(scaling_collapse(a, b, 1.0, 4.0, 0.5) > 0.1);
}

TEST_CASE("g_functional is monotone and zero on the zero solution") {
    std::vector<NormRecord> recs;
    for (double t : log_spaced(0.1, 10.0, 15)) {
        NormRecord r;
        r.t = t;
        recs.push_back(r);
    }
    auto series = g_functional(recs, 0.5, 5.0 / 3.0);
    for (auto& [t, v] : series) CHECK(v == 0.0);

    auto series2 = g_functional(power_law(0.25, 1.0), 0.5, 5.0 / 3.0);
    for (std::size_t i = 1; i < series2.size(); ++i)
        CHECK(series2[i].second >= series2[i - 1].second);
}

TEST_CASE("holder interpolation ratio is at most one") {
    GridSpec g(1, 30.0, 512);
    for (double w : {0.3, 1.0, 2.5}) {
        RealField f = gauss_kernel(g, w);
        CHECK(holder_interpolation_check(f, 2.5, 5.0 / 3.0) <= 1.0 + 1e-10);
        CHECK(holder_interpolation_check(f, 3.0, 2.0) <= 1.0 + 1e-10);
    }
}

TEST_CASE("linearization_distance is zero against the datum's own heat flow") {
    GridSpec g(1, 60.0, 1024);
    InitialDatum d = make_dipole(g, 0, 1.0, 1.0);
    RealField lin = heat_semigroup(d.field, 2.0);
    CHECK(linearization_distance(lin, d, 2.0, 1.0) <= 1e-12);
    RealField off = heat_semigroup(d.field, 2.5);
    CHECK(linearization_distance(off, d, 2.0, 1.0) > 1e-4);
}
