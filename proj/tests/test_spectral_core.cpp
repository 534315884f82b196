#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "zml/field.hpp"

using namespace zml;

namespace {
constexpr double kPi = 3.14159265358979323846;

RealField random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    RealField f(g);
    for (auto& v : f.values) v = d(rng);
    return f;
}
}  // namespace

TEST_CASE("forward/inverse round-trip is identity") {
    for (int dim : {1, 2}) {
        GridSpec g(dim, 30.0, dim == 1 ? 1024 : 64);
        RealField f = random_field(g, 7);
        RealField r = inverse_transform(forward_transform(f));
        double worst = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            worst = std::max(worst, std::fabs(f.values[i] - r.values[i]));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("Gaussian transforms to Gaussian under the symmetric convention") {
    // exp(-x^2/2) is a fixed point of the (2pi)^{-1/2} convention transform;
    // accuracy is normwise relative (pointwise relative error at the far
    // spectral tail is limited by the Gaussian's own dynamic range)
    GridSpec g(1, 40.0, 2048);
    RealField f = sample(g, [](double x) { return std::exp(-0.5 * x * x); });
    SpectralField F = forward_transform(f);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.points_per_dim; ++i) {
        double xi = g.wavenumber(i);
        if (std::fabs(xi) > 5.0) continue;
        double exact = std::exp(-0.5 * xi * xi);
        num = std::max(num, std::abs(F.coeffs[i] - Complex{exact, 0.0}));
        den = std::max(den, exact);
    }
    CHECK(num / den <= 1e-10);
}

TEST_CASE("single cosine lands on the expected modes") {
    GridSpec g(1, kPi, 256);  // box [-pi, pi), integer wavenumbers
    const int k = 5;
    RealField f = sample(g, [&](double x) { return std::cos(k * x); });
    SpectralField F = forward_transform(f);
    // uhat = (2pi)^{-1/2} * pi * (delta_k + delta_{-k}) under the integral
    // convention restricted to the lattice
    const double expected = std::sqrt(0.5 * kPi);
    for (int i = 0; i < g.points_per_dim; ++i) {
        double mag = std::abs(F.coeffs[i]);
        if (std::abs(g.mode(i)) == k)
            CHECK(mag == doctest::Approx(expected).epsilon(1e-12));
        else
            CHECK(mag <= 1e-12);
    }
}

TEST_CASE("Parseval holds") {
    GridSpec g(1, 25.0, 512);
    RealField f = random_field(g, 21);
    SpectralField F = forward_transform(f);
    double phys = 0.0;
    for (double v : f.values) phys += v * v;
    phys *= g.spacing();
    double spec = 0.0;
    for (const auto& c : F.coeffs) spec += std::norm(c);
    spec *= kPi / g.half_width;
    CHECK(phys == doctest::Approx(spec).epsilon(1e-12));
}

TEST_CASE("pad_embed then pad_restrict is the identity") {
    for (int dim : {1, 2}) {
        GridSpec g(dim, 10.0, dim == 1 ? 256 : 32);
        SpectralField F = forward_transform(random_field(g, 5));
        SpectralField back = pad_restrict(pad_embed(F, 2), g);
        double worst = 0.0;
        for (std::size_t i = 0; i < F.coeffs.size(); ++i)
            worst = std::max(worst, std::abs(F.coeffs[i] - back.coeffs[i]));
        CHECK(worst <= 1e-13);
    }
}

TEST_CASE("padded product dealiases exactly for band-limited factors") {
    // two modes whose product would alias on the coarse grid but not on the
    // 2x fine grid: compare against the analytic product coefficients
    GridSpec g(1, kPi, 64);
    const int k = 14, l = 20;  // k + l = 34 > N/2 = 32: aliases to -30 unpadded
    RealField f = sample(g, [&](double x) { return std::cos(k * x) + std::cos(l * x); });
    RealField sq = pad_pointwise_apply(f, [](double v) { return v * v; }, 2);
    SpectralField S = forward_transform(sq);
    // (cos k + cos l)^2 = 1 + cos(2k)/2 + cos(2l)/2 + cos(k+l) + cos(k-l);
    // the k+l and 2l lines lie above Nyquist and must be truncated away, not
    // wrapped back onto mode -(N - k - l)
    const double unit = std::sqrt(0.5 * kPi);
    for (int i = 0; i < g.points_per_dim; ++i) {
        int m = std::abs(g.mode(i));
        double mag = std::abs(S.coeffs[i]);
        double expect = 0.0;
        if (m == 0) expect = std::sqrt(2.0 * kPi);  // constant 1
        if (m == 2 * k) expect = 0.5 * unit;
        if (m == l - k) expect = unit;
        if (expect == 0.0)
            CHECK(mag <= 1e-10);
        else
            CHECK(mag == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("inverse_transform rejects non-Hermitian input; symmetrize repairs it") {
    GridSpec g(1, 10.0, 64);
    SpectralField F = forward_transform(random_field(g, 9));
    F.coeffs[3] += Complex{0.0, 1.0};  // break conjugate symmetry
    CHECK(F.hermitian_defect() > 1e-8);
    CHECK_THROWS_AS(inverse_transform(F), SymmetryViolation);
    symmetrize(F);
    CHECK(F.hermitian_defect() <= 1e-15);
    CHECK_NOTHROW(inverse_transform(F));
}

TEST_CASE("integrate matches the zero mode") {
    GridSpec g(1, 15.0, 128);
    RealField f = random_field(g, 13);
    SpectralField F = forward_transform(f);
    const double conv = std::sqrt(2.0 * kPi);
    CHECK(integrate(f) == doctest::Approx(conv * F.coeffs[0].real()).epsilon(1e-12));
}

TEST_CASE("lp_norm special cases agree with direct evaluation") {
    GridSpec g(1, 5.0, 64);
    RealField f = random_field(g, 3);
    double h = g.spacing();
    double l1 = 0.0, l2 = 0.0, l3 = 0.0, li = 0.0;
    for (double v : f.values) {
        l1 += std::fabs(v);
        l2 += v * v;
        l3 += std::pow(std::fabs(v), 3.0);
        li = std::max(li, std::fabs(v));
    }
    CHECK(lp_norm(f, 1.0) == doctest::Approx(h * l1).epsilon(1e-14));
    CHECK(lp_norm(f, 2.0) == doctest::Approx(std::sqrt(h * l2)).epsilon(1e-14));
    CHECK(lp_norm(f, 3.0) == doctest::Approx(std::pow(h * l3, 1.0 / 3.0)).epsilon(1e-14));
    CHECK(lp_norm(f, INFINITY) == li);
    CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidExponent);
}

TEST_CASE("grid validation") {
    CHECK_THROWS(GridSpec(3, 10.0, 64));
    CHECK_THROWS(GridSpec(1, -1.0, 64));
    CHECK_THROWS(GridSpec(1, 10.0, 100));  // not a power of two
    CHECK_THROWS(GridSpec(1, 10.0, 8));    // too small
}
