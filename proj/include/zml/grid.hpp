#pragma once

#include <array>
#include <cstddef>

#include "zml/errors.hpp"

namespace zml {

// Periodic truncation of R^n: the box [-L, L)^n sampled on N points per
// dimension, with the wavevector lattice xi_k = pi*k/L, k = -N/2 .. N/2-1.
struct GridSpec {
    int dim = 1;
    double half_width = 0.0;
    int points_per_dim = 0;

    GridSpec(int n, double L, int N) : dim(n), half_width(L), points_per_dim(N) {
        if (n != 1 && n != 2) throw Error("GridSpec: dim must be 1 or 2");
        if (!(L > 0.0)) throw Error("GridSpec: half_width must be positive");
        if (N < 16 || (N & (N - 1)) != 0)
            throw Error("GridSpec: points_per_dim must be a power of two >= 16");
    }

    double spacing() const { return 2.0 * half_width / points_per_dim; }
    std::size_t size() const {
        std::size_t s = static_cast<std::size_t>(points_per_dim);
        return dim == 1 ? s : s * s;
    }

    // signed mode number for a storage index in FFT order
    int mode(int idx) const {
        return idx < points_per_dim / 2 ? idx : idx - points_per_dim;
    }
    bool is_nyquist(int idx) const { return idx == points_per_dim / 2; }

    double coord(int idx) const { return -half_width + idx * spacing(); }
    double wavenumber(int idx) const {
        constexpr double pi = 3.14159265358979323846;
        return pi * mode(idx) / half_width;
    }

    // lexicographic index decomposition (row-major; axis 0 slowest)
    std::array<int, 2> unravel(std::size_t flat) const {
        if (dim == 1) return {static_cast<int>(flat), 0};
        return {static_cast<int>(flat / points_per_dim),
                static_cast<int>(flat % points_per_dim)};
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.dim == b.dim && a.half_width == b.half_width &&
               a.points_per_dim == b.points_per_dim;
    }
};

}  // namespace zml
