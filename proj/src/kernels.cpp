#include "zml/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

namespace zml::kernels {

namespace scalar {

void scale(double* x, double c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= c;
}

void axpy(double* y, double a, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

double abs_sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i]);
    return s;
}

double sq_sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

double abs_max(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i]));
    return m;
}

void cmul_real(std::complex<double>* x, const double* s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= s[i];
}

void cmul_cplx(std::complex<double>* x, const std::complex<double>* s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= s[i];
}

void caxpy(std::complex<double>* y, std::complex<double> a, const std::complex<double>* x,
           std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace scalar

Isa detected_isa() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
    return Isa::scalar;
}

namespace {
std::atomic<Isa> g_isa{detected_isa()};
}

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
#if !(defined(__x86_64__) || defined(_M_X64))
    isa = Isa::scalar;
#endif
    g_isa.store(isa, std::memory_order_relaxed);
}

#if defined(__x86_64__) || defined(_M_X64)
#define ZML_DISPATCH(call_scalar, call_avx2) \
    return active_isa() == Isa::avx2 ? call_avx2 : call_scalar
#else
#define ZML_DISPATCH(call_scalar, call_avx2) return call_scalar
#endif

void scale(double* x, double c, std::size_t n) {
    ZML_DISPATCH(scalar::scale(x, c, n), avx2::scale(x, c, n));
}
void axpy(double* y, double a, const double* x, std::size_t n) {
    ZML_DISPATCH(scalar::axpy(y, a, x, n), avx2::axpy(y, a, x, n));
}
double sum(const double* x, std::size_t n) {
    ZML_DISPATCH(scalar::sum(x, n), avx2::sum(x, n));
}
double abs_sum(const double* x, std::size_t n) {
    ZML_DISPATCH(scalar::abs_sum(x, n), avx2::abs_sum(x, n));
}
double sq_sum(const double* x, std::size_t n) {
    ZML_DISPATCH(scalar::sq_sum(x, n), avx2::sq_sum(x, n));
}
double abs_max(const double* x, std::size_t n) {
    ZML_DISPATCH(scalar::abs_max(x, n), avx2::abs_max(x, n));
}
void cmul_real(std::complex<double>* x, const double* s, std::size_t n) {
    ZML_DISPATCH(scalar::cmul_real(x, s, n), avx2::cmul_real(x, s, n));
}
void cmul_cplx(std::complex<double>* x, const std::complex<double>* s, std::size_t n) {
    ZML_DISPATCH(scalar::cmul_cplx(x, s, n), avx2::cmul_cplx(x, s, n));
}
void caxpy(std::complex<double>* y, std::complex<double> a, const std::complex<double>* x,
           std::size_t n) {
    ZML_DISPATCH(scalar::caxpy(y, a, x, n), avx2::caxpy(y, a, x, n));
}

#undef ZML_DISPATCH

}  // namespace zml::kernels
