#pragma once

#include <complex>
#include <cstddef>

// Hot pointwise loops of the spectral pipeline. Every kernel has a scalar
// reference implementation and (on x86) an AVX2 variant selected at runtime.
// The dispatched and scalar paths are equivalence-tested against each other.

namespace zml::kernels {

enum class Isa { scalar, avx2 };

// ISA picked at startup from CPUID.
Isa detected_isa();
Isa active_isa();
// Override dispatch (tests, benchmarking). Passing detected_isa() restores it.
void force_isa(Isa isa);

void scale(double* x, double c, std::size_t n);            // x *= c
void axpy(double* y, double a, const double* x, std::size_t n);  // y += a*x
double sum(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double sq_sum(const double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);

// coefficient-wise products in spectral space
void cmul_real(std::complex<double>* x, const double* s, std::size_t n);
void cmul_cplx(std::complex<double>* x, const std::complex<double>* s, std::size_t n);
void caxpy(std::complex<double>* y, std::complex<double> a, const std::complex<double>* x,
           std::size_t n);

namespace scalar {
void scale(double* x, double c, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double sq_sum(const double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);
void cmul_real(std::complex<double>* x, const double* s, std::size_t n);
void cmul_cplx(std::complex<double>* x, const std::complex<double>* s, std::size_t n);
void caxpy(std::complex<double>* y, std::complex<double> a, const std::complex<double>* x,
           std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void scale(double* x, double c, std::size_t n);
void axpy(double* y, double a, const double* x, std::size_t n);
double sum(const double* x, std::size_t n);
double abs_sum(const double* x, std::size_t n);
double sq_sum(const double* x, std::size_t n);
double abs_max(const double* x, std::size_t n);
void cmul_real(std::complex<double>* x, const double* s, std::size_t n);
void cmul_cplx(std::complex<double>* x, const std::complex<double>* s, std::size_t n);
void caxpy(std::complex<double>* y, std::complex<double> a, const std::complex<double>* x,
           std::size_t n);
}  // namespace avx2
#endif

}  // namespace zml::kernels
