#pragma once

#include <cstddef>

// Scalar reference kernels for the dense inner loops (vector dot products,
// squared norms, axpy) plus AVX2 variants selected once at runtime.  The
// reference implementations are always available and the two paths are
// equivalence-tested against each other.

namespace sparsebf::kern {

enum class Isa { Scalar, Avx2 };

// ISA chosen for this process (cpuid probe on first use).
Isa active_isa();

// Force a specific ISA; used by the equivalence tests.  Returns false if the
// requested ISA is not available on this machine.
bool set_isa(Isa isa);

double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace scalar

namespace avx2 {
// Present only when the TU was compiled; guarded by set_isa/active_isa.
double dot(const double* x, const double* y, std::size_t n);
double sum_sq(const double* x, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
}  // namespace avx2

}  // namespace sparsebf::kern
