#include "sparsebf/kernels.hpp"

namespace sparsebf::kern {

namespace scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double sum_sq(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace scalar

namespace {

bool avx2_available() {
#if defined(SPARSEBF_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa probe() { return avx2_available() ? Isa::Avx2 : Isa::Scalar; }

Isa g_isa = probe();

}  // namespace

Isa active_isa() { return g_isa; }

bool set_isa(Isa isa) {
  if (isa == Isa::Avx2 && !avx2_available()) return false;
  g_isa = isa;
  return true;
}

double dot(const double* x, const double* y, std::size_t n) {
#ifdef SPARSEBF_HAVE_AVX2_TU
  if (g_isa == Isa::Avx2) return avx2::dot(x, y, n);
#endif
  return scalar::dot(x, y, n);
}

double sum_sq(const double* x, std::size_t n) {
#ifdef SPARSEBF_HAVE_AVX2_TU
  if (g_isa == Isa::Avx2) return avx2::sum_sq(x, n);
#endif
  return scalar::sum_sq(x, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
#ifdef SPARSEBF_HAVE_AVX2_TU
  if (g_isa == Isa::Avx2) return avx2::axpy(a, x, y, n);
#endif
  return scalar::axpy(a, x, y, n);
}

}  // namespace sparsebf::kern
