#include <doctest.h>

#include <random>
#include <vector>

#include "sparsebf/kernels.hpp"

using namespace sparsebf;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward loops") {
  std::mt19937_64 rng(1);
  for (std::size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 8ul, 33ul, 1000ul}) {
    auto x = random_vec(n, rng);
    auto y = random_vec(n, rng);
    double dot_ref = 0.0, sq_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot_ref += x[i] * y[i];
      sq_ref += x[i] * x[i];
    }
    CHECK(kern::scalar::dot(x.data(), y.data(), n) == doctest::Approx(dot_ref));
    CHECK(kern::scalar::sum_sq(x.data(), n) == doctest::Approx(sq_ref));
    auto y2 = y;
    kern::scalar::axpy(2.5, x.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(y2[i] == doctest::Approx(y[i] + 2.5 * x[i]));
  }
}

TEST_CASE("avx2 kernels agree with scalar reference") {
  if (!kern::set_isa(kern::Isa::Avx2)) {
    MESSAGE("AVX2 unavailable on this machine, dispatch test skipped");
    return;
  }
  std::mt19937_64 rng(2);
  for (std::size_t n : {1ul, 2ul, 3ul, 4ul, 5ul, 7ul, 8ul, 9ul, 31ul, 32ul, 33ul,
                        255ul, 1024ul, 1025ul}) {
    auto x = random_vec(n, rng);
    auto y = random_vec(n, rng);
    // FMA contraction changes rounding, so compare with a tolerance scaled to n.
    double tol = 1e-13 * static_cast<double>(n + 1);
    CHECK(kern::avx2::dot(x.data(), y.data(), n) ==
          doctest::Approx(kern::scalar::dot(x.data(), y.data(), n)).epsilon(tol));
    CHECK(kern::avx2::sum_sq(x.data(), n) ==
          doctest::Approx(kern::scalar::sum_sq(x.data(), n)).epsilon(tol));
    auto ya = y, ys = y;
    kern::avx2::axpy(-1.25, x.data(), ya.data(), n);
    kern::scalar::axpy(-1.25, x.data(), ys.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(ya[i] == doctest::Approx(ys[i]));
  }
  kern::set_isa(kern::active_isa());
}

TEST_CASE("dispatch honors set_isa") {
  std::vector<double> x{1.0, 2.0, 3.0};
  REQUIRE(kern::set_isa(kern::Isa::Scalar));
  CHECK(kern::active_isa() == kern::Isa::Scalar);
  CHECK(kern::sum_sq(x.data(), x.size()) == doctest::Approx(14.0));
  if (kern::set_isa(kern::Isa::Avx2)) {
    CHECK(kern::active_isa() == kern::Isa::Avx2);
    CHECK(kern::sum_sq(x.data(), x.size()) == doctest::Approx(14.0));
  }
}
