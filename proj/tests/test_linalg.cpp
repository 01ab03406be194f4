#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "declab/linalg.hpp"
#include "declab/rng.hpp"

using namespace declab;

namespace {

// dense Gaussian elimination with partial pivoting, the test-side oracle
std::vector<cplx> dense_solve(std::vector<std::vector<cplx>> A, std::vector<cplx> b) {
  const long n = static_cast<long>(b.size());
  for (long j = 0; j < n; ++j) {
    long p = j;
    for (long i = j + 1; i < n; ++i)
      if (std::abs(A[i][j]) > std::abs(A[p][j])) p = i;
    std::swap(A[j], A[p]);
    std::swap(b[j], b[p]);
    for (long i = j + 1; i < n; ++i) {
      cplx m = A[i][j] / A[j][j];
      for (long c = j; c < n; ++c) A[i][c] -= m * A[j][c];
      b[i] -= m * b[j];
    }
  }
  std::vector<cplx> x(n);
  for (long i = n - 1; i >= 0; --i) {
    cplx acc = b[i];
    for (long c = i + 1; c < n; ++c) acc -= A[i][c] * x[c];
    x[i] = acc / A[i][i];
  }
  return x;
}

// random complex-symmetric banded matrix, diagonally shifted to be solvable
std::vector<std::vector<cplx>> random_sym_banded(long n, long b, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<cplx>> A(n, std::vector<cplx>(n, cplx{}));
  for (long j = 0; j < n; ++j) {
    for (long i = j; i <= std::min(n - 1, j + b); ++i) {
      cplx v(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      A[i][j] = v;
      A[j][i] = v;
    }
    A[j][j] += cplx(2.0 * b + 4.0, 1.0);
  }
  return A;
}

double rel_residual(const std::vector<std::vector<cplx>>& A, const std::vector<cplx>& x,
                    const std::vector<cplx>& b) {
  const long n = static_cast<long>(b.size());
  double num = 0.0, den = 0.0;
  for (long i = 0; i < n; ++i) {
    cplx acc{};
    for (long j = 0; j < n; ++j) acc += A[i][j] * x[j];
    num += std::norm(acc - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}
} // namespace

TEST_CASE("banded LDL^T matches the dense oracle") {
  const long n = 60, bw = 5;
  auto A = random_sym_banded(n, bw, 123);
  std::vector<cplx> band(n * (bw + 1), cplx{});
  for (long j = 0; j < n; ++j)
    for (long i = j; i <= std::min(n - 1, j + bw); ++i) band[j * (bw + 1) + (i - j)] = A[i][j];

  Rng rng(9);
  std::vector<cplx> b(n);
  for (auto& v : b) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));

  BandedLdlt f = BandedLdlt::factor(n, bw, band);
  std::vector<cplx> x = b;
  f.solve_in_place(x);
  std::vector<cplx> want = dense_solve(A, b);
  double err = 0.0, mag = 0.0;
  for (long i = 0; i < n; ++i) {
    err += std::norm(x[i] - want[i]);
    mag += std::norm(want[i]);
  }
  CHECK(std::sqrt(err / mag) <= 1e-12);
  CHECK(rel_residual(A, x, b) <= 1e-12);
}

TEST_CASE("LDL^T rejects a vanishing pivot") {
  std::vector<cplx> band = {cplx(0.0, 0.0), cplx(1.0, 0.0), cplx(2.0, 0.0), cplx{}};
  CHECK_THROWS_AS(BandedLdlt::factor(2, 1, band), Error);
}

TEST_CASE("pivoted banded LU handles matrices the unpivoted path cannot") {
  // leading diagonal entry is zero: LDL^T fails, LU with pivoting succeeds
  const long n = 40, kl = 3, ku = 3;
  Rng rng(77);
  std::vector<std::vector<cplx>> A(n, std::vector<cplx>(n, cplx{}));
  for (long i = 0; i < n; ++i)
    for (long j = std::max<long>(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
      A[i][j] = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  A[0][0] = cplx{};
  for (long i = 1; i < n; ++i) A[i][i] += cplx(3.0, 0.5);

  std::vector<cplx> b(n);
  for (auto& v : b) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));

  BandedLu f = BandedLu::factor(n, kl, ku, [&](long i, long j) { return A[i][j]; });
  std::vector<cplx> x = b;
  f.solve_in_place(x);
  CHECK(rel_residual(A, x, b) <= 1e-11);
}

TEST_CASE("banded LU reports a singular matrix") {
  CHECK_THROWS_AS(
      BandedLu::factor(3, 1, 1, [&](long, long) { return cplx{}; }), Error);
}

TEST_CASE("BiCGStab converges on a preconditioned sparse system") {
  const long n = 500;
  Rng rng(5);
  std::vector<cplx> diag(n), off(n - 1);
  for (auto& v : diag) v = cplx(4.0 + rng.uniform(0.0, 1.0), 0.5);
  for (auto& v : off) v = cplx(rng.uniform(-1.0, 1.0), 0.0);
  auto apply = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
    y.assign(n, cplx{});
    for (long i = 0; i < n; ++i) {
      y[i] = diag[i] * x[i];
      if (i > 0) y[i] += off[i - 1] * x[i - 1];
      if (i + 1 < n) y[i] += off[i] * x[i + 1];
    }
  };
  std::vector<cplx> b(n);
  for (auto& v : b) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  std::vector<cplx> x;
  BicgstabResult r = bicgstab(apply, diag, b, x, 1e-12, 2000);
  CHECK(r.converged);
  CHECK(r.residual <= 1e-12);

  // starved of iterations, it must report failure rather than lie
  std::vector<cplx> x2;
  BicgstabResult r2 = bicgstab(apply, diag, b, x2, 1e-14, 1);
  CHECK_FALSE(r2.converged);
  CHECK(r2.residual > 1e-14);

  std::vector<cplx> zero(n, cplx{});
  std::vector<cplx> x3;
  BicgstabResult r3 = bicgstab(apply, diag, zero, x3, 1e-12, 100);
  CHECK(r3.converged);
  for (const auto& v : x3) CHECK(std::abs(v) == 0.0);
}
