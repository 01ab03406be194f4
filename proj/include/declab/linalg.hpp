#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "declab/error.hpp"

namespace declab {

using cplx = std::complex<double>;

// Banded complex-symmetric LDL^T without pivoting. Column j stores
// A(j..j+b, j) contiguously. Throws Error(SolverStagnated) on a small pivot;
// callers fall back to the pivoted LU below.
class BandedLdlt {
public:
  // band: (b+1) x n, band[j*(b+1)+i] = A(j+i, j); consumed in place.
  static BandedLdlt factor(long n, long bandwidth, std::vector<cplx> band);

  void solve_in_place(std::vector<cplx>& rhs) const;

  long size() const { return n_; }

private:
  BandedLdlt() = default;
  long n_ = 0, b_ = 0;
  std::vector<cplx> band_; // multipliers below D on the factored columns
  std::vector<cplx> diag_;
};

// General banded LU with partial pivoting (LAPACK gbtrf layout).
class BandedLu {
public:
  // get(i, j) returns A(i, j); only |i-j| <= kl/ku is ever queried.
  static BandedLu factor(long n, long kl, long ku,
                         const std::function<cplx(long, long)>& get);

  void solve_in_place(std::vector<cplx>& rhs) const;

  long size() const { return n_; }

private:
  BandedLu() = default;
  long n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<cplx> ab_;
  std::vector<long> ipiv_;
};

struct BicgstabResult {
  bool converged = false;
  long iterations = 0;
  double residual = 0.0; // relative, true residual
};

// Matrix-free BiCGStab with diagonal (Jacobi) preconditioning.
BicgstabResult bicgstab(const std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>& apply,
                        const std::vector<cplx>& diag, const std::vector<cplx>& rhs,
                        std::vector<cplx>& x, double tol, long max_iter);

} // namespace declab
