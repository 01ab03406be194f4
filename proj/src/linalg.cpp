#include "declab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace declab {

namespace {
constexpr const char* kModule = "resolvent-lab";

double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }
} // namespace

BandedLdlt BandedLdlt::factor(long n, long bandwidth, std::vector<cplx> band) {
  const long b = bandwidth;
  if (static_cast<long>(band.size()) != n * (b + 1))
    throw Error(Errc::ShapeMismatch, kModule, "band storage size mismatch");

  double scale = 0.0;
  for (long j = 0; j < n; ++j) scale = std::max(scale, std::abs(band[j * (b + 1)]));
  const double tiny = 1e-14 * scale;

  std::vector<cplx> orig(static_cast<std::size_t>(b) + 1);
  BandedLdlt f;
  f.n_ = n;
  f.b_ = b;
  f.diag_.resize(n);

  for (long j = 0; j < n; ++j) {
    cplx* col = band.data() + j * (b + 1);
    cplx d = col[0];
    if (std::abs(d) <= tiny)
      throw Error(Errc::SolverStagnated, kModule,
                  "LDL^T pivot too small at column " + std::to_string(j));
    f.diag_[j] = d;
    long w = std::min(b, n - 1 - j);
    for (long i = 1; i <= w; ++i) {
      orig[i] = col[i];
      col[i] /= d;
    }
    for (long c = 1; c <= w; ++c) {
      const cplx vc = orig[c]; // = L(j+c,j) * d
      cplx* colc = band.data() + (j + c) * (b + 1);
      const cplx* l = col + c;
      const long len = w - c;
      for (long r = 0; r <= len; ++r) colc[r] -= l[r] * vc;
    }
  }
  f.band_ = std::move(band);
  return f;
}

void BandedLdlt::solve_in_place(std::vector<cplx>& rhs) const {
  if (static_cast<long>(rhs.size()) != n_)
    throw Error(Errc::ShapeMismatch, kModule, "rhs size mismatch");
  const long b = b_, n = n_;
  // L z = f
  for (long j = 0; j < n; ++j) {
    const cplx zj = rhs[j];
    if (zj == cplx{}) continue;
    const cplx* col = band_.data() + j * (b + 1);
    long w = std::min(b, n - 1 - j);
    for (long i = 1; i <= w; ++i) rhs[j + i] -= col[i] * zj;
  }
  // D
  for (long j = 0; j < n; ++j) rhs[j] /= diag_[j];
  // L^T x = z
  for (long j = n - 1; j >= 0; --j) {
    const cplx* col = band_.data() + j * (b + 1);
    long w = std::min(b, n - 1 - j);
    cplx acc = rhs[j];
    for (long i = 1; i <= w; ++i) acc -= col[i] * rhs[j + i];
    rhs[j] = acc;
  }
}

BandedLu BandedLu::factor(long n, long kl, long ku,
                          const std::function<cplx(long, long)>& get) {
  BandedLu f;
  f.n_ = n;
  f.kl_ = kl;
  f.ku_ = ku;
  f.ldab_ = 2 * kl + ku + 1;
  f.ab_.assign(static_cast<std::size_t>(f.ldab_) * n, cplx{});
  f.ipiv_.resize(n);
  auto ab = [&](long i, long j) -> cplx& { return f.ab_[j * f.ldab_ + (kl + ku + i - j)]; };

  for (long j = 0; j < n; ++j)
    for (long i = std::max<long>(0, j - ku); i <= std::min(n - 1, j + kl); ++i)
      ab(i, j) = get(i, j);

  for (long j = 0; j < n; ++j) {
    long kmax = std::min(kl, n - 1 - j);
    long p = 0;
    double best = std::abs(ab(j, j));
    for (long k = 1; k <= kmax; ++k) {
      double v = std::abs(ab(j + k, j));
      if (v > best) {
        best = v;
        p = k;
      }
    }
    if (best == 0.0)
      throw Error(Errc::SolverStagnated, kModule, "singular pivot in banded LU");
    f.ipiv_[j] = j + p;
    long jmax = std::min(j + kl + ku, n - 1);
    if (p != 0)
      for (long c = j; c <= jmax; ++c) std::swap(ab(j, c), ab(j + p, c));
    cplx piv = ab(j, j);
    for (long k = 1; k <= kmax; ++k) ab(j + k, j) /= piv;
    for (long c = j + 1; c <= jmax; ++c) {
      cplx up = ab(j, c);
      if (up == cplx{}) continue;
      for (long k = 1; k <= kmax; ++k) ab(j + k, c) -= ab(j + k, j) * up;
    }
  }
  return f;
}

void BandedLu::solve_in_place(std::vector<cplx>& rhs) const {
  if (static_cast<long>(rhs.size()) != n_)
    throw Error(Errc::ShapeMismatch, kModule, "rhs size mismatch");
  auto ab = [&](long i, long j) -> const cplx& {
    return ab_[j * ldab_ + (kl_ + ku_ + i - j)];
  };
  for (long j = 0; j < n_; ++j) {
    if (ipiv_[j] != j) std::swap(rhs[j], rhs[ipiv_[j]]);
    const cplx zj = rhs[j];
    if (zj == cplx{}) continue;
    long kmax = std::min(kl_, n_ - 1 - j);
    for (long k = 1; k <= kmax; ++k) rhs[j + k] -= ab(j + k, j) * zj;
  }
  for (long i = n_ - 1; i >= 0; --i) {
    cplx acc = rhs[i];
    long cmax = std::min(i + kl_ + ku_, n_ - 1);
    for (long c = i + 1; c <= cmax; ++c) acc -= ab(i, c) * rhs[c];
    rhs[i] = acc / ab(i, i);
  }
}

BicgstabResult bicgstab(const std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>& apply,
                        const std::vector<cplx>& diag, const std::vector<cplx>& rhs,
                        std::vector<cplx>& x, double tol, long max_iter) {
  const std::size_t n = rhs.size();
  auto dot = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s{};
    for (std::size_t i = 0; i < n; ++i) s += std::conj(a[i]) * b[i];
    return s;
  };
  auto nrm = [&](const std::vector<cplx>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += abs2(a[i]);
    return std::sqrt(s);
  };
  auto precond = [&](std::vector<cplx>& v) {
    for (std::size_t i = 0; i < n; ++i) v[i] /= diag[i];
  };

  BicgstabResult res;
  double bnorm = nrm(rhs);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), cplx{});
    res.converged = true;
    return res;
  }
  x.assign(n, cplx{});
  std::vector<cplx> r = rhs, r0 = rhs, p(n), v(n), s(n), t(n), y(n), z(n);
  cplx rho = 1.0, alpha = 1.0, omega = 1.0;
  for (long it = 1; it <= max_iter; ++it) {
    cplx rho1 = dot(r0, r);
    if (std::abs(rho1) < 1e-290) break;
    if (it == 1) {
      p = r;
    } else {
      cplx beta = (rho1 / rho) * (alpha / omega);
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    }
    rho = rho1;
    y = p;
    precond(y);
    apply(y, v);
    alpha = rho1 / dot(r0, v);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    if (nrm(s) <= tol * bnorm) {
      for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
      res.iterations = it;
      break;
    }
    z = s;
    precond(z);
    apply(z, t);
    omega = dot(t, s) / dot(t, t);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * y[i] + omega * z[i];
      r[i] = s[i] - omega * t[i];
    }
    res.iterations = it;
    if (nrm(r) <= tol * bnorm) break;
    if (std::abs(omega) < 1e-290) break;
  }
  apply(x, t);
  double rr = 0.0;
  for (std::size_t i = 0; i < n; ++i) rr += abs2(rhs[i] - t[i]);
  res.residual = std::sqrt(rr) / bnorm;
  res.converged = res.residual <= tol;
  return res;
}

} // namespace declab
