#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "declab/domain.hpp"
#include "declab/linalg.hpp"
#include "declab/parallel.hpp"

namespace declab {

// Discretization of  -lap_h w + alpha w + beta a w  on interior nodes with
// Dirichlet elimination. The Helmholtz form uses alpha = -s^2, beta = i s;
// the semigroup resolvent uses alpha = lambda^2, beta = lambda.
struct HelmholtzSystem {
  const GridMask* grid = nullptr;
  double s = 0.0; // set for the Helmholtz form
  cplx alpha{}, beta{};
  long n = 0;
  long bandwidth = 0;
  std::vector<long> node_of;                // unknown -> grid node
  std::vector<long> unk_of;                 // grid node -> unknown (-1 outside)
  std::vector<std::array<long, 4>> nbr;     // neighbor unknowns (-1 absent)
  std::vector<cplx> diag;
  double inv_h2 = 0.0;

  void apply(const std::vector<cplx>& x, std::vector<cplx>& y) const;
  std::vector<cplx> lower_band() const; // (bandwidth+1) x n LDL^T storage
};

// Reduced-equation operator  -lap_h - s^2 + i s a.
HelmholtzSystem assemble(const GridMask& g, const Field& a, double s);

// Operator  -lap_h + lambda^2 + lambda a  (the resolvent of the damped wave
// generator acts through it).
HelmholtzSystem assemble_general(const GridMask& g, const Field& a, cplx lambda);

struct SolveInfo {
  std::string method; // "ldlt", "banded-lu", "bicgstab"
  long iterations = 0;
  double residual = 0.0; // relative, true residual
};

// Direct banded solve below direct_limit unknowns, BiCGStab above. Residual
// is always verified a posteriori; Error(SolverStagnated) otherwise.
CField solve(const HelmholtzSystem& sys, const CField& rhs, double tol = 1e-10,
             SolveInfo* info = nullptr, long direct_limit = 200000);
CField solve(const HelmholtzSystem& sys, const Field& rhs, double tol = 1e-10,
             SolveInfo* info = nullptr, long direct_limit = 200000);

// Complex-field quadrature helpers (sum h^N ...).
double cfield_norm_sq(const CField& w, const GridMask& g);
double cfield_grad_norm_sq(const CField& w, const GridMask& g);
cplx cfield_inner(const CField& f, const CField& w, const GridMask& g); // sum f conj(w) h^N

// | (||grad w||^2 - s^2 ||w||^2 + i s sum a|w|^2) - <F,w> |, the discrete
// counterpart of multiplying the reduced equation by conj(w).
double quadform_residual(const GridMask& g, const Field& a, double s, const CField& w,
                         const CField& F);

enum class RhsFamily { Bump, Spread, RandomBumps };

CField make_rhs(RhsFamily family, const DomainSpec& spec, const GridMask& g, std::uint64_t seed,
                int sample_index);

struct ResolventSample {
  double s = 0.0;
  double norm_w = 0.0, norm_gradw = 0.0, norm_f = 0.0;
  double h1_ratio = 0.0; // (||grad w||^2 + ||w||^2) / ||F||^2
  double hf_ratio = 0.0; // s ||w|| / ||F||
  double quadform_resid = 0.0;
  double residual = 0.0;
  long iterations = 0;
  std::string method;
  bool converged = false;
};

struct FrequencyBand {
  double s_min = 0.0, s_max = 0.0;
  int n_samples = 0;
  bool operator==(const FrequencyBand&) const = default;
};

std::vector<ResolventSample> sweep_band(const GridMask& g, const DomainSpec& spec,
                                        const Field& a, const FrequencyBand& band,
                                        RhsFamily family, std::uint64_t seed, double tol,
                                        ThreadPool* pool = nullptr);

struct LowFreqSample {
  double beta = 0.0, s = 0.0;
  double energy_norm = 0.0; // ||grad_h(chi U1)|| + ||chi U2||
  bool converged = false;
};

struct LowFreqProbe {
  std::vector<LowFreqSample> samples;
  std::vector<double> max_per_beta; // max over s, in the order of betas
  bool bounded = true;              // max grows < 2x per beta halving
};

struct SweepReport {
  std::vector<ResolventSample> intermediate, high;
  double sup_h1_intermediate = 0.0;
  double sup_hf_high = 0.0;
  bool all_converged = true;
  LowFreqProbe low_freq; // empty unless probed
  // The smoothness-class norm behind the low-frequency statement is not
  // computed; only pointwise boundedness in lambda is sampled.
  std::string notes = "low-frequency check samples pointwise boundedness only";
};

struct BlockResolventResult {
  CField u1, u2;
  double residual = 0.0; // relative block residual of (lambda - B_a) U = f
  SolveInfo info;
};

// (lambda I - B_a)^{-1} (f1, f2) through the scalar resolvent:
//   U1 = R_a(lambda)((lambda + a) f1 + f2),  U2 = lambda U1 - f1.
BlockResolventResult block_resolvent_apply(const GridMask& g, const Field& a, cplx lambda,
                                           const Field& f1, const Field& f2, double tol = 1e-10);

LowFreqProbe low_freq_probe(const GridMask& g, const DomainSpec& spec, const Field& a,
                            const Field& f1, const Field& f2,
                            const std::vector<double>& betas, int n_s, double delta,
                            double chi_radius, double tol = 1e-10, ThreadPool* pool = nullptr);

} // namespace declab
