#pragma once

// Pure-state quantum Fisher information, the optimal projective measurement,
// fragmentation and the QFI-gap bound.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "twomode/dicke.hpp"
#include "twomode/spectral.hpp"

namespace twomode {

struct SpectrumBounds {
  double lambda_min;
  double lambda_max;
  double norm() const;  // max(|lambda_min|, |lambda_max|)
  double qfi_max() const { return (lambda_max - lambda_min) * (lambda_max - lambda_min); }
};

// Extremal eigenvalues by the cheapest exact route for the operator's shape.
SpectrumBounds spectrum_bounds(const BandedHermitian& op);

struct QFIReport {
  int N = 0;
  std::string generator;
  double mean = 0.0;
  double variance = 0.0;
  double qfi = 0.0;  // 4 Var(A)
  std::optional<SpectrumBounds> bounds;

  // Single-shot-per-run Cramer-Rao bound 1/(nu F).
  double qcr(double nu) const;
  std::optional<double> generator_norm() const;
};

QFIReport qfi_pure(const DickeVector& v, const BandedHermitian& a, std::string generator_name = {},
                   bool with_bounds = false);

// exp(-i theta A) v through the eigendecomposition of A.
DickeVector evolve(const BandedHermitian& a, const DickeVector& v, double theta);

struct SLDMeasurement {
  CMatrix sld;                               // 2i(|v><v|A - A|v><v|)
  std::array<double, 2> eigenvalues;         // +2 dA, -2 dA
  std::array<DickeVector, 2> projectors;     // matching eigenvectors
};

// Rank-two symmetric logarithmic derivative for a pure probe. Throws
// DomainError when Var(A) < 1e-12 (the probe carries no phase information).
SLDMeasurement sld(const DickeVector& v, const BandedHermitian& a);

// Im <v|A_i A_j|v>; all zero iff the generators admit a common optimal
// measurement on this probe.
std::vector<std::vector<double>> multiparam_compatible(const DickeVector& v,
                                                       const std::vector<BandedHermitian>& ops);

struct FragmentationReport {
  std::array<std::array<cplx, 2>, 2> opdm;  // <a_mu+ a_nu>
  std::array<double, 3> jvec;               // <Jx>, <Jy>, <Jz>
  std::array<double, 2> opdm_eigenvalues;   // ascending
  double fd = 0.0;                          // 1 - 2|j|/N
};

FragmentationReport fragmentation(const DickeVector& v);

struct GapBound {
  double lhs = 0.0;  // Var_true - Var_var
  double rhs = 0.0;  // ||A||^2 (1 - |<true|var>|^2)
  double norm = 0.0;
  bool precondition_ok = true;  // <var|A|var> == 0 within 1e-8 ||A||
};

GapBound qfi_gap_bound(const DickeVector& psi_true, const DickeVector& psi_var, const BandedHermitian& a);

// (1 - xA/F) / (1 - xB/F): ratio of run counts needed by two probes with
// QFI deficits xA and xB below F.
double run_ratio(double xa, double xb, double fmax);

// Closed form for the pair-operator variance of psi4 at even N.
double closed_form_psi4_variance(ParticleNumber n);

}  // namespace twomode
