#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "twomode/dicke.hpp"

namespace twomode {

inline constexpr double kDefaultResidualTol = 1e-10;
// Relative to the spectral radius.
inline constexpr double kClusterTol = 1e-10;
inline constexpr int kQlSweepsPerEigenvalue = 64;

struct IndexRange {
  int first;
  int last;  // inclusive
  int size() const { return last - first + 1; }
};

// Ascending eigenvalues with orthonormal, phase-fixed eigenvectors: the first
// component of magnitude above 1e-8 is real positive.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  std::vector<DickeVector> eigenvectors;
  double residual_tol = kDefaultResidualTol;
  double spectral_radius = 0.0;
  double max_residual = 0.0;  // max_i ||A v_i - l_i v_i|| / ||A||
  std::vector<IndexRange> degeneracy_clusters;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Dense complex Hermitian eigensolver. Householder reduction to Hermitian
// tridiagonal form, a diagonal unitary gauge to make it real symmetric, then
// implicit-shift QL. Returns ascending eigenvalues and eigenvectors as columns.
// Throws ConvergenceError naming the eigenvalue index that failed.
std::pair<std::vector<double>, CMatrix> hermitian_eigensystem(const CMatrix& a);

// Same, but for a real symmetric tridiagonal matrix given by its diagonal and
// off-diagonal (off[i] couples i and i+1).
std::pair<std::vector<double>, std::vector<std::vector<double>>> tridiagonal_eigensystem(std::vector<double> diag,
                                                                                         std::vector<double> off);

// Ascending eigenvalues only.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off);

SpectralDecomposition eigh(const BandedHermitian& op, double tol = kDefaultResidualTol);

// Hermitian tridiagonal block; off[j] = <j|B|j+1>.
struct TridiagonalBlock {
  std::vector<double> diag;
  std::vector<cplx> off;

  int dim() const { return static_cast<int>(diag.size()); }
  CMatrix dense() const;
};

// Eigenpairs of a Hermitian tridiagonal block, ascending; vectors are unit
// norm and phase-fixed.
std::pair<std::vector<double>, std::vector<std::vector<cplx>>> block_eigensystem(const TridiagonalBlock& b);

// Even-k and odd-k sub-blocks of an operator that couples k only to k and k+-2.
// Inside a block the k <-> k+2 coupling becomes nearest-neighbour.
struct ParityBlocks {
  TridiagonalBlock even;
  TridiagonalBlock odd;
  std::vector<int> even_index;  // block index -> Dicke index k
  std::vector<int> odd_index;
  ParticleNumber parent;
};

ParityBlocks parity_split(const BandedHermitian& op);

// Lift a block vector back into the full Dicke space.
DickeVector embed(const ParityBlocks& blocks, bool even, const DickeVector& block_vector);

// Parity-resolved decomposition: eigenpairs of both blocks embedded back into
// the full space, merged in ascending order. Every eigenvector has definite
// parity, which keeps near-degenerate even/odd pairs from mixing. Pairs of
// opposite parity within 16 ulps of the spectral radius list the even member
// first.
SpectralDecomposition eigh_by_parity(const BandedHermitian& op, double tol = kDefaultResidualTol);

// Gaps for the n-th eigenvalue pair (E_{2n-1}, E_{2n}), 1-based labels.
struct GapPair {
  int n;
  double intrapair;                 // E_{2n} - E_{2n-1}
  std::optional<double> interpair;  // E_{2n+1} - E_{2n}, absent past the top
};

// n = 1..floor(dim/2).
std::vector<GapPair> gap_pairs(const SpectralDecomposition& dec);

// For odd N, the degenerate partner of a pair-operator eigenvector:
// C'_k = conj(C_{N-k}) for k odd, -conj(C_{N-k}) for k even.
DickeVector appendix_partner(const DickeVector& v, double lambda);

// ||A v - lambda v||_2
double eigen_residual(const BandedHermitian& op, const DickeVector& v, double lambda);

std::vector<IndexRange> cluster_eigenvalues(const std::vector<double>& ascending, double abs_tol);

}  // namespace twomode
