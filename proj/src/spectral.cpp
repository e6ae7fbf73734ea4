#include "twomode/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "twomode/error.hpp"

namespace twomode {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Implicit-shift QL on a real symmetric tridiagonal matrix. z[i][j] = Z(i, j),
// eigenvector j in column j; pass an empty z for eigenvalues only. On exit d
// holds the (unsorted) eigenvalues.
void ql_implicit(std::vector<double>& d, std::vector<double> off, std::vector<std::vector<double>>& zt) {
  const int n = static_cast<int>(d.size());
  if (n <= 1) return;
  // e[i] couples i and i+1; e[n-1] is a sentinel.
  std::vector<double> e(n, 0.0);
  std::copy(off.begin(), off.end(), e.begin());

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= kEps * dd) break;
      }
      if (m == l) break;
      if (iter++ == kQlSweepsPerEigenvalue)
        throw ConvergenceError("QL iteration did not converge for eigenvalue index " + std::to_string(l));

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        for (int k = 0; k < static_cast<int>(zt.size()); ++k) {
          f = zt[k][i + 1];
          zt[k][i + 1] = s * zt[k][i] + c * f;
          zt[k][i] = c * zt[k][i] - s * f;
        }
      }
      if (underflow && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

std::vector<int> ascending_order(const std::vector<double>& vals) {
  std::vector<int> idx(vals.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals[a] < vals[b]; });
  return idx;
}

void fix_phase(std::vector<cplx>& v) {
  for (const auto& c : v) {
    if (std::abs(c) > 1e-8) {
      const cplx ph = std::conj(c) / std::abs(c);
      for (auto& x : v) x *= ph;
      return;
    }
  }
}

// Diagonal unitary D with D^dag T D real: p_{i+1} = p_i * conj(t_i)/|t_i|.
std::vector<cplx> gauge_phases(std::span<const cplx> off) {
  std::vector<cplx> p(off.size() + 1, 1.0);
  for (size_t i = 0; i < off.size(); ++i) {
    const double a = std::abs(off[i]);
    p[i + 1] = a > 0.0 ? p[i] * std::conj(off[i]) / a : p[i];
  }
  return p;
}

std::pair<std::vector<double>, std::vector<std::vector<cplx>>> hermitian_tridiagonal(std::vector<double> diag,
                                                                                     std::span<const cplx> off) {
  const int n = static_cast<int>(diag.size());
  const auto phase = gauge_phases(off);
  std::vector<double> roff(off.size());
  for (size_t i = 0; i < off.size(); ++i) roff[i] = std::abs(off[i]);
  auto [vals, z] = tridiagonal_eigensystem(std::move(diag), std::move(roff));
  std::vector<std::vector<cplx>> vecs(n, std::vector<cplx>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) vecs[j][i] = phase[i] * z[j][i];
    fix_phase(vecs[j]);
  }
  return {std::move(vals), std::move(vecs)};
}

void check_finite(const CMatrix& a) {
  for (int i = 0; i < a.size(); ++i)
    for (const auto& x : a.row(i))
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw DomainError("eigensolver input contains NaN/Inf");
}

SpectralDecomposition finish(const BandedHermitian& op, std::vector<double> vals, std::vector<std::vector<cplx>> vecs,
                             double tol) {
  SpectralDecomposition dec;
  dec.residual_tol = tol;
  double radius = 0.0;
  for (double v : vals) radius = std::max(radius, std::abs(v));
  dec.spectral_radius = radius;
  const double scale = radius > 0.0 ? radius : 1.0;
  const auto np = op.particles();
  dec.eigenvalues = std::move(vals);
  dec.eigenvectors.reserve(vecs.size());
  for (size_t i = 0; i < vecs.size(); ++i) {
    DickeVector v(np, std::move(vecs[i]));
    dec.max_residual = std::max(dec.max_residual, eigen_residual(op, v, dec.eigenvalues[i]) / scale);
    dec.eigenvectors.push_back(std::move(v));
  }
  if (dec.max_residual > tol) {
    char msg[96];
    std::snprintf(msg, sizeof msg, "eigen-residual %.3e exceeds tolerance %.3e", dec.max_residual, tol);
    throw ConvergenceError(msg);
  }
  dec.degeneracy_clusters = cluster_eigenvalues(dec.eigenvalues, kClusterTol * radius);
  return dec;
}

}  // namespace

std::pair<std::vector<double>, std::vector<std::vector<double>>> tridiagonal_eigensystem(std::vector<double> diag,
                                                                                         std::vector<double> off) {
  const int n = static_cast<int>(diag.size());
  if (static_cast<int>(off.size()) != std::max(n - 1, 0)) throw DomainError("off-diagonal length must be n-1");
  for (double x : diag)
    if (!std::isfinite(x)) throw DomainError("eigensolver input contains NaN/Inf");
  for (double x : off)
    if (!std::isfinite(x)) throw DomainError("eigensolver input contains NaN/Inf");

  std::vector<std::vector<double>> zt(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) zt[i][i] = 1.0;
  ql_implicit(diag, std::move(off), zt);

  // zt[i][j] = component i of eigenvector j; regroup per eigenvector.
  const auto order = ascending_order(diag);
  std::vector<double> vals(n);
  std::vector<std::vector<double>> vecs(n, std::vector<double>(n));
  for (int jj = 0; jj < n; ++jj) {
    const int j = order[jj];
    vals[jj] = diag[j];
    for (int i = 0; i < n; ++i) vecs[jj][i] = zt[i][j];
  }
  return {std::move(vals), std::move(vecs)};
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off) {
  if (off.size() != (diag.empty() ? 0 : diag.size() - 1)) throw DomainError("off-diagonal length must be n-1");
  std::vector<std::vector<double>> none;
  ql_implicit(diag, std::move(off), none);
  std::sort(diag.begin(), diag.end());
  return diag;
}

std::pair<std::vector<double>, CMatrix> hermitian_eigensystem(const CMatrix& input) {
  check_finite(input);
  const int n = input.size();
  CMatrix a = input;
  CMatrix q = CMatrix::identity(n);

  std::vector<cplx> v(n), w(n), qv(n);
  for (int k = 0; k + 2 < n; ++k) {
    // Reflect column k below the diagonal onto alpha * e_{k+1}.
    double tail = 0.0;
    for (int i = k + 2; i < n; ++i) tail += std::norm(a(i, k));
    if (tail == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const double xnorm = std::sqrt(tail + std::norm(x0));
    const cplx ph = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx{1.0};
    const cplx alpha = -ph * xnorm;

    std::fill(v.begin(), v.end(), cplx{});
    v[k + 1] = x0 - alpha;
    for (int i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vv = 0.0;
    for (int i = k + 1; i < n; ++i) vv += std::norm(v[i]);
    const double tau = 2.0 / vv;

    // A <- A - v q^dag - q v^dag with w = tau A v, q = w - (tau/2)(v^dag w) v.
    cplx vw = 0.0;
    for (int i = k; i < n; ++i) {
      cplx acc = 0.0;
      for (int j = k + 1; j < n; ++j) acc += a(i, j) * v[j];
      w[i] = tau * acc;
    }
    for (int i = k + 1; i < n; ++i) vw += std::conj(v[i]) * w[i];
    const double kk = 0.5 * tau * vw.real();
    for (int i = k; i < n; ++i) w[i] -= kk * v[i];
    for (int i = k; i < n; ++i) {
      const cplx vi = v[i], wi = w[i];
      for (int j = k; j < n; ++j) a(i, j) -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
    }

    // Q <- Q (I - tau v v^dag)
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int j = k + 1; j < n; ++j) acc += q(i, j) * v[j];
      qv[i] = tau * acc;
    }
    for (int i = 0; i < n; ++i) {
      const cplx s = qv[i];
      for (int j = k + 1; j < n; ++j) q(i, j) -= s * std::conj(v[j]);
    }
  }

  std::vector<double> diag(n);
  std::vector<cplx> off(std::max(n - 1, 0));
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  for (int i = 0; i + 1 < n; ++i) off[i] = a(i, i + 1);

  auto [vals, tvecs] = hermitian_tridiagonal(std::move(diag), off);
  CMatrix vecs(n);
  for (int j = 0; j < n; ++j) {
    std::vector<cplx> col(n);
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      auto qi = q.row(i);
      for (int m = 0; m < n; ++m) acc += qi[m] * tvecs[j][m];
      col[i] = acc;
    }
    fix_phase(col);
    for (int i = 0; i < n; ++i) vecs(i, j) = col[i];
  }
  return {std::move(vals), std::move(vecs)};
}

SpectralDecomposition eigh(const BandedHermitian& op, double tol) {
  if (!(tol > 0.0)) throw DomainError("eigh tolerance must be positive");
  const int n = op.dim();
  if (op.effective_bandwidth() <= 1) {
    std::vector<double> diag(op.diag().begin(), op.diag().end());
    auto [vals, vecs] = hermitian_tridiagonal(std::move(diag), op.super1());
    return finish(op, std::move(vals), std::move(vecs), tol);
  }
  auto [vals, mat] = hermitian_eigensystem(op.dense());
  std::vector<std::vector<cplx>> vecs(n);
  for (int j = 0; j < n; ++j) vecs[j] = mat.column(j);
  return finish(op, std::move(vals), std::move(vecs), tol);
}

CMatrix TridiagonalBlock::dense() const {
  const int n = dim();
  CMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = off[i];
    m(i + 1, i) = std::conj(off[i]);
  }
  return m;
}

std::pair<std::vector<double>, std::vector<std::vector<cplx>>> block_eigensystem(const TridiagonalBlock& b) {
  return hermitian_tridiagonal(b.diag, b.off);
}

ParityBlocks parity_split(const BandedHermitian& op) {
  if (op.effective_bandwidth() == 1)
    throw DomainError("parity_split requires an operator without nearest-neighbour (k <-> k+1) couplings");
  const int n = op.particles().value();
  ParityBlocks blocks{{}, {}, {}, {}, op.particles()};
  for (int parity = 0; parity < 2; ++parity) {
    auto& blk = parity == 0 ? blocks.even : blocks.odd;
    auto& idx = parity == 0 ? blocks.even_index : blocks.odd_index;
    for (int k = parity; k <= n; k += 2) {
      idx.push_back(k);
      blk.diag.push_back(op.diag()[k]);
      if (k + 2 <= n) blk.off.push_back(op.super2()[k]);
    }
  }
  return blocks;
}

DickeVector embed(const ParityBlocks& blocks, bool even, const DickeVector& block_vector) {
  const auto& idx = even ? blocks.even_index : blocks.odd_index;
  if (block_vector.dim() != static_cast<int>(idx.size()))
    throw DomainError("block vector length does not match parity block");
  std::vector<cplx> full(blocks.parent.dim());
  for (size_t j = 0; j < idx.size(); ++j) full[idx[j]] = block_vector[static_cast<int>(j)];
  return {blocks.parent, std::move(full)};
}

SpectralDecomposition eigh_by_parity(const BandedHermitian& op, double tol) {
  if (!(tol > 0.0)) throw DomainError("eigh tolerance must be positive");
  const auto blocks = parity_split(op);
  std::vector<double> vals;
  std::vector<std::vector<cplx>> vecs;
  const int dim = op.dim();
  for (int parity = 0; parity < 2; ++parity) {
    const auto& blk = parity == 0 ? blocks.even : blocks.odd;
    const auto& idx = parity == 0 ? blocks.even_index : blocks.odd_index;
    if (blk.dim() == 0) continue;
    auto [bv, bvecs] = block_eigensystem(blk);
    for (size_t j = 0; j < bv.size(); ++j) {
      std::vector<cplx> full(dim);
      for (size_t i = 0; i < idx.size(); ++i) full[idx[i]] = bvecs[j][i];
      vals.push_back(bv[j]);
      vecs.push_back(std::move(full));
    }
  }
  // Cross-parity pairs closer than roundoff are unresolved ties; the even
  // member goes first.
  auto order = ascending_order(vals);
  const int n_even = blocks.even.dim();
  double radius = 0.0;
  for (double x : vals) radius = std::max(radius, std::abs(x));
  const double tie = 16.0 * std::numeric_limits<double>::epsilon() * radius;
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    const int a = order[i], b = order[i + 1];
    if (a >= n_even && b < n_even && vals[b] - vals[a] <= tie) {
      std::swap(order[i], order[i + 1]);
      ++i;
    }
  }
  std::vector<double> svals;
  std::vector<std::vector<cplx>> svecs;
  for (int i : order) {
    svals.push_back(vals[i]);
    svecs.push_back(std::move(vecs[i]));
  }
  // A swapped tie may leave its two values out of order by a few ulps.
  std::sort(svals.begin(), svals.end());
  return finish(op, std::move(svals), std::move(svecs), tol);
}

std::vector<GapPair> gap_pairs(const SpectralDecomposition& dec) {
  const auto& e = dec.eigenvalues;
  const int dim = static_cast<int>(e.size());
  std::vector<GapPair> out;
  for (int n = 1; 2 * n <= dim; ++n) {
    GapPair g{n, e[2 * n - 1] - e[2 * n - 2], std::nullopt};
    if (2 * n < dim) g.interpair = e[2 * n] - e[2 * n - 1];
    out.push_back(g);
  }
  return out;
}

double eigen_residual(const BandedHermitian& op, const DickeVector& v, double lambda) {
  auto av = apply(op, v);
  for (int k = 0; k < v.dim(); ++k) av[k] -= lambda * v[k];
  return norm2(av);
}

DickeVector appendix_partner(const DickeVector& v, double lambda) {
  const auto np = v.particles();
  const int n = np.value();
  if (np.is_even()) throw DomainError("partner construction needs odd N, got N=" + std::to_string(n));
  const auto pair = build_term(np, Term::Pair);
  const double scale = std::max(1.0, static_cast<double>(n) * n);
  const double res = eigen_residual(pair, v, lambda);
  if (res > 1e-8 * scale)
    throw DomainError("input is not a pair-operator eigenvector (residual " + std::to_string(res) + ")");
  std::vector<cplx> p(np.dim());
  for (int k = 0; k <= n; ++k) {
    const cplx c = std::conj(v[n - k]);
    p[k] = k % 2 == 1 ? c : -c;
  }
  return {np, std::move(p)};
}

std::vector<IndexRange> cluster_eigenvalues(const std::vector<double>& ascending, double abs_tol) {
  std::vector<IndexRange> out;
  const int n = static_cast<int>(ascending.size());
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || ascending[i] - ascending[i - 1] > abs_tol) {
      if (n > 0) out.push_back({start, i - 1});
      start = i;
    }
  }
  return out;
}

}  // namespace twomode
