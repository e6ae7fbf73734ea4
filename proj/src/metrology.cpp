#include "twomode/metrology.hpp"

#include <algorithm>
#include <cmath>

#include "twomode/error.hpp"
#include "twomode/states.hpp"

namespace twomode {

namespace {

// cos(j pi / 4) without rounding noise.
double cos_quarter_pi(long long j) {
  static constexpr double r = 0.70710678118654752440;
  static constexpr double table[8] = {1.0, r, 0.0, -r, -1.0, -r, 0.0, r};
  return table[((j % 8) + 8) % 8];
}

std::vector<double> abs_off(std::span<const cplx> off) {
  std::vector<double> r(off.size());
  for (size_t i = 0; i < off.size(); ++i) r[i] = std::abs(off[i]);
  return r;
}

void require_same(const DickeVector& v, const BandedHermitian& a) {
  if (v.particles() != a.particles()) throw DimensionMismatch(a.particles().value(), v.particles().value());
}

}  // namespace

double SpectrumBounds::norm() const { return std::max(std::abs(lambda_min), std::abs(lambda_max)); }

SpectrumBounds spectrum_bounds(const BandedHermitian& op) {
  std::vector<double> vals;
  const int bw = op.effective_bandwidth();
  if (bw <= 1) {
    // A Hermitian tridiagonal matrix is unitarily similar to the real one
    // carrying |off| on its off-diagonal.
    vals = tridiagonal_eigenvalues(std::vector<double>(op.diag().begin(), op.diag().end()), abs_off(op.super1()));
  } else {
    bool no_nn = std::all_of(op.super1().begin(), op.super1().end(), [](cplx c) { return c == 0.0; });
    if (no_nn) {
      const auto blocks = parity_split(op);
      for (const auto* b : {&blocks.even, &blocks.odd}) {
        if (b->dim() == 0) continue;
        auto v = tridiagonal_eigenvalues(b->diag, abs_off(b->off));
        vals.insert(vals.end(), v.begin(), v.end());
      }
    } else {
      vals = hermitian_eigensystem(op.dense()).first;
    }
  }
  const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
  return {*lo, *hi};
}

double QFIReport::qcr(double nu) const {
  if (!(nu > 0.0)) throw DomainError("number of runs must be positive");
  if (!(qfi > 0.0)) throw DomainError("QFI is zero: no finite Cramer-Rao bound");
  return 1.0 / (nu * qfi);
}

std::optional<double> QFIReport::generator_norm() const {
  if (!bounds) return std::nullopt;
  return bounds->norm();
}

QFIReport qfi_pure(const DickeVector& v, const BandedHermitian& a, std::string generator_name, bool with_bounds) {
  require_same(v, a);
  QFIReport r;
  r.N = v.particles().value();
  r.generator = std::move(generator_name);
  r.mean = expectation(a, v);
  r.variance = variance(a, v);
  r.qfi = 4.0 * r.variance;
  if (with_bounds) r.bounds = spectrum_bounds(a);
  return r;
}

DickeVector evolve(const BandedHermitian& a, const DickeVector& v, double theta) {
  require_same(v, a);
  const auto dec = eigh(a);
  std::vector<cplx> out(v.dim(), 0.0);
  for (int j = 0; j < dec.size(); ++j) {
    const auto& e = dec.eigenvectors[j];
    const cplx c = inner(e, v) * std::polar(1.0, -theta * dec.eigenvalues[j]);
    for (int k = 0; k < v.dim(); ++k) out[k] += c * e[k];
  }
  return {v.particles(), std::move(out)};
}

SLDMeasurement sld(const DickeVector& v, const BandedHermitian& a) {
  require_same(v, a);
  const double var = variance(a, v);
  if (var < 1e-12) throw DomainError("degenerate probe: Var(A) is zero, no SLD measurement");
  const double mean = expectation(a, v);
  const double delta = std::sqrt(var);
  const int n = v.dim();
  const auto av = apply(a, v);

  // u = (A - <A>) v / dA is orthonormal to v; on span{v, u} the SLD is
  // 2 i dA (|v><u| - |u><v|).
  std::vector<cplx> u(n);
  for (int k = 0; k < n; ++k) u[k] = (av[k] - mean * v[k]) / delta;

  CMatrix l(n);
  const cplx i2{0.0, 2.0};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) l(r, c) = i2 * (v[r] * std::conj(av[c]) - av[r] * std::conj(v[c]));

  std::vector<cplx> plus(n), minus(n);
  const cplx i1{0.0, 1.0};
  for (int k = 0; k < n; ++k) {
    plus[k] = v[k] - i1 * u[k];
    minus[k] = v[k] + i1 * u[k];
  }
  return SLDMeasurement{std::move(l),
                        {2.0 * delta, -2.0 * delta},
                        {DickeVector(v.particles(), std::move(plus)), DickeVector(v.particles(), std::move(minus))}};
}

std::vector<std::vector<double>> multiparam_compatible(const DickeVector& v, const std::vector<BandedHermitian>& ops) {
  std::vector<std::vector<cplx>> images;
  images.reserve(ops.size());
  for (const auto& op : ops) {
    require_same(v, op);
    images.push_back(apply(op, v));
  }
  const size_t m = ops.size();
  std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) out[i][j] = i == j ? 0.0 : dot(images[i], images[j]).imag();
  return out;
}

FragmentationReport fragmentation(const DickeVector& v) {
  const int N = v.particles().value();
  double n0 = 0.0, n1 = 0.0;
  cplx r01 = 0.0;  // <a0+ a1>
  for (int k = 0; k <= N; ++k) {
    const double p = std::norm(v[k]);
    n0 += p * (N - k);
    n1 += p * k;
    // a0+ a1 |N-k, k> = sqrt((N-k+1) k) |N-k+1, k-1>
    if (k >= 1) r01 += std::conj(v[k - 1]) * std::sqrt(double(N - k + 1) * k) * v[k];
  }
  FragmentationReport f;
  f.opdm = {{{n0, r01}, {std::conj(r01), n1}}};
  f.jvec = {r01.real(), -r01.imag(), 0.5 * (n1 - n0)};
  const double jn = std::sqrt(f.jvec[0] * f.jvec[0] + f.jvec[1] * f.jvec[1] + f.jvec[2] * f.jvec[2]);
  const double half_tr = 0.5 * (n0 + n1);
  f.opdm_eigenvalues = {half_tr - jn, half_tr + jn};
  f.fd = std::clamp(1.0 - 2.0 * jn / N, 0.0, 1.0);
  return f;
}

GapBound qfi_gap_bound(const DickeVector& psi_true, const DickeVector& psi_var, const BandedHermitian& a) {
  require_same(psi_true, a);
  require_same(psi_var, a);
  GapBound g;
  g.norm = spectrum_bounds(a).norm();
  g.lhs = variance(a, psi_true) - variance(a, psi_var);
  g.rhs = g.norm * g.norm * (1.0 - fidelity(psi_true, psi_var));
  g.precondition_ok = std::abs(expectation(a, psi_var)) <= 1e-8 * std::max(g.norm, 1.0);
  return g;
}

double run_ratio(double xa, double xb, double fmax) {
  if (!std::isfinite(xa) || !std::isfinite(xb) || !std::isfinite(fmax)) throw DomainError("non-finite run_ratio input");
  if (fmax == 0.0) throw DomainError("run_ratio: F_max is zero");
  const double den = 1.0 - xb / fmax;
  if (den == 0.0) throw DomainError("run_ratio: x_B equals F_max");
  return (1.0 - xa / fmax) / den;
}

double closed_form_psi4_variance(ParticleNumber n) {
  if (!n.is_even()) throw DomainError("closed form holds for even N only");
  const double N = n.value();
  const double s = std::ldexp(1.0, -n.value() / 2 + 1);
  const double den = 1.0 + s * cos_quarter_pi(n.value());
  if (den == 0.0) throw DomainError("closed form denominator vanishes");
  const double lead = N * (N - 1) * (N - 2) * (N - 3) / 4.0;
  return (lead - s * (N - 1) * (N - 2) * (N - 3) * cos_quarter_pi(n.value() - 4)) / den;
}

}  // namespace twomode
