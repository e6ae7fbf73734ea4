#include "twomode/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "twomode/error.hpp"

namespace twomode {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double log_binom(int n, int k) { return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0); }

cplx ipow(cplx z, int p) {
  cplx r = 1.0;
  for (int i = 0; i < p; ++i) r *= z;
  return r;
}

// Combine log-magnitude / phase pairs into amplitudes without overflow.
std::vector<cplx> from_log_terms(const std::vector<double>& logmag, const std::vector<cplx>& phase_sum) {
  // phase_sum[k] already carries magnitudes relative to exp(logmag[k]).
  double top = -std::numeric_limits<double>::infinity();
  for (double l : logmag) top = std::max(top, l);
  std::vector<cplx> out(logmag.size());
  for (size_t k = 0; k < logmag.size(); ++k) {
    if (std::isinf(logmag[k])) continue;
    out[k] = phase_sum[k] * std::exp(logmag[k] - top);
  }
  return out;
}

enum class JParity { Any, Even, Odd };

// Dicke amplitudes of (x^2 + b xy + q y^2)^M with x = a0+, y = a1+, acting on
// vacuum; the coefficient of x^{N-k} y^k picks up sqrt((N-k)! k!).
std::vector<cplx> trinomial_amplitudes(ParticleNumber n, cplx b, cplx q, JParity filter) {
  if (!n.is_even()) throw DomainError("pair-creation states need even N, got N=" + std::to_string(n.value()));
  const int N = n.value();
  const int M = N / 2;
  const double lb = std::abs(b) > 0 ? std::log(std::abs(b)) : 0.0;
  const double lq = std::abs(q) > 0 ? std::log(std::abs(q)) : 0.0;
  const double ab = std::arg(b);
  const double aq = std::arg(q);
  const double lgM = std::lgamma(M + 1.0);

  // Per-k running sum: keep the largest log term as the reference scale.
  std::vector<double> ref(N + 1, -std::numeric_limits<double>::infinity());
  std::vector<cplx> acc(N + 1, 0.0);
  for (int l = 0; l <= M; ++l) {
    if (l > 0 && std::abs(q) == 0.0) break;
    for (int j = 0; j + l <= M; ++j) {
      if (j > 0 && std::abs(b) == 0.0) break;
      if (filter == JParity::Even && j % 2 != 0) continue;
      if (filter == JParity::Odd && j % 2 == 0) continue;
      const int i = M - j - l;
      const int k = j + 2 * l;
      const double lt = lgM - std::lgamma(i + 1.0) - std::lgamma(j + 1.0) - std::lgamma(l + 1.0) + j * lb + l * lq +
                        0.5 * (std::lgamma(N - k + 1.0) + std::lgamma(k + 1.0));
      const cplx ph = std::polar(1.0, j * ab + l * aq);
      if (lt > ref[k]) {
        acc[k] = acc[k] * std::exp(ref[k] - lt) + ph;
        ref[k] = lt;
      } else {
        acc[k] += ph * std::exp(lt - ref[k]);
      }
    }
  }
  return from_log_terms(ref, acc);
}

std::vector<cplx> raise_all(ParticleNumber n, std::vector<cplx> v, int times) {
  const int N = n.value();
  for (int t = 0; t < times; ++t) {
    std::vector<cplx> out(v.size(), 0.0);
    for (int k = 0; k < N; ++k) out[k + 1] = std::sqrt(double(N - k) * (k + 1)) * v[k];
    v = std::move(out);
  }
  return v;
}

std::vector<cplx> lower_all(ParticleNumber n, std::vector<cplx> v, int times) {
  const int N = n.value();
  for (int t = 0; t < times; ++t) {
    std::vector<cplx> out(v.size(), 0.0);
    for (int k = 1; k <= N; ++k) out[k - 1] = std::sqrt(double(N - k + 1) * k) * v[k];
    v = std::move(out);
  }
  return v;
}

// d^m/dx^m d^p/dy^p (1 + x y)^N at (x, y).
cplx derivative_poly(int N, cplx x, cplx y, int m, int p) {
  cplx s = 0.0;
  for (int j = std::max(m, p); j <= N; ++j) {
    const double lc = log_binom(N, j) + std::lgamma(j + 1.0) - std::lgamma(j - m + 1.0) + std::lgamma(j + 1.0) -
                      std::lgamma(j - p + 1.0);
    s += std::exp(lc) * ipow(x, j - m) * ipow(y, j - p);
  }
  return s;
}

void check_ladder(ParticleNumber n, int m, int k) {
  if (m < 0 || k < 0) throw DomainError("ladder powers must be non-negative");
  (void)n;
}

}  // namespace

SpherePoint SpherePoint::from_angles(double theta, double phi) {
  if (!std::isfinite(theta) || !std::isfinite(phi)) throw DomainError("non-finite sphere angles");
  if (std::abs(theta - kPi) < 1e-15) return infinity();
  return finite(std::polar(std::tan(theta / 2.0), phi));
}

SpherePoint SpherePoint::from_direction(double nx, double ny, double nz) {
  const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("direction must be a finite nonzero vector");
  return from_angles(std::acos(std::clamp(nz / r, -1.0, 1.0)), std::atan2(ny, nx));
}

cplx SpherePoint::zeta() const {
  if (!zeta_) throw DomainError("the point at infinity has no finite stereographic coordinate");
  return *zeta_;
}

double SpherePoint::theta() const { return zeta_ ? 2.0 * std::atan(std::abs(*zeta_)) : kPi; }

double SpherePoint::phi() const { return zeta_ ? std::arg(*zeta_) : 0.0; }

SpherePoint SpherePoint::antipode() const {
  if (!zeta_) return finite(0.0);
  if (std::abs(*zeta_) == 0.0) return infinity();
  return finite(-1.0 / std::conj(*zeta_));
}

SpherePoint SpherePoint::inverse() const {
  if (!zeta_) return finite(0.0);
  if (std::abs(*zeta_) == 0.0) return infinity();
  return finite(1.0 / *zeta_);
}

SpherePoint SpherePoint::negated_conjugate() const {
  if (!zeta_) return infinity();
  return finite(-std::conj(*zeta_));
}

DickeVector coherent(ParticleNumber n, const SpherePoint& p) {
  const int N = n.value();
  if (p.is_infinite()) return DickeVector::basis(n, N);
  const cplx z = p.zeta();
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("non-finite zeta");
  if (std::abs(z) == 0.0) return DickeVector::basis(n, 0);
  const double lr = std::log(std::abs(z));
  const double lnorm = 0.5 * N * std::log1p(std::norm(z));
  const double ph = std::arg(z);
  std::vector<cplx> c(N + 1);
  for (int k = 0; k <= N; ++k) c[k] = std::polar(std::exp(0.5 * log_binom(N, k) + k * lr - lnorm), k * ph);
  return DickeVector(n, std::move(c));
}

DickeVector noon(ParticleNumber n, double phi) {
  std::vector<cplx> c(n.dim(), 0.0);
  c[n.value()] = 1.0;
  c[0] = std::polar(1.0, phi);
  return DickeVector(n, std::move(c));
}

DickeVector psi_theta_phi(ParticleNumber n, double theta, double phi) {
  std::vector<cplx> c(n.dim(), 0.0);
  c[n.value()] += std::cos(theta / 2.0);
  c[0] += std::sin(theta / 2.0) * std::polar(1.0, phi);
  return DickeVector(n, std::move(c));
}

DickeVector psi_v01(ParticleNumber n, double theta, double phi, double eta) {
  if (!n.is_even()) throw DomainError("psi_v01 needs even N; use psi_v01_odd");
  const DickeVector z = psi_theta_phi(n, theta, phi);
  std::vector<cplx> c(n.dim(), 0.0);
  const cplx e = std::polar(1.0, eta);
  for (int k = 0; k < n.dim(); ++k) c[k] = e * z[k];
  c[n.value() / 2] += 1.0;
  return DickeVector(n, std::move(c));
}

DickeVector psi_v01_odd(ParticleNumber n, double theta, double phi, double theta2, double phi2, double eta) {
  if (n.is_even()) throw DomainError("psi_v01_odd needs odd N");
  if (n.value() < 3) throw DomainError("psi_v01_odd needs N >= 3");
  const DickeVector z = psi_theta_phi(n, theta2, phi2);
  std::vector<cplx> c(n.dim(), 0.0);
  const cplx e = std::polar(1.0, eta);
  for (int k = 0; k < n.dim(); ++k) c[k] = e * z[k];
  const int h = n.value() / 2;
  c[h + 1] += std::cos(theta / 2.0);
  c[h] += std::sin(theta / 2.0) * std::polar(1.0, phi);
  return DickeVector(n, std::move(c));
}

DickeVector antipodal_superposition(ParticleNumber n, const SpherePoint& p, double eta) {
  const DickeVector a = coherent(n, p.negated_conjugate());
  const DickeVector b = coherent(n, p.inverse());
  const cplx e = std::polar(1.0, eta);
  std::vector<cplx> c(n.dim());
  for (int k = 0; k < n.dim(); ++k) c[k] = a[k] + e * b[k];
  return DickeVector(n, std::move(c));
}

DickeVector trinomial_pair_state(ParticleNumber n, cplx b, cplx q) {
  return DickeVector(n, trinomial_amplitudes(n, b, q, JParity::Any));
}

DickeVector omega(ParticleNumber n, double c, Branch branch) {
  if (!std::isfinite(c)) throw DomainError("non-finite c");
  // The +/- combination keeps exactly the even-j (or odd-j) powers of 2ic.
  auto amps = trinomial_amplitudes(n, 2.0 * kI * c, -1.0, branch == Branch::Plus ? JParity::Even : JParity::Odd);
  return DickeVector(n, std::move(amps));
}

DickeVector xi_pair(ParticleNumber n, cplx w, cplx z) { return trinomial_pair_state(n, 2.0 * w, z * z); }

DickeVector psi4(ParticleNumber n) {
  const cplx zs[] = {kI, -kI, 1.0, -1.0};
  std::vector<cplx> c(n.dim(), 0.0);
  for (cplx z : zs) {
    const DickeVector v = coherent(n, SpherePoint::finite(z));
    for (int k = 0; k < n.dim(); ++k) c[k] += v[k];
  }
  return DickeVector(n, std::move(c));
}

SuperpositionSpec SuperpositionSpec::from_states(DickeVector psi_min, DickeVector psi_max, double eta) {
  const cplx w = inner(psi_min, psi_max);
  return SuperpositionSpec{std::move(psi_min), std::move(psi_max), eta, w};
}

DickeVector variational_superposition(const SuperpositionSpec& s) {
  if (s.psi_min.particles() != s.psi_max.particles())
    throw DimensionMismatch(s.psi_min.particles().value(), s.psi_max.particles().value());
  const double w = std::abs(s.w);
  if (w >= 1.0 - 1e-14) throw DomainError("psi_min and psi_max coincide up to phase (|w| = 1)");
  const cplx gauge = w > 0.0 ? std::conj(s.w) / w : cplx(1.0);
  const cplx e = std::polar(1.0, s.eta);
  const cplx a = 1.0 - w * e;
  const cplx b = (e - w) * gauge;
  const double norm = std::sqrt(2.0 * (1.0 - w * w) * (1.0 - w * std::cos(s.eta)));
  std::vector<cplx> c(s.psi_min.dim());
  for (int k = 0; k < s.psi_min.dim(); ++k) c[k] = (a * s.psi_min[k] + b * s.psi_max[k]) / norm;
  return DickeVector(s.psi_min.particles(), std::move(c));
}

DickeVector rotate_z(const DickeVector& v, double alpha) {
  const double half = v.particles().value() / 2.0;
  std::vector<cplx> c(v.dim());
  for (int k = 0; k < v.dim(); ++k) c[k] = v[k] * std::polar(1.0, -alpha * (k - half));
  return DickeVector(v.particles(), std::move(c));
}

double fidelity(const DickeVector& a, const DickeVector& b) { return std::norm(inner(a, b)); }

cplx coherent_matrix_element_dicke(ParticleNumber n, cplx zeta_bra, cplx zeta_ket, int m, int k,
                                   LadderOrdering ordering) {
  check_ladder(n, m, k);
  const DickeVector bra = coherent(n, SpherePoint::finite(zeta_bra));
  const DickeVector ket = coherent(n, SpherePoint::finite(zeta_ket));
  std::vector<cplx> vb(bra.amplitudes().begin(), bra.amplitudes().end());
  std::vector<cplx> vk(ket.amplitudes().begin(), ket.amplitudes().end());
  if (ordering == LadderOrdering::LowerRaise) {
    return dot(raise_all(n, vb, m), raise_all(n, vk, k));
  }
  return dot(lower_all(n, vb, m), lower_all(n, vk, k));
}

cplx coherent_matrix_element(ParticleNumber n, cplx zeta_bra, cplx zeta_ket, int m, int k, LadderOrdering ordering) {
  check_ladder(n, m, k);
  const int N = n.value();
  const double norms = std::exp(0.5 * N * (std::log1p(std::norm(zeta_bra)) + std::log1p(std::norm(zeta_ket))));
  const cplx xb = std::conj(zeta_bra);
  if (ordering == LadderOrdering::LowerRaise) return derivative_poly(N, xb, zeta_ket, m, k) / norms;
  if (std::abs(zeta_bra) == 0.0 || std::abs(zeta_ket) == 0.0)
    return coherent_matrix_element_dicke(n, zeta_bra, zeta_ket, m, k, ordering);
  return ipow(xb * zeta_ket, N) * derivative_poly(N, 1.0 / xb, 1.0 / zeta_ket, m, k) / norms;
}

}  // namespace twomode
