#include "twomode/dicke.hpp"

#include <algorithm>
#include <cmath>

#include "twomode/error.hpp"

namespace twomode {

ParticleNumber::ParticleNumber(int n) : n_(n) {
  if (n < 1) throw DomainError("particle number must be >= 1, got " + std::to_string(n));
}

DickeVector::DickeVector(ParticleNumber n, std::vector<cplx> amplitudes) : n_(n), amps_(std::move(amplitudes)) {
  if (static_cast<int>(amps_.size()) != n_.dim())
    throw DomainError("Dicke vector for N=" + std::to_string(n_.value()) + " needs " + std::to_string(n_.dim()) +
                      " amplitudes, got " + std::to_string(amps_.size()));
  for (const auto& a : amps_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw DomainError("non-finite Dicke amplitude");
  const double nrm = norm2(amps_);
  if (!(nrm > 0.0)) throw DomainError("cannot normalize a zero Dicke vector");
  for (auto& a : amps_) a /= nrm;
}

DickeVector DickeVector::basis(ParticleNumber n, int k) {
  if (k < 0 || k > n.value()) throw DomainError("Dicke index out of range");
  std::vector<cplx> a(n.dim());
  a[k] = 1.0;
  return {n, std::move(a)};
}

cplx inner(const DickeVector& a, const DickeVector& b) {
  if (a.particles() != b.particles()) throw DimensionMismatch(a.particles().value(), b.particles().value());
  return dot(a.amplitudes(), b.amplitudes());
}

namespace {

constexpr std::array<std::pair<Term, std::string_view>, 8> kTermNames{{
    {Term::Dephasing, "dephasing"},
    {Term::Self0, "self0"},
    {Term::Self1, "self1"},
    {Term::Contact, "contact"},
    {Term::Tunnel1, "tunnel1"},
    {Term::Pair, "pair"},
    {Term::Weighted0, "weighted0"},
    {Term::Weighted1, "weighted1"},
}};

// <N-k-1, k+1| a1+ a0 |N-k, k>
double raise(int n, int k) { return std::sqrt(static_cast<double>(n - k) * (k + 1)); }

}  // namespace

std::string_view to_string(Term t) {
  for (const auto& [term, name] : kTermNames)
    if (term == t) return name;
  return "?";
}

Term parse_term(std::string_view name) {
  for (const auto& [term, n] : kTermNames)
    if (n == name) return term;
  throw DomainError("unknown Hamiltonian term '" + std::string(name) + "'");
}

BandedHermitian::BandedHermitian(ParticleNumber n, int bandwidth, std::vector<double> diag,
                                 std::vector<cplx> super1, std::vector<cplx> super2)
    : n_(n), bandwidth_(bandwidth), d0_(std::move(diag)), d1_(std::move(super1)), d2_(std::move(super2)) {
  const int dim = n_.dim();
  if (bandwidth < 0 || bandwidth > 2) throw DomainError("bandwidth must be 0, 1 or 2");
  d1_.resize(dim - 1);
  d2_.resize(std::max(dim - 2, 0));
  if (static_cast<int>(d0_.size()) != dim) throw DomainError("diagonal length does not match N+1");
  auto bad = [](double x) { return !std::isfinite(x); };
  for (double x : d0_)
    if (bad(x)) throw DomainError("non-finite operator entry");
  for (const auto& x : d1_)
    if (bad(x.real()) || bad(x.imag())) throw DomainError("non-finite operator entry");
  for (const auto& x : d2_)
    if (bad(x.real()) || bad(x.imag())) throw DomainError("non-finite operator entry");
  if (bandwidth_ < 2 && std::any_of(d2_.begin(), d2_.end(), [](cplx x) { return x != cplx{}; }))
    throw DomainError("nonzero second superdiagonal with declared bandwidth < 2");
  if (bandwidth_ < 1 && std::any_of(d1_.begin(), d1_.end(), [](cplx x) { return x != cplx{}; }))
    throw DomainError("nonzero first superdiagonal with declared bandwidth 0");
}

BandedHermitian BandedHermitian::zero(ParticleNumber n, int bandwidth) {
  return {n, bandwidth, std::vector<double>(n.dim()), {}, {}};
}

int BandedHermitian::effective_bandwidth() const {
  auto nz = [](const std::vector<cplx>& v) { return std::any_of(v.begin(), v.end(), [](cplx x) { return x != cplx{}; }); };
  if (nz(d2_)) return 2;
  if (nz(d1_)) return 1;
  return 0;
}

cplx BandedHermitian::operator()(int i, int j) const {
  if (i == j) return d0_[i];
  if (j == i + 1) return d1_[i];
  if (i == j + 1) return std::conj(d1_[j]);
  if (j == i + 2) return d2_[i];
  if (i == j + 2) return std::conj(d2_[j]);
  return 0.0;
}

std::vector<cplx> BandedHermitian::apply(std::span<const cplx> x) const {
  const int dim = n_.dim();
  if (static_cast<int>(x.size()) != dim) throw DimensionMismatch(n_.value(), static_cast<int>(x.size()) - 1);
  std::vector<cplx> y(dim);
  for (int k = 0; k < dim; ++k) y[k] = d0_[k] * x[k];
  for (int k = 0; k + 1 < dim; ++k) {
    y[k] += d1_[k] * x[k + 1];
    y[k + 1] += std::conj(d1_[k]) * x[k];
  }
  for (int k = 0; k + 2 < dim; ++k) {
    y[k] += d2_[k] * x[k + 2];
    y[k + 2] += std::conj(d2_[k]) * x[k];
  }
  return y;
}

CMatrix BandedHermitian::dense() const {
  const int dim = n_.dim();
  CMatrix m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = std::max(0, i - 2); j <= std::min(dim - 1, i + 2); ++j) m(i, j) = (*this)(i, j);
  return m;
}

BandedHermitian& BandedHermitian::operator+=(const BandedHermitian& rhs) {
  if (rhs.n_ != n_) throw DimensionMismatch(n_.value(), rhs.n_.value());
  bandwidth_ = std::max(bandwidth_, rhs.bandwidth_);
  for (size_t i = 0; i < d0_.size(); ++i) d0_[i] += rhs.d0_[i];
  for (size_t i = 0; i < d1_.size(); ++i) d1_[i] += rhs.d1_[i];
  for (size_t i = 0; i < d2_.size(); ++i) d2_[i] += rhs.d2_[i];
  return *this;
}

BandedHermitian operator*(double s, BandedHermitian op) {
  for (auto& x : op.d0_) x *= s;
  for (auto& x : op.d1_) x *= s;
  for (auto& x : op.d2_) x *= s;
  return op;
}

BandedHermitian BandedHermitian::mode_swapped() const {
  const int n = n_.value();
  std::vector<double> d0(d0_.rbegin(), d0_.rend());
  // <N-k | A | N-k-1> = conj(<N-k-1 | A | N-k>)
  std::vector<cplx> d1(d1_.size()), d2(d2_.size());
  for (int k = 0; k < n; ++k) d1[k] = std::conj(d1_[n - 1 - k]);
  for (int k = 0; k + 1 < n; ++k) d2[k] = std::conj(d2_[n - 2 - k]);
  return {n_, bandwidth_, std::move(d0), std::move(d1), std::move(d2)};
}

CouplingSet& CouplingSet::operator+=(const CouplingSet& rhs) {
  vartheta += rhs.vartheta;
  V00 += rhs.V00;
  V01 += rhs.V01;
  V11 += rhs.V11;
  A1 += rhs.A1;
  A2 += rhs.A2;
  T0 += rhs.T0;
  T1 += rhs.T1;
  return *this;
}

BandedHermitian build_su2(ParticleNumber np, Axis axis) {
  const int n = np.value();
  switch (axis) {
    case Axis::Z: {
      std::vector<double> d0(np.dim());
      for (int k = 0; k <= n; ++k) d0[k] = k - 0.5 * n;
      return {np, 0, std::move(d0), {}, {}};
    }
    case Axis::X:
    case Axis::Y: {
      // Jy = (J+ - J-)/(2i), so <k|Jy|k+1> = i/2 * <k+1|J+|k>.
      const cplx scale = axis == Axis::X ? cplx{0.5, 0.0} : cplx{0.0, 0.5};
      std::vector<cplx> d1(n);
      for (int k = 0; k < n; ++k) d1[k] = scale * raise(n, k);
      return {np, 1, std::vector<double>(np.dim()), std::move(d1), {}};
    }
  }
  throw DomainError("unknown axis");
}

BandedHermitian build_term(ParticleNumber np, Term term) {
  const int n = np.value();
  const int dim = np.dim();
  std::vector<double> d0(dim);
  std::vector<cplx> d1(n);
  std::vector<cplx> d2(std::max(n - 1, 0));
  int band = 0;
  switch (term) {
    case Term::Dephasing:
      for (int k = 0; k <= n; ++k) d0[k] = 2.0 * k - n;
      break;
    case Term::Self0:
      for (int k = 0; k <= n; ++k) d0[k] = static_cast<double>(n - k) * (n - k);
      break;
    case Term::Self1:
      for (int k = 0; k <= n; ++k) d0[k] = static_cast<double>(k) * k;
      break;
    case Term::Contact:
      for (int k = 0; k <= n; ++k) d0[k] = static_cast<double>(k) * (n - k);
      break;
    case Term::Tunnel1:
      band = 1;
      for (int k = 0; k < n; ++k) d1[k] = raise(n, k);
      break;
    case Term::Pair:
      band = 2;
      for (int k = 0; k + 1 < n; ++k) d2[k] = raise(n, k) * raise(n, k + 1);
      break;
    case Term::Weighted0:
      // a0+a0 acts after a0+a1 lowers k+1 -> k, leaving N-k bosons in mode 0.
      band = 1;
      for (int k = 0; k < n; ++k) d1[k] = static_cast<double>(n - k) * raise(n, k);
      break;
    case Term::Weighted1:
      // a1+a1 acts after a0+a1, leaving k bosons in mode 1.
      band = 1;
      for (int k = 0; k < n; ++k) d1[k] = static_cast<double>(k) * raise(n, k);
      break;
  }
  return {np, band, std::move(d0), std::move(d1), std::move(d2)};
}

BandedHermitian assemble_hamiltonian(ParticleNumber np, const CouplingSet& c) {
  const int n = np.value();
  const auto deph = build_term(np, Term::Dephasing);
  const auto s0 = build_term(np, Term::Self0);
  const auto s1 = build_term(np, Term::Self1);
  const auto contact = build_term(np, Term::Contact);
  const auto w0 = build_term(np, Term::Weighted0);
  const auto w1 = build_term(np, Term::Weighted1);

  std::vector<double> d0(np.dim());
  for (int k = 0; k <= n; ++k)
    d0[k] = c.vartheta * deph.diag()[k] + c.V00 * s0.diag()[k] + c.V11 * s1.diag()[k] +
            2.0 * c.V01 * contact.diag()[k];

  // A_1 a0+ a1 + h.c.: a0+a1 maps k+1 -> k, so <k|.|k+1> = A_1 * raise(k).
  std::vector<cplx> d1(n);
  for (int k = 0; k < n; ++k)
    d1[k] = c.A1 * raise(n, k) + c.T0 * w0.super1()[k] + c.T1 * w1.super1()[k];

  std::vector<cplx> d2(std::max(n - 1, 0));
  for (int k = 0; k + 1 < n; ++k) d2[k] = c.A2 * raise(n, k) * raise(n, k + 1);

  return {np, 2, std::move(d0), std::move(d1), std::move(d2)};
}

CouplingSet couplings_from_overlaps(const ModeOverlaps& m) {
  const double az2 = std::norm(m.z);
  const double g = 0.5 * m.V0 / ((1.0 + az2) * (1.0 + az2));
  CouplingSet c;
  c.vartheta = m.vartheta_in;
  c.A1 = m.A1_in;
  c.V00 = g * m.o_0000;
  c.V11 = az2 * az2 * g * m.o_1111;
  c.V01 = 4.0 * az2 * g * m.o_0011;
  c.A2 = m.z * m.z * g * m.o_pair;
  c.T0 = m.z * g * m.o_t0;
  c.T1 = m.z * az2 * g * m.o_t1;
  return c;
}

std::vector<cplx> apply(const BandedHermitian& op, const DickeVector& v) {
  if (op.particles() != v.particles()) throw DimensionMismatch(op.particles().value(), v.particles().value());
  return op.apply(v.amplitudes());
}

double expectation(const BandedHermitian& op, const DickeVector& v) {
  const auto av = apply(op, v);
  return dot(v.amplitudes(), av).real();
}

double variance(const BandedHermitian& op, const DickeVector& v) {
  const auto av = apply(op, v);
  const double mean = dot(v.amplitudes(), av).real();
  const double second = dot(av, av).real();
  return std::max(second - mean * mean, 0.0);
}

}  // namespace twomode
