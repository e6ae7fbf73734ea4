#pragma once

// Dicke-basis representation of N-boson two-mode states and of every term of
// the number-conserving two-mode Hamiltonian.
//
// Basis convention: index k labels |N-k, k>, i.e. k bosons in mode 1.
// All operators are built directly as (N+1)x(N+1) matrices from Dicke matrix
// elements, so restriction to the N-particle sector is exact.

#include <array>
#include <complex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twomode/linalg.hpp"

namespace twomode {

class ParticleNumber {
 public:
  explicit ParticleNumber(int n);

  int value() const { return n_; }
  int dim() const { return n_ + 1; }
  bool is_even() const { return n_ % 2 == 0; }

  friend bool operator==(ParticleNumber, ParticleNumber) = default;

 private:
  int n_;
};

// Normalized complex amplitude vector over the N+1 Dicke states.
class DickeVector {
 public:
  // Normalizes `amplitudes`. Throws DomainError on wrong length or zero norm.
  DickeVector(ParticleNumber n, std::vector<cplx> amplitudes);

  static DickeVector basis(ParticleNumber n, int k);

  ParticleNumber particles() const { return n_; }
  int dim() const { return n_.dim(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx operator[](int k) const { return amps_[k]; }

 private:
  ParticleNumber n_;
  std::vector<cplx> amps_;
};

cplx inner(const DickeVector& a, const DickeVector& b);

enum class Axis { X, Y, Z };

enum class Term { Dephasing, Self0, Self1, Contact, Tunnel1, Pair, Weighted0, Weighted1 };

std::string_view to_string(Term t);
Term parse_term(std::string_view name);  // throws DomainError on unknown names

// Hermitian operator stored by its diagonal and first two superdiagonals.
// super1[k] = <k|A|k+1>, super2[k] = <k|A|k+2>; the lower triangle is implied.
class BandedHermitian {
 public:
  BandedHermitian(ParticleNumber n, int bandwidth, std::vector<double> diag, std::vector<cplx> super1,
                  std::vector<cplx> super2);

  static BandedHermitian zero(ParticleNumber n, int bandwidth = 0);

  ParticleNumber particles() const { return n_; }
  int dim() const { return n_.dim(); }
  // Declared storage bandwidth (0, 1 or 2).
  int bandwidth() const { return bandwidth_; }
  // Widest band holding a nonzero entry.
  int effective_bandwidth() const;

  std::span<const double> diag() const { return d0_; }
  std::span<const cplx> super1() const { return d1_; }
  std::span<const cplx> super2() const { return d2_; }

  cplx operator()(int i, int j) const;

  std::vector<cplx> apply(std::span<const cplx> x) const;
  CMatrix dense() const;

  BandedHermitian& operator+=(const BandedHermitian& rhs);
  friend BandedHermitian operator+(BandedHermitian lhs, const BandedHermitian& rhs) { return lhs += rhs; }
  friend BandedHermitian operator*(double s, BandedHermitian op);

  // Conjugation by C_k -> C_{N-k}.
  BandedHermitian mode_swapped() const;

 private:
  ParticleNumber n_;
  int bandwidth_;
  std::vector<double> d0_;
  std::vector<cplx> d1_;
  std::vector<cplx> d2_;
};

// The twelve real parameters of the generic number-conserving Hamiltonian.
struct CouplingSet {
  double vartheta = 0.0;
  double V00 = 0.0;
  double V01 = 0.0;
  double V11 = 0.0;
  cplx A1 = 0.0;
  cplx A2 = 0.0;
  cplx T0 = 0.0;
  cplx T1 = 0.0;

  CouplingSet& operator+=(const CouplingSet& rhs);
  friend CouplingSet operator+(CouplingSet lhs, const CouplingSet& rhs) { return lhs += rhs; }
};

// Mode-overlap integrals feeding the coupling identification. Density-density
// overlaps are <|phi_i|^2, |phi_j|^2>; o_pair is <phi_0^2, phi_1^2>; o_t0 and
// o_t1 are <|phi_0|^2 phi_0, phi_1> and <phi_0, phi_1 |phi_1|^2>. vartheta_in
// and A1_in come from the kinetic term and are passed through unchanged.
struct ModeOverlaps {
  cplx z = 0.0;
  double V0 = 0.0;
  double o_0000 = 0.0;
  double o_1111 = 0.0;
  double o_0011 = 0.0;
  cplx o_pair = 0.0;
  cplx o_t0 = 0.0;
  cplx o_t1 = 0.0;
  double vartheta_in = 0.0;
  cplx A1_in = 0.0;
};

BandedHermitian build_su2(ParticleNumber n, Axis axis);

// Unit-coefficient operator for one Hamiltonian term:
//   Dephasing  a1+a1 - a0+a0
//   Self0/1    (a_j+ a_j)^2
//   Contact    a1+a1 a0+a0
//   Tunnel1    a0+a1 + a1+a0            (= 2 Jx)
//   Pair       a0+^2 a1^2 + h.c.        (= J+^2 + J-^2)
//   Weighted0  a0+a0 a0+a1 + h.c.
//   Weighted1  a1+a1 a0+a1 + h.c.
BandedHermitian build_term(ParticleNumber n, Term term);

// sum_{j,k} V_jk n_k n_j counts V01 twice, so the contact term enters as 2*V01.
BandedHermitian assemble_hamiltonian(ParticleNumber n, const CouplingSet& c);

CouplingSet couplings_from_overlaps(const ModeOverlaps& m);

std::vector<cplx> apply(const BandedHermitian& op, const DickeVector& v);
double expectation(const BandedHermitian& op, const DickeVector& v);
// <A^2> - <A>^2, clamped at zero.
double variance(const BandedHermitian& op, const DickeVector& v);

}  // namespace twomode
