#pragma once

// Probe-state families and SU(2) coherent-state analytics.

#include <optional>

#include "twomode/dicke.hpp"

namespace twomode {

// Point on the Bloch sphere by its stereographic coordinate
// zeta = tan(theta/2) e^{i phi}; the south pole (theta = pi) is the
// distinguished point at infinity.
class SpherePoint {
 public:
  static SpherePoint finite(cplx zeta) { return SpherePoint(zeta); }
  static SpherePoint infinity() { return SpherePoint(); }
  static SpherePoint from_angles(double theta, double phi);
  // theta/phi of the unit vector n.
  static SpherePoint from_direction(double nx, double ny, double nz);

  bool is_infinite() const { return !zeta_.has_value(); }
  // Throws DomainError at infinity.
  cplx zeta() const;
  double theta() const;
  double phi() const;

  // -1/conj(zeta): the antipodal point.
  SpherePoint antipode() const;
  // 1/zeta with 0 <-> infinity.
  SpherePoint inverse() const;
  // -conj(zeta)
  SpherePoint negated_conjugate() const;

 private:
  SpherePoint() = default;
  explicit SpherePoint(cplx z) : zeta_(z) {}
  std::optional<cplx> zeta_;
};

// Spin-N/2 coherent state; C_k = binom(N,k)^{1/2} zeta^k (1+|zeta|^2)^{-N/2}.
DickeVector coherent(ParticleNumber n, const SpherePoint& p);

// (|0,N> + e^{i phi}|N,0>)/sqrt2
DickeVector noon(ParticleNumber n, double phi);
// cos(theta/2)|0,N> + sin(theta/2) e^{i phi}|N,0>
DickeVector psi_theta_phi(ParticleNumber n, double theta, double phi);
// (|N/2,N/2> + e^{i eta} psi_theta_phi)/sqrt2; even N only.
DickeVector psi_v01(ParticleNumber n, double theta, double phi, double eta);
// Odd-N analogue: the top contact eigenspace spanned by k=(N+-1)/2 is
// parametrized by (theta, phi), the zero eigenspace by (theta2, phi2).
DickeVector psi_v01_odd(ParticleNumber n, double theta, double phi, double theta2, double phi2, double eta);

// (|-conj(zeta)> + e^{i eta}|1/zeta>)/sqrt2: antipodal coherent pair.
DickeVector antipodal_superposition(ParticleNumber n, const SpherePoint& p, double eta);

// Normalized [(a0+^2 + b a0+a1+ + q a1+^2)^M]|0,0> for even N = 2M, with
// Dicke amplitudes from a log-gamma trinomial expansion.
DickeVector trinomial_pair_state(ParticleNumber n, cplx b, cplx q);

enum class Branch { Plus, Minus };

// [(a0+^2 + 2ic a0+a1+ - a1+^2)^M +- (a0+^2 - 2ic a0+a1+ - a1+^2)^M]|0,0>,
// normalized; Plus lives on even k, Minus on odd k.
DickeVector omega(ParticleNumber n, double c, Branch branch);

// (a0+^2 + 2w a0+a1+ + z^2 a1+^2)^M |0,0>, normalized.
DickeVector xi_pair(ParticleNumber n, cplx w, cplx z);

// |zeta=i> + |zeta=-i> + |zeta=1> + |zeta=-1>, normalized.
DickeVector psi4(ParticleNumber n);

struct SuperpositionSpec {
  DickeVector psi_min;
  DickeVector psi_max;
  double eta = 0.0;
  cplx w = 0.0;  // <psi_min|psi_max>

  // Fills w from the two states.
  static SuperpositionSpec from_states(DickeVector psi_min, DickeVector psi_max, double eta);
};

// [(1 - w e^{i eta}) psi_min + (e^{i eta} - w) psi_max] / sqrt(2 (1-w^2)(1 - w cos eta)).
// A complex w is first made real non-negative by rephasing psi_max.
DickeVector variational_superposition(const SuperpositionSpec& s);

// C_k -> C_k exp(-i alpha (k - N/2)), i.e. exp(-i alpha Jz).
DickeVector rotate_z(const DickeVector& v, double alpha);

double fidelity(const DickeVector& a, const DickeVector& b);

enum class LadderOrdering { LowerRaise, RaiseLower };  // J-^m J+^n, J+^m J-^n

// <zeta'| J-^m J+^n |zeta> or <zeta'| J+^m J-^n |zeta> for normalized coherent
// states, from explicit derivatives of (1 + conj(zeta') zeta)^N. The second
// ordering expands in 1/zeta and falls back to the Dicke-basis product when
// either point sits at zeta = 0.
cplx coherent_matrix_element(ParticleNumber n, cplx zeta_bra, cplx zeta_ket, int m, int k, LadderOrdering ordering);

// Direct Dicke-basis evaluation of the same quantity.
cplx coherent_matrix_element_dicke(ParticleNumber n, cplx zeta_bra, cplx zeta_ket, int m, int k,
                                   LadderOrdering ordering);

}  // namespace twomode
