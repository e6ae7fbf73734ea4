#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "twomode/error.hpp"
#include "twomode/metrology.hpp"
#include "twomode/states.hpp"
#include "twomode/variational.hpp"

using namespace twomode;

namespace {

// Classical Fisher information at theta = 0 of the outcomes {P+, P-, rest} on
// exp(-i theta A) v, by central differences of the Born probabilities.
double sld_classical_fisher(const DickeVector& v, const BandedHermitian& a, const SLDMeasurement& m) {
  // Step scaled to the phase speed so truncation error stays well below 1e-6.
  const double h = 1e-4 / std::sqrt(variance(a, v));
  auto probs = [&](double th) {
    const auto psi = evolve(a, v, th);
    const double pp = fidelity(m.projectors[0], psi);
    const double pm = fidelity(m.projectors[1], psi);
    return std::array<double, 3>{pp, pm, 1.0 - pp - pm};
  };
  const auto p0 = probs(0.0), pf = probs(h), pb = probs(-h);
  double f = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (p0[j] < 1e-9) continue;
    const double d = (pf[j] - pb[j]) / (2.0 * h);
    f += d * d / p0[j];
  }
  return f;
}

}  // namespace

TEST_CASE("QFI of textbook probes") {
  for (int N : {1, 4, 9, 30}) {
    ParticleNumber n(N);
    const auto v = noon(n, 0.4);
    CHECK(qfi_pure(v, build_term(n, Term::Dephasing)).qfi == doctest::Approx(4.0 * N * N).epsilon(1e-13));
    const auto r = qfi_pure(v, build_su2(n, Axis::Z), "Jz", true);
    CHECK(r.qfi == doctest::Approx(double(N) * N).epsilon(1e-13));
    CHECK(r.qcr(1.0) == doctest::Approx(1.0 / (N * N)).epsilon(1e-13));
    CHECK(r.qcr(10.0) == doctest::Approx(0.1 / (N * N)).epsilon(1e-13));
    CHECK(*r.generator_norm() == doctest::Approx(N / 2.0));
    // A coherent state is an eigenvector of n.J along its own axis.
    const auto p = SpherePoint::from_direction(0.3, -0.5, 0.8);
    const double len = std::sqrt(0.98);
    const auto axis = (0.3 / len) * build_su2(n, Axis::X) + (-0.5 / len) * build_su2(n, Axis::Y) +
                      (0.8 / len) * build_su2(n, Axis::Z);
    CHECK(qfi_pure(coherent(n, p.inverse()), axis).qfi < 1e-11 * N * N);
  }
  CHECK_THROWS_AS(qfi_pure(noon(ParticleNumber(3), 0), build_su2(ParticleNumber(4), Axis::Z)), DimensionMismatch);
  QFIReport zero;
  CHECK_THROWS_AS(zero.qcr(1.0), DomainError);
}

TEST_CASE("normalized 2Jx QFI of the pair ground state at N=4") {
  // Ground state of -(J+^2 + J-^2), generator 2Jx; normalized by (2N)^2 the
  // exact value is (2 + sqrt3)/4.
  ParticleNumber n(4);
  const auto dec = eigh_by_parity(-1.0 * build_term(n, Term::Pair));
  const auto q = qfi_pure(dec.eigenvectors[0], build_term(n, Term::Tunnel1));
  CHECK(q.qfi / 64.0 == doctest::Approx((2.0 + std::sqrt(3.0)) / 4.0).epsilon(1e-13));
}

TEST_CASE("QFI is invariant along the unitary path") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi);
  for (int N : {1, 3, 8, 15}) {
    ParticleNumber n(N);
    for (auto t : testing_util::all_terms()) {
      const auto a = build_term(n, t);
      const auto v = testing_util::random_state(n, rng);
      const double q0 = qfi_pure(v, a).qfi;
      const double q1 = qfi_pure(evolve(a, v, th(rng)), a).qfi;
      CHECK(std::abs(q1 - q0) <= 1e-10 * std::max(1.0, q0));
    }
  }
}

TEST_CASE("QFI bound and its saturation") {
  std::mt19937_64 rng(37);
  for (int N : {2, 5, 12, 24}) {
    ParticleNumber n(N);
    for (auto t : testing_util::all_terms()) {
      const auto a = build_term(n, t);
      const auto b = spectrum_bounds(a);
      const auto dec = eigh(a);
      CHECK(b.lambda_min == doctest::Approx(dec.eigenvalues.front()).epsilon(1e-12));
      CHECK(b.lambda_max == doctest::Approx(dec.eigenvalues.back()).epsilon(1e-12));
      for (int rep = 0; rep < 5; ++rep)
        CHECK(qfi_pure(testing_util::random_state(n, rng), a).qfi <= b.qfi_max() * (1.0 + 1e-12));
      const auto sa = variational_superposition(
          SuperpositionSpec::from_states(dec.eigenvectors.front(), dec.eigenvectors.back(), 0.3));
      if (b.qfi_max() > 0.0) CHECK(qfi_pure(sa, a).qfi == doctest::Approx(b.qfi_max()).epsilon(1e-8));
    }
  }
}

TEST_CASE("symmetric logarithmic derivative") {
  const double r = 1.0 / std::sqrt(2.0);
  ParticleNumber n1(1);
  const auto m = sld(DickeVector(n1, {r, r}), build_su2(n1, Axis::Z));
  CHECK(m.eigenvalues[0] == doctest::Approx(1.0));
  CHECK(m.eigenvalues[1] == doctest::Approx(-1.0));
  const cplx i{0.0, 1.0};
  CHECK(fidelity(m.projectors[0], DickeVector(n1, {r, -i * r})) == doctest::Approx(1.0));
  CHECK(fidelity(m.projectors[1], DickeVector(n1, {r, i * r})) == doctest::Approx(1.0));

  std::mt19937_64 rng(41);
  for (int N : {2, 7, 16}) {
    ParticleNumber n(N);
    for (auto t : testing_util::all_terms()) {
      const auto a = build_term(n, t);
      const auto v = testing_util::random_state(n, rng);
      const auto s = sld(v, a);
      CHECK(s.sld.max_abs_diff(s.sld.adjoint()) < 1e-12 * std::max(1.0, s.sld.max_abs()));
      const auto lv = s.sld.apply(v.amplitudes());
      CHECK(std::abs(dot(v.amplitudes(), lv)) < 1e-10 * std::max(1.0, s.sld.max_abs()));
      // L acts as the stated eigenvalues on the projectors.
      for (int j = 0; j < 2; ++j) {
        auto lp = s.sld.apply(s.projectors[j].amplitudes());
        for (int k = 0; k <= N; ++k) lp[k] -= s.eigenvalues[j] * s.projectors[j][k];
        CHECK(norm2(lp) < 1e-10 * std::max(1.0, std::abs(s.eigenvalues[j])));
      }
      CHECK(s.eigenvalues[0] == doctest::Approx(2.0 * std::sqrt(variance(a, v))).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(sld(DickeVector::basis(ParticleNumber(3), 1), build_su2(ParticleNumber(3), Axis::Z)), DomainError);
}

TEST_CASE("SLD measurement reaches the QFI (finite-difference oracle)") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 12; ++rep) {
    ParticleNumber n(1 + static_cast<int>(rng() % 32));
    const auto t = testing_util::all_terms()[rng() % 8];
    const auto a = build_term(n, t);
    const auto v = testing_util::random_state(n, rng);
    if (variance(a, v) < 1e-6) continue;
    const double q = qfi_pure(v, a).qfi;
    CHECK(sld_classical_fisher(v, a, sld(v, a)) == doctest::Approx(q).epsilon(1e-6));
  }
}

TEST_CASE("multiparameter compatibility") {
  ParticleNumber n(6);
  const auto jz = build_su2(n, Axis::Z);
  std::vector<double> d2(7);
  for (int k = 0; k <= 6; ++k) d2[k] = (k - 3.0) * (k - 3.0);
  const BandedHermitian jz2(n, 0, d2, {}, {});
  std::mt19937_64 rng(47);
  const auto v = testing_util::random_state(n, rng);
  for (const auto& row : multiparam_compatible(v, {jz, jz2}))
    for (double x : row) CHECK(std::abs(x) < 1e-13);

  const auto jx = build_su2(n, Axis::X), jy = build_su2(n, Axis::Y);
  for (int k = 0; k <= 6; ++k) {
    const auto g = multiparam_compatible(DickeVector::basis(n, k), {jx, jy});
    CHECK(g[0][1] == doctest::Approx((k - 3.0) / 2.0));
    CHECK(g[1][0] == doctest::Approx(-(k - 3.0) / 2.0));
  }
  const auto g = multiparam_compatible(noon(n, 0.5), {jx, jy});
  CHECK(std::abs(g[0][1]) < 1e-15);
}

TEST_CASE("fragmentation degree") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> gd;
  for (int N : {1, 4, 11, 40}) {
    ParticleNumber n(N);
    const auto p = SpherePoint::finite({gd(rng), gd(rng)});
    CHECK(fragmentation(coherent(n, p)).fd < 1e-12);
    if (N >= 2) CHECK(fragmentation(antipodal_superposition(n, p, gd(rng))).fd == doctest::Approx(1.0).epsilon(1e-10));
    if (N % 2 == 0) CHECK(fragmentation(DickeVector::basis(n, N / 2)).fd == 1.0);
    for (int rep = 0; rep < 5; ++rep) {
      const auto v = testing_util::random_state(n, rng);
      const auto f = fragmentation(v);
      CHECK(f.fd >= 0.0);
      CHECK(f.fd <= 1.0);
      CHECK((f.opdm[0][0] + f.opdm[1][1]).real() == doctest::Approx(N).epsilon(1e-12));
      CHECK(f.opdm[0][0].real() + f.opdm[1][1].real() ==
            doctest::Approx(f.opdm_eigenvalues[0] + f.opdm_eigenvalues[1]).epsilon(1e-12));
      // Jvec against the operator expectations.
      CHECK(std::abs(f.jvec[0] - expectation(build_su2(n, Axis::X), v)) < 1e-12 * N);
      CHECK(std::abs(f.jvec[1] - expectation(build_su2(n, Axis::Y), v)) < 1e-12 * N);
      CHECK(std::abs(f.jvec[2] - expectation(build_su2(n, Axis::Z), v)) < 1e-12 * N);
      CHECK(std::abs(fragmentation(rotate_z(v, gd(rng))).fd - f.fd) < 1e-12);
    }
  }
}

TEST_CASE("QFI gap bound") {
  std::mt19937_64 rng(59);
  ParticleNumber n(10);
  const auto a = build_term(n, Term::Weighted0);
  const auto v = testing_util::random_state(n, rng);
  const auto same = qfi_gap_bound(v, v, a);
  CHECK(std::abs(same.lhs) < 1e-12);
  CHECK(std::abs(same.rhs) < 1e-9);

  // Truth is an optimal S_A state; any zero-energy variational probe obeys lhs <= rhs.
  const auto dec = eigh(a);
  const auto truth =
      variational_superposition(SuperpositionSpec::from_states(dec.eigenvectors.front(), dec.eigenvectors.back(), 0.0));
  for (int rep = 0; rep < 10; ++rep) {
    const auto x = testing_util::random_state(n, rng);
    const auto rot = rotate_z(x, std::numbers::pi);
    const auto probe = variational_superposition(SuperpositionSpec::from_states(x, rot, 0.0));
    const auto gb = qfi_gap_bound(truth, probe, a);
    CHECK(gb.precondition_ok);
    CHECK(gb.lhs <= gb.rhs + 1e-9);
  }
}

TEST_CASE("QFI gaps at N=160 (oracle values)") {
  ParticleNumber n(160);
  const auto pair = build_term(n, Term::Pair);
  const auto dec = eigh_by_parity(pair);
  const auto truth =
      variational_superposition(SuperpositionSpec::from_states(dec.eigenvectors.front(), dec.eigenvectors.back(), 0.0));
  const auto fam = near_optimal_family(FamilyKind::A2Even, n, 0.0);
  const auto ga = qfi_gap_bound(truth, fam, pair);
  CHECK(ga.precondition_ok);
  CHECK(4.0 * ga.lhs == doctest::Approx(9.225804209709167).epsilon(1e-6));
  const auto gb = qfi_gap_bound(truth, psi4(n), pair);
  CHECK(4.0 * gb.lhs == doctest::Approx(1355467.244423747).epsilon(1e-9));
  CHECK(ga.lhs <= ga.rhs + 1e-9);
  CHECK(gb.lhs <= gb.rhs + 1e-9);
  CHECK(ga.norm == doctest::Approx(12733.812736612155).epsilon(1e-13));
}

TEST_CASE("run ratio") {
  CHECK(run_ratio(3.0, 3.0, 10.0) == 1.0);
  CHECK(run_ratio(0.0, 5.0, 10.0) == 2.0);
  CHECK_THROWS_AS(run_ratio(1.0, 10.0, 10.0), DomainError);
  CHECK_THROWS_AS(run_ratio(1.0, 2.0, 0.0), DomainError);
}

TEST_CASE("closed-form psi4 variance") {
  CHECK(closed_form_psi4_variance(ParticleNumber(4)) == doctest::Approx(6.0).epsilon(1e-15));
  for (int N = 2; N <= 200; N += 2) {
    const double lead = double(N) * (N - 1) * (N - 2) * (N - 3) / 4.0;
    const int r = N % 8;
    if (r == 2 || r == 6) CHECK(closed_form_psi4_variance(ParticleNumber(N)) == doctest::Approx(lead).epsilon(1e-12));
  }
  const double lead160 = 160.0 * 159 * 158 * 157 / 4.0;
  CHECK(std::abs(closed_form_psi4_variance(ParticleNumber(160)) / lead160 - 1.0) < 1e-15);
  CHECK_THROWS_AS(closed_form_psi4_variance(ParticleNumber(5)), DomainError);
  // The brute-force variance at N=4 is 48, not the closed form's 6.
  CHECK(variance(build_term(ParticleNumber(4), Term::Pair), psi4(ParticleNumber(4))) == doctest::Approx(48.0));
}
