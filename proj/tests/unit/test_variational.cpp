#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "twomode/error.hpp"
#include "twomode/metrology.hpp"
#include "twomode/spectral.hpp"
#include "twomode/variational.hpp"

using namespace twomode;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

DickeVector ground(const BandedHermitian& h) { return eigh_by_parity(h).eigenvectors[0]; }

}  // namespace

TEST_CASE("tilde_c") {
  const auto s4 = tilde_c(ParticleNumber(4));
  CHECK(s4.c_tilde == doctest::Approx(std::sqrt((std::sqrt(3.0) - 1.0) / 2.0)).epsilon(1e-14));
  CHECK(s4.printed_c == doctest::Approx(std::sqrt((1.0 + std::sqrt(11.0)) / 10.0)).epsilon(1e-14));
  CHECK(s4.printed_c == doctest::Approx(0.6570).epsilon(1e-4));
  CHECK(s4.lambda_tilde == doctest::Approx(-std::sqrt(48.0)).epsilon(1e-12));
  CHECK(s4.source == ConsistencySource::ClosedForm);

  CHECK(std::abs(tilde_c(ParticleNumber(10000)).c_tilde - kInvSqrt2) < 1e-3);
  CHECK(std::abs(tilde_c(ParticleNumber(10000)).printed_c - kInvSqrt2) < 1e-3);

  const auto s160 = tilde_c(ParticleNumber(160));
  CHECK(s160.c_tilde == doctest::Approx(0.7048798452378859).epsilon(1e-12));
  CHECK(s160.lambda_tilde / (160.0 * 160.0) == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(s160.printed_lambda == doctest::Approx(-2.0 * 160 * (1 + 2 * s160.printed_c * s160.printed_c) -
                                              4.0 * 160 * 160 * s160.printed_c * s160.printed_c));

  for (int N : {4, 6, 10, 40, 160, 1000}) {
    const auto s = tilde_c(ParticleNumber(N));
    CHECK(s.row_residual <= 1e-10);
  }
  CHECK_THROWS_AS(tilde_c(ParticleNumber(2)), DomainError);
  CHECK_THROWS_AS(tilde_c(ParticleNumber(7)), DomainError);
  CHECK_THROWS_AS(tilde_c(ParticleNumber(4), ConsistencyRows::Odd), DomainError);
}

TEST_CASE("odd consistency rows share the asymptotics") {
  const std::pair<int, double> frozen[] = {
      {6, 0.66067516}, {8, 0.66962872}, {20, 0.69030501}, {160, 0.70490789}};
  for (auto [N, c] : frozen) {
    const auto s = tilde_c(ParticleNumber(N), ConsistencyRows::Odd);
    CHECK(s.c_tilde == doctest::Approx(c).epsilon(1e-7));
    CHECK(s.row_residual <= 1e-10);
    CHECK(s.source == ConsistencySource::TwoEquationSolve);
  }
  const auto big = tilde_c(ParticleNumber(2000), ConsistencyRows::Odd);
  CHECK(std::abs(big.c_tilde - kInvSqrt2) < 1e-3);
  CHECK(big.lambda_tilde / (2000.0 * 2000.0) == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("consistency residual") {
  for (int N : {3, 8, 21}) {
    ParticleNumber n(N);
    for (auto kind : {ConsistencyKind::Pair, ConsistencyKind::Weighted0}) {
      const auto h = build_term(n, kind == ConsistencyKind::Pair ? Term::Pair : Term::Weighted0);
      const auto dec = eigh(h);
      for (int j = 0; j < dec.size(); ++j)
        CHECK(consistency_residual(dec.eigenvectors[j], kind, dec.eigenvalues[j]) <= 1e-10);
    }
  }
  ParticleNumber n4(4);
  const double lam4 = eigh(build_term(n4, Term::Pair)).eigenvalues.front();
  CHECK(consistency_residual(omega(n4, tilde_c(n4).c_tilde, Branch::Plus), ConsistencyKind::Pair, lam4) <= 1e-12);

  ParticleNumber n160(160);
  const auto s = tilde_c(n160);
  const auto v = omega(n160, s.c_tilde, Branch::Plus);
  const auto rows = consistency_rows(v, ConsistencyKind::Pair, s.lambda_tilde);
  CHECK(consistency_residual(v, ConsistencyKind::Pair, s.lambda_tilde) > 1e-10);
  CHECK(rows[0] <= 1e-12);
  CHECK(rows[2] <= 1e-12);
}

TEST_CASE("two-equation pair state for weighted0") {
  ParticleNumber n8(8);
  const auto w = build_term(n8, Term::Weighted0);
  const auto dec = eigh(w);
  CHECK(dec.eigenvalues[0] == doctest::Approx(-43.556983698982414).epsilon(1e-12));
  const auto xi = xi_two_equation_solve(n8, dec.eigenvalues[0]);
  CHECK(xi.w == doctest::Approx(-0.6805778702966001).epsilon(1e-12));
  CHECK(xi.z_squared == doctest::Approx(0.3128710322605768).epsilon(1e-12));
  CHECK(xi.real_branch);
  const auto st = xi.state();
  CHECK(1.0 - fidelity(dec.eigenvectors[0], st) == doctest::Approx(0.0005395841640125631).epsilon(1e-8));
  const double zeta0 = minimize_coherent(n8);
  const double coh_inf = 1.0 - fidelity(dec.eigenvectors[0], coherent(n8, SpherePoint::finite(zeta0)));
  CHECK(coh_inf == doctest::Approx(0.005292832336685316).epsilon(1e-8));
  CHECK(fidelity(dec.eigenvectors[0], st) > 1.0 - coh_inf);

  for (int N : {2, 4, 8, 16, 40, 80, 160}) {
    ParticleNumber n(N);
    const double lam = eigh(build_term(n, Term::Weighted0)).eigenvalues[0];
    const auto x = xi_two_equation_solve(n, lam);
    const auto rows = consistency_rows(x.state(), ConsistencyKind::Weighted0, lam);
    CHECK(rows[0] <= 1e-10);
    CHECK(rows[1] <= 1e-10);
  }
  CHECK_THROWS_AS(xi_two_equation_solve(ParticleNumber(5), -1.0), DomainError);
}

TEST_CASE("coherent energy and its minimizer") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int N : {1, 2, 8, 33, 160}) {
    ParticleNumber n(N);
    CHECK(coherent_energy(n, 0.0) == 0.0);
    // Against the expectation in the actual coherent state.
    for (double z : {-1.3, -0.4, 0.7}) {
      const auto v = coherent(n, SpherePoint::finite(z));
      CHECK(coherent_energy(n, z) == doctest::Approx(expectation(build_term(n, Term::Weighted0), v)).epsilon(1e-11));
    }
    const double z0 = minimize_coherent(n);
    const double uu = (-3.0 * (N - 1) + std::sqrt(9.0 * (N - 1) * (N - 1) + 4.0 * N)) / 2.0;
    if (N > 1) CHECK(z0 == doctest::Approx(-std::sqrt(uu)).epsilon(1e-10));
    const double e0 = coherent_energy(n, z0);
    for (int rep = 0; rep < 1000; ++rep) {
      const double z = u(rng);
      CHECK(coherent_energy(n, z) == doctest::Approx(-coherent_energy(n, -z)).epsilon(1e-15));
      CHECK(e0 <= coherent_energy(n, z) + 1e-12 * std::abs(e0));
    }
  }
  CHECK(std::abs(std::abs(minimize_coherent(ParticleNumber(160))) - 1.0 / std::sqrt(3.0)) < 1e-2);
}

TEST_CASE("Nelder-Mead") {
  OptimizerConfig cfg;
  cfg.init = {0.0};
  const auto r = nelder_mead([](const std::vector<double>& x) { return (x[0] - 2.0) * (x[0] - 2.0); }, cfg);
  CHECK(r.converged);
  CHECK(r.params[0] == doctest::Approx(2.0).epsilon(1e-7));

  auto rosen = [](const std::vector<double>& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  OptimizerConfig c2;
  c2.init = {-1.2, 1.0};
  c2.max_iter = 5000;
  const auto a = nelder_mead(rosen, c2, true);
  const auto b = nelder_mead(rosen, c2, true);
  CHECK(a.params == b.params);
  CHECK(a.value == b.value);
  CHECK(a.trace.size() == b.trace.size());
  CHECK(std::abs(a.params[0] - 1.0) < 1e-4);
  CHECK(std::abs(a.params[1] - 1.0) < 1e-4);
  for (size_t i = 1; i < a.trace.size(); ++i)
    if (a.trace[i].iteration > a.trace[i - 1].iteration) CHECK(a.trace[i].value <= a.trace[i - 1].value);

  // Restarting from a perturbed start lands within tol_x.
  OptimizerConfig c3 = cfg;
  c3.init = {0.05};
  CHECK(std::abs(nelder_mead([](const std::vector<double>& x) { return (x[0] - 2.0) * (x[0] - 2.0); }, c3).params[0] -
                 r.params[0]) < 2.0 * cfg.tol_x);

  OptimizerConfig bad = cfg;
  bad.tol_f = 0.0;
  CHECK_THROWS_AS(nelder_mead([](const std::vector<double>&) { return 0.0; }, bad), DomainError);
  OptimizerConfig few = c2;
  few.max_iter = 3;
  few.restarts = 0;
  CHECK_FALSE(nelder_mead(rosen, few).converged);
}

TEST_CASE("near-optimal families") {
  for (int N = 4; N <= 64; N += 4) {
    ParticleNumber n(N);
    const auto pair = build_term(n, Term::Pair);
    for (double eta : {0.0, 1.1}) {
      const auto v = near_optimal_family(FamilyKind::A2Even, n, eta);
      CHECK(std::abs(expectation(pair, v)) <= 1e-10 * spectrum_bounds(pair).norm());
      CHECK(norm2(v.amplitudes()) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  for (int N : {6, 10, 30}) {
    ParticleNumber n(N);
    const auto pair = build_term(n, Term::Pair);
    CHECK(std::abs(expectation(pair, near_optimal_family(FamilyKind::A2Even, n, 0.4))) <=
          1e-10 * spectrum_bounds(pair).norm());
  }
  for (int N : {3, 7, 15}) {
    ParticleNumber n(N);
    const auto v = near_optimal_family(FamilyKind::A2Odd, n, 0.3, {0.4, 1.0, 2.0, -0.5});
    CHECK(norm2(v.amplitudes()) == doctest::Approx(1.0).epsilon(1e-14));
  }
  for (int N : {2, 8, 20, 64}) {
    ParticleNumber n(N);
    const auto w0 = build_term(n, Term::Weighted0);
    const auto x = xi_two_equation_solve(n, eigh(w0).eigenvalues[0]);
    if (!x.real_branch) continue;
    const auto v = near_optimal_family(FamilyKind::T0, n, 0.7, {x.w, x.z.real()});
    CHECK(std::abs(expectation(w0, v)) <= 1e-10 * spectrum_bounds(w0).norm());
  }
  CHECK_THROWS_AS(near_optimal_family(FamilyKind::A2Even, ParticleNumber(5), 0.0), DomainError);
  CHECK_THROWS_AS(near_optimal_family(FamilyKind::A2Odd, ParticleNumber(6), 0.0, {0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(near_optimal_family(FamilyKind::A2Odd, ParticleNumber(5), 0.0), DomainError);
  CHECK_THROWS_AS(near_optimal_family(FamilyKind::T0, ParticleNumber(4), 0.0, {0.1}), DomainError);
}

TEST_CASE("omega branches split between the ground and first excited states") {
  for (int N = 8; N <= 160; N += 4) {
    ParticleNumber n(N);
    const auto dec = eigh_by_parity(build_term(n, Term::Pair));
    const double c = tilde_c(n).c_tilde;
    const auto wp = omega(n, c, Branch::Plus), wm = omega(n, c, Branch::Minus);
    const bool plus_ground = fidelity(wp, dec.eigenvectors[0]) > fidelity(wm, dec.eigenvectors[0]);
    const bool plus_excited = fidelity(wp, dec.eigenvectors[1]) > fidelity(wm, dec.eigenvectors[1]);
    CHECK(plus_ground != plus_excited);
    CHECK((ground_branch(n, c) == Branch::Plus) == plus_ground);
  }
}
