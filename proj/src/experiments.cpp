#include "twomode/experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "twomode/error.hpp"
#include "twomode/metrology.hpp"

namespace twomode {

std::vector<int> SweepRange::values(bool even_only) const {
  if (step <= 0) throw DomainError("--step must be positive, got " + std::to_string(step));
  if (nmin < 1) throw DomainError("--nmin must be at least 1, got " + std::to_string(nmin));
  if (nmax < nmin) throw DomainError("--nmax (" + std::to_string(nmax) + ") is below --nmin (" + std::to_string(nmin) + ")");
  std::vector<int> out;
  for (int n = nmin; n <= nmax; n += step) {
    if (even_only && n % 2 != 0) throw DomainError("sweep needs even N, got N=" + std::to_string(n));
    out.push_back(n);
  }
  return out;
}

int resolve_threads(int requested) {
  if (const char* env = std::getenv("METRO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    throw DomainError(std::string("METRO_THREADS must be a positive integer, got '") + env + "'");
  }
  return std::max(1, requested);
}

Fig1Data fig1(int N, double tol) {
  ParticleNumber n(N);
  if (!n.is_even()) throw DomainError("fig1 needs even N, got N=" + std::to_string(N));
  if (N > 512) throw DomainError("fig1 supports N <= 512, got N=" + std::to_string(N));
  const auto dec = eigh_by_parity(build_term(n, Term::Pair), tol);
  return {N, dec.eigenvalues, gap_pairs(dec)};
}

double Fig2Row::best_infidelity() const { return 1.0 - std::max(plus_e1, minus_e1); }

Fig2Row fig2_row(int N, double tol) {
  ParticleNumber n(N);
  const auto dec = eigh_by_parity(build_term(n, Term::Pair), tol);
  Fig2Row r;
  r.N = N;
  r.c = tilde_c(n).c_tilde;
  r.exact_c = N == 4;
  const auto wp = omega(n, r.c, Branch::Plus);
  const auto wm = omega(n, r.c, Branch::Minus);
  r.plus_e1 = fidelity(wp, dec.eigenvectors[0]);
  r.plus_e2 = fidelity(wp, dec.eigenvectors[1]);
  r.minus_e1 = fidelity(wm, dec.eigenvectors[0]);
  r.minus_e2 = fidelity(wm, dec.eigenvectors[1]);
  return r;
}

Fig3Row fig3_row(int N, double tol) {
  ParticleNumber n(N);
  const auto ground = eigh_by_parity(build_term(n, Term::Pair), tol).eigenvectors[0];
  const auto up = coherent(n, SpherePoint::finite({0.0, 1.0}));
  const auto down = coherent(n, SpherePoint::finite({0.0, -1.0}));
  auto infidelity = [&](double s) {
    std::vector<cplx> c(n.dim());
    for (int k = 0; k < n.dim(); ++k) c[k] = up[k] + s * down[k];
    return 1.0 - fidelity(DickeVector(n, std::move(c)), ground);
  };
  return {N, infidelity(1.0), infidelity(-1.0)};
}

OptimizerConfig fig4_optimizer_config(double w_start, double z_start) {
  OptimizerConfig cfg;
  cfg.init = {w_start, z_start};
  cfg.simplex_scale = 0.1;
  cfg.tol_f = 1e-8;
  cfg.tol_x = 1e-7;
  cfg.max_iter = 2000;
  cfg.restarts = 3;
  cfg.restart_shift = 0.05;
  return cfg;
}

Fig4Row fig4_row(int N, bool optimize, bool keep_trace, double tol) {
  ParticleNumber n(N);
  const auto dec = eigh(build_term(n, Term::Weighted0), tol);
  const auto& ground = dec.eigenvectors[0];
  Fig4Row r;
  r.N = N;
  r.lambda0 = dec.eigenvalues[0];
  r.zeta0 = minimize_coherent(n);
  r.infidelity_coherent = 1.0 - fidelity(ground, coherent(n, SpherePoint::finite(r.zeta0)));
  r.xi = xi_two_equation_solve(n, r.lambda0);
  r.infidelity_two_eq = 1.0 - fidelity(ground, r.xi.state());
  if (optimize) {
    // Real (w, z) only; a purely imaginary z-tilde starts the search at z = 0.
    const double z_start = r.xi.real_branch ? r.xi.z.real() : 0.0;
    auto objective = [&](const std::vector<double>& p) {
      const double inf = 1.0 - fidelity(ground, xi_pair(n, p[0], p[1]));
      return std::log(std::max(inf, std::numeric_limits<double>::min()));
    };
    const auto res = nelder_mead(objective, fig4_optimizer_config(r.xi.w, z_start), keep_trace);
    Fig4Optimized o;
    o.w0 = res.params[0];
    o.z0 = res.params[1];
    o.infidelity = 1.0 - fidelity(ground, xi_pair(n, o.w0, o.z0));
    o.iterations = res.iterations;
    o.converged = res.converged;
    o.trace = res.trace;
    r.opt = std::move(o);
  }
  return r;
}

const std::vector<int>& table1_default_ns() {
  static const std::vector<int> ns = {4, 36, 68, 100, 132, 160};
  return ns;
}

Table1Row table1_row(int N, double tol) {
  ParticleNumber n(N);
  const auto dec = eigh_by_parity(-1.0 * build_term(n, Term::Pair), tol);
  const double q = qfi_pure(dec.eigenvectors[0], build_term(n, Term::Tunnel1)).qfi;
  return {N, q, q / (4.0 * double(N) * N)};
}

HeadlineScalars headline_scalars(int N, double tol) {
  ParticleNumber n(N);
  if (!n.is_even() || N < 4) throw DomainError("scalars need even N >= 4, got N=" + std::to_string(N));
  const auto pair = build_term(n, Term::Pair);
  const auto dec = eigh_by_parity(pair, tol);
  HeadlineScalars s;
  s.N = N;
  s.lambda_min = dec.eigenvalues.front();
  s.lambda_max = dec.eigenvalues.back();
  s.f_max = (s.lambda_max - s.lambda_min) * (s.lambda_max - s.lambda_min);
  const auto family = near_optimal_family(FamilyKind::A2Even, n, 0.0);
  s.gap_family = s.f_max - qfi_pure(family, pair).qfi;
  s.psi4_variance = variance(pair, psi4(n));
  s.gap_psi4 = s.f_max - 4.0 * s.psi4_variance;
  s.nu_ratio = run_ratio(s.gap_family, s.gap_psi4, s.f_max);
  s.nu_ratio_lambda_max_sq = run_ratio(s.gap_family, s.gap_psi4, s.lambda_max * s.lambda_max);
  s.psi4_closed_form = closed_form_psi4_variance(n);
  s.consistency = tilde_c(n);
  const auto w = omega(n, s.consistency.c_tilde, ground_branch(n, s.consistency.c_tilde));
  s.ground_fidelity = fidelity(w, dec.eigenvectors[0]);
  return s;
}

ConjectureScan conjecture_scan(int N, int grid) {
  ParticleNumber n(N);
  if (!n.is_even() || N < 4) throw DomainError("conjecture scan needs even N >= 4");
  if (grid < 2) throw DomainError("conjecture scan needs at least two grid points");
  const auto pair = build_term(n, Term::Pair);
  auto eval = [&](double c, Branch b) {
    const auto v = omega(n, c, b);
    return std::pair{consistency_residual(v, ConsistencyKind::Pair, expectation(pair, v)), expectation(pair, v)};
  };
  ConjectureScan best;
  best.N = N;
  best.best_residual = std::numeric_limits<double>::infinity();
  const double lo = 0.05, hi = 1.5;
  for (Branch b : {Branch::Plus, Branch::Minus}) {
    double arg = lo, val = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
      const double c = lo + (hi - lo) * i / (grid - 1);
      const double r = eval(c, b).first;
      if (r < val) {
        val = r;
        arg = c;
      }
    }
    const double h = (hi - lo) / (grid - 1);
    auto [c, r] = boost::math::tools::brent_find_minima([&](double x) { return eval(x, b).first; },
                                                        std::max(lo, arg - h), std::min(hi, arg + h), 40);
    if (r < best.best_residual) {
      best.best_c = c;
      best.best_residual = r;
      best.lambda = eval(c, b).second;
      best.branch = b;
    }
  }
  return best;
}

}  // namespace twomode
