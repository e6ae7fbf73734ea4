#include "twomode/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "twomode/error.hpp"
#include "twomode/metrology.hpp"
#include "twomode/spectral.hpp"

namespace twomode {

namespace {

// <k|J+^2 + J-^2|k+2>, zero outside 0 <= k <= N-2.
double pair_f(int N, int k) {
  if (k < 0 || k > N - 2) return 0.0;
  return std::sqrt(double(N - k - 1) * (N - k) * (k + 1) * (k + 2));
}

cplx amp(const DickeVector& v, int k) { return k < 0 || k >= v.dim() ? cplx{} : v[k]; }

void require_even_at_least(ParticleNumber n, int lo, const char* what) {
  if (!n.is_even() || n.value() < lo)
    throw DomainError(std::string(what) + " needs even N >= " + std::to_string(lo) + ", got N=" +
                      std::to_string(n.value()));
}

double printed_c(int N) { return std::sqrt((N - 3.0 + std::sqrt(double(N) * N - 2.0 * N + 3.0)) / (4.0 * N - 6.0)); }

// Unnormalized omega(-) amplitude at odd k, divided by the common factor i.
// Only the l <= k/2 terms of the trinomial reach k = j + 2l, so this is O(k).
double omega_minus_low(int N, double c, int k) {
  const int M = N / 2;
  const double base = 0.5 * std::lgamma(N + 1.0);
  double sum = 0.0;
  for (int l = 0; 2 * l <= k; ++l) {
    const int j = k - 2 * l;
    if (j + l > M) continue;
    const double lt = std::lgamma(M + 1.0) - std::lgamma(M - j - l + 1.0) - std::lgamma(j + 1.0) -
                      std::lgamma(l + 1.0) + j * std::log(2.0 * c) +
                      0.5 * (std::lgamma(N - k + 1.0) + std::lgamma(k + 1.0)) - base;
    // i^j (-1)^l with j odd is i (-1)^((j-1)/2 + l).
    const int sign = (((j - 1) / 2 + l) % 2 == 0) ? 1 : -1;
    sum += sign * std::exp(lt);
  }
  return sum;
}

// Second odd row f1 C1 + f3 C5 - lambda C3 with lambda = f1 C3 / C1, scaled by
// C1.
double odd_row_mismatch(ParticleNumber n, double c) {
  const int N = n.value();
  const double c1 = omega_minus_low(N, c, 1);
  const double r3 = omega_minus_low(N, c, 3) / c1;
  const double r5 = omega_minus_low(N, c, 5) / c1;
  const double f1 = pair_f(N, 1), f3 = pair_f(N, 3);
  return f1 + f3 * r5 - f1 * r3 * r3;
}

}  // namespace

double tilde_c_closed_form(int pairs) {
  if (pairs < 2) throw DomainError("closed form needs at least two pairs");
  const double m = pairs;
  return std::sqrt((m - 3.0 + std::sqrt(m * m - 2.0 * m + 3.0)) / (4.0 * m - 6.0));
}

ConsistencySolution tilde_c(ParticleNumber n, ConsistencyRows rows) {
  require_even_at_least(n, 4, "tilde_c");
  const int N = n.value();
  ConsistencySolution s;
  s.rows = rows;
  s.printed_c = printed_c(N);
  s.printed_lambda = -2.0 * N * (1.0 + 2.0 * s.printed_c * s.printed_c) - 4.0 * double(N) * N * s.printed_c * s.printed_c;

  const double c_even = tilde_c_closed_form(N / 2);
  if (rows == ConsistencyRows::Even) {
    s.c_tilde = c_even;
    s.source = ConsistencySource::ClosedForm;
    const auto v = omega(n, s.c_tilde, Branch::Plus);
    const cplx c0 = amp(v, 0), c2 = amp(v, 2), c4 = amp(v, 4);
    s.lambda_tilde = (pair_f(N, 0) * c2 / c0).real();
    double cmax = 0.0;
    for (const auto& x : v.amplitudes()) cmax = std::max(cmax, std::abs(x));
    s.row_residual =
        std::abs(pair_f(N, 0) * c0 + pair_f(N, 2) * c4 - s.lambda_tilde * c2) / (std::abs(s.lambda_tilde) * cmax);
    if (s.row_residual > 1e-10) throw ConvergenceError("closed-form c does not satisfy the k=2 row");
    return s;
  }

  // Odd rows: scan for sign changes of the k=3 mismatch, refine each bracket,
  // keep the root nearest the even-row value.
  if (N < 6) throw DomainError("odd consistency rows need N >= 6");
  s.source = ConsistencySource::TwoEquationSolve;
  std::optional<double> best;
  const int steps = 600;
  double a = 0.01, fa = odd_row_mismatch(n, a);
  for (int i = 1; i <= steps; ++i) {
    const double b = 0.01 + i * (3.0 - 0.01) / steps;
    const double fb = odd_row_mismatch(n, b);
    if (fa == 0.0 || fa * fb < 0.0) {
      double root = a;
      if (fa != 0.0) {
        boost::uintmax_t iters = 200;
        auto [lo, hi] = boost::math::tools::toms748_solve([&](double c) { return odd_row_mismatch(n, c); }, a, b, fa, fb,
                                                          boost::math::tools::eps_tolerance<double>(50), iters);
        root = 0.5 * (lo + hi);
      }
      if (!best || std::abs(root - c_even) < std::abs(*best - c_even)) best = root;
    }
    a = b;
    fa = fb;
  }
  if (!best) throw ConvergenceError("no root of the odd consistency rows in (0, 3]");
  s.c_tilde = *best;
  const auto v = omega(n, s.c_tilde, Branch::Minus);
  const cplx c1 = amp(v, 1), c3 = amp(v, 3), c5 = amp(v, 5);
  s.lambda_tilde = (pair_f(N, 1) * c3 / c1).real();
  double cmax = 0.0;
  for (const auto& x : v.amplitudes()) cmax = std::max(cmax, std::abs(x));
  s.row_residual =
      std::abs(pair_f(N, 1) * c1 + pair_f(N, 3) * c5 - s.lambda_tilde * c3) / (std::abs(s.lambda_tilde) * cmax);
  return s;
}

std::vector<double> consistency_rows(const DickeVector& v, ConsistencyKind kind, double lambda) {
  const int N = v.particles().value();
  const auto op = build_term(v.particles(), kind == ConsistencyKind::Pair ? Term::Pair : Term::Weighted0);
  const double norm = spectrum_bounds(op).norm();
  double cmax = 0.0;
  for (const auto& x : v.amplitudes()) cmax = std::max(cmax, std::abs(x));
  const double scale = norm * cmax;

  std::vector<double> out(N + 1);
  for (int k = 0; k <= N; ++k) {
    cplx lhs;
    if (kind == ConsistencyKind::Pair) {
      lhs = pair_f(N, k - 2) * amp(v, k - 2) + pair_f(N, k) * amp(v, k + 2);
    } else {
      const double up = k < N ? (N - k) * std::sqrt(double(N - k) * (k + 1)) : 0.0;
      const double down = k > 0 ? (N - k + 1) * std::sqrt(double(N - k + 1) * k) : 0.0;
      lhs = up * amp(v, k + 1) + down * amp(v, k - 1);
    }
    out[k] = std::abs(lhs - lambda * v[k]) / scale;
  }
  return out;
}

double consistency_residual(const DickeVector& v, ConsistencyKind kind, double lambda) {
  const auto r = consistency_rows(v, kind, lambda);
  return *std::max_element(r.begin(), r.end());
}

DickeVector XiSolution::state() const { return xi_pair(n, w, z); }

XiSolution xi_two_equation_solve(ParticleNumber n, double lambda0) {
  require_even_at_least(n, 2, "xi_two_equation_solve");
  if (!std::isfinite(lambda0)) throw DomainError("non-finite lambda0");
  const double N = n.value();
  const double M = N / 2.0;
  const double sN = N * std::sqrt(N);
  const double r1 = lambda0 / sN;
  const double r2 = (lambda0 * r1 - sN) / ((N - 1.0) * std::sqrt(2.0 * (N - 1.0)));
  XiSolution s;
  s.n = n;
  s.w = r1 / std::sqrt(N);
  s.z_squared = (r2 * std::sqrt(N * (N - 1.0) / 2.0) - 2.0 * M * (M - 1.0) * s.w * s.w) / M;
  if (!std::isfinite(s.w) || !std::isfinite(s.z_squared)) throw DomainError("degenerate trinomial expansion");
  s.real_branch = s.z_squared >= 0.0;
  s.z = s.real_branch ? cplx(std::sqrt(s.z_squared), 0.0) : cplx(0.0, std::sqrt(-s.z_squared));
  return s;
}

double coherent_energy(ParticleNumber n, double zeta) {
  const double N = n.value();
  const double d = 1.0 + zeta * zeta;
  return 2.0 * N * (N - 1.0) * zeta / (d * d) + 2.0 * N * zeta / d;
}

double minimize_coherent(ParticleNumber n) {
  auto [x, fx] = boost::math::tools::brent_find_minima([&](double z) { return coherent_energy(n, z); }, -10.0, 0.0,
                                                       std::numeric_limits<double>::digits);
  (void)fx;
  // Brent stops near sqrt(eps) in x; polish on the derivative to ~1e-15.
  const double N = n.value();
  auto slope = [N](double z) {
    const double d = 1.0 + z * z;
    return 2.0 * N * (N - 1.0) * (1.0 - 3.0 * z * z) / (d * d * d) + 2.0 * N * (1.0 - z * z) / (d * d);
  };
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  const double a = x - h, b = x + h;
  const double fa = slope(a), fb = slope(b);
  if (fa < 0.0 && fb > 0.0) {
    boost::uintmax_t iters = 100;
    auto [lo, hi] = boost::math::tools::toms748_solve(slope, a, b, fa, fb,
                                                      boost::math::tools::eps_tolerance<double>(52), iters);
    x = 0.5 * (lo + hi);
  }
  return x;
}

OptimizerResult nelder_mead(const Objective& f, const OptimizerConfig& cfg, bool keep_trace) {
  const int d = static_cast<int>(cfg.init.size());
  if (d == 0) throw DomainError("optimizer needs at least one parameter");
  if (!(cfg.tol_f > 0.0) || !(cfg.tol_x > 0.0) || !(cfg.simplex_scale > 0.0) || cfg.max_iter < 1 || cfg.restarts < 0)
    throw DomainError("optimizer tolerances, scale and budgets must be positive");

  using Point = std::vector<double>;
  OptimizerResult best;
  best.value = std::numeric_limits<double>::infinity();

  auto run = [&](Point start, OptimizerResult& out) {
    std::vector<Point> x(d + 1, start);
    std::vector<double> fx(d + 1);
    for (int i = 0; i < d; ++i) x[i + 1][i] += cfg.simplex_scale;
    for (int i = 0; i <= d; ++i) fx[i] = f(x[i]);
    if (!std::isfinite(fx[0])) throw DomainError("objective is not finite at the initial point");

    std::vector<int> order(d + 1);
    int it = 0;
    bool done = false;
    for (; it < cfg.max_iter; ++it) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
      std::vector<Point> xs(d + 1);
      std::vector<double> fs(d + 1);
      for (int i = 0; i <= d; ++i) {
        xs[i] = x[order[i]];
        fs[i] = fx[order[i]];
      }
      x.swap(xs);
      fx.swap(fs);
      if (keep_trace) out.trace.push_back({out.iterations + it, x[0], fx[0]});

      double spread_f = 0.0, spread_x = 0.0;
      for (int i = 1; i <= d; ++i) {
        spread_f = std::max(spread_f, std::abs(fx[i] - fx[0]));
        for (int j = 0; j < d; ++j) spread_x = std::max(spread_x, std::abs(x[i][j] - x[0][j]));
      }
      if (spread_f <= cfg.tol_f && spread_x <= cfg.tol_x) {
        done = true;
        break;
      }

      Point centroid(d, 0.0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) centroid[j] += x[i][j] / d;
      auto along = [&](double t) {
        Point p(d);
        for (int j = 0; j < d; ++j) p[j] = centroid[j] + t * (x[d][j] - centroid[j]);
        return p;
      };

      Point xr = along(-1.0);
      const double fr = f(xr);
      if (fr < fx[0]) {
        Point xe = along(-2.0);
        const double fe = f(xe);
        if (fe < fr) {
          x[d] = std::move(xe);
          fx[d] = fe;
        } else {
          x[d] = std::move(xr);
          fx[d] = fr;
        }
        continue;
      }
      if (fr < fx[d - 1]) {
        x[d] = std::move(xr);
        fx[d] = fr;
        continue;
      }
      const bool outside = fr < fx[d];
      Point xc = along(outside ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < (outside ? fr : fx[d])) {
        x[d] = std::move(xc);
        fx[d] = fc;
        continue;
      }
      for (int i = 1; i <= d; ++i) {
        for (int j = 0; j < d; ++j) x[i][j] = x[0][j] + 0.5 * (x[i][j] - x[0][j]);
        fx[i] = f(x[i]);
      }
    }
    const int b = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    out.iterations += it;
    if (fx[b] < out.value) {
      out.value = fx[b];
      out.params = x[b];
      out.converged = done;
    }
  };

  run(cfg.init, best);
  for (int r = 0; r < cfg.restarts; ++r) {
    Point start = best.params;
    for (auto& p : start) p += cfg.restart_shift;
    run(start, best);
  }
  return best;
}

Branch ground_branch(ParticleNumber n, double c) {
  const auto pair = build_term(n, Term::Pair);
  const double ep = expectation(pair, omega(n, c, Branch::Plus));
  const double em = expectation(pair, omega(n, c, Branch::Minus));
  // Quotients equal to roundoff go to Plus, whose even-k support holds the
  // true ground state.
  return ep <= em + 1e-12 * std::abs(em) ? Branch::Plus : Branch::Minus;
}

DickeVector near_optimal_family(FamilyKind kind, ParticleNumber n, double eta, const std::vector<double>& extra) {
  constexpr double kHalfPi = 1.57079632679489661923;
  switch (kind) {
    case FamilyKind::A2Even: {
      if (!n.is_even()) throw DomainError("A2 even family needs even N");
      const double c = tilde_c(n).c_tilde;
      auto psi_min = omega(n, c, ground_branch(n, c));
      auto psi_max = rotate_z(psi_min, kHalfPi);
      return variational_superposition(SuperpositionSpec::from_states(std::move(psi_min), std::move(psi_max), eta));
    }
    case FamilyKind::A2Odd: {
      if (n.is_even()) throw DomainError("A2 odd family needs odd N");
      if (extra.size() != 4) throw DomainError("A2 odd family needs (theta, phi, theta2, phi2)");
      const auto dec = eigh_by_parity(build_term(n, Term::Pair));
      auto even_weight = [](const DickeVector& v) {
        double s = 0.0;
        for (int k = 0; k < v.dim(); k += 2) s += std::norm(v[k]);
        return s;
      };
      const bool first_even = even_weight(dec.eigenvectors[0]) > 0.5;
      const DickeVector& ge = dec.eigenvectors[first_even ? 0 : 1];
      const DickeVector& go = dec.eigenvectors[first_even ? 1 : 0];
      const auto mix = [&](const DickeVector& e, const DickeVector& o, double th, double ph) {
        std::vector<cplx> c(n.dim());
        const cplx so = std::sin(th / 2.0) * std::polar(1.0, ph);
        for (int k = 0; k < n.dim(); ++k) c[k] = std::cos(th / 2.0) * e[k] + so * o[k];
        return DickeVector(n, std::move(c));
      };
      const auto lo = mix(ge, go, extra[0], extra[1]);
      const auto hi = mix(rotate_z(ge, kHalfPi), rotate_z(go, kHalfPi), extra[2], extra[3]);
      std::vector<cplx> c(n.dim());
      const cplx e = std::polar(1.0, eta);
      for (int k = 0; k < n.dim(); ++k) c[k] = lo[k] + e * hi[k];
      return DickeVector(n, std::move(c));
    }
    case FamilyKind::T0: {
      if (extra.size() != 2) throw DomainError("T0 family needs (w0, z0)");
      auto psi_min = xi_pair(n, extra[0], extra[1]);
      auto psi_max = rotate_z(psi_min, 2.0 * kHalfPi);
      return variational_superposition(SuperpositionSpec::from_states(std::move(psi_min), std::move(psi_max), eta));
    }
  }
  throw DomainError("unknown family kind");
}

}  // namespace twomode
