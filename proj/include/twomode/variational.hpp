#pragma once

// Consistency-condition solvers, variational parameters and the probe families
// built from them.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twomode/dicke.hpp"
#include "twomode/states.hpp"

namespace twomode {

enum class ConsistencySource { ClosedForm, TwoEquationSolve };

// Which pair of consistency rows fixes c: rows k=0,2 on omega(+) or rows
// k=1,3 on omega(-).
enum class ConsistencyRows { Even, Odd };

struct ConsistencySolution {
  double c_tilde = 0.0;
  double lambda_tilde = 0.0;  // f0 C2 / C0 (or f1 C3 / C1) from the amplitudes
  ConsistencySource source = ConsistencySource::ClosedForm;
  ConsistencyRows rows = ConsistencyRows::Even;
  // Residual of the second applied row, relative to |lambda| max|C|.
  double row_residual = 0.0;
  // The textbook closed forms evaluated literally at N, for side-by-side
  // reporting only: c = sqrt((N-3+sqrt(N^2-2N+3))/(4N-6)),
  // lambda = -2N(1+2c^2) - 4N^2 c^2.
  double printed_c = 0.0;
  double printed_lambda = 0.0;
};

// c solving the k=0 and k=2 pair rows for omega(+). The closed form is
// evaluated at M = N/2 (the number of pairs), which is the exact root of the
// two rows; lambda is re-solved from the amplitudes. With rows == Odd the k=1,3
// rows on omega(-) are solved numerically instead.
ConsistencySolution tilde_c(ParticleNumber n, ConsistencyRows rows = ConsistencyRows::Even);

// Closed-form root of the k=0,2 rows for M = N/2 pairs.
double tilde_c_closed_form(int pairs);

enum class ConsistencyKind { Pair, Weighted0 };

// Per-row residuals |LHS_k - lambda C_k| / (||A|| max|C|).
std::vector<double> consistency_rows(const DickeVector& v, ConsistencyKind kind, double lambda);
double consistency_residual(const DickeVector& v, ConsistencyKind kind, double lambda);

struct XiSolution {
  double w = 0.0;
  double z_squared = 0.0;
  cplx z = 0.0;  // sqrt(z^2); imaginary when z^2 < 0
  bool real_branch = true;
  DickeVector state() const;
  ParticleNumber n{2};
};

// Solve the k=0,1 rows of the weighted0 eigen-equation for C1/C0 and C2/C0 and
// invert the trinomial relations for (w, z).
XiSolution xi_two_equation_solve(ParticleNumber n, double lambda0);

// <zeta|weighted0|zeta> for real zeta.
double coherent_energy(ParticleNumber n, double zeta);
// Real minimizer on [-10, 0] by Brent's golden-section/parabolic search.
double minimize_coherent(ParticleNumber n);

struct OptimizerConfig {
  std::vector<double> init;
  double simplex_scale = 0.1;
  double tol_f = 1e-10;
  double tol_x = 1e-8;
  int max_iter = 2000;
  int restarts = 3;
  double restart_shift = 0.05;
};

struct TracePoint {
  int iteration;
  std::vector<double> params;
  double value;
};

struct OptimizerResult {
  std::vector<double> params;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;  // best vertex per iteration, if requested
};

using Objective = std::function<double(const std::vector<double>&)>;

// Downhill simplex with coefficients (1, 2, 0.5, 0.5). Restart r starts from the
// best point so far shifted by r * restart_shift in every coordinate; the best
// result over all starts wins.
OptimizerResult nelder_mead(const Objective& f, const OptimizerConfig& cfg, bool keep_trace = false);

enum class FamilyKind { A2Even, A2Odd, T0 };

// A2Odd: extra = (theta, phi, theta2, phi2). T0: extra = (w0, z0).
DickeVector near_optimal_family(FamilyKind kind, ParticleNumber n, double eta, const std::vector<double>& extra = {});

// The omega branch with the lower pair-operator Rayleigh quotient at c; ties
// within 1e-12 relative pick Plus.
Branch ground_branch(ParticleNumber n, double c);

}  // namespace twomode
