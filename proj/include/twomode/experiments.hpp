#pragma once

// Figure, table and scalar reproductions as plain row data, plus the
// row-parallel sweep driver used by the CLI.

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "twomode/spectral.hpp"
#include "twomode/states.hpp"
#include "twomode/variational.hpp"

namespace twomode {

struct SweepRange {
  int nmin = 8;
  int nmax = 160;
  int step = 4;
  // Every N in [nmin, nmax] at the given step. Throws DomainError on an empty
  // or malformed range, or when even_only and a sampled N is odd.
  std::vector<int> values(bool even_only = true) const;
};

// Worker count: METRO_THREADS if set and positive, else `requested`, else 1.
int resolve_threads(int requested);

// Evaluates f on every input with up to `threads` workers. Results keep input
// order; the first exception is rethrown after all workers stop.
template <class In, class F>
auto parallel_map(const std::vector<In>& inputs, int threads, F f) {
  using Out = decltype(f(inputs.front()));
  std::vector<std::optional<Out>> slots(inputs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (size_t i = next++; i < inputs.size(); i = next++) {
      try {
        slots[i].emplace(f(inputs[i]));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = inputs.size();
      }
    }
  };
  const int k = std::max(1, std::min<int>(threads, static_cast<int>(inputs.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < k; ++t) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);
  std::vector<Out> out;
  out.reserve(inputs.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct Fig1Data {
  int N = 0;
  std::vector<double> eigenvalues;
  std::vector<GapPair> gaps;
};
Fig1Data fig1(int N, double tol = kDefaultResidualTol);

// Fidelities of omega(+/-) at c-tilde with the two lowest pair eigenstates.
struct Fig2Row {
  int N = 0;
  double c = 0.0;
  double plus_e1 = 0.0, plus_e2 = 0.0, minus_e1 = 0.0, minus_e2 = 0.0;
  bool exact_c = false;  // N=4, where c-tilde gives the exact ground state
  double best_infidelity() const;
};
Fig2Row fig2_row(int N, double tol = kDefaultResidualTol);

// (|i> + s|-i>) against the pair ground state for s = +1, -1.
struct Fig3Row {
  int N = 0;
  double infidelity_plus = 0.0;
  double infidelity_minus = 0.0;
  char best_sign() const { return infidelity_plus <= infidelity_minus ? '+' : '-'; }
  double best_infidelity() const { return std::min(infidelity_plus, infidelity_minus); }
};
Fig3Row fig3_row(int N, double tol = kDefaultResidualTol);

struct Fig4Optimized {
  double w0 = 0.0;
  double z0 = 0.0;
  double infidelity = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

// Weighted0 ground state against the best real coherent state, the
// two-equation pair state and (optionally) the optimized pair state.
struct Fig4Row {
  int N = 0;
  double lambda0 = 0.0;
  double zeta0 = 0.0;
  double infidelity_coherent = 0.0;
  XiSolution xi;
  double infidelity_two_eq = 0.0;
  std::optional<Fig4Optimized> opt;
};

// Simplex settings for the pair-state fit. The objective is log(1 - F), so
// tol_f is a relative tolerance on the infidelity.
OptimizerConfig fig4_optimizer_config(double w_start, double z_start);
Fig4Row fig4_row(int N, bool optimize, bool keep_trace = false, double tol = kDefaultResidualTol);

struct Table1Row {
  int N = 0;
  double qfi = 0.0;         // 4 Var(2Jx)
  double normalized = 0.0;  // qfi / (2N)^2
};
Table1Row table1_row(int N, double tol = kDefaultResidualTol);
const std::vector<int>& table1_default_ns();

struct HeadlineScalars {
  int N = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double f_max = 0.0;       // (lambda_max - lambda_min)^2
  double gap_family = 0.0;  // F_max - QFI of the near-optimal omega family
  double gap_psi4 = 0.0;    // F_max - QFI of psi4
  double nu_ratio = 0.0;    // run_ratio(gap_family, gap_psi4, F_max)
  double nu_ratio_lambda_max_sq = 0.0;  // same with lambda_max^2 as the maximum
  double psi4_variance = 0.0;
  double psi4_closed_form = 0.0;
  ConsistencySolution consistency;
  double ground_fidelity = 0.0;  // omega(c-tilde) ground branch vs parity ground state
};
HeadlineScalars headline_scalars(int N, double tol = kDefaultResidualTol);

// Full consistency residual of omega(c) over a c grid; minima locate the
// conjectured exact-eigenvector parameter for each N.
struct ConjectureScan {
  int N = 0;
  double best_c = 0.0;
  double best_residual = 0.0;
  double lambda = 0.0;
  Branch branch = Branch::Plus;
};
ConjectureScan conjecture_scan(int N, int grid = 400);

}  // namespace twomode
