#pragma once

// Riemannian inexact Newton dogleg iteration for Phi(S, Q) = 0.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sniep/manifold.hpp"
#include "sniep/normal_system.hpp"
#include "sniep/sniep_map.hpp"

namespace sniep {

struct SolverConfig {
  double t = 1e-4;            ///< Ared/Pred acceptance threshold
  double sigma_max = 1e-6;    ///< cap on the normal-equation shift
  double theta_min = 0.1;
  double theta_max = 0.9;
  double delta_min = 1e-8;
  double delta_max = 1e10;
  double rho_s = 0.1;
  double rho_e = 0.75;
  double beta_s = 0.25;
  double beta_e = 4.0;
  double epsilon = 5e-10;     ///< stop when ||Phi||_F <= epsilon
  int max_outer = 100;
  /// Inner CG cap; 0 selects n^2.
  int cg_max = 0;
  bool use_preconditioner = true;
  std::uint64_t seed = 0;
  /// Relative tolerance for "step lies on the trust-region boundary".
  double boundary_rtol = 1e-14;
  /// Radius shrink factor theta_k for outer iteration k.
  std::function<double(int)> theta = [](int) { return 0.25; };
  /// Forcing-term bound etabar_k.
  std::function<double(int)> etabar = [](int k) { return 1.0 / (k + 10.0); };

  /// Throws std::invalid_argument when a parameter is out of range.
  void validate() const;
};

enum class StepKind { Newton, ScaledCauchy, Interpolated };
enum class SolveStatus {
  Converged,
  StalledAtDeltaMin,
  MaxOuterReached,
  CgExhausted,
  StationaryPoint,
  /// The harness caught an exception for this run (malformed input).
  Failed
};

std::string to_string(StepKind kind);
std::string to_string(SolveStatus status);
SolveStatus parse_status(const std::string& s);

/// One accepted outer iteration.
struct IterationRecord {
  int k = 0;
  double res_norm = 0.0;  ///< ||F(x_k)||
  double sigma_k = 0.0;
  double eta_k = 0.0;
  double delta_k = 0.0;   ///< radius the accepted step was selected with
  int cg_iters = 0;
  StepKind step_kind = StepKind::Newton;
  double step_norm = 0.0;
  double in_norm = 0.0;   ///< ||dx^IN||
  double cp_norm = 0.0;
  double ared = 0.0;
  double pred = 0.0;
  int retries = 0;        ///< radius shrinks before acceptance
  double eta_in = 0.0;    ///< ||F + DF[dx^IN]|| / ||F||
  double eta_cp = 0.0;    ///< ||F + DF[dx^CP]|| / ||F||
  double tau = 0.0;       ///< ||F + DF[dx]|| / ||F||
  double next_res_norm = 0.0;
};

struct SolveCounters {
  int it = 0;   ///< accepted outer iterations
  int nf = 0;   ///< residual evaluations, including the initial one
  long ncg = 0; ///< total inner CG iterations
  double wall_seconds = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxOuterReached;
  ProductPoint final_point;
  double initial_residual = 0.0;
  double final_residual = 0.0;
  std::vector<IterationRecord> records;
  SolveCounters counters;
  std::string message;
};

/// -(||g||^2 / ||DF[g]||^2) g, the minimizer of ||F + DF[alpha g]|| over
/// alpha. Throws StationaryPointError when ||g|| <= stat_tol.
TangentVector cauchy_point(const Linearization& lin, const Residual& f,
                           const TangentVector& g, double stat_tol);

/// D Phi^*[dz].
TangentVector newton_point(const Linearization& lin, const CgOutcome& cg);

struct DoglegStep {
  TangentVector step;
  StepKind kind = StepKind::Newton;
  double norm = 0.0;
};

/// Newton point if it fits, else the scaled Cauchy point if that reaches the
/// boundary, else the point on the segment cp -> in_pt at distance delta.
DoglegStep select_dogleg_step(const ProductPoint& base, const TangentVector& cp,
                              const TangentVector& in_pt, double delta,
                              double delta_min);

struct AredPred {
  double ared = 0.0;
  double pred = 0.0;
  /// Trial point with its cached Q Lambda Q^T, reused if the step is taken.
  Linearization trial;
  Residual trial_residual;
};

/// Retracts, evaluates Phi at the trial point and forms both reductions.
/// Increments nf by one.
AredPred ared_pred(const SpectrumProblem& p, const Linearization& lin,
                   const TangentVector& step, const Residual& f, int& nf);

/// Radius for the next iteration after accepting a step with ratio
/// Ared/Pred.
double update_radius(double ratio, double step_norm, double in_norm,
                     double delta, const SolverConfig& cfg);

SolveReport solve(const SpectrumProblem& p, const ProductPoint& x0,
                  const SolverConfig& cfg);

}  // namespace sniep
