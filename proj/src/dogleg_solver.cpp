#include "sniep/dogleg_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "sniep/error.hpp"

namespace sniep {

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("SolverConfig: ") + what);
  };
  require(t > 0.0 && t < 1.0, "need 0 < t < 1");
  require(sigma_max > 0.0 && sigma_max < 1.0, "need 0 < sigma_max < 1");
  require(theta_max > 0.0 && theta_max < 1.0, "need 0 < theta_max < 1");
  require(delta_min > 0.0 && delta_min < delta_max,
          "need 0 < delta_min < delta_max");
  require(rho_s > 0.0 && rho_s < rho_e && rho_e < 1.0,
          "need 0 < rho_s < rho_e < 1");
  require(beta_s > 0.0 && beta_s < 1.0 && beta_e > 1.0,
          "need 0 < beta_s < 1 < beta_e");
  require(epsilon > 0.0, "need epsilon > 0");
  require(max_outer >= 0, "need max_outer >= 0");
  require(cg_max >= 0, "need cg_max >= 0");
  require(static_cast<bool>(theta) && static_cast<bool>(etabar),
          "schedules must be set");
}

std::string to_string(StepKind kind) {
  switch (kind) {
    case StepKind::Newton: return "Newton";
    case StepKind::ScaledCauchy: return "ScaledCauchy";
    case StepKind::Interpolated: return "Interpolated";
  }
  return "?";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::StalledAtDeltaMin: return "StalledAtDeltaMin";
    case SolveStatus::MaxOuterReached: return "MaxOuterReached";
    case SolveStatus::CgExhausted: return "CgExhausted";
    case SolveStatus::StationaryPoint: return "StationaryPoint";
    case SolveStatus::Failed: return "Failed";
  }
  return "?";
}

SolveStatus parse_status(const std::string& s) {
  for (auto st : {SolveStatus::Converged, SolveStatus::StalledAtDeltaMin,
                  SolveStatus::MaxOuterReached, SolveStatus::CgExhausted,
                  SolveStatus::StationaryPoint, SolveStatus::Failed})
    if (to_string(st) == s) return st;
  throw std::invalid_argument("unknown solve status: " + s);
}

TangentVector cauchy_point(const Linearization& lin, const Residual& f,
                           const TangentVector& g, double stat_tol) {
  (void)f;
  const double g2 = inner(lin.x, g, g);
  if (!(std::sqrt(g2) > stat_tol))
    throw StationaryPointError("gradient norm below stationarity tolerance");
  const double dg2 = apply_differential(lin, g).squaredNorm();
  if (!(dg2 > 0.0))
    throw StationaryPointError("D Phi annihilates the gradient");
  return scaled(lin.x, -g2 / dg2, g);
}

TangentVector newton_point(const Linearization& lin, const CgOutcome& cg) {
  return apply_adjoint(lin, cg.dz);
}

DoglegStep select_dogleg_step(const ProductPoint& base, const TangentVector& cp,
                              const TangentVector& in_pt, double delta,
                              double delta_min) {
  (void)delta_min;
  const double in_norm = norm(base, in_pt);
  if (in_norm <= delta) return {in_pt, StepKind::Newton, in_norm};

  const double cp_norm = norm(base, cp);
  auto scaled_cauchy = [&] {
    TangentVector step = scaled(base, delta / cp_norm, cp);
    return DoglegStep{step, StepKind::ScaledCauchy, norm(base, step)};
  };
  if (cp_norm >= delta) return scaled_cauchy();

  // ||cp + gamma (in - cp)||^2 = delta^2, a gamma^2 + b gamma + c = 0, c < 0.
  const TangentVector d = lincomb(base, 1.0, in_pt, -1.0, cp);
  const double a = inner(base, d, d);
  const double b = 2.0 * inner(base, cp, d);
  const double c = cp_norm * cp_norm - delta * delta;
  const double disc = b * b - 4.0 * a * c;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  if (a > 0.0 && disc >= 0.0) {
    const double root = std::sqrt(disc);
    gamma = b >= 0.0 ? (-2.0 * c) / (b + root) : (root - b) / (2.0 * a);
  }
  if (!(gamma > 0.0 && gamma < 1.0)) return scaled_cauchy();  // degenerate

  TangentVector step = lincomb(base, 1.0 - gamma, cp, gamma, in_pt);
  return {step, StepKind::Interpolated, norm(base, step)};
}

AredPred ared_pred(const SpectrumProblem& p, const Linearization& lin,
                   const TangentVector& step, const Residual& f, int& nf) {
  AredPred out;
  out.pred = f.norm - (f.value + apply_differential(lin, step)).norm();
  out.trial = linearize(p, retract(lin.x, step));
  out.trial_residual = residual(out.trial);
  ++nf;
  out.ared = f.norm - out.trial_residual.norm;
  return out;
}

double update_radius(double ratio, double step_norm, double in_norm,
                     double delta, const SolverConfig& cfg) {
  if (ratio < cfg.rho_s) {
    if (in_norm < delta) return std::max(in_norm, cfg.delta_min);
    return std::max(cfg.beta_s * delta, cfg.delta_min);
  }
  const bool on_boundary =
      std::abs(step_norm - delta) <= cfg.boundary_rtol * delta;
  if (ratio > cfg.rho_e && on_boundary)
    return std::min(cfg.beta_e * delta, cfg.delta_max);
  return delta;
}

SolveReport solve(const SpectrumProblem& p, const ProductPoint& x0,
                  const SolverConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index n = p.dim();
  const int cg_max =
      cfg.cg_max > 0 ? cfg.cg_max : static_cast<int>(std::max<Eigen::Index>(1, n * n));

  SolveReport report;
  SolveCounters& counters = report.counters;

  Linearization lin = linearize(p, x0);
  Residual f = residual(lin);
  counters.nf = 1;
  report.initial_residual = f.norm;

  double delta = -1.0;
  auto finish = [&](SolveStatus status, std::string message = {}) {
    report.status = status;
    report.message = std::move(message);
  };

  for (int k = 0;; ++k) {
    if (f.norm <= cfg.epsilon) {
      finish(SolveStatus::Converged);
      break;
    }
    if (k >= cfg.max_outer) {
      finish(SolveStatus::MaxOuterReached);
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.res_norm = f.norm;
    rec.sigma_k = std::min(cfg.sigma_max, f.norm);
    rec.eta_k = std::min(cfg.etabar(k), f.norm);

    const double stat_tol = default_stat_tol(f.norm);
    const TangentVector g = gradient(lin, f);
    if (!(norm(lin.x, g) > stat_tol)) {
      finish(SolveStatus::StationaryPoint, "gradient vanished at iteration " +
                                               std::to_string(k));
      break;
    }

    const NormalOperator op = make_normal_operator(lin, rec.sigma_k);
    std::optional<Preconditioner> pc;
    if (cfg.use_preconditioner) pc = make_preconditioner(lin, rec.sigma_k);

    CgOutcome cg;
    try {
      CgOptions opts;
      opts.max_iters = cg_max;
      cg = solve_normal_equation(op, pc ? &*pc : nullptr, -f.value, rec.eta_k,
                                 f.norm, opts);
    } catch (const CgBudgetExhausted& e) {
      counters.ncg += e.iters();
      finish(SolveStatus::CgExhausted, e.what());
      break;
    }
    counters.ncg += cg.iters;
    rec.cg_iters = cg.iters;

    const TangentVector in_pt = newton_point(lin, cg);
    TangentVector cp;
    try {
      cp = cauchy_point(lin, f, g, stat_tol);
    } catch (const StationaryPointError& e) {
      finish(SolveStatus::StationaryPoint, e.what());
      break;
    }
    rec.in_norm = norm(lin.x, in_pt);
    rec.cp_norm = norm(lin.x, cp);
    rec.eta_in = cg.final_unperturbed_residual / f.norm;
    rec.eta_cp = (f.value + apply_differential(lin, cp)).norm() / f.norm;

    if (delta < 0.0)
      delta = rec.in_norm < cfg.delta_min ? 2.0 * cfg.delta_min : rec.in_norm;

    bool stalled = false;
    DoglegStep sel;
    AredPred trial;
    for (;;) {
      sel = select_dogleg_step(lin.x, cp, in_pt, delta, cfg.delta_min);
      bool accepted = false;
      try {
        trial = ared_pred(p, lin, sel.step, f, counters.nf);
        accepted = trial.ared >= cfg.t * trial.pred;
      } catch (const SingularRetraction&) {
        ++counters.nf;
      }
      if (accepted) break;
      if (delta == cfg.delta_min) {
        stalled = true;
        break;
      }
      const double theta = std::clamp(cfg.theta(k), std::numeric_limits<double>::min(), cfg.theta_max);
      delta = std::max(theta * delta, cfg.delta_min);
      ++rec.retries;
    }
    if (stalled) {
      finish(SolveStatus::StalledAtDeltaMin,
             "trust region collapsed to delta_min at iteration " +
                 std::to_string(k));
      break;
    }

    rec.delta_k = delta;
    rec.step_kind = sel.kind;
    rec.step_norm = sel.norm;
    rec.ared = trial.ared;
    rec.pred = trial.pred;
    rec.tau = 1.0 - trial.pred / f.norm;
    rec.next_res_norm = trial.trial_residual.norm;
    report.records.push_back(rec);
    ++counters.it;

    delta = update_radius(trial.ared / trial.pred, sel.norm, rec.in_norm,
                          delta, cfg);
    lin = std::move(trial.trial);
    f = std::move(trial.trial_residual);
  }

  report.final_point = lin.x;
  report.final_residual = f.norm;
  counters.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace sniep
