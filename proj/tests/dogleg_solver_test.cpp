#include "sniep/dogleg_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sniep/error.hpp"
#include "sniep/harness.hpp"
#include "test_util.hpp"

namespace sniep {
namespace {

using testing::random_problem;

ProductPoint identity_point(Eigen::Index n) {
  return {Matrix::Zero(n, n), Matrix::Identity(n, n)};
}

TangentVector diag_tangent(Eigen::Index n, Eigen::Index i, double value) {
  TangentVector v = TangentVector::zero(n);
  v.ds(i, i) = value;
  return v;
}

// S.*S has spectrum lambda exactly, so the point solves its own problem.
GeneratedProblem exact_solution(Eigen::Index n, Rng& rng) {
  ProductPoint x = random_point(n, rng);
  const Matrix c = x.s.cwiseProduct(x.s);
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  x.q = es.eigenvectors();
  return {SpectrumProblem{es.eigenvalues()}, x};
}

TEST(DoglegStep, NewtonPointInsideRegion) {
  const ProductPoint base = identity_point(3);
  const TangentVector cp = diag_tangent(3, 0, 0.2);
  const TangentVector in = diag_tangent(3, 1, 0.5);
  const DoglegStep s = select_dogleg_step(base, cp, in, 1.0, 1e-8);
  EXPECT_EQ(s.kind, StepKind::Newton);
  EXPECT_EQ(s.step.ds, in.ds);
  EXPECT_EQ(s.norm, 0.5);
}

TEST(DoglegStep, ScaledCauchyOnBoundary) {
  const ProductPoint base = identity_point(3);
  const TangentVector cp = diag_tangent(3, 0, 3.0);
  const TangentVector in = diag_tangent(3, 1, 5.0);
  const DoglegStep s = select_dogleg_step(base, cp, in, 1.0, 1e-8);
  EXPECT_EQ(s.kind, StepKind::ScaledCauchy);
  EXPECT_DOUBLE_EQ(s.step.ds(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(s.norm, 1.0);
}

TEST(DoglegStep, InterpolatedOrthogonalCase) {
  const ProductPoint base = identity_point(3);
  const TangentVector cp = diag_tangent(3, 0, 0.6);
  const TangentVector in = diag_tangent(3, 1, 2.0);
  const DoglegStep s = select_dogleg_step(base, cp, in, 1.0, 1e-8);
  EXPECT_EQ(s.kind, StepKind::Interpolated);
  EXPECT_NEAR(norm(base, s.step), 1.0, 1e-14);
  // (1-g)^2 0.36 + g^2 4 = 1  =>  4.36 g^2 - 0.72 g - 0.64 = 0.
  const double gamma = (0.72 + std::sqrt(0.72 * 0.72 + 4 * 4.36 * 0.64)) / (2 * 4.36);
  EXPECT_NEAR(s.step.ds(1, 1), 2.0 * gamma, 1e-14);
  EXPECT_NEAR(s.step.ds(0, 0), 0.6 * (1.0 - gamma), 1e-14);
}

TEST(DoglegStep, BracketOnRandomInputs) {
  Rng rng(40);
  for (int trial = 0; trial < 200; ++trial) {
    const ProductPoint base = random_point(4, rng);
    const TangentVector cp = scaled(base, 3.0 * rng.uniform(), random_tangent(base, rng));
    const TangentVector in = scaled(base, 3.0 * rng.uniform(), random_tangent(base, rng));
    const double delta = 1e-8 + 2.0 * rng.uniform();
    const DoglegStep s = select_dogleg_step(base, cp, in, delta, 1e-8);
    const double in_norm = norm(base, in);
    EXPECT_LE(s.norm, delta * (1 + 1e-14));
    EXPECT_GE(s.norm, std::min(1e-8, in_norm) * (1 - 1e-14));
    EXPECT_EQ(s.kind == StepKind::Newton, in_norm <= delta);
    EXPECT_TRUE(is_tangent(base, s.step, 1e-12));
  }
}

TEST(UpdateRadius, ProcedureCases) {
  const SolverConfig cfg;
  EXPECT_EQ(update_radius(0.05, 0.3, 0.3, 1.0, cfg), 0.3);
  EXPECT_EQ(update_radius(0.05, 1.0, 2.0, 1.0, cfg), 0.25);
  EXPECT_EQ(update_radius(0.05, 1e-9, 1e-9, 2e-8, cfg), 1e-8);
  EXPECT_EQ(update_radius(0.9, 1.0, 3.0, 1.0, cfg), 4.0);
  EXPECT_EQ(update_radius(0.9, 1.0 - 1e-15, 3.0, 1.0, cfg), 4.0);
  EXPECT_EQ(update_radius(0.9, 0.5, 0.5, 1.0, cfg), 1.0);
  EXPECT_EQ(update_radius(0.9, 5e9, 6e9, 5e9, cfg), 1e10);
  EXPECT_EQ(update_radius(0.5, 1.0, 2.0, 1.0, cfg), 1.0);
}

TEST(Config, Validation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.t = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.rho_s = 0.8;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(CauchyPoint, MinimizesLinearModelAlongGradient) {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const SpectrumProblem p = random_problem(n, rng);
    const Linearization lin = linearize(p, random_point(n, rng));
    const Residual f = residual(lin);
    const TangentVector g = gradient(lin, f);
    const TangentVector cp = cauchy_point(lin, f, g, default_stat_tol(f.norm));
    const double alpha = inner(lin.x, cp, g) / inner(lin.x, g, g);
    auto model = [&](double a) {
      return (f.value + a * apply_differential(lin, g)).norm();
    };
    const double best = model(alpha);
    for (int i = -50; i <= 50; ++i) {
      const double a = alpha * (1.0 + 0.02 * i);
      EXPECT_GE(model(a), best * (1 - 1e-13));
    }
    // Closed form of the model norm at the Cauchy point.
    const double g2 = inner(lin.x, g, g);
    const double dg2 = apply_differential(lin, g).squaredNorm();
    const double want = f.norm * std::sqrt(1.0 - g2 * g2 / (f.norm * f.norm * dg2));
    EXPECT_NEAR((f.value + apply_differential(lin, cp)).norm(), want,
                1e-10 * f.norm);
    EXPECT_LT(want, f.norm);
  }
}

TEST(CauchyPoint, StationaryAtSolution) {
  Rng rng(42);
  const GeneratedProblem g = exact_solution(4, rng);
  const Linearization lin = linearize(g.problem, g.start);
  const Residual f = residual(lin);
  const TangentVector zero = TangentVector::zero(4);
  EXPECT_THROW(cauchy_point(lin, f, zero, default_stat_tol(f.norm)),
               StationaryPointError);
}

TEST(NewtonPoint, ZeroAndModelDecrease) {
  Rng rng(43);
  const SpectrumProblem p = random_problem(5, rng);
  const Linearization lin = linearize(p, random_point(5, rng));
  CgOutcome zero;
  zero.dz = Matrix::Zero(5, 5);
  const TangentVector z = newton_point(lin, zero);
  EXPECT_EQ(z.ds.norm() + z.dq.norm(), 0.0);

  const Residual f = residual(lin);
  const NormalOperator op = make_normal_operator(lin, 1e-6);
  CgOptions opts;
  opts.max_iters = 25;
  const CgOutcome cg = solve_normal_equation(op, nullptr, -f.value, 0.1, f.norm, opts);
  const TangentVector in = newton_point(lin, cg);
  EXPECT_TRUE(is_tangent(lin.x, in, 1e-10));
  EXPECT_LT((f.value + apply_differential(lin, in)).norm(), f.norm);
}

// Orthonormal basis of Sym(n) inside R^{n^2}.
Matrix symmetric_basis(Eigen::Index n) {
  Matrix b = Matrix::Zero(n * n, n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i, ++k) {
      if (i == j) {
        b(j * n + i, k) = 1.0;
      } else {
        b(j * n + i, k) = b(i * n + j, k) = 1.0 / std::sqrt(2.0);
      }
    }
  return b;
}

TEST(NewtonPoint, PseudoinverseBound) {
  Rng rng(44);
  for (Eigen::Index n = 2; n <= 5; ++n) {
    const SpectrumProblem p = random_problem(n, rng);
    const Linearization lin = linearize(p, random_point(n, rng));
    const Residual f = residual(lin);
    // D D^* restricted to Sym(n), assembled column by column.
    const Matrix basis = symmetric_basis(n);
    const NormalOperator op0 = make_normal_operator(lin, 0.0);
    Matrix dd(basis.cols(), basis.cols());
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
      dd.col(c) = basis.transpose() * vec(apply_normal(op0, unvec(basis.col(c), n)));
    Eigen::SelfAdjointEigenSolver<Matrix> es(dd, Eigen::EigenvaluesOnly);
    const double pinv_norm = 1.0 / std::sqrt(es.eigenvalues()(0));

    const double eta = 0.1, sigma = 1e-6;
    CgOptions opts;
    opts.max_iters = static_cast<int>(n * n);
    const Preconditioner pc = make_preconditioner(lin, sigma);
    const CgOutcome cg = solve_normal_equation(make_normal_operator(lin, sigma),
                                               &pc, -f.value, eta, f.norm, opts);
    EXPECT_LE(norm(lin.x, newton_point(lin, cg)),
              (1.0 + eta) * pinv_norm * f.norm * (1 + 1e-10));
  }
}

TEST(AredPred, ZeroStep) {
  Rng rng(45);
  const SpectrumProblem p = random_problem(4, rng);
  const Linearization lin = linearize(p, random_point(4, rng));
  const Residual f = residual(lin);
  int nf = 0;
  const AredPred ap = ared_pred(p, lin, TangentVector::zero(4), f, nf);
  EXPECT_EQ(ap.ared, 0.0);
  EXPECT_EQ(ap.pred, 0.0);
  EXPECT_EQ(nf, 1);
}

TEST(AredPred, PositiveAlongDoglegCurveAndFirstOrderAgreement) {
  Rng rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 3 + trial % 4;
    const SpectrumProblem p = random_problem(n, rng);
    const Linearization lin = linearize(p, random_point(n, rng));
    const Residual f = residual(lin);
    const TangentVector g = gradient(lin, f);
    const TangentVector cp = cauchy_point(lin, f, g, default_stat_tol(f.norm));
    const NormalOperator op = make_normal_operator(lin, 1e-6);
    CgOptions opts;
    opts.max_iters = static_cast<int>(n * n);
    const TangentVector in = newton_point(
        lin, solve_normal_equation(op, nullptr, -f.value, 0.1, f.norm, opts));
    int nf = 0;
    for (double s : {0.1, 0.5, 1.0})
      EXPECT_GT(ared_pred(p, lin, scaled(lin.x, s, cp), f, nf).pred, 0.0);
    for (double s : {0.25, 0.5, 0.75, 1.0})
      EXPECT_GT(ared_pred(p, lin, lincomb(lin.x, 1 - s, cp, s, in), f, nf).pred, 0.0);
    EXPECT_EQ(nf, 7);

    const AredPred tiny = ared_pred(p, lin, scaled(lin.x, 1e-6, cp), f, nf);
    EXPECT_NEAR(tiny.ared / tiny.pred, 1.0, 1e-3);
  }
}

SolveReport solve_fixed(double scale, std::uint64_t seed) {
  const GeneratedProblem g = generate(fixed_spectrum_example(scale, seed));
  return solve(g.problem, g.start, SolverConfig{});
}

void expect_invariants(const SolveReport& r, const SolverConfig& cfg) {
  ASSERT_EQ(static_cast<int>(r.records.size()), r.counters.it);
  EXPECT_GE(r.counters.nf, r.counters.it + 1);
  double prev = r.initial_residual;
  for (const IterationRecord& rec : r.records) {
    EXPECT_EQ(rec.res_norm, prev);
    EXPECT_LT(rec.next_res_norm, rec.res_norm);
    EXPECT_GE(rec.ared, cfg.t * rec.pred);
    EXPECT_LE(rec.next_res_norm,
              (1.0 - cfg.t * (1.0 - rec.tau)) * rec.res_norm * (1 + 1e-14));
    EXPECT_LT(rec.tau, 1.0);
    EXPECT_LE(rec.step_norm, rec.delta_k * (1 + 1e-14));
    EXPECT_GE(rec.step_norm,
              std::min(cfg.delta_min, rec.in_norm) * (1 - 1e-14));
    EXPECT_EQ(rec.step_kind == StepKind::Newton, rec.in_norm <= rec.delta_k);
    EXPECT_GE(rec.delta_k, cfg.delta_min);
    EXPECT_LE(rec.delta_k, cfg.delta_max);
    EXPECT_EQ(rec.sigma_k, std::min(cfg.sigma_max, rec.res_norm));
    prev = rec.next_res_norm;
  }
  EXPECT_EQ(r.final_residual, prev);
}

TEST(Solve, AlreadyConverged) {
  Rng rng(47);
  const GeneratedProblem g = exact_solution(5, rng);
  const SolveReport r = solve(g.problem, g.start, SolverConfig{});
  EXPECT_EQ(r.status, SolveStatus::Converged);
  EXPECT_EQ(r.counters.it, 0);
  EXPECT_EQ(r.counters.nf, 1);
  EXPECT_EQ(r.counters.ncg, 0);
}

TEST(Solve, FixedSpectrumCases) {
  const SolverConfig cfg;
  for (double scale : {1.0, 5.0, 10.0}) {
    int converged = 0;
    std::vector<int> its;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const SolveReport r = solve_fixed(scale, seed);
      expect_invariants(r, cfg);
      if (r.status != SolveStatus::Converged) continue;
      ++converged;
      its.push_back(r.counters.it);
      EXPECT_LE(r.final_residual, 5e-10);
      const GeneratedProblem g = generate(fixed_spectrum_example(scale, seed));
      EXPECT_TRUE(verify_solution(g.problem, r.final_point, 1e-7).ok());
    }
    EXPECT_GE(converged, 8) << "scale " << scale;
    std::sort(its.begin(), its.end());
    EXPECT_LE(its[its.size() / 2], 30);
  }
}

TEST(Solve, DenseSpectrumPreconditioned) {
  const SolverConfig cfg;
  const GeneratedProblem g =
      generate(ProblemSpec{ProblemKind::RandomDenseSpectrum, 100, 0, 1.0, 3, {}});
  const SolveReport r = solve(g.problem, g.start, cfg);
  ASSERT_EQ(r.status, SolveStatus::Converged);
  expect_invariants(r, cfg);
  EXPECT_GE(r.counters.it, 3);
  EXPECT_LE(r.counters.it, 15);
  EXPECT_LE(static_cast<double>(r.counters.ncg) / r.counters.it, 10.0);
}

TEST(Solve, Deterministic) {
  const SolveReport a = solve_fixed(5.0, 11), b = solve_fixed(5.0, 11);
  EXPECT_EQ(a.status, b.status);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].res_norm, b.records[i].res_norm);
    EXPECT_EQ(a.records[i].step_norm, b.records[i].step_norm);
    EXPECT_EQ(a.records[i].cg_iters, b.records[i].cg_iters);
  }
  EXPECT_EQ(a.final_point.s, b.final_point.s);
  EXPECT_EQ(a.final_point.q, b.final_point.q);
}

TEST(Solve, MaxOuterAndCgBudget) {
  const GeneratedProblem g =
      generate(ProblemSpec{ProblemKind::RandomDenseSpectrum, 20, 0, 1.0, 2, {}});
  SolverConfig cfg;
  cfg.max_outer = 1;
  const SolveReport r1 = solve(g.problem, g.start, cfg);
  EXPECT_EQ(r1.status, SolveStatus::MaxOuterReached);
  EXPECT_EQ(r1.counters.it, 1);

  cfg = SolverConfig{};
  cfg.use_preconditioner = false;
  cfg.cg_max = 1;
  const SolveReport r2 = solve(g.problem, g.start, cfg);
  EXPECT_EQ(r2.status, SolveStatus::CgExhausted);
  EXPECT_EQ(r2.counters.ncg, 1);
}

}  // namespace
}  // namespace sniep
