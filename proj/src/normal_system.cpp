#include "sniep/normal_system.hpp"

#include <cmath>
#include <sstream>

#include "sniep/error.hpp"

namespace sniep {

namespace {

double dot(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

// [A, [A, Z]] for symmetric A, Z. C = [A, Z] is skew, so [A, C] = AC + (AC)^T.
Matrix double_commutator(const SymMatrix& a, const SymMatrix& z) {
  const Matrix c = sym_commutator(a, z);
  const Matrix ac = a * c;
  return ac + ac.transpose();
}

}  // namespace

NormalOperator make_normal_operator(const Linearization& lin, double sigma) {
  return {lin.a, lin.x.s.cwiseProduct(lin.x.s), sigma};
}

SymMatrix apply_normal(const NormalOperator& op, const SymMatrix& z) {
  require_same_shape(op.a, z, "apply_normal");
  Matrix out = 4.0 * op.s2.cwiseProduct(z) + double_commutator(op.a, z) +
               op.sigma * z;
  return symmetrize(out);
}

Preconditioner make_preconditioner(const OrthMatrix& q, const Vector& lambda,
                                   double shift) {
  if (!(shift > 0.0)) {
    std::ostringstream msg;
    msg << "preconditioner shift must be positive, got " << shift;
    throw NonpositiveShift(msg.str());
  }
  if (q.rows() != lambda.size() || q.cols() != lambda.size())
    throw DimensionMismatch("make_preconditioner: size mismatch");
  const Eigen::Index n = lambda.size();
  Preconditioner pc{q, lambda, shift, Matrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = lambda(i) - lambda(j);
      pc.denom(i, j) = d * d + shift;
    }
  return pc;
}

Preconditioner make_preconditioner(const Linearization& lin, double sigma) {
  const double s = 4.0 * lin.x.s.cwiseProduct(lin.x.s).maxCoeff();
  return make_preconditioner(lin.x.q, lin.lambda, s + sigma);
}

SymMatrix apply_preconditioner_inverse(const Preconditioner& pc,
                                       const SymMatrix& z) {
  require_same_shape(pc.q, z, "apply_preconditioner_inverse");
  const Matrix w = pc.q.transpose() * z * pc.q;
  const Matrix scaled = w.cwiseQuotient(pc.denom);
  return symmetrize(pc.q * scaled * pc.q.transpose());
}

SymMatrix apply_preconditioner(const Preconditioner& pc, const SymMatrix& a,
                               const SymMatrix& z) {
  require_same_shape(a, z, "apply_preconditioner");
  return symmetrize(pc.shift * z + double_commutator(a, z));
}

CgOutcome solve_normal_equation(const NormalOperator& op,
                                const Preconditioner* pc,
                                const SymMatrix& rhs, double eta, double fnorm,
                                const CgOptions& options) {
  require_same_shape(op.a, rhs, "solve_normal_equation");
  const Eigen::Index n = rhs.rows();
  const double tol1 = eta * fnorm;

  CgOutcome out;
  out.dz = Matrix::Zero(n, n);
  SymMatrix r = rhs;

  auto passes = [&](const SymMatrix& res, const SymMatrix& x) {
    const double perturbed = res.norm();
    const double unperturbed = (res + op.sigma * x).norm();
    out.final_perturbed_residual = perturbed;
    out.final_unperturbed_residual = unperturbed;
    out.satisfied_tol2 = unperturbed < fnorm;
    return perturbed <= tol1 && out.satisfied_tol2;
  };

  if (rhs.isZero(0.0) || passes(r, out.dz)) {
    passes(r, out.dz);
    return out;
  }

  auto precondition = [&](const SymMatrix& v) -> SymMatrix {
    return pc ? apply_preconditioner_inverse(*pc, v) : v;
  };

  SymMatrix z = precondition(r);
  SymMatrix p = z;
  double rz = dot(r, z);

  for (int it = 1; it <= options.max_iters; ++it) {
    const SymMatrix hp = apply_normal(op, p);
    const double curvature = dot(p, hp);
    if (!(curvature > 0.0)) {
      std::ostringstream msg;
      msg << "CG breakdown at iteration " << it << ": p^T H p = " << curvature
          << ", residual " << r.norm() << ", target " << tol1;
      throw CgBudgetExhausted(msg.str(), it);
    }
    const double alpha = rz / curvature;
    out.dz += alpha * p;
    out.iters = it;

    if (options.recompute_every > 0 && it % options.recompute_every == 0) {
      r = rhs - apply_normal(op, out.dz);
    } else {
      r -= alpha * hp;
    }

    if (passes(r, out.dz)) {
      // Confirm on the true residual before returning.
      const SymMatrix true_r = rhs - apply_normal(op, out.dz);
      if (passes(true_r, out.dz)) {
        if (options.observer)
          options.observer(it, out.dz, true_r,
                           std::sqrt(dot(true_r, precondition(true_r))));
        return out;
      }
      r = true_r;
    }

    z = precondition(r);
    const double rz_next = dot(r, z);
    if (options.observer) options.observer(it, out.dz, r, std::sqrt(rz_next));
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }

  std::ostringstream msg;
  msg << "CG did not meet both stopping tests in " << options.max_iters
      << " iterations (residual " << out.final_perturbed_residual
      << ", target " << tol1 << ")";
  throw CgBudgetExhausted(msg.str(), options.max_iters);
}

}  // namespace sniep
