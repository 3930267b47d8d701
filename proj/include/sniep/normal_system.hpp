#pragma once

// Perturbed normal operator H = D Phi o D Phi^* + sigma id, the eigenbasis
// preconditioner, and the inner conjugate-gradient solve.

#include <functional>

#include "sniep/kernels.hpp"
#include "sniep/sniep_map.hpp"

namespace sniep {

/// H[Z] = 4 S2.*Z + [A, [A, Z]] + sigma Z with S2 = S.*S, A = Q Lambda Q^T.
struct NormalOperator {
  SymMatrix a;
  SymMatrix s2;
  double sigma = 0.0;

  Eigen::Index dim() const { return a.rows(); }
};

NormalOperator make_normal_operator(const Linearization& lin, double sigma);

SymMatrix apply_normal(const NormalOperator& op, const SymMatrix& z);

/// M[Z] = shift Z + [A, [A, Z]] with shift = max_ij 4 (S.*S)_ij + sigma.
/// In the eigenbasis of A this operator is diagonal, with entries
/// (lambda_i - lambda_j)^2 + shift.
struct Preconditioner {
  OrthMatrix q;
  Vector lambda;
  double shift = 0.0;
  Matrix denom;
};

/// Throws NonpositiveShift when shift <= 0.
Preconditioner make_preconditioner(const Linearization& lin, double sigma);
Preconditioner make_preconditioner(const OrthMatrix& q, const Vector& lambda,
                                   double shift);

/// M^{-1}[Z] = Q ((Q^T Z Q) ./ denom) Q^T.
SymMatrix apply_preconditioner_inverse(const Preconditioner& pc,
                                       const SymMatrix& z);

/// Forward operator M[Z], used to check the inverse.
SymMatrix apply_preconditioner(const Preconditioner& pc, const SymMatrix& a,
                               const SymMatrix& z);

struct CgOutcome {
  SymMatrix dz;
  int iters = 0;
  /// ||(H - sigma id)[dz] + F||, the quantity of the second stopping test.
  double final_unperturbed_residual = 0.0;
  /// ||H[dz] + F||, the quantity of the first stopping test.
  double final_perturbed_residual = 0.0;
  bool satisfied_tol2 = false;
};

struct CgOptions {
  int max_iters = 0;
  /// Every this many iterations the recurred residual is replaced by an
  /// explicitly computed one.
  int recompute_every = 20;
  /// Called after every iteration with (iteration, iterate, recurred residual,
  /// preconditioned residual norm sqrt(<r, M^{-1} r>)).
  std::function<void(int, const SymMatrix&, const SymMatrix&, double)> observer;
};

/// CG (preconditioned when pc != nullptr) from dz = 0 on H[dz] = rhs, stopping
/// when both
///   ||H[dz] - rhs|| <= eta * fnorm   and   ||(H - sigma)[dz] - rhs|| < fnorm
/// hold in the Frobenius norm. rhs is normally -Phi(x) and fnorm = ||Phi(x)||.
/// Throws CgBudgetExhausted on budget exhaustion or loss of positive
/// curvature.
CgOutcome solve_normal_equation(const NormalOperator& op,
                                const Preconditioner* pc,
                                const SymMatrix& rhs, double eta, double fnorm,
                                const CgOptions& options);

}  // namespace sniep
