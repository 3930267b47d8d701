#pragma once

// The map Phi(S, Q) = S.*S - Q diag(lambda) Q^T and its first-order calculus.

#include "sniep/kernels.hpp"
#include "sniep/manifold.hpp"

namespace sniep {

/// Prescribed spectrum, stored in the order given.
struct SpectrumProblem {
  Vector lambda;

  Eigen::Index dim() const { return lambda.size(); }
};

/// Phi at a point together with its Frobenius norm.
struct Residual {
  SymMatrix value;
  double norm = 0.0;
};

/// Per-point data shared by Phi, D Phi, D Phi^* and the normal operator:
/// the point itself and A = Q Lambda Q^T, formed once.
struct Linearization {
  ProductPoint x;
  Vector lambda;
  SymMatrix a;
};

Linearization linearize(const SpectrumProblem& p, const ProductPoint& x);

/// Q diag(lambda) Q^T, symmetrized.
SymMatrix isospectral_matrix(const Vector& lambda, const OrthMatrix& q);

Residual residual(const Linearization& lin);
Residual residual(const SpectrumProblem& p, const ProductPoint& x);

/// D Phi(x)[v] = 2 S.*dS + [A, dQ Q^T].
SymMatrix apply_differential(const Linearization& lin, const TangentVector& v);
SymMatrix apply_differential(const SpectrumProblem& p, const ProductPoint& x,
                             const TangentVector& v);

/// D Phi(x)^*[Z] = (2 S.*Z, [A, Z] Q).
TangentVector apply_adjoint(const Linearization& lin, const SymMatrix& z);
TangentVector apply_adjoint(const SpectrumProblem& p, const ProductPoint& x,
                            const SymMatrix& z);

/// 0.5 * ||Phi(x)||_F^2.
double merit(const SpectrumProblem& p, const ProductPoint& x);

/// grad f(x) = D Phi(x)^*[Phi(x)].
TangentVector gradient(const Linearization& lin, const Residual& f);
TangentVector gradient(const SpectrumProblem& p, const ProductPoint& x);

/// Default stationarity threshold 1e-12 * (1 + ||Phi(x)||_F).
inline double default_stat_tol(double residual_norm) {
  return 1e-12 * (1.0 + residual_norm);
}

}  // namespace sniep
