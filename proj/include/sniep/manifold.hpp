#pragma once

// Geometry of the product manifold Sym(n) x O(n) with the embedded metric.

#include "sniep/kernels.hpp"
#include "sniep/rng.hpp"

namespace sniep {

/// A point (S, Q): S symmetric, Q orthogonal.
struct ProductPoint {
  SymMatrix s;
  OrthMatrix q;

  Eigen::Index dim() const { return s.rows(); }
};

/// A tangent vector (dS, dQ) at some base point. dQ is kept in ambient form,
/// i.e. dQ = Q * Omega with Omega skew.
struct TangentVector {
  SymMatrix ds;
  Matrix dq;

  static TangentVector zero(Eigen::Index n) {
    return {Matrix::Zero(n, n), Matrix::Zero(n, n)};
  }
};

/// tr(u.dS^T v.dS) + tr(u.dQ^T v.dQ).
double inner(const ProductPoint& base, const TangentVector& u,
             const TangentVector& v);
double norm(const ProductPoint& base, const TangentVector& u);

/// a*u + b*v at a shared base point.
TangentVector lincomb(const ProductPoint& base, double a,
                      const TangentVector& u, double b, const TangentVector& v);
TangentVector scaled(const ProductPoint& base, double a, const TangentVector& u);

/// Orthogonal projection of an ambient pair onto the tangent space at base:
/// (sym(xi), Q skew(Q^T eta)).
TangentVector project(const ProductPoint& base, const Matrix& xi,
                      const Matrix& eta);

/// (S + dS, qf(Q + dQ)). Throws SingularRetraction.
ProductPoint retract(const ProductPoint& base, const TangentVector& step);

/// Random start (sym(B), qf(C)) with B, C uniform(0,1) scaled by `scale`.
ProductPoint random_point(Eigen::Index n, Rng& rng, double scale = 1.0);

/// Projection of a uniform(-1/2,1/2) ambient pair.
TangentVector random_tangent(const ProductPoint& base, Rng& rng);

/// Membership checks. Symmetry of S is checked exactly after symmetrize().
bool is_on_manifold(const ProductPoint& x, double orth_tol = 1e-10);
bool is_tangent(const ProductPoint& base, const TangentVector& v,
                double tol = 1e-12);

}  // namespace sniep
