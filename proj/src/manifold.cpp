#include "sniep/manifold.hpp"

#include <cassert>

#include "sniep/error.hpp"

namespace sniep {

namespace {

void require_compatible(const ProductPoint& base, const TangentVector& v,
                        const char* where) {
  require_same_shape(base.s, v.ds, where);
  require_same_shape(base.q, v.dq, where);
}

}  // namespace

double inner(const ProductPoint& base, const TangentVector& u,
             const TangentVector& v) {
  require_compatible(base, u, "inner");
  require_compatible(base, v, "inner");
  return u.ds.cwiseProduct(v.ds).sum() + u.dq.cwiseProduct(v.dq).sum();
}

double norm(const ProductPoint& base, const TangentVector& u) {
  require_compatible(base, u, "norm");
  return std::sqrt(u.ds.squaredNorm() + u.dq.squaredNorm());
}

TangentVector lincomb(const ProductPoint& base, double a,
                      const TangentVector& u, double b,
                      const TangentVector& v) {
  require_compatible(base, u, "lincomb");
  require_compatible(base, v, "lincomb");
  TangentVector out{a * u.ds + b * v.ds, a * u.dq + b * v.dq};
  assert(is_tangent(base, out, 1e-8 * (1.0 + norm(base, out))));
  return out;
}

TangentVector scaled(const ProductPoint& base, double a,
                     const TangentVector& u) {
  require_compatible(base, u, "scaled");
  return {a * u.ds, a * u.dq};
}

TangentVector project(const ProductPoint& base, const Matrix& xi,
                      const Matrix& eta) {
  require_same_shape(base.s, xi, "project");
  require_same_shape(base.q, eta, "project");
  return {symmetrize(xi), base.q * skew(base.q.transpose() * eta)};
}

ProductPoint retract(const ProductPoint& base, const TangentVector& step) {
  require_compatible(base, step, "retract");
  ProductPoint out;
  out.s = symmetrize(base.s + step.ds);
  if (step.dq.isZero(0.0)) {
    out.q = base.q;
    return out;
  }
  try {
    out.q = qf(base.q + step.dq);
  } catch (const SingularInput& e) {
    throw SingularRetraction(std::string("retract: ") + e.what());
  }
  return out;
}

ProductPoint random_point(Eigen::Index n, Rng& rng, double scale) {
  if (n < 1) throw DimensionMismatch("random_point: n must be >= 1");
  SymMatrix s = symmetrize(scale * rng.uniform_matrix(n, n));
  for (int attempt = 0;; ++attempt) {
    try {
      return {s, qf(scale * rng.uniform_matrix(n, n))};
    } catch (const SingularInput&) {
      if (attempt >= 9) throw;
    }
  }
}

TangentVector random_tangent(const ProductPoint& base, Rng& rng) {
  const Eigen::Index n = base.dim();
  Matrix xi = rng.uniform_matrix(n, n).array() - 0.5;
  Matrix eta = rng.uniform_matrix(n, n).array() - 0.5;
  return project(base, xi, eta);
}

bool is_on_manifold(const ProductPoint& x, double orth_tol) {
  if (x.s.rows() != x.s.cols() || x.q.rows() != x.q.cols() ||
      x.s.rows() != x.q.rows())
    return false;
  return is_symmetric(x.s) && orthogonality_error(x.q) <= orth_tol;
}

bool is_tangent(const ProductPoint& base, const TangentVector& v, double tol) {
  if (!is_symmetric(v.ds, tol)) return false;
  const Matrix omega = base.q.transpose() * v.dq;
  return (omega + omega.transpose()).norm() <= 2.0 * tol;
}

}  // namespace sniep
