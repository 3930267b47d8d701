#include "sniep/sniep_map.hpp"

#include "sniep/error.hpp"

namespace sniep {

namespace {

void require_problem_matches(const SpectrumProblem& p, const ProductPoint& x) {
  if (x.s.rows() != p.dim() || x.s.cols() != p.dim() ||
      x.q.rows() != p.dim() || x.q.cols() != p.dim()) {
    throw DimensionMismatch("point dimension does not match spectrum length");
  }
}

}  // namespace

SymMatrix isospectral_matrix(const Vector& lambda, const OrthMatrix& q) {
  if (q.cols() != lambda.size())
    throw DimensionMismatch("isospectral_matrix: size mismatch");
  Matrix ql = q * lambda.asDiagonal();
  return symmetrize(ql * q.transpose());
}

Linearization linearize(const SpectrumProblem& p, const ProductPoint& x) {
  require_problem_matches(p, x);
  return {x, p.lambda, isospectral_matrix(p.lambda, x.q)};
}

Residual residual(const Linearization& lin) {
  Residual r;
  r.value = symmetrize(lin.x.s.cwiseProduct(lin.x.s) - lin.a);
  r.norm = r.value.norm();
  return r;
}

Residual residual(const SpectrumProblem& p, const ProductPoint& x) {
  return residual(linearize(p, x));
}

SymMatrix apply_differential(const Linearization& lin,
                             const TangentVector& v) {
  require_same_shape(lin.x.s, v.ds, "apply_differential");
  require_same_shape(lin.x.q, v.dq, "apply_differential");
  // W = dQ Q^T is skew for tangent dQ, so [A, W] = AW + (AW)^T.
  const Matrix w = v.dq * lin.x.q.transpose();
  const Matrix aw = lin.a * w;
  Matrix out = 2.0 * lin.x.s.cwiseProduct(v.ds) + aw + aw.transpose();
  return symmetrize(out);
}

SymMatrix apply_differential(const SpectrumProblem& p, const ProductPoint& x,
                             const TangentVector& v) {
  return apply_differential(linearize(p, x), v);
}

TangentVector apply_adjoint(const Linearization& lin, const SymMatrix& z) {
  require_same_shape(lin.x.s, z, "apply_adjoint");
  TangentVector out;
  out.ds = symmetrize(2.0 * lin.x.s.cwiseProduct(z));
  out.dq = sym_commutator(lin.a, z) * lin.x.q;
  return out;
}

TangentVector apply_adjoint(const SpectrumProblem& p, const ProductPoint& x,
                            const SymMatrix& z) {
  return apply_adjoint(linearize(p, x), z);
}

double merit(const SpectrumProblem& p, const ProductPoint& x) {
  const double r = residual(p, x).norm;
  return 0.5 * r * r;
}

TangentVector gradient(const Linearization& lin, const Residual& f) {
  return apply_adjoint(lin, f.value);
}

TangentVector gradient(const SpectrumProblem& p, const ProductPoint& x) {
  const Linearization lin = linearize(p, x);
  return gradient(lin, residual(lin));
}

}  // namespace sniep
