#include "sniep/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "sniep/error.hpp"

namespace sniep {

namespace {

void require_dense_cap(Eigen::Index n, int cap) {
  if (n > cap)
    throw DenseCapExceeded("dense matricization requested for n = " +
                           std::to_string(n) + " above cap " +
                           std::to_string(cap));
}

double preconditioner_shift(const ProductPoint& x, double sigma) {
  return 4.0 * x.s.cwiseProduct(x.s).maxCoeff() + sigma;
}

Vector ascending_eigenvalues(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

int count_multiplicity(const Vector& lambda, Eigen::Index i, double tol) {
  int c = 0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j)
    if (std::abs(lambda(i) - lambda(j)) <= tol) ++c;
  return c;
}

}  // namespace

Vector kron_difference_diagonal(const Vector& lambda) {
  const Eigen::Index n = lambda.size();
  Vector d(n * n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) d(j * n + i) = lambda(i) - lambda(j);
  return d;
}

Matrix assemble_normal_matrix(const SpectrumProblem& p, const ProductPoint& x,
                              double sigma) {
  require_dense_cap(p.dim(), kDefaultDenseCap);
  const Matrix kq = kron(x.q, x.q);
  const Vector l = kron_difference_diagonal(p.lambda);
  const Vector inner = l.cwiseAbs2().array() + sigma;
  Matrix h = kq * inner.asDiagonal() * kq.transpose();
  h.diagonal() += 4.0 * vec(x.s.cwiseProduct(x.s));
  return h;
}

Matrix assemble_preconditioner_inverse(const SpectrumProblem& p,
                                       const ProductPoint& x, double sigma) {
  require_dense_cap(p.dim(), kDefaultDenseCap);
  const Matrix kq = kron(x.q, x.q);
  const Vector l = kron_difference_diagonal(p.lambda);
  const Vector inv =
      (l.cwiseAbs2().array() + preconditioner_shift(x, sigma)).inverse();
  return kq * inv.asDiagonal() * kq.transpose();
}

MatricizedOperators matricize(const SpectrumProblem& p, const ProductPoint& x,
                              double sigma, const MatricizeOptions& options) {
  const Eigen::Index n = p.dim();
  require_dense_cap(n, options.dense_cap);
  const Eigen::Index big = n * n;

  MatricizedOperators out;
  out.n = static_cast<int>(n);

  // Rotate into the Kronecker eigenbasis: with U = Q(x)Q,
  //   U^T H_hat U = Y^T Y + D_H,   Y = diag(2|vec S|) U,
  //   D_H = (I(x)L - L(x)I)^2 + sigma,   D_M = (I(x)L - L(x)I)^2 + shift.
  // Both spectra and both condition numbers follow from K = U^T H_hat U by
  // orthogonal similarity, and M^{-1} H = U D_M^{-1} K U^T.
  const Matrix u = kron(x.q, x.q);
  const Vector l2 = kron_difference_diagonal(p.lambda).cwiseAbs2();
  const Vector d_h = l2.array() + sigma;
  const Vector d_m = l2.array() + preconditioner_shift(x, sigma);

  const Vector weight = 2.0 * vec(x.s).cwiseAbs();
  const Matrix y = weight.asDiagonal() * u;
  Matrix k = Matrix::Zero(big, big);
  k.selfadjointView<Eigen::Lower>().rankUpdate(y.transpose());
  k.diagonal() += d_h;
  k.triangularView<Eigen::StrictlyUpper>() = k.transpose();

  out.spectrum_h = ascending_eigenvalues(k);
  out.cond_h = out.spectrum_h(big - 1) / out.spectrum_h(0);

  const Vector m_half = d_m.cwiseSqrt().cwiseInverse();
  const Matrix k_scaled = m_half.asDiagonal() * k * m_half.asDiagonal();
  out.spectrum_pre = ascending_eigenvalues(k_scaled);
  out.cond_pre_eig = out.spectrum_pre(big - 1) / out.spectrum_pre(0);

  // Singular values of D_M^{-1} K from the eigenvalues of its Gram matrix.
  const Matrix dk = d_m.cwiseInverse().asDiagonal() * k;
  Matrix gram = Matrix::Zero(big, big);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(dk.transpose());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  const Vector sv2 = ascending_eigenvalues(gram);
  out.cond_pre = std::sqrt(sv2(big - 1) / sv2(0));

  if (options.keep_matrices) {
    out.h_hat = u * k * u.transpose();
    out.m_hat_inv_h_hat = u * (d_m.cwiseInverse().asDiagonal() * k) *
                          u.transpose();
  }
  return out;
}

SurjectivityReport surjectivity_test(const SpectrumProblem& p,
                                     const ProductPoint& x, double rank_tol,
                                     int dense_cap) {
  const Eigen::Index n = p.dim();
  require_dense_cap(n, dense_cap);
  const Eigen::Index big = n * n;
  SurjectivityReport rep;
  rep.columns = static_cast<int>(n * (n + 1) / 2);
  rep.note =
      "rank test evaluated at the given point; the surjectivity criterion is "
      "stated at accumulation points, so at other iterates this is a "
      "diagnostic extrapolation";

  const Vector vs = vec(x.s);
  const Matrix j_s = vs.asDiagonal();
  const Matrix u = kron(x.q, x.q);
  const Matrix j_q =
      u * kron_difference_diagonal(p.lambda).asDiagonal() * u.transpose();

  const double s_max = vs.cwiseAbs().maxCoeff();
  rep.j_s_rank = static_cast<int>(
      (vs.cwiseAbs().array() > rank_tol * s_max).count());

  // J_Q is symmetric; its singular values are |eigenvalues|.
  const Vector jq_eig =
      ascending_eigenvalues(0.5 * (j_q + j_q.transpose())).cwiseAbs();
  const double jq_max = jq_eig.maxCoeff();
  rep.j_q_rank =
      static_cast<int>((jq_eig.array() > rank_tol * jq_max).count());

  const double lam_scale = std::max(1.0, p.lambda.cwiseAbs().maxCoeff());
  int sum_c = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = count_multiplicity(p.lambda, i, rank_tol * lam_scale);
    rep.multiplicities.push_back(c);
    sum_c += c;
  }
  rep.predicted_j_q_rank = static_cast<int>(big) - sum_c;

  Matrix stacked(2 * big, big);
  stacked << j_s, j_q;
  const Matrix jg = stacked * duplication(n);
  Eigen::BDCSVD<Matrix> svd(jg);
  const Vector sv = svd.singularValues();
  const double sv_max = sv.size() ? sv(0) : 0.0;
  rep.joint_rank = sv_max > 0.0
                       ? static_cast<int>((sv.array() >= rank_tol * sv_max).count())
                       : 0;
  rep.full_column_rank = rep.joint_rank == rep.columns;
  return rep;
}

void write_spectrum_csv(const std::string& path, const Vector& values) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "index,eigenvalue\n" << std::setprecision(17);
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out << i << ',' << values(i) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace sniep
