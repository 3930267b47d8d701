#include "sniep/kernels.hpp"

#include <cmath>
#include <string>

#include "sniep/error.hpp"

namespace sniep {

void require_same_shape(const Matrix& a, const Matrix& b, const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(where) + ": " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

void require_square(const Matrix& a, const char* where) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(where) + ": matrix is not square");
  }
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  return a.cwiseProduct(b);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "commutator");
  require_square(a, "commutator");
  return a * b - b * a;
}

Matrix symmetrize(const Matrix& a) {
  require_square(a, "symmetrize");
  return 0.5 * (a + a.transpose());
}

Matrix skew(const Matrix& a) {
  require_square(a, "skew");
  return 0.5 * (a - a.transpose());
}

Matrix sym_commutator(const SymMatrix& a, const SymMatrix& b) {
  require_same_shape(a, b, "sym_commutator");
  require_square(a, "sym_commutator");
  // For symmetric A, B: BA = (AB)^T.
  Matrix ab = a * b;
  return ab - ab.transpose();
}

QrFactors qr_positive(const Matrix& a, double singular_tol) {
  require_square(a, "qf");
  const Eigen::Index n = a.rows();
  if (singular_tol < 0.0) singular_tol = 1e-14 * a.norm();

  Eigen::HouseholderQR<Matrix> qr(a);
  QrFactors out;
  out.q = qr.householderQ() * Matrix::Identity(n, n);
  out.r = qr.matrixQR().triangularView<Eigen::Upper>();

  double min_diag = n > 0 ? std::abs(out.r(0, 0)) : 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    min_diag = std::min(min_diag, std::abs(out.r(i, i)));
    const double s = out.r(i, i) < 0.0 ? -1.0 : 1.0;  // sign(0) -> +1
    if (s < 0.0) {
      out.q.col(i) *= -1.0;
      out.r.row(i) *= -1.0;
    }
  }
  if (n > 0 && !(min_diag > singular_tol)) {
    throw SingularInput("qf: smallest |R(i,i)| = " + std::to_string(min_diag) +
                        " below tolerance " + std::to_string(singular_tol));
  }
  return out;
}

OrthMatrix qf(const Matrix& a, double singular_tol) {
  return qr_positive(a, singular_tol).q;
}

Vector vech(const SymMatrix& z) {
  require_square(z, "vech");
  const Eigen::Index n = z.rows();
  Vector out(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) out(k++) = z(i, j);
  return out;
}

SymMatrix unvech(const Vector& v, Eigen::Index n) {
  if (v.size() != n * (n + 1) / 2)
    throw DimensionMismatch("unvech: length does not match n(n+1)/2");
  SymMatrix z(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      z(i, j) = v(k);
      z(j, i) = v(k);
      ++k;
    }
  return z;
}

Vector vec(const Matrix& a) {
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvec(const Vector& v, Eigen::Index n) {
  if (v.size() != n * n) throw DimensionMismatch("unvec: length is not n^2");
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix duplication(Eigen::Index n) {
  Matrix g = Matrix::Zero(n * n, n * (n + 1) / 2);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      const Eigen::Index col = j * (j + 1) / 2 + i;
      g(j * n + i, col) = 1.0;  // entry (i,j) in column-major vec
      g(i * n + j, col) = 1.0;  // entry (j,i)
    }
  return g;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double orthogonality_error(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).norm();
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  if (a.size() == 0) return true;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace sniep
