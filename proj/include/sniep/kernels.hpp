#pragma once

// Dense matrix primitives used throughout the solver.

#include <Eigen/Dense>

namespace sniep {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Symmetric and orthogonal matrices are stored as plain dense matrices; the
// invariants are maintained by the producing operations (symmetrize, qf).
using SymMatrix = Matrix;
using OrthMatrix = Matrix;

inline constexpr double kDefaultOrthTol = 1e-12;

/// Entrywise product A(i,j) * B(i,j).
Matrix hadamard(const Matrix& a, const Matrix& b);

/// Lie bracket AB - BA.
Matrix commutator(const Matrix& a, const Matrix& b);

/// (A + A^T) / 2.
Matrix symmetrize(const Matrix& a);

/// (A - A^T) / 2.
Matrix skew(const Matrix& a);

/// Commutator of two symmetric matrices, computed with one product.
/// The result is exactly skew-symmetric.
Matrix sym_commutator(const SymMatrix& a, const SymMatrix& b);

/// Result of qf(): the orthogonal factor plus the triangular factor it pairs
/// with, so that callers (and tests) can reconstruct the input.
struct QrFactors {
  OrthMatrix q;
  Matrix r;
};

/// QR with R's diagonal made strictly positive. Throws SingularInput when
/// min |R(i,i)| <= singular_tol; a negative singular_tol selects the default
/// 1e-14 * ||A||_F.
QrFactors qr_positive(const Matrix& a, double singular_tol = -1.0);

/// Orthogonal factor of qr_positive().
OrthMatrix qf(const Matrix& a, double singular_tol = -1.0);

/// Upper triangle packed column by column: vech(A)[(j-1)j/2 + i] = A(i,j)
/// (1-based, i <= j).
Vector vech(const SymMatrix& z);

/// Inverse of vech for an n x n symmetric matrix.
SymMatrix unvech(const Vector& v, Eigen::Index n);

/// Column-stacking vectorization and its inverse.
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, Eigen::Index n);

/// The n^2 x n(n+1)/2 0/1 matrix G with vec(Z) = G vech(Z).
Matrix duplication(Eigen::Index n);

/// Kronecker product A (x) B.
Matrix kron(const Matrix& a, const Matrix& b);

/// ||Q^T Q - I||_F.
double orthogonality_error(const Matrix& q);

bool is_symmetric(const Matrix& a, double tol = 0.0);

void require_same_shape(const Matrix& a, const Matrix& b, const char* where);
void require_square(const Matrix& a, const char* where);

}  // namespace sniep
