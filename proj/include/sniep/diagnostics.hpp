#pragma once

// Dense small-scale analysis: explicit n^2 x n^2 matricizations of the normal
// operator and preconditioner, their conditioning, and the rank test for
// surjectivity of D Phi. None of this feeds back into the solver.

#include <string>
#include <vector>

#include "sniep/kernels.hpp"
#include "sniep/manifold.hpp"
#include "sniep/sniep_map.hpp"

namespace sniep {

inline constexpr int kDefaultDenseCap = 200;

/// Diagonal of I (x) Lambda - Lambda (x) I, i.e. lambda_i - lambda_j at the
/// column-major position of (i, j).
Vector kron_difference_diagonal(const Vector& lambda);

/// H_hat = 4 diag(vec(S.*S)) + (Q(x)Q)((I(x)L - L(x)I)^2 + sigma I)(Q(x)Q)^T.
Matrix assemble_normal_matrix(const SpectrumProblem& p, const ProductPoint& x,
                              double sigma);

/// M_hat^{-1} = (Q(x)Q)((I(x)L - L(x)I)^2 + shift I)^{-1}(Q(x)Q)^T with
/// shift = max 4 (S.*S)_ij + sigma.
Matrix assemble_preconditioner_inverse(const SpectrumProblem& p,
                                       const ProductPoint& x, double sigma);

struct MatricizeOptions {
  int dense_cap = kDefaultDenseCap;
  /// Keep H_hat and M_hat^{-1} H_hat in the result. The spectra do not need
  /// them; dropping them saves two n^2 x n^2 products.
  bool keep_matrices = true;
};

struct MatricizedOperators {
  int n = 0;
  Matrix h_hat;
  Matrix m_hat_inv_h_hat;
  double cond_h = 0.0;           ///< 2-norm condition number of H_hat
  double cond_pre = 0.0;         ///< 2-norm condition number of M^{-1} H
  double cond_pre_eig = 0.0;     ///< ratio of extreme eigenvalues of M^{-1} H
  Vector spectrum_h;             ///< ascending
  Vector spectrum_pre;           ///< ascending
};

/// Throws DenseCapExceeded when n > options.dense_cap.
MatricizedOperators matricize(const SpectrumProblem& p, const ProductPoint& x,
                              double sigma,
                              const MatricizeOptions& options = {});

struct SurjectivityReport {
  int j_s_rank = 0;
  int j_q_rank = 0;
  int predicted_j_q_rank = 0;  ///< n^2 - sum of multiplicities
  int joint_rank = 0;          ///< rank of [J_S; J_Q] G
  int columns = 0;             ///< n(n+1)/2
  bool full_column_rank = false;
  std::vector<int> multiplicities;
  std::string note;
};

/// Rank test of [diag(vec S); (Q(x)Q)(I(x)L - L(x)I)(Q(x)Q)^T] G with
/// singular values counted when >= rank_tol * sigma_max.
SurjectivityReport surjectivity_test(const SpectrumProblem& p,
                                     const ProductPoint& x,
                                     double rank_tol = 1e-10,
                                     int dense_cap = kDefaultDenseCap);

/// CSV with header "index,eigenvalue".
void write_spectrum_csv(const std::string& path, const Vector& values);

}  // namespace sniep
