#pragma once

#include "sniep/kernels.hpp"
#include "sniep/manifold.hpp"
#include "sniep/rng.hpp"
#include "sniep/sniep_map.hpp"

namespace sniep::testing {

inline SymMatrix random_symmetric(Eigen::Index n, Rng& rng) {
  return symmetrize(rng.normal_matrix(n, n));
}

inline SpectrumProblem random_problem(Eigen::Index n, Rng& rng) {
  SpectrumProblem p;
  p.lambda = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) p.lambda(i) = 2.0 * rng.normal();
  return p;
}

inline double frob_dot(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) s += a(i, j) * b(i, j);
  return s;
}

inline double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

// The 4-decimal matrix printed for the first start-point case of the
// {5, 0, -2, -2} example.
inline Matrix printed_solution_case_a() {
  Matrix c(4, 4);
  c << 0.6347, 1.8878, 2.2597, 1.6700,
       1.8878, 0.2945, 1.3510, 0.2270,
       2.2597, 1.3510, 0.0144, 1.7082,
       1.6700, 0.2270, 1.7082, 0.0565;
  return c;
}

}  // namespace sniep::testing
