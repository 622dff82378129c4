#include "hik/linalg.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace hik {

SymmetricEigen symmetric_eigen(const Mat4<double>& symmetric) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = symmetric[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(m);
  SymmetricEigen out;
  for (int i = 0; i < 4; ++i) {
    out.values[i] = solver.eigenvalues()(i);
    for (int j = 0; j < 4; ++j) out.vectors[j][i] = solver.eigenvectors()(j, i);
  }
  return out;
}

Inertia inertia(const Mat4<double>& symmetric, double rel_tol) {
  const auto eig = symmetric_eigen(symmetric);
  double scale = 0.0;
  for (double v : eig.values) scale = std::max(scale, std::fabs(v));
  Inertia result;
  for (double v : eig.values) {
    if (std::fabs(v) <= rel_tol * scale || scale == 0.0)
      ++result.zero;
    else if (v > 0)
      ++result.positive;
    else
      ++result.negative;
  }
  return result;
}

}  // namespace hik
