#pragma once

#include <Eigen/SparseCore>

#include "chiralwg/linop.hpp"

namespace chiralwg::detail {

using SparseOp = Eigen::SparseMatrix<Complex>;

inline SparseOp to_sparse(const Operator& dense) {
  std::vector<Eigen::Triplet<Complex>> trips;
  for (Eigen::Index j = 0; j < dense.cols(); ++j)
    for (Eigen::Index i = 0; i < dense.rows(); ++i)
      if (dense(i, j) != Complex(0.0, 0.0)) trips.emplace_back(i, j, dense(i, j));
  SparseOp s(dense.rows(), dense.cols());
  s.setFromTriplets(trips.begin(), trips.end());
  s.makeCompressed();
  return s;
}

// Tr(rho * s) without forming the product.
inline Complex sparse_expectation(const Operator& rho, const SparseOp& s) {
  Complex acc = 0.0;
  for (int k = 0; k < s.outerSize(); ++k)
    for (SparseOp::InnerIterator it(s, k); it; ++it) acc += it.value() * rho(it.col(), it.row());
  return acc;
}

}  // namespace chiralwg::detail
