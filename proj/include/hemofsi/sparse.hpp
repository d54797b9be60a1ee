//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace hemofsi {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct SparseSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Direct LU solve. Throws SolverError naming the zero-pivot column when
/// the matrix is singular.
Eigen::VectorXd solve_sparse(const SparseSystem& system);

/// Solves A x = b with x[i] = values[i] wherever fixed[i] is set, by
/// eliminating the constrained unknowns. Constrained entries of the result
/// equal `values` exactly.
Eigen::VectorXd solve_with_dirichlet(const SparseMatrix& a, const Eigen::VectorXd& b,
                                     const std::vector<char>& fixed, const Eigen::VectorXd& values);

}  // namespace hemofsi
