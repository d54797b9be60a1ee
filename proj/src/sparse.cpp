//-----------------------------------------------------------------------------
// Copyright 2026 The hemofsi authors
// SPDX-License-Identifier: Apache-2.0
//-----------------------------------------------------------------------------
#include "hemofsi/sparse.hpp"

#include <regex>
#include <string>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseLU>

#include "hemofsi/error.hpp"

namespace hemofsi {

namespace {

[[noreturn]] void singular(const std::string& message, Eigen::Index n) {
  static const std::regex column(R"(AT\s+(\d+))");
  std::smatch m;
  std::string where;
  if (std::regex_search(message, m, column)) {
    const long k = std::stol(m[1].str());
    // SparseLU reports the 1-based pivot position.
    where = " (zero pivot at row " + std::to_string(k > 0 ? k - 1 : 0) + ")";
  }
  throw SolverError("singular matrix of size " + std::to_string(n) + where);
}

}  // namespace

Eigen::VectorXd solve_sparse(const SparseSystem& system) {
  const auto& a = system.matrix;
  if (a.rows() != a.cols()) throw SolverError("matrix is not square");
  if (a.rows() != system.rhs.size()) throw SolverError("right-hand side size mismatch");
  if (a.rows() == 0) return Eigen::VectorXd();
  SparseMatrix compressed = a;
  compressed.makeCompressed();
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(compressed);
  lu.factorize(compressed);
  if (lu.info() != Eigen::Success) singular(lu.lastErrorMessage(), a.rows());
  Eigen::VectorXd x = lu.solve(system.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) singular(lu.lastErrorMessage(), a.rows());
  return x;
}

Eigen::VectorXd solve_with_dirichlet(const SparseMatrix& a, const Eigen::VectorXd& b,
                                     const std::vector<char>& fixed, const Eigen::VectorXd& values) {
  const Eigen::Index n = a.rows();
  if (static_cast<Eigen::Index>(fixed.size()) != n || values.size() != n || b.size() != n) {
    throw SolverError("Dirichlet data size mismatch");
  }
  std::vector<int> free_index(static_cast<std::size_t>(n), -1);
  int nf = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!fixed[static_cast<std::size_t>(i)]) free_index[static_cast<std::size_t>(i)] = nf++;
  }
  Eigen::VectorXd x = values;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!fixed[static_cast<std::size_t>(i)]) x[i] = 0.0;
  }
  SparseSystem reduced;
  reduced.rhs = Eigen::VectorXd::Zero(nf);
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (int col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      const int r = free_index[static_cast<std::size_t>(it.row())];
      if (r < 0) continue;
      const int c = free_index[static_cast<std::size_t>(it.col())];
      if (c >= 0) {
        trip.emplace_back(r, c, it.value());
      } else {
        reduced.rhs[r] -= it.value() * values[it.col()];
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = free_index[static_cast<std::size_t>(i)];
    if (r >= 0) reduced.rhs[r] += b[i];
  }
  reduced.matrix.resize(nf, nf);
  reduced.matrix.setFromTriplets(trip.begin(), trip.end());
  const Eigen::VectorXd xf = solve_sparse(reduced);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int r = free_index[static_cast<std::size_t>(i)];
    if (r >= 0) x[i] = xf[r];
  }
  return x;
}

}  // namespace hemofsi
