#include "dewet/linsolve.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "dewet/errors.hpp"

namespace dewet {

void SparseSystem::finalize() {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (out > 0 && entries[out - 1].row == entries[i].row &&
        entries[out - 1].col == entries[i].col) {
      entries[out - 1].value += entries[i].value;
    } else {
      entries[out++] = entries[i];
    }
  }
  entries.resize(out);
}

std::vector<double> solve(const SparseSystem& system) {
  if (system.n <= 0) throw Error("solve: empty system");
  if (static_cast<int>(system.rhs.size()) != system.n)
    throw Error("solve: right-hand side length mismatch");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(system.entries.size());
  for (const Triplet& t : system.entries) {
    if (t.row < 0 || t.row >= system.n || t.col < 0 || t.col >= system.n)
      throw Error("solve: triplet index out of range");
    triplets.emplace_back(t.row, t.col, t.value);
  }

  Eigen::SparseMatrix<double> a(system.n, system.n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success)
    throw SingularMatrix("solve: sparse LU factorization failed (singular or near-singular matrix)");

  Eigen::VectorXd b(system.n);
  for (int i = 0; i < system.n; ++i) b[i] = system.rhs[i];
  const Eigen::VectorXd x = lu.solve(b);

  // Internal residual verification.
  const Eigen::VectorXd r = a * x - b;
  double row_norm = 0.0;
  {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(system.n);
    for (int k = 0; k < a.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
        row_sums[it.row()] += std::abs(it.value());
    row_norm = row_sums.maxCoeff();
  }
  const double denom = row_norm * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  const double rel = denom > 0.0 ? r.cwiseAbs().maxCoeff() / denom : r.cwiseAbs().maxCoeff();
  if (!(rel <= 1e-10))
    throw ResidualTooLarge("solve: relative residual " + std::to_string(rel) + " exceeds 1e-10");

  return std::vector<double>(x.data(), x.data() + system.n);
}

}  // namespace dewet
