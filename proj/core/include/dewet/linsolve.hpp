#pragma once

#include <vector>

namespace dewet {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Square sparse system A x = b assembled as (row, col, value) triplets.
struct SparseSystem {
  int n = 0;
  std::vector<Triplet> entries;
  std::vector<double> rhs;

  void add(int row, int col, double value) { entries.push_back({row, col, value}); }
  // Sorts entries by (row, col) and merges duplicates.
  void finalize();
};

// Direct sparse LU with partial pivoting. Deterministic: repeated solves of
// the same system are bitwise identical. Verifies the relative residual
// |Ax-b|_inf / (|A|_inf |x|_inf + |b|_inf) <= 1e-10 and throws
// ResidualTooLarge otherwise; throws SingularMatrix when factorization fails.
std::vector<double> solve(const SparseSystem& system);

}  // namespace dewet
