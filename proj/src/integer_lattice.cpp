#include "walkrange/integer_lattice.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "walkrange/group.hpp"

namespace walkrange {

namespace {

using Matrix = std::vector<IntVector>;

std::int64_t iabs(std::int64_t v) { return v < 0 ? checked_neg(v) : v; }

// row_i -= q * row_j
void row_sub(Matrix& a, std::size_t i, std::size_t j, std::int64_t q) {
  for (std::size_t c = 0; c < a[i].size(); ++c) a[i][c] = checked_add(a[i][c], checked_neg(checked_mul(q, a[j][c])));
}
void col_sub(Matrix& a, std::size_t i, std::size_t j, std::int64_t q) {
  for (auto& row : a) row[i] = checked_add(row[i], checked_neg(checked_mul(q, row[j])));
}

}  // namespace

std::vector<std::int64_t> smith_invariants(const std::vector<IntVector>& rows, int cols) {
  Matrix a = rows;
  for (const auto& r : a) {
    if (static_cast<int>(r.size()) != cols) throw std::invalid_argument("ragged integer matrix");
  }
  const std::size_t m = a.size();
  const std::size_t n = static_cast<std::size_t>(cols);
  std::vector<std::int64_t> diag;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    while (true) {
      // pivot: smallest nonzero magnitude in the trailing block
      std::size_t pi = m, pj = n;
      std::int64_t best = 0;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (a[i][j] != 0 && (best == 0 || iabs(a[i][j]) < best)) {
            best = iabs(a[i][j]);
            pi = i;
            pj = j;
          }
        }
      }
      if (best == 0) return diag;
      std::swap(a[t], a[pi]);
      for (auto& row : a) std::swap(row[t], row[pj]);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] != 0) {
          row_sub(a, i, t, a[i][t] / a[t][t]);
          if (a[i][t] != 0) clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] != 0) {
          col_sub(a, j, t, a[t][j] / a[t][t]);
          if (a[t][j] != 0) clean = false;
        }
      }
      if (!clean) continue;
      // divisibility: the pivot must divide the whole trailing block
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t c = 0; c < n; ++c) a[t][c] = checked_add(a[t][c], a[i][c]);
            divides = false;
            break;
          }
        }
      }
      if (divides) break;
    }
    diag.push_back(iabs(a[t][t]));
  }
  return diag;
}

bool generates_lattice(const std::vector<IntVector>& rows, int cols) {
  const auto inv = smith_invariants(rows, cols);
  if (static_cast<int>(inv.size()) != cols) return false;
  for (auto d : inv) {
    if (d != 1) return false;
  }
  return true;
}

int lattice_rank(const std::vector<IntVector>& rows, int cols) {
  return static_cast<int>(smith_invariants(rows, cols).size());
}

}  // namespace walkrange
