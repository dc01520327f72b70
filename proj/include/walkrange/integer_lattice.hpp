#pragma once

#include <cstdint>
#include <vector>

namespace walkrange {

using IntVector = std::vector<std::int64_t>;

// Invariant factors d_1 | d_2 | ... | d_r (positive) of the integer matrix
// whose rows are the given vectors, all of length cols.
std::vector<std::int64_t> smith_invariants(const std::vector<IntVector>& rows, int cols);

// True iff the vectors generate all of Z^cols.
bool generates_lattice(const std::vector<IntVector>& rows, int cols);

// Rank of the subgroup generated by the vectors.
int lattice_rank(const std::vector<IntVector>& rows, int cols);

}  // namespace walkrange
