#pragma once

#include <cstdint>
#include <vector>

#include "sievespectra/limit.hpp"

namespace sievespectra {

// One determinant equation A1 B2 - A2 B1 = D in the unknowns (A2, B2).
struct DetEquation {
    std::int64_t A1 = 1;
    std::int64_t B1 = 0;
    std::int64_t D = 0;
};

// All integer solutions are (A2, B2) = (x1 + k A1, y1 + k B1), k in Z.
struct LineSolution {
    std::int64_t x1 = 0;
    std::int64_t y1 = 0;
    std::int64_t dir_a = 0;
    std::int64_t dir_b = 0;
};

// Base solution via extended Euclid; requires gcd(A1, B1) = 1 (gcd(A,0) = |A|).
LineSolution solve_line(const DetEquation& eq);

// Inclusive integer interval.
struct Box {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

// All chains (A_1, B_1, ..., A_k, B_k) with gcd(A_i, B_i) = 1, coordinates in
// the 2k boxes (ordered A_1, B_1, A_2, B_2, ...), and A_i B_{i+1} - A_{i+1} B_i
// = D_i, built by iterating solve_line with k-ranges from interval arithmetic.
// Boxes wider than 64 are rejected.
std::vector<LatticePair> enumerate_chain(const std::vector<Box>& boxes,
                                         const std::vector<std::int64_t>& D);

// Brute-force scan over the same boxes; test oracle for enumerate_chain.
std::vector<LatticePair> enumerate_chain_bruteforce(const std::vector<Box>& boxes,
                                                    const std::vector<std::int64_t>& D);

// Sum of |pair integral| over admissible tuples with max coordinate in (R, 2R];
// requires R >= 8. Monotone decay in R is the empirical face of absolute
// convergence of the lattice sum.
double shell_tail(int ell, double alpha, std::int64_t R, const QuadratureConfig& cfg = {});

} // namespace sievespectra
