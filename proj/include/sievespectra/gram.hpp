#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace sievespectra {

// Size caps for dense linear algebra; override per call where needed.
struct ResourceLimits {
    std::int64_t max_n = 20000;     // Gram dimension N
    std::int64_t max_farey = 20000; // dual / transfer matrix dimension |F_Q|
    std::int64_t max_smooth_q = 50; // smoothed transfer matrices are a cross-check only
};

// The N x N matrix A*A for sieve order Q, stored as its Toeplitz first row:
// entry(i,j) = first_row[|i-j|] = sum over theta in F_Q of e((i-j) theta),
// an exact integer. Diagonal is |F_Q|; the matrix is PSD.
struct GramMatrix {
    std::int64_t Q = 1;
    std::int64_t N = 1;
    std::vector<std::int64_t> first_row;

    std::int64_t entry(std::int64_t i, std::int64_t j) const {
        return first_row[static_cast<std::size_t>(i > j ? i - j : j - i)];
    }
    std::int64_t trace() const { return first_row[0] * N; }
    Eigen::MatrixXd to_dense() const;
};

// The |F_Q| x |F_Q| Hermitian matrix AA* with Dirichlet-kernel entries
// entry(theta, theta') = sum_{n=1..N} e(n (theta' - theta)). Its nonzero
// eigenvalue multiset equals that of the corresponding GramMatrix.
struct DualGramMatrix {
    std::int64_t Q = 1;
    std::int64_t N = 1;
    Eigen::MatrixXcd entries;
};

GramMatrix build_gram(std::int64_t Q, std::int64_t N, const ResourceLimits& limits = {});

// Brute-force test oracle: entries by direct complex summation over F_Q.
// Guarded to Q <= 12, N <= 64.
Eigen::MatrixXd gram_dense_oracle(std::int64_t Q, std::int64_t N);

DualGramMatrix build_dual_gram(std::int64_t Q, std::int64_t N, const ResourceLimits& limits = {});

// det(A*A) mod p by Gaussian elimination over Z/p; the matrix is integer, so a
// nonzero result certifies det(A*A) != 0 exactly (the spectrum has no zeros).
// Requires an odd prime p < 2^62.
std::uint64_t gram_det_mod(const GramMatrix& m, std::uint64_t p);

// Binary dump: 16-byte header (magic "LSGRAM01", Q and N as little-endian
// uint32), then first_row as little-endian int64.
void write_gram_binary(const GramMatrix& m, const std::filesystem::path& path);
GramMatrix read_gram_binary(const std::filesystem::path& path);

void write_first_row_csv(const GramMatrix& m, const std::filesystem::path& path);

} // namespace sievespectra
