#pragma once

#include <cstdint>
#include <vector>

namespace sievespectra {

// A reduced fraction a/q with 0 < a <= q, gcd(a,q) = 1. The endpoint 1/1 is
// kept literally (its value is 1, not 0 mod 1); every exponential e(n*a/q)
// is unaffected by that choice.
struct FareyFraction {
    std::int64_t a = 1;
    std::int64_t q = 1;

    double value() const { return static_cast<double>(a) / static_cast<double>(q); }

    friend bool operator==(const FareyFraction&, const FareyFraction&) = default;
};

// Ascending comparison by value, exact in integers.
inline bool operator<(const FareyFraction& lhs, const FareyFraction& rhs) {
    return lhs.a * rhs.q < rhs.a * lhs.q;
}

struct FareySet {
    std::int64_t order = 1;
    std::vector<FareyFraction> fractions; // strictly increasing by value

    std::int64_t size() const { return static_cast<std::int64_t>(fractions.size()); }
};

// Euler's totient. n >= 1.
std::int64_t totient(std::int64_t n);

// Moebius function, in {-1, 0, 1}. n >= 1.
int mobius(std::int64_t n);

// Mertens function: sum of mu(n) for n <= floor(x); 0 for x < 1.
std::int64_t mertens(double x);

// |F_Q| = sum of totient(q) for q <= Q, without materializing the set.
std::int64_t farey_size(std::int64_t Q);

// All Farey fractions of order Q, ascending. Q >= 1.
FareySet farey_set(std::int64_t Q);

// Exact integer value of sum over theta in F_Q of e(n*theta).
// For n != 0 this is sum_{d | |n|, d <= Q} d * M(Q/d); for n = 0 it equals |F_Q|.
std::int64_t farey_exp_sum(std::int64_t n, std::int64_t Q);

// Divisors of n > 0 in no particular order (trial division).
std::vector<std::int64_t> divisors(std::int64_t n);

// Pre-extends the shared sieve tables to `bound` so later calls are lock-free
// reads. Honors the SIEVE_SPECTRA_CACHE directory when set.
void warm_sieve_tables(std::int64_t bound);

} // namespace sievespectra
