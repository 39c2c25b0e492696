#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sievespectra/spectra.hpp"

namespace sievespectra {

// sin(x)/x with sinc(0) = 1; series branch near 0, and 0 for infinite input.
double sinc(double x);

// h_{A,B}(x,y) = B / (y (Ay - Bx)). Rejects pole inputs (y <= 0 or Ay = Bx).
double h_fn(std::int64_t A, std::int64_t B, double x, double y);

// A (2l-2)-tuple of integer pairs (A_i, B_i). Admissible pairs are
// componentwise coprime with the convention gcd(A, 0) = |A|, and never (0,0).
struct LatticePair {
    std::vector<std::int64_t> A;
    std::vector<std::int64_t> B;

    int ell() const { return static_cast<int>(A.size()) + 1; }
    bool admissible() const;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Convex polygon, counterclockwise vertex order; empty when fewer than 3 vertices.
using Polygon = std::vector<Point2>;

double polygon_area(const Polygon& poly);

// Clips `poly` to the half-plane a*x + b*y <= c (tolerance 1e-12).
Polygon clip_half_plane(const Polygon& poly, double a, double b, double c);

// The feasibility region D_{A,B}: {0 <= x <= y <= 1} intersected with
// {0 <= A_i y - B_i x <= 1} for every component. The open constraint
// 0 < A_i y - B_i x is treated as closed (measure zero boundary).
Polygon domain_polygon(const LatticePair& p);

// sinc(pi a h_1) sinc(pi a h_{l-1}) prod sinc(pi a (h_i - h_{i+1})).
double integrand(const LatticePair& p, double alpha, double x, double y);

struct QuadratureConfig {
    double pair_tol = 1e-7;   // absolute tolerance per pair integral
    int max_depth = 14;       // adaptive bisection depth per triangle
    std::int64_t r_start = 16;
    std::int64_t r_cap = 128; // truncation radius for max(|A_i|, |B_i|)
    double cauchy_tol = 1e-3; // stop once an R-doubling changes the sum less than this
    int threads = 0;          // 0 = hardware concurrency
};

struct PairIntegral {
    LatticePair pair;
    double area = 0.0;
    double integral = 0.0;
};

// Adaptive quadrature of the integrand over the triangulated domain polygon;
// 0 for empty domains. With `absolute`, integrates |integrand| instead.
double integrate_pair(const LatticePair& p, double alpha, const QuadratureConfig& cfg = {},
                      bool absolute = false);

// All admissible tuples with max_i(|A_i|,|B_i|) <= R and nonempty domain,
// sorted by max coordinate then lexicographically by (A_1, B_1, A_2, ...).
std::vector<LatticePair> enumerate_pairs(int ell, std::int64_t R);

// Sum of (absolute) pair integrals over tuples whose max coordinate lies in
// (r_lo, r_hi]; the summation order is fixed by the enumerate_pairs sort key.
double shell_sum(int ell, double alpha, std::int64_t r_lo, std::int64_t r_hi,
                 const QuadratureConfig& cfg = {}, bool absolute = false,
                 std::vector<PairIntegral>* ledger = nullptr);

struct LimitMomentResult {
    int ell = 1;
    double alpha = 0.0;
    double value = 0.0;
    std::int64_t r_final = 0;
    double cauchy_gap = 0.0;
    bool converged = true;
};

// The limiting moment M_ell(alpha): 3/(pi^2 alpha) for ell = 1, otherwise
// (6/(pi^2 alpha)) times the lattice sum of pair integrals, truncated by
// doubling R until the Cauchy gap drops below cfg.cauchy_tol.
LimitMomentResult limit_moment(int ell, double alpha, const QuadratureConfig& cfg = {},
                               std::vector<PairIntegral>* ledger = nullptr);

MomentReport to_report(const LimitMomentResult& r);

// Pair correlation density of Farey fractions, parameterized as
// g2((3/pi^2) u) = (2 pi^2 / (3 u^2)) sum_{1 <= K < u} phi(K) log(u/K); 0 for u <= 1.
double g2_scaled(double u);

struct M2Result {
    double value = 0.0;
    double tail_bound = 0.0; // bound on the truncated tail, part of the error estimate
};

// Second moment via the closed form
// M_2(alpha) = 3/(pi^2 a) + (3/pi^2)^2 (2/a) Int_0^cutoff sinc^2(pi a u) g2((3/pi^2) u) du,
// with the tail beyond the cutoff bounded using |sinc(x)| <= 1/|x| and g2 <= 1 + c/u.
M2Result m2_via_g2(double alpha, double cutoff = 1000.0);

void write_pair_ledger_csv(const std::vector<PairIntegral>& ledger, int ell, double alpha,
                           const std::filesystem::path& path);

} // namespace sievespectra
