#include "sievespectra/latver.hpp"

#include "sievespectra/errors.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sievespectra {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

bool coprime(std::int64_t a, std::int64_t b) { return std::gcd(std::abs(a), std::abs(b)) == 1; }

struct ExtGcd {
    std::int64_t g, s, t; // g = a s + b t
};

ExtGcd ext_gcd(std::int64_t a, std::int64_t b) {
    if (b == 0) return {std::abs(a), a >= 0 ? 1 : -1, 0};
    ExtGcd sub = ext_gcd(b, a % b);
    return {sub.g, sub.t, sub.s - (a / b) * sub.t};
}

// k-range so that v + k d lies in [lo, hi]; full line when d = 0 and v fits,
// empty otherwise.
struct KRange {
    std::int64_t lo = std::numeric_limits<std::int64_t>::min();
    std::int64_t hi = std::numeric_limits<std::int64_t>::max();
    bool empty = false;
};

KRange k_range(std::int64_t v, std::int64_t d, const Box& box) {
    KRange r;
    if (d == 0) {
        r.empty = v < box.lo || v > box.hi;
        return r;
    }
    if (d > 0) {
        r.lo = ceil_div(box.lo - v, d);
        r.hi = floor_div(box.hi - v, d);
    } else {
        r.lo = ceil_div(box.hi - v, d);
        r.hi = floor_div(box.lo - v, d);
    }
    r.empty = r.lo > r.hi;
    return r;
}

void check_boxes(const std::vector<Box>& boxes, const std::vector<std::int64_t>& D) {
    if (boxes.size() < 2 || boxes.size() % 2 != 0)
        throw validation_error("enumerate_chain: need an even number (>= 2) of boxes");
    if (D.size() + 1 != boxes.size() / 2)
        throw validation_error("enumerate_chain: D must have one entry per adjacent pair");
    for (const Box& b : boxes) {
        if (b.hi < b.lo) throw validation_error("enumerate_chain: box with hi < lo");
        if (b.hi - b.lo > 64) throw resource_guard_error("enumerate_chain: box side exceeds 64");
    }
}

void sort_chains(std::vector<LatticePair>& chains) {
    std::sort(chains.begin(), chains.end(), [](const LatticePair& l, const LatticePair& r) {
        for (std::size_t i = 0; i < l.A.size(); ++i) {
            if (l.A[i] != r.A[i]) return l.A[i] < r.A[i];
            if (l.B[i] != r.B[i]) return l.B[i] < r.B[i];
        }
        return false;
    });
}

} // namespace

LineSolution solve_line(const DetEquation& eq) {
    if (!coprime(eq.A1, eq.B1)) throw validation_error("solve_line: gcd(A1, B1) must be 1");
    // A1 B2 - A2 B1 = D, i.e. (-B1) A2 + A1 B2 = D; with A1 s + B1 t = 1 the
    // base solution is (A2, B2) = (-t D, s D), direction (A1, B1).
    const ExtGcd e = ext_gcd(eq.A1, eq.B1);
    return {-e.t * eq.D, e.s * eq.D, eq.A1, eq.B1};
}

std::vector<LatticePair> enumerate_chain(const std::vector<Box>& boxes,
                                         const std::vector<std::int64_t>& D) {
    check_boxes(boxes, D);
    const std::size_t k = boxes.size() / 2;
    std::vector<LatticePair> out;
    LatticePair chain;
    chain.A.resize(k);
    chain.B.resize(k);

    auto extend = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            out.push_back(chain);
            return;
        }
        const LineSolution line =
            solve_line({chain.A[i - 1], chain.B[i - 1], D[i - 1]});
        KRange ra = k_range(line.x1, line.dir_a, boxes[2 * i]);
        KRange rb = k_range(line.y1, line.dir_b, boxes[2 * i + 1]);
        if (ra.empty || rb.empty) return;
        const std::int64_t lo = std::max(ra.lo, rb.lo);
        const std::int64_t hi = std::min(ra.hi, rb.hi);
        for (std::int64_t t = lo; t <= hi; ++t) {
            chain.A[i] = line.x1 + t * line.dir_a;
            chain.B[i] = line.y1 + t * line.dir_b;
            if (!coprime(chain.A[i], chain.B[i])) continue;
            self(self, i + 1);
        }
    };

    for (std::int64_t a = boxes[0].lo; a <= boxes[0].hi; ++a) {
        for (std::int64_t b = boxes[1].lo; b <= boxes[1].hi; ++b) {
            if (!coprime(a, b)) continue;
            chain.A[0] = a;
            chain.B[0] = b;
            extend(extend, 1);
        }
    }
    sort_chains(out);
    return out;
}

std::vector<LatticePair> enumerate_chain_bruteforce(const std::vector<Box>& boxes,
                                                    const std::vector<std::int64_t>& D) {
    check_boxes(boxes, D);
    const std::size_t k = boxes.size() / 2;
    std::vector<LatticePair> out;
    LatticePair chain;
    chain.A.resize(k);
    chain.B.resize(k);

    auto scan = [&](auto&& self, std::size_t i) -> void {
        if (i == k) {
            out.push_back(chain);
            return;
        }
        for (std::int64_t a = boxes[2 * i].lo; a <= boxes[2 * i].hi; ++a) {
            for (std::int64_t b = boxes[2 * i + 1].lo; b <= boxes[2 * i + 1].hi; ++b) {
                if (!coprime(a, b)) continue;
                if (i > 0 && chain.A[i - 1] * b - a * chain.B[i - 1] != D[i - 1]) continue;
                chain.A[i] = a;
                chain.B[i] = b;
                self(self, i + 1);
            }
        }
    };
    scan(scan, 0);
    sort_chains(out);
    return out;
}

double shell_tail(int ell, double alpha, std::int64_t R, const QuadratureConfig& cfg) {
    if (R < 8) throw validation_error("shell_tail: R must be >= 8");
    return shell_sum(ell, alpha, R, 2 * R, cfg, true);
}

} // namespace sievespectra
