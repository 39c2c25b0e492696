#include "sievespectra/limit.hpp"

#include "sievespectra/errors.hpp"
#include "sievespectra/ntheory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <thread>

namespace sievespectra {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClipEps = 1e-12;
constexpr double kEmptyArea = 1e-13;

} // namespace

double sinc(double x) {
    if (std::isnan(x) || std::isinf(x)) return 0.0;
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double h_fn(std::int64_t A, std::int64_t B, double x, double y) {
    if (!(y > 0)) throw validation_error("h_fn: requires y > 0");
    const double line = static_cast<double>(A) * y - static_cast<double>(B) * x;
    if (line == 0.0) throw validation_error("h_fn: pole input Ay - Bx = 0");
    if (B == 0) return 0.0;
    return static_cast<double>(B) / (y * line);
}

namespace {

// Pole-tolerant variant for quadrature nodes: poles map to +-inf and the
// surrounding sinc factors to 0.
double h_safe(std::int64_t A, std::int64_t B, double x, double y) {
    if (B == 0) return 0.0;
    const double denom = y * (static_cast<double>(A) * y - static_cast<double>(B) * x);
    if (denom == 0.0)
        return std::copysign(std::numeric_limits<double>::infinity(), static_cast<double>(B));
    return static_cast<double>(B) / denom;
}

} // namespace

bool LatticePair::admissible() const {
    if (A.size() != B.size() || A.empty()) return false;
    for (std::size_t i = 0; i < A.size(); ++i) {
        const std::int64_t a = std::abs(A[i]);
        const std::int64_t b = std::abs(B[i]);
        if (a == 0 && b == 0) return false;
        if (std::gcd(a, b) != 1) return false; // gcd(A,0) = |A| by convention
    }
    return true;
}

double integrand(const LatticePair& p, double alpha, double x, double y) {
    const std::size_t k = p.A.size();
    double h_first = 0.0, h_prev = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double h = h_safe(p.A[i], p.B[i], x, y);
        if (i == 0)
            h_first = h;
        else
            prod *= sinc(kPi * alpha * (h_prev - h));
        h_prev = h;
    }
    prod *= sinc(kPi * alpha * h_first) * sinc(kPi * alpha * h_prev);
    return std::isnan(prod) ? 0.0 : prod;
}

double polygon_area(const Polygon& poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % poly.size()];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

Polygon clip_half_plane(const Polygon& poly, double a, double b, double c) {
    Polygon out;
    if (poly.empty()) return out;
    out.reserve(poly.size() + 1);
    auto offset = [&](const Point2& p) { return a * p.x + b * p.y - c; };
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& cur = poly[i];
        const Point2& nxt = poly[(i + 1) % poly.size()];
        const double d0 = offset(cur);
        const double d1 = offset(nxt);
        const bool in0 = d0 <= kClipEps;
        const bool in1 = d1 <= kClipEps;
        if (in0) out.push_back(cur);
        if (in0 != in1) {
            const double t = d0 / (d0 - d1);
            out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
        }
    }
    if (out.size() < 3 || std::abs(polygon_area(out)) < kEmptyArea) out.clear();
    return out;
}

namespace {

Polygon base_triangle() {
    return {{0.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}; // {0 <= x <= y <= 1}, CCW
}

// Both half-planes of one component: 0 <= A y - B x <= 1.
Polygon clip_component(Polygon poly, std::int64_t A, std::int64_t B) {
    const double a = static_cast<double>(A);
    const double b = static_cast<double>(B);
    poly = clip_half_plane(poly, -b, a, 1.0); // A y - B x <= 1
    poly = clip_half_plane(poly, b, -a, 0.0); // A y - B x >= 0
    return poly;
}

} // namespace

Polygon domain_polygon(const LatticePair& p) {
    Polygon poly = base_triangle();
    for (std::size_t i = 0; i < p.A.size() && !poly.empty(); ++i)
        poly = clip_component(std::move(poly), p.A[i], p.B[i]);
    return poly;
}

namespace {

// Radon's 7-point degree-5 rule; all nodes interior.
struct TriRule {
    static constexpr double w0 = 9.0 / 40.0;
    static constexpr double a1 = 0.059715871789770, b1 = 0.470142064105115,
                            w1 = 0.132394152788506;
    static constexpr double a2 = 0.797426985353087, b2 = 0.101286507323456,
                            w2 = 0.125939180544827;
};

template <class F>
double rule7(const F& f, const Point2& p0, const Point2& p1, const Point2& p2, double area) {
    auto at = [&](double l0, double l1, double l2) {
        return f(l0 * p0.x + l1 * p1.x + l2 * p2.x, l0 * p0.y + l1 * p1.y + l2 * p2.y);
    };
    double s = TriRule::w0 * at(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
    s += TriRule::w1 * (at(TriRule::a1, TriRule::b1, TriRule::b1) +
                        at(TriRule::b1, TriRule::a1, TriRule::b1) +
                        at(TriRule::b1, TriRule::b1, TriRule::a1));
    s += TriRule::w2 * (at(TriRule::a2, TriRule::b2, TriRule::b2) +
                        at(TriRule::b2, TriRule::a2, TriRule::b2) +
                        at(TriRule::b2, TriRule::b2, TriRule::a2));
    return s * area;
}

struct QuadState {
    double error = 0.0;
    bool tolerance_met = true;
};

// Upper bound on |integrand| over a triangle: |sinc(pi a h_i)| <= 1/(pi a |h_i|)
// = y (A_i y - B_i x) / (pi a |B_i|), and y (A_i y - B_i x) is at most the
// product of the vertex maxima of its linear factors. Near the singular lines
// A_i y = B_i x (and y = 0) the oscillation of h is unresolvable but the
// envelope vanishes quadratically, so triangles there can be accepted early.
double amplitude_bound(const LatticePair& p, double alpha, const Point2& p0, const Point2& p1,
                       const Point2& p2) {
    const double y_max = std::max({p0.y, p1.y, p2.y});
    if (y_max <= 0.0) return 0.0;
    double bound = 1.0;
    for (std::size_t i = 0; i < p.A.size(); ++i) {
        if (p.B[i] == 0) continue;
        const double a = static_cast<double>(p.A[i]);
        const double b = static_cast<double>(p.B[i]);
        const double t_max =
            std::max({a * p0.y - b * p0.x, a * p1.y - b * p1.x, a * p2.y - b * p2.x});
        if (t_max <= 0.0) return 0.0;
        bound *= std::min(1.0, y_max * t_max / (kPi * alpha * std::abs(b)));
    }
    return bound;
}

template <class F, class Env>
double adapt_triangle(const F& f, const Env& env, const Point2& p0, const Point2& p1,
                      const Point2& p2, double area, double coarse, double tol, int depth,
                      QuadState& state) {
    // positive rule weights: |integral - coarse| <= 2 * envelope * area
    const double slack = 2.0 * env(p0, p1, p2) * area;
    if (slack <= tol) {
        state.error += slack;
        return coarse;
    }
    const Point2 m01{0.5 * (p0.x + p1.x), 0.5 * (p0.y + p1.y)};
    const Point2 m12{0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)};
    const Point2 m20{0.5 * (p2.x + p0.x), 0.5 * (p2.y + p0.y)};
    const double quarter = 0.25 * area;
    const double c0 = rule7(f, p0, m01, m20, quarter);
    const double c1 = rule7(f, m01, p1, m12, quarter);
    const double c2 = rule7(f, m20, m12, p2, quarter);
    const double c3 = rule7(f, m01, m12, m20, quarter);
    const double fine = c0 + c1 + c2 + c3;
    const double err = std::abs(fine - coarse);
    if (err <= tol) {
        state.error += err;
        return fine;
    }
    if (depth <= 0) {
        state.error += err;
        state.tolerance_met = false;
        return fine;
    }
    const double t4 = 0.25 * tol;
    return adapt_triangle(f, env, p0, m01, m20, quarter, c0, t4, depth - 1, state) +
           adapt_triangle(f, env, m01, p1, m12, quarter, c1, t4, depth - 1, state) +
           adapt_triangle(f, env, m20, m12, p2, quarter, c2, t4, depth - 1, state) +
           adapt_triangle(f, env, m01, m12, m20, quarter, c3, t4, depth - 1, state);
}

template <class F, class Env>
double integrate_polygon(const F& f, const Env& env, const Polygon& poly,
                         const QuadratureConfig& cfg, QuadState& state) {
    const double total_area = polygon_area(poly);
    if (poly.size() < 3 || total_area < kEmptyArea) return 0.0;
    Point2 centroid{0.0, 0.0};
    for (const Point2& p : poly) {
        centroid.x += p.x;
        centroid.y += p.y;
    }
    centroid.x /= static_cast<double>(poly.size());
    centroid.y /= static_cast<double>(poly.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point2& p1 = poly[i];
        const Point2& p2 = poly[(i + 1) % poly.size()];
        const double area =
            0.5 * std::abs((p1.x - centroid.x) * (p2.y - centroid.y) -
                           (p2.x - centroid.x) * (p1.y - centroid.y));
        if (area < kEmptyArea) continue;
        const double tol = std::max(cfg.pair_tol * area / total_area, 1e-3 * cfg.pair_tol);
        const double coarse = rule7(f, centroid, p1, p2, area);
        sum += adapt_triangle(f, env, centroid, p1, p2, area, coarse, tol, cfg.max_depth, state);
    }
    return sum;
}

double integrate_pair_over(const LatticePair& p, double alpha, const Polygon& poly,
                           const QuadratureConfig& cfg, bool absolute, QuadState& state) {
    auto env = [&](const Point2& a, const Point2& b, const Point2& c) {
        return amplitude_bound(p, alpha, a, b, c);
    };
    if (absolute) {
        auto f = [&](double x, double y) { return std::abs(integrand(p, alpha, x, y)); };
        return integrate_polygon(f, env, poly, cfg, state);
    }
    auto f = [&](double x, double y) { return integrand(p, alpha, x, y); };
    return integrate_polygon(f, env, poly, cfg, state);
}

} // namespace

double integrate_pair(const LatticePair& p, double alpha, const QuadratureConfig& cfg,
                      bool absolute) {
    if (!(alpha > 0)) throw validation_error("integrate_pair: alpha must be > 0");
    const Polygon poly = domain_polygon(p);
    QuadState state;
    return integrate_pair_over(p, alpha, poly, cfg, absolute, state);
}

namespace {

struct Single {
    std::int64_t A = 0;
    std::int64_t B = 0;
    std::int64_t max_coord = 0;
    Polygon poly;
};

// Feasible admissible single components with max(|A|,|B|) <= R, sorted
// lexicographically by (A, B).
std::vector<Single> feasible_singles(std::int64_t R) {
    std::vector<Single> out;
    for (std::int64_t A = -R; A <= R; ++A) {
        for (std::int64_t B = -R; B <= R; ++B) {
            if (A == 0 && B == 0) continue;
            if (std::gcd(std::abs(A), std::abs(B)) != 1) continue; // forces |A|=1 when B=0
            Polygon poly = clip_component(base_triangle(), A, B);
            if (poly.empty()) continue;
            out.push_back({A, B, std::max(std::abs(A), std::abs(B)), std::move(poly)});
        }
    }
    return out;
}

int resolve_threads(const QuadratureConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct TupleWalker {
    const std::vector<Single>& singles;
    int k = 1;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    double alpha = 0.0;
    const QuadratureConfig* cfg = nullptr;
    bool absolute = false;
    std::vector<PairIntegral>* ledger = nullptr;

    double sum = 0.0;

    void leaf(const std::vector<std::size_t>& idx, const Polygon& poly) {
        LatticePair pair;
        pair.A.reserve(static_cast<std::size_t>(k));
        pair.B.reserve(static_cast<std::size_t>(k));
        for (std::size_t i : idx) {
            pair.A.push_back(singles[i].A);
            pair.B.push_back(singles[i].B);
        }
        QuadState state;
        const double integral = integrate_pair_over(pair, alpha, poly, *cfg, absolute, state);
        sum += integral;
        if (ledger) ledger->push_back({std::move(pair), polygon_area(poly), integral});
    }

    void walk(int depth, std::int64_t cur_max, const Polygon& poly,
              std::vector<std::size_t>& idx) {
        const bool last = depth == k - 1;
        for (std::size_t i = 0; i < singles.size(); ++i) {
            const Single& s = singles[i];
            if (last && cur_max <= lo && s.max_coord <= lo) continue;
            Polygon next = clip_component(poly, s.A, s.B);
            if (next.empty()) continue;
            idx.push_back(i);
            if (last)
                leaf(idx, next);
            else
                walk(depth + 1, std::max(cur_max, s.max_coord), next, idx);
            idx.pop_back();
        }
    }
};

} // namespace

std::vector<LatticePair> enumerate_pairs(int ell, std::int64_t R) {
    if (ell < 2) throw validation_error("enumerate_pairs: ell must be >= 2");
    if (R < 1) throw validation_error("enumerate_pairs: R must be >= 1");
    const int k = ell - 1;
    const std::vector<Single> singles = feasible_singles(R);
    std::vector<LatticePair> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    // odometer over k single indices; prune by incremental clipping
    std::vector<Polygon> stack(static_cast<std::size_t>(k) + 1);
    stack[0] = base_triangle();
    std::size_t depth = 0;
    std::vector<std::size_t> pos(static_cast<std::size_t>(k), 0);
    while (true) {
        if (pos[depth] == singles.size()) {
            if (depth == 0) break;
            pos[depth] = 0;
            --depth;
            ++pos[depth];
            continue;
        }
        const Single& s = singles[pos[depth]];
        Polygon next = clip_component(stack[depth], s.A, s.B);
        if (next.empty()) {
            ++pos[depth];
            continue;
        }
        if (depth + 1 == static_cast<std::size_t>(k)) {
            LatticePair pair;
            for (std::size_t d = 0; d < static_cast<std::size_t>(k); ++d) {
                const Single& c = singles[pos[d]];
                pair.A.push_back(c.A);
                pair.B.push_back(c.B);
            }
            out.push_back(std::move(pair));
            ++pos[depth];
        } else {
            stack[depth + 1] = std::move(next);
            ++depth;
        }
    }
    auto max_coord = [](const LatticePair& p) {
        std::int64_t m = 0;
        for (std::size_t i = 0; i < p.A.size(); ++i)
            m = std::max({m, std::abs(p.A[i]), std::abs(p.B[i])});
        return m;
    };
    std::stable_sort(out.begin(), out.end(), [&](const LatticePair& l, const LatticePair& r) {
        const std::int64_t ml = max_coord(l), mr = max_coord(r);
        if (ml != mr) return ml < mr;
        for (std::size_t i = 0; i < l.A.size(); ++i) {
            if (l.A[i] != r.A[i]) return l.A[i] < r.A[i];
            if (l.B[i] != r.B[i]) return l.B[i] < r.B[i];
        }
        return false;
    });
    return out;
}

double shell_sum(int ell, double alpha, std::int64_t r_lo, std::int64_t r_hi,
                 const QuadratureConfig& cfg, bool absolute, std::vector<PairIntegral>* ledger) {
    if (ell < 2) throw validation_error("shell_sum: ell must be >= 2");
    if (!(alpha > 0)) throw validation_error("shell_sum: alpha must be > 0");
    if (r_hi <= r_lo || r_lo < 0) throw validation_error("shell_sum: need 0 <= r_lo < r_hi");
    const int k = ell - 1;
    const std::vector<Single> singles = feasible_singles(r_hi);
    if (singles.empty()) return 0.0;

    const int threads = std::min<int>(resolve_threads(cfg), static_cast<int>(singles.size()));
    std::vector<double> partial(singles.size(), 0.0);
    std::vector<std::vector<PairIntegral>> partial_ledger(ledger ? singles.size() : 0);
    std::atomic<std::size_t> cursor{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= singles.size()) break;
            const Single& s = singles[i];
            if (k == 1) {
                if (s.max_coord <= r_lo || s.max_coord > r_hi) continue;
                LatticePair pair{{s.A}, {s.B}};
                QuadState state;
                const double integral =
                    integrate_pair_over(pair, alpha, s.poly, cfg, absolute, state);
                partial[i] = integral;
                if (ledger)
                    partial_ledger[i].push_back(
                        {std::move(pair), polygon_area(s.poly), integral});
            } else {
                TupleWalker w{singles, k, r_lo, r_hi, alpha, &cfg, absolute,
                              ledger ? &partial_ledger[i] : nullptr};
                std::vector<std::size_t> idx{i};
                w.walk(1, s.max_coord, s.poly, idx);
                partial[i] = w.sum;
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // deterministic reduction in singles (lexicographic) order
    double sum = 0.0;
    for (std::size_t i = 0; i < singles.size(); ++i) sum += partial[i];
    if (ledger)
        for (auto& chunk : partial_ledger)
            for (auto& entry : chunk) ledger->push_back(std::move(entry));
    return sum;
}

LimitMomentResult limit_moment(int ell, double alpha, const QuadratureConfig& cfg,
                               std::vector<PairIntegral>* ledger) {
    if (ell < 1) throw validation_error("limit_moment: ell must be >= 1");
    if (!(alpha > 0)) throw validation_error("limit_moment: alpha must be > 0");
    LimitMomentResult result;
    result.ell = ell;
    result.alpha = alpha;
    if (ell == 1) { // Eq-level identity: first moment is 3/(pi^2 alpha)
        result.value = 3.0 / (kPi * kPi * alpha);
        result.cauchy_gap = 0.0;
        return result;
    }
    const double scale = 6.0 / (kPi * kPi * alpha);
    double lattice = shell_sum(ell, alpha, 0, cfg.r_start, cfg, false, ledger);
    std::int64_t R = cfg.r_start;
    double gap = std::numeric_limits<double>::infinity();
    bool converged = false;
    while (R < cfg.r_cap) {
        const std::int64_t next = std::min(2 * R, cfg.r_cap);
        const double shell = shell_sum(ell, alpha, R, next, cfg, false, ledger);
        lattice += shell;
        R = next;
        gap = scale * std::abs(shell);
        if (gap < cfg.cauchy_tol) {
            converged = true;
            break;
        }
    }
    result.value = scale * lattice;
    result.r_final = R;
    result.cauchy_gap = gap;
    result.converged = converged;
    return result;
}

MomentReport to_report(const LimitMomentResult& r) {
    return {r.ell, r.value, MomentMethod::lattice, 0, 0, r.alpha};
}

double g2_scaled(double u) {
    if (!(u > 0)) throw validation_error("g2_scaled: u must be > 0");
    if (u <= 1.0) return 0.0;
    const auto top = static_cast<std::int64_t>(std::ceil(u)) - 1;
    warm_sieve_tables(top);
    double sum = 0.0;
    for (std::int64_t K = 1; K <= top; ++K) {
        if (static_cast<double>(K) >= u) break;
        sum += static_cast<double>(totient(K)) * std::log(u / static_cast<double>(K));
    }
    return (2.0 * kPi * kPi) / (3.0 * u * u) * sum;
}

namespace {

// 16-point Gauss-Legendre on [-1,1].
constexpr double kGlX[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                            0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                            0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

template <class F>
double gauss16(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i)
        sum += kGlW[i] * (f(mid - half * kGlX[i]) + f(mid + half * kGlX[i]));
    return half * sum;
}

} // namespace

M2Result m2_via_g2(double alpha, double cutoff) {
    if (!(alpha > 0)) throw validation_error("m2_via_g2: alpha must be > 0");
    if (!(cutoff > 1)) throw validation_error("m2_via_g2: cutoff must be > 1");
    warm_sieve_tables(static_cast<std::int64_t>(cutoff) + 2);
    auto f = [alpha](double u) {
        const double s = sinc(kPi * alpha * u);
        return s * s * g2_scaled(u);
    };
    // panels aligned with the integer kinks of g2; extra splits cover the
    // sinc^2 oscillation when alpha > 1
    const int splits = std::max(1, static_cast<int>(std::ceil(2.0 * alpha)));
    double integral = 0.0;
    double lo = 1.0;
    while (lo < cutoff) {
        const double hi = std::min(std::floor(lo) + 1.0, cutoff);
        for (int s = 0; s < splits; ++s) {
            const double a = lo + (hi - lo) * s / splits;
            const double b = lo + (hi - lo) * (s + 1) / splits;
            integral += gauss16(f, a, b);
        }
        lo = hi;
    }
    const double front = (3.0 / (kPi * kPi)) * (3.0 / (kPi * kPi)) * (2.0 / alpha);
    // tail: sinc^2 <= 1/(pi a u)^2 and g2 <= 1 + 3/u beyond the cutoff
    const double tail = front / (kPi * kPi * alpha * alpha) *
                        (1.0 / cutoff + 1.5 / (cutoff * cutoff));
    M2Result r;
    r.value = 3.0 / (kPi * kPi * alpha) + front * integral;
    r.tail_bound = tail;
    return r;
}

void write_pair_ledger_csv(const std::vector<PairIntegral>& ledger, int ell, double alpha,
                           const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw validation_error("write_pair_ledger_csv: cannot open " + path.string());
    out.precision(12);
    out << "ell,alpha,A,B,area,integral\n";
    for (const auto& e : ledger) {
        out << ell << ',' << alpha << ',';
        for (std::size_t i = 0; i < e.pair.A.size(); ++i)
            out << (i ? ";" : "") << e.pair.A[i];
        out << ',';
        for (std::size_t i = 0; i < e.pair.B.size(); ++i)
            out << (i ? ";" : "") << e.pair.B[i];
        out << ',' << e.area << ',' << e.integral << '\n';
    }
}

} // namespace sievespectra
