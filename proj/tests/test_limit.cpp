#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "sievespectra/errors.hpp"
#include "sievespectra/limit.hpp"

using namespace sievespectra;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kAlphaStar = 3.0 / (kPi * kPi);
} // namespace

TEST_CASE("sinc") {
    CHECK(sinc(0.0) == 1.0);
    CHECK(std::abs(sinc(kPi)) < 1e-15);
    const double x = 1e-6;
    CHECK(std::abs(sinc(x) - std::sin(x) / x) < 1e-15);
    CHECK(sinc(std::numeric_limits<double>::infinity()) == 0.0);
}

TEST_CASE("h_fn") {
    CHECK(h_fn(5, 0, 0.3, 0.7) == 0.0);
    CHECK(h_fn(1, 1, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(h_fn(2, 1, 0.5, 0.5) == doctest::Approx(4.0));
    CHECK_THROWS_AS(h_fn(1, 1, 0.5, 0.0), validation_error); // y <= 0
    CHECK_THROWS_AS(h_fn(1, 1, 0.5, 0.5), validation_error); // Ay = Bx
}

TEST_CASE("domain polygons") {
    CHECK(polygon_area(domain_polygon({{1}, {0}})) == doctest::Approx(0.5));
    CHECK(polygon_area(domain_polygon({{2}, {0}})) == doctest::Approx(0.125));
    CHECK(domain_polygon({{-1}, {0}}).empty());
}

TEST_CASE("domains are convex and inside the base triangle") {
    for (const LatticePair& p : enumerate_pairs(2, 8)) {
        const Polygon poly = domain_polygon(p);
        REQUIRE(poly.size() >= 3);
        CHECK(polygon_area(poly) > 0.0);
        CHECK(polygon_area(poly) <= 0.5 + 1e-12);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point2& v = poly[i];
            CHECK(v.x >= -1e-12);
            CHECK(v.y <= 1.0 + 1e-12);
            CHECK(v.x <= v.y + 1e-12);
            // convexity: every cross product has consistent (CCW) sign
            const Point2& a = poly[(i + 1) % poly.size()];
            const Point2& b = poly[(i + 2) % poly.size()];
            const double cross =
                (a.x - v.x) * (b.y - a.y) - (a.y - v.y) * (b.x - a.x);
            CHECK(cross >= -1e-12);
        }
    }
}

TEST_CASE("integrand") {
    const LatticePair all_b0{{1, 2}, {0, 0}};
    CHECK(integrand(all_b0, 0.7, 0.1, 0.6) == doctest::Approx(1.0));
    const LatticePair p11{{1}, {1}};
    CHECK(integrand(p11, kAlphaStar, 0.0, 1.0) ==
          doctest::Approx(sinc(3.0 / kPi) * sinc(3.0 / kPi)));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const LatticePair p21{{2}, {1}};
    const Polygon poly = domain_polygon(p21);
    int tested = 0;
    while (tested < 10000) {
        double x = unit(rng), y = unit(rng);
        if (x > y) std::swap(x, y);
        const double t = 2.0 * y - x;
        if (y <= 0.0 || t <= 1e-9 || t > 1.0) continue;
        CHECK(std::abs(integrand(p21, 0.8, x, y)) <= 1.0 + 1e-12);
        ++tested;
    }
    (void)poly;
}

TEST_CASE("integrate_pair exact areas") {
    CHECK(integrate_pair({{1}, {0}}, 0.33) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(integrate_pair({{2}, {0}}, 2.5) == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(integrate_pair({{-1}, {0}}, 1.0) == 0.0); // empty domain
    CHECK_THROWS_AS(integrate_pair({{1}, {0}}, 0.0), validation_error);
}

TEST_CASE("integrate_pair against a Monte-Carlo oracle") {
    const LatticePair p{{1}, {1}};
    const double quad = integrate_pair(p, kAlphaStar);
    std::mt19937 rng(0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = unit(rng), y = unit(rng);
        if (x > y) std::swap(x, y); // uniform on the triangle, area 1/2
        const double t = y - x;
        double v = 0.0;
        if (y > 0.0 && t > 0.0 && t <= 1.0) v = integrand(p, kAlphaStar, x, y);
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double var = (sum2 / n - mean * mean) / n;
    const double mc = 0.5 * mean; // triangle area x mean
    const double sigma = 0.5 * std::sqrt(var);
    CHECK(std::abs(quad - mc) < 3.0 * sigma + 1e-12);
}

TEST_CASE("enumerate_pairs") {
    const auto r1 = enumerate_pairs(2, 1);
    auto contains = [&](std::int64_t a, std::int64_t b) {
        for (const auto& p : r1)
            if (p.A[0] == a && p.B[0] == b) return true;
        return false;
    };
    CHECK(contains(1, 0));
    CHECK(contains(1, 1));
    CHECK(!contains(0, 0));
    CHECK(!contains(-1, 0)); // empty domain

    // R = 2 against a brute-force feasibility scan
    const auto r2 = enumerate_pairs(2, 2);
    std::size_t brute = 0;
    for (std::int64_t a = -2; a <= 2; ++a)
        for (std::int64_t b = -2; b <= 2; ++b) {
            if (a == 0 && b == 0) continue;
            if (std::gcd(std::abs(a), std::abs(b)) != 1) continue;
            if (!domain_polygon({{a}, {b}}).empty()) ++brute;
        }
    CHECK(r2.size() == brute);
    for (const auto& p : r2) CHECK(p.admissible());

    // sort key: max coordinate, then lexicographic
    for (std::size_t i = 1; i < r2.size(); ++i) {
        const auto mc = [](const LatticePair& p) {
            return std::max(std::abs(p.A[0]), std::abs(p.B[0]));
        };
        CHECK(mc(r2[i - 1]) <= mc(r2[i]));
    }
    CHECK_THROWS_AS(enumerate_pairs(1, 4), validation_error);
}

TEST_CASE("limit_moment basics") {
    CHECK(limit_moment(1, kAlphaStar).value == doctest::Approx(1.0).epsilon(1e-12));
    QuadratureConfig cfg;
    const LimitMomentResult m2 = limit_moment(2, 1.0, cfg);
    CHECK(m2.value >= -1e-6);
    CHECK(m2.converged);
    // continuity under a small alpha perturbation
    const LimitMomentResult m2b = limit_moment(2, 1.001, cfg);
    CHECK(std::abs(m2.value - m2b.value) < 1e-2);
    CHECK_THROWS_AS(limit_moment(0, 1.0), validation_error);
    CHECK_THROWS_AS(limit_moment(2, -1.0), validation_error);
}

TEST_CASE("shell contributions decrease for ell = 2") {
    QuadratureConfig cfg;
    const double t8 = shell_sum(2, 1.0, 8, 16, cfg, true);
    const double t16 = shell_sum(2, 1.0, 16, 32, cfg, true);
    const double t32 = shell_sum(2, 1.0, 32, 64, cfg, true);
    CHECK(t8 > t16);
    CHECK(t16 > t32);
    CHECK(t32 >= 0.0);
}

TEST_CASE("g2 closed form") {
    CHECK(g2_scaled(0.5) == 0.0);
    CHECK(g2_scaled(2.0) ==
          doctest::Approx(kPi * kPi / 6.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(g2_scaled(1000.0) - 1.0) < 0.01);
    CHECK_THROWS_AS(g2_scaled(0.0), validation_error);
}

TEST_CASE("m2_via_g2") {
    const M2Result r = m2_via_g2(1.0);
    CHECK(r.value > kAlphaStar);             // second moment exceeds the first
    CHECK(r.value > kAlphaStar * kAlphaStar); // non-degeneracy
    const M2Result r2 = m2_via_g2(1.0, 2000.0);
    CHECK(std::abs(r.value - r2.value) < 1e-4);
    CHECK(r.tail_bound > 0.0);
}

TEST_CASE("limit_moment agrees with m2_via_g2 at alpha = 1") {
    const double lattice = limit_moment(2, 1.0).value;
    const double closed = m2_via_g2(1.0).value;
    CHECK(std::abs(lattice - closed) < 1e-2 * closed);
}
