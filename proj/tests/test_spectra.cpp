#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sievespectra/errors.hpp"
#include "sievespectra/ntheory.hpp"
#include "sievespectra/spectra.hpp"

using namespace sievespectra;

TEST_CASE("all-ones spectrum") {
    const Spectrum s = eigenvalues(build_gram(1, 5));
    REQUIRE(s.eigenvalues.size() == 5);
    CHECK(s.eigenvalues[0] == doctest::Approx(5.0).epsilon(1e-12));
    for (int i = 1; i < 5; ++i) CHECK(std::abs(s.eigenvalues[i]) < 1e-12);
}

TEST_CASE("trace identity and large sieve bound") {
    for (std::int64_t Q : {5, 10, 20}) {
        const std::int64_t N = farey_size(Q);
        const Spectrum s = eigenvalues(build_gram(Q, N));
        const double sum = std::accumulate(s.eigenvalues.begin(), s.eigenvalues.end(), 0.0);
        const double expected = static_cast<double>(farey_size(Q)) * static_cast<double>(N);
        CHECK(std::abs(sum - expected) < 1e-10 * expected);
        CHECK(s.eigenvalues.front() <=
              static_cast<double>(N + Q * Q - 1) + 1e-6 * static_cast<double>(N));
        CHECK(s.eigenvalues.back() >= -1e-8 * static_cast<double>(N + Q * Q));
    }
}

TEST_CASE("empirical measure mass and support") {
    const Spectrum s = eigenvalues(build_gram(10, farey_size(10)));
    const EmpiricalMeasure e = empirical_measure(s);
    CHECK(e.atoms.size() == s.eigenvalues.size());
    const double hi = 1.0 + 100.0 / static_cast<double>(e.N) + 1e-6;
    for (double a : e.atoms) {
        CHECK(a >= -1e-6);
        CHECK(a <= hi);
    }
}

TEST_CASE("spectral moments") {
    const Spectrum s5 = eigenvalues(build_gram(1, 5));
    CHECK(moment_spectral(s5, 3).value == doctest::Approx(0.2).epsilon(1e-12));
    for (std::int64_t Q : {5, 12, 25}) {
        const std::int64_t N = farey_size(Q);
        const Spectrum s = eigenvalues(build_gram(Q, N));
        const double m1 = moment_spectral(s, 1).value;
        CHECK(std::abs(m1 - static_cast<double>(farey_size(Q)) / static_cast<double>(N)) <
              1e-12 * m1);
    }
    CHECK_THROWS_AS(moment_spectral(s5, 0), validation_error);
}

TEST_CASE("trace moments") {
    const GramMatrix ones = build_gram(1, 3);
    CHECK(moment_trace(ones, 2).value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    const GramMatrix g = build_gram(2, 3);
    const Spectrum s = eigenvalues(g);
    CHECK(moment_trace(g, 2).value ==
          doctest::Approx(moment_spectral(s, 2).value).epsilon(1e-10));
    CHECK(moment_trace(g, 1).value ==
          doctest::Approx(static_cast<double>(farey_size(2)) / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(moment_trace(g, 9), resource_guard_error);
}

TEST_CASE("dual moments") {
    const DualGramMatrix d1 = build_dual_gram(1, 6);
    CHECK(moment_dual(d1, 3).value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(moment_dual(d1, 1).value == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    const std::int64_t Q = 30, N = farey_size(30);
    const Spectrum s = eigenvalues(build_gram(Q, N));
    const DualGramMatrix d = build_dual_gram(Q, N);
    const double a = moment_spectral(s, 2).value;
    const double b = moment_dual(d, 2).value;
    CHECK(std::abs(a - b) < 1e-8 * std::abs(a));
}

TEST_CASE("three-route moment agreement at Q = 20") {
    const std::int64_t Q = 20, N = farey_size(Q);
    const GramMatrix g = build_gram(Q, N);
    const Spectrum s = eigenvalues(g);
    const DualGramMatrix d = build_dual_gram(Q, N);
    for (int ell = 1; ell <= 5; ++ell) {
        const double ms = moment_spectral(s, ell).value;
        const double mt = moment_trace(g, ell).value;
        const double md = moment_dual(d, ell).value;
        CHECK(std::abs(ms - mt) < 1e-8 * std::abs(ms));
        CHECK(std::abs(ms - md) < 1e-8 * std::abs(ms));
        CHECK(std::abs(mt - md) < 1e-8 * std::abs(mt));
    }
}

TEST_CASE("histogram conventions") {
    EmpiricalMeasure single;
    single.N = 1;
    single.atoms = {0.5};
    const auto bins = histogram(single, 0.01);
    REQUIRE(bins.size() == 1);
    CHECK(bins[0].density == doctest::Approx(100.0));
    CHECK(bins[0].center == doctest::Approx(0.505));

    const Spectrum s = eigenvalues(build_gram(1, 10)); // {10, 0 x 9}
    const EmpiricalMeasure e = empirical_measure(s);
    const auto b2 = histogram(e, 0.01);
    double mass0 = 0.0, mass1 = 0.0;
    for (const auto& b : b2) {
        if (b.center < 0.5) mass0 += b.density * 0.01;
        else mass1 += b.density * 0.01;
    }
    CHECK(mass0 == doctest::Approx(0.9));
    CHECK(mass1 == doctest::Approx(0.1));

    // total mass 1 within 1e-12; omit_below drops the omitted mass
    const Spectrum sq = eigenvalues(build_gram(12, farey_size(12)));
    const EmpiricalMeasure eq = empirical_measure(sq);
    double total = 0.0;
    for (const auto& b : histogram(eq, 0.01)) total += b.density * 0.01;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    double kept = 0.0;
    for (const auto& b : histogram(eq, 0.01, 0.01)) kept += b.density * 0.01;
    CHECK(kept <= total);
    CHECK_THROWS_AS(histogram(eq, 0.0), validation_error);
}
