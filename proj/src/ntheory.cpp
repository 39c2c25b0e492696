#include "sievespectra/ntheory.hpp"

#include "sievespectra/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

namespace sievespectra {
namespace {

struct SieveTables {
    std::int64_t bound = 0;
    std::vector<std::int32_t> phi;      // phi[n], n <= bound
    std::vector<std::int8_t> mu;        // mu[n]
    std::vector<std::int64_t> mertens_; // prefix sums of mu
};

std::shared_ptr<const SieveTables> build_tables(std::int64_t bound) {
    auto t = std::make_shared<SieveTables>();
    t->bound = bound;
    const std::size_t n = static_cast<std::size_t>(bound) + 1;
    t->phi.assign(n, 0);
    t->mu.assign(n, 0);
    t->phi[1] = 1;
    t->mu[1] = 1;
    std::vector<std::int32_t> primes;
    primes.reserve(n / 8 + 16);
    std::vector<std::int32_t> spf(n, 0); // smallest prime factor
    for (std::int64_t i = 2; i <= bound; ++i) {
        if (spf[i] == 0) {
            spf[i] = static_cast<std::int32_t>(i);
            primes.push_back(static_cast<std::int32_t>(i));
            t->phi[i] = static_cast<std::int32_t>(i - 1);
            t->mu[i] = -1;
        }
        for (std::int32_t p : primes) {
            if (p > spf[i] || i * p > bound) break;
            spf[i * p] = p;
            if (i % p == 0) {
                t->phi[i * p] = t->phi[i] * p;
                t->mu[i * p] = 0;
            } else {
                t->phi[i * p] = t->phi[i] * (p - 1);
                t->mu[i * p] = static_cast<std::int8_t>(-t->mu[i]);
            }
        }
    }
    t->mertens_.assign(n, 0);
    std::int64_t acc = 0;
    for (std::size_t i = 1; i < n; ++i) {
        acc += t->mu[i];
        t->mertens_[i] = acc;
    }
    return t;
}

constexpr char kCacheMagic[8] = {'S', 'S', 'S', 'I', 'E', 'V', 'E', '1'};

std::filesystem::path cache_path(std::int64_t bound) {
    const char* dir = std::getenv("SIEVE_SPECTRA_CACHE");
    if (dir == nullptr || *dir == '\0') return {};
    return std::filesystem::path(dir) / ("sieve_" + std::to_string(bound) + ".bin");
}

std::shared_ptr<const SieveTables> load_cached(std::int64_t bound) {
    auto path = cache_path(bound);
    if (path.empty()) return nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in) return nullptr;
    char magic[8];
    std::int64_t stored = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&stored), sizeof stored);
    if (!in || !std::equal(magic, magic + 8, kCacheMagic) || stored != bound) return nullptr;
    auto t = std::make_shared<SieveTables>();
    t->bound = bound;
    const std::size_t n = static_cast<std::size_t>(bound) + 1;
    t->phi.resize(n);
    t->mu.resize(n);
    in.read(reinterpret_cast<char*>(t->phi.data()), static_cast<std::streamsize>(n * sizeof(std::int32_t)));
    in.read(reinterpret_cast<char*>(t->mu.data()), static_cast<std::streamsize>(n * sizeof(std::int8_t)));
    if (!in) return nullptr;
    t->mertens_.assign(n, 0);
    std::int64_t acc = 0;
    for (std::size_t i = 1; i < n; ++i) {
        acc += t->mu[i];
        t->mertens_[i] = acc;
    }
    return t;
}

void store_cached(const SieveTables& t) {
    auto path = cache_path(t.bound);
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out.write(kCacheMagic, 8);
    out.write(reinterpret_cast<const char*>(&t.bound), sizeof t.bound);
    out.write(reinterpret_cast<const char*>(t.phi.data()),
              static_cast<std::streamsize>(t.phi.size() * sizeof(std::int32_t)));
    out.write(reinterpret_cast<const char*>(t.mu.data()),
              static_cast<std::streamsize>(t.mu.size() * sizeof(std::int8_t)));
}

std::shared_ptr<const SieveTables> g_tables; // protected by g_mutex for writes
std::mutex g_mutex;
std::atomic<std::int64_t> g_bound{0};

std::shared_ptr<const SieveTables> tables(std::int64_t need) {
    if (need < 1) need = 1;
    if (g_bound.load(std::memory_order_acquire) >= need) {
        std::lock_guard<std::mutex> lock(g_mutex);
        return g_tables;
    }
    std::lock_guard<std::mutex> lock(g_mutex);
    if (g_tables && g_tables->bound >= need) return g_tables;
    std::int64_t bound = 1024;
    while (bound < need) bound *= 2;
    auto t = load_cached(bound);
    if (!t) {
        t = build_tables(bound);
        store_cached(*t);
    }
    g_tables = t;
    g_bound.store(bound, std::memory_order_release);
    return g_tables;
}

} // namespace

void warm_sieve_tables(std::int64_t bound) { tables(bound); }

std::int64_t totient(std::int64_t n) {
    if (n < 1) throw validation_error("totient: n must be >= 1");
    return tables(n)->phi[static_cast<std::size_t>(n)];
}

int mobius(std::int64_t n) {
    if (n < 1) throw validation_error("mobius: n must be >= 1");
    return tables(n)->mu[static_cast<std::size_t>(n)];
}

std::int64_t mertens(double x) {
    if (x < 0) throw validation_error("mertens: x must be >= 0");
    if (x < 1) return 0;
    const auto n = static_cast<std::int64_t>(x);
    return tables(n)->mertens_[static_cast<std::size_t>(n)];
}

std::int64_t farey_size(std::int64_t Q) {
    if (Q < 1) throw validation_error("farey_size: Q must be >= 1");
    auto t = tables(Q);
    std::int64_t total = 0;
    for (std::int64_t q = 1; q <= Q; ++q) total += t->phi[static_cast<std::size_t>(q)];
    return total;
}

FareySet farey_set(std::int64_t Q) {
    if (Q < 1) throw validation_error("farey_set: Q must be >= 1");
    FareySet set;
    set.order = Q;
    set.fractions.reserve(static_cast<std::size_t>(farey_size(Q)));
    for (std::int64_t q = 1; q <= Q; ++q)
        for (std::int64_t a = 1; a <= q; ++a)
            if (std::gcd(a, q) == 1) set.fractions.push_back({a, q});
    std::sort(set.fractions.begin(), set.fractions.end());
    return set;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
    if (n < 1) throw validation_error("divisors: n must be >= 1");
    std::vector<std::int64_t> divs;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        divs.push_back(d);
        if (d != n / d) divs.push_back(n / d);
    }
    return divs;
}

std::int64_t farey_exp_sum(std::int64_t n, std::int64_t Q) {
    if (Q < 1) throw validation_error("farey_exp_sum: Q must be >= 1");
    if (n == 0) return farey_size(Q); // every summand is e(0) = 1
    auto t = tables(Q);
    const std::int64_t m = n < 0 ? -n : n; // even in n
    std::int64_t total = 0;
    for (std::int64_t d = 1; d * d <= m; ++d) {
        if (m % d != 0) continue;
        if (d <= Q) total += d * t->mertens_[static_cast<std::size_t>(Q / d)];
        const std::int64_t e = m / d;
        if (e != d && e <= Q) total += e * t->mertens_[static_cast<std::size_t>(Q / e)];
    }
    return total;
}

} // namespace sievespectra
