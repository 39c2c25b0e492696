#include "sievespectra/gram.hpp"

#include "sievespectra/errors.hpp"
#include "sievespectra/ntheory.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>

namespace sievespectra {

Eigen::MatrixXd GramMatrix::to_dense() const {
    Eigen::MatrixXd m(N, N);
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j)
            m(i, j) = static_cast<double>(entry(i, j));
    return m;
}

GramMatrix build_gram(std::int64_t Q, std::int64_t N, const ResourceLimits& limits) {
    if (Q < 1) throw validation_error("build_gram: Q must be >= 1");
    if (N < 1) throw validation_error("build_gram: N must be >= 1");
    if (N > limits.max_n)
        throw resource_guard_error("build_gram: N = " + std::to_string(N) + " exceeds cap " +
                                   std::to_string(limits.max_n));
    warm_sieve_tables(Q);
    GramMatrix m;
    m.Q = Q;
    m.N = N;
    m.first_row.resize(static_cast<std::size_t>(N));
    for (std::int64_t k = 0; k < N; ++k)
        m.first_row[static_cast<std::size_t>(k)] = farey_exp_sum(k, Q);
    return m;
}

Eigen::MatrixXd gram_dense_oracle(std::int64_t Q, std::int64_t N) {
    if (Q < 1 || Q > 12 || N < 1 || N > 64)
        throw resource_guard_error("gram_dense_oracle: requires 1 <= Q <= 12, 1 <= N <= 64");
    const FareySet farey = farey_set(Q);
    Eigen::MatrixXd m(N, N);
    for (std::int64_t i = 0; i < N; ++i) {
        for (std::int64_t j = 0; j < N; ++j) {
            std::complex<double> sum = 0.0;
            for (const FareyFraction& f : farey.fractions) {
                const double phase =
                    2.0 * std::numbers::pi * static_cast<double>(i - j) * f.value();
                sum += std::complex<double>(std::cos(phase), std::sin(phase));
            }
            if (std::abs(sum.imag()) >= 1e-9)
                throw convergence_error("gram_dense_oracle: imaginary part above 1e-9");
            m(i, j) = sum.real();
        }
    }
    return m;
}

DualGramMatrix build_dual_gram(std::int64_t Q, std::int64_t N, const ResourceLimits& limits) {
    if (Q < 1) throw validation_error("build_dual_gram: Q must be >= 1");
    if (N < 1) throw validation_error("build_dual_gram: N must be >= 1");
    const std::int64_t size = farey_size(Q);
    if (size > limits.max_farey)
        throw resource_guard_error("build_dual_gram: |F_Q| = " + std::to_string(size) +
                                   " exceeds cap " + std::to_string(limits.max_farey));
    const FareySet farey = farey_set(Q);
    DualGramMatrix d;
    d.Q = Q;
    d.N = N;
    d.entries.resize(size, size);
    // Dirichlet kernel: sum_{n=1..N} e(nx) = e^{i(N+1)w/2} sin(Nw/2)/sin(w/2), w = 2 pi x.
    // x = theta' - theta lies in (-1,1) and is an integer only when it is 0.
    for (std::int64_t r = 0; r < size; ++r) {
        d.entries(r, r) = static_cast<double>(N);
        for (std::int64_t c = r + 1; c < size; ++c) {
            const FareyFraction& t1 = farey.fractions[static_cast<std::size_t>(r)];
            const FareyFraction& t2 = farey.fractions[static_cast<std::size_t>(c)];
            const double x = static_cast<double>(t2.a * t1.q - t1.a * t2.q) /
                             static_cast<double>(t1.q * t2.q);
            const double half_w = std::numbers::pi * x;
            const double ratio = std::sin(static_cast<double>(N) * half_w) / std::sin(half_w);
            const double arg = static_cast<double>(N + 1) * half_w;
            const std::complex<double> v(ratio * std::cos(arg), ratio * std::sin(arg));
            d.entries(r, c) = v;
            d.entries(c, r) = std::conj(v);
        }
    }
    return d;
}

std::uint64_t gram_det_mod(const GramMatrix& m, std::uint64_t p) {
    if (p < 3 || p >= (std::uint64_t{1} << 62) || p % 2 == 0)
        throw validation_error("gram_det_mod: p must be an odd prime below 2^62");
    const std::int64_t n = m.N;
    const auto sp = static_cast<std::int64_t>(p);
    std::vector<std::uint64_t> a(static_cast<std::size_t>(n * n));
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t j = 0; j < n; ++j)
            a[static_cast<std::size_t>(i * n + j)] =
                static_cast<std::uint64_t>(((m.entry(i, j) % sp) + sp) % sp);

    auto mul = [p](std::uint64_t x, std::uint64_t y) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
    };
    auto pow_mod = [&](std::uint64_t b, std::uint64_t e) {
        std::uint64_t r = 1;
        for (; e; e >>= 1, b = mul(b, b))
            if (e & 1) r = mul(r, b);
        return r;
    };

    std::uint64_t det = 1;
    for (std::int64_t c = 0; c < n; ++c) {
        std::int64_t pivot = -1;
        for (std::int64_t r = c; r < n && pivot < 0; ++r)
            if (a[static_cast<std::size_t>(r * n + c)] != 0) pivot = r;
        if (pivot < 0) return 0;
        if (pivot != c) {
            for (std::int64_t j = c; j < n; ++j)
                std::swap(a[static_cast<std::size_t>(pivot * n + j)],
                          a[static_cast<std::size_t>(c * n + j)]);
            det = p - det;
        }
        const std::uint64_t lead = a[static_cast<std::size_t>(c * n + c)];
        det = mul(det, lead);
        const std::uint64_t inv = pow_mod(lead, p - 2);
        for (std::int64_t r = c + 1; r < n; ++r) {
            const std::uint64_t f = mul(a[static_cast<std::size_t>(r * n + c)], inv);
            if (f == 0) continue;
            for (std::int64_t j = c; j < n; ++j) {
                std::uint64_t& x = a[static_cast<std::size_t>(r * n + j)];
                const std::uint64_t s = mul(f, a[static_cast<std::size_t>(c * n + j)]);
                x = x >= s ? x - s : x + p - s;
            }
        }
    }
    return det % p;
}

namespace {

constexpr char kGramMagic[8] = {'L', 'S', 'G', 'R', 'A', 'M', '0', '1'};

void put_u32_le(std::ofstream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32_le(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

} // namespace

void write_gram_binary(const GramMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw validation_error("write_gram_binary: cannot open " + path.string());
    out.write(kGramMagic, 8);
    put_u32_le(out, static_cast<std::uint32_t>(m.Q));
    put_u32_le(out, static_cast<std::uint32_t>(m.N));
    for (std::int64_t v : m.first_row) {
        unsigned char b[8];
        auto u = static_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
        out.write(reinterpret_cast<const char*>(b), 8);
    }
    if (!out) throw validation_error("write_gram_binary: write failed for " + path.string());
}

GramMatrix read_gram_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("read_gram_binary: cannot open " + path.string());
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kGramMagic, 8) != 0)
        throw validation_error("read_gram_binary: bad magic in " + path.string());
    GramMatrix m;
    m.Q = get_u32_le(in);
    m.N = get_u32_le(in);
    m.first_row.resize(static_cast<std::size_t>(m.N));
    for (auto& v : m.first_row) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t u = 0;
        for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        v = static_cast<std::int64_t>(u);
    }
    if (!in) throw validation_error("read_gram_binary: truncated file " + path.string());
    return m;
}

void write_first_row_csv(const GramMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw validation_error("write_first_row_csv: cannot open " + path.string());
    out << "k,c\n";
    for (std::size_t k = 0; k < m.first_row.size(); ++k)
        out << k << ',' << m.first_row[k] << '\n';
}

} // namespace sievespectra
