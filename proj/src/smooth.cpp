#include "sievespectra/smooth.hpp"

#include "sievespectra/errors.hpp"
#include "sievespectra/ntheory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

namespace sievespectra {

namespace {

constexpr double kPi = std::numbers::pi;

double sigma(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
double sigma_prime(double t) { return t > 0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

void check_delta(double delta, const char* where) {
    if (!(delta > 0.0 && delta < 0.5))
        throw validation_error(std::string(where) + ": delta must lie in (0, 1/2)");
}

} // namespace

double xi(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double s = sigma(x);
    return s / (s + sigma(1.0 - x));
}

double xi_prime(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double s = sigma(x);
    const double r = sigma(1.0 - x);
    const double d = s + r;
    return (sigma_prime(x) * r + s * sigma_prime(1.0 - x)) / (d * d);
}

double f_delta(double x, double delta) {
    check_delta(delta, "f_delta");
    if (x <= 0.0 || x >= 1.0 + delta) return 0.0;
    if (x < delta) return xi(x / delta);
    if (x <= 1.0) return 1.0;
    return xi((1.0 + delta - x) / delta);
}

namespace {

// 16-point Gauss-Legendre on [-1,1].
constexpr double kGlX[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                            0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                            0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                            0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                            0.0622535239386479, 0.0271524594117541};

std::complex<double> phi_win_compute(double u) {
    // xi' is smooth with all derivatives vanishing at 0 and 1; panels track the
    // oscillation length 1/u.
    const int panels = std::max(8, static_cast<int>(std::ceil(4.0 * std::abs(u))));
    std::complex<double> sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = static_cast<double>(p) / panels;
        const double b = static_cast<double>(p + 1) / panels;
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (int i = 0; i < 8; ++i) {
            for (double y : {mid - half * kGlX[i], mid + half * kGlX[i]}) {
                const double phase = -2.0 * kPi * u * y;
                sum += kGlW[i] * half * xi_prime(y) *
                       std::complex<double>(std::cos(phase), std::sin(phase));
            }
        }
    }
    return sum;
}

} // namespace

std::complex<double> phi_win(double u) {
    static std::map<double, std::complex<double>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(u);
        if (it != cache.end()) return it->second;
    }
    const std::complex<double> v = phi_win_compute(u);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(u, v);
    return v;
}

std::complex<double> fhat_delta(double u, double delta) {
    check_delta(delta, "fhat_delta");
    if (u == 0.0) return 1.0;
    const double s = std::sin(kPi * u) / (kPi * u);
    return std::polar(1.0, -kPi * u) * s * phi_win(delta * u);
}

Eigen::MatrixXcd smoothed_transfer_matrix(std::int64_t Q, std::int64_t N, double delta,
                                          const ResourceLimits& limits) {
    check_delta(delta, "smoothed_transfer_matrix");
    if (Q < 1 || N < 1) throw validation_error("smoothed_transfer_matrix: Q, N must be >= 1");
    if (Q > limits.max_smooth_q)
        throw resource_guard_error("smoothed_transfer_matrix: Q exceeds smoothing cap");
    const std::int64_t size = farey_size(Q);
    if (size > limits.max_farey)
        throw resource_guard_error("smoothed_transfer_matrix: |F_Q| exceeds cap");
    const FareySet farey = farey_set(Q);

    const auto n_max = static_cast<std::int64_t>(std::ceil((1.0 + delta) * static_cast<double>(N))) - 1;
    std::vector<double> weights(static_cast<std::size_t>(std::max<std::int64_t>(n_max, 0)) + 1, 0.0);
    for (std::int64_t n = 1; n <= n_max; ++n)
        weights[static_cast<std::size_t>(n)] =
            f_delta(static_cast<double>(n) / static_cast<double>(N), delta);

    Eigen::MatrixXcd T(size, size);
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::int64_t> cursor{0};
    auto worker = [&]() {
        while (true) {
            const std::int64_t r = cursor.fetch_add(1);
            if (r >= size) break;
            const FareyFraction& t1 = farey.fractions[static_cast<std::size_t>(r)];
            double diag = 0.0;
            for (std::int64_t n = 1; n <= n_max; ++n) diag += weights[static_cast<std::size_t>(n)];
            T(r, r) = diag;
            for (std::int64_t c = r + 1; c < size; ++c) {
                const FareyFraction& t2 = farey.fractions[static_cast<std::size_t>(c)];
                const double x = static_cast<double>(t2.a * t1.q - t1.a * t2.q) /
                                 static_cast<double>(t1.q * t2.q);
                const std::complex<double> z = std::polar(1.0, 2.0 * kPi * x);
                std::complex<double> zn = 1.0;
                std::complex<double> sum = 0.0;
                for (std::int64_t n = 1; n <= n_max; ++n) {
                    zn *= z;
                    sum += weights[static_cast<std::size_t>(n)] * zn;
                }
                T(r, c) = sum;
                T(c, r) = std::conj(sum);
            }
        }
    };
    if (hw <= 1 || size < 4) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < hw; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return T;
}

MomentReport smoothed_moment(std::int64_t Q, std::int64_t N, int ell, double delta,
                             const ResourceLimits& limits) {
    if (ell < 1) throw validation_error("smoothed_moment: ell must be >= 1");
    const Eigen::MatrixXcd T = smoothed_transfer_matrix(Q, N, delta, limits);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(T, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw convergence_error("smoothed_moment: eigensolver did not converge");
    const double n = static_cast<double>(N);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        sum += std::pow(solver.eigenvalues()[i] / n, ell);
    return {ell, sum / n, MomentMethod::smoothed, Q, N,
            static_cast<double>(N) / (static_cast<double>(Q) * static_cast<double>(Q))};
}

} // namespace sievespectra
