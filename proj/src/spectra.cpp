#include "sievespectra/spectra.hpp"

#include "sievespectra/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <Eigen/Eigenvalues>

namespace sievespectra {

std::string to_string(MomentMethod m) {
    switch (m) {
        case MomentMethod::spectral: return "spectral";
        case MomentMethod::trace: return "trace";
        case MomentMethod::dual: return "dual";
        case MomentMethod::lattice: return "lattice";
        case MomentMethod::g2: return "g2";
        case MomentMethod::smoothed: return "smoothed";
    }
    return "unknown";
}

namespace {

double alpha_of(std::int64_t Q, std::int64_t N) {
    return static_cast<double>(N) / (static_cast<double>(Q) * static_cast<double>(Q));
}

std::vector<double> sorted_descending(const Eigen::VectorXd& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

} // namespace

Spectrum eigenvalues(const GramMatrix& m, const ResourceLimits& limits) {
    if (m.N > limits.max_n)
        throw resource_guard_error("eigenvalues: N exceeds cap");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.to_dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw convergence_error("eigenvalues: symmetric eigensolver did not converge");
    return {m.Q, m.N, sorted_descending(solver.eigenvalues())};
}

Spectrum eigenvalues(const DualGramMatrix& d, const ResourceLimits& limits) {
    if (d.entries.rows() > limits.max_farey)
        throw resource_guard_error("eigenvalues: |F_Q| exceeds cap");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(d.entries, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw convergence_error("eigenvalues: Hermitian eigensolver did not converge");
    return {d.Q, d.N, sorted_descending(solver.eigenvalues())};
}

EmpiricalMeasure empirical_measure(const Spectrum& s) {
    EmpiricalMeasure e;
    e.N = s.N;
    e.atoms.reserve(s.eigenvalues.size());
    for (double lambda : s.eigenvalues) e.atoms.push_back(lambda / static_cast<double>(s.N));
    return e;
}

MomentReport moment_spectral(const Spectrum& s, int ell) {
    if (ell < 1) throw validation_error("moment_spectral: ell must be >= 1");
    const double n = static_cast<double>(s.N);
    double sum = 0.0;
    for (double lambda : s.eigenvalues) {
        const double t = std::max(lambda, 0.0) / n;
        sum += std::pow(t, ell);
    }
    return {ell, sum / n, MomentMethod::spectral, s.Q, s.N, alpha_of(s.Q, s.N)};
}

MomentReport moment_trace(const GramMatrix& m, int ell, const ResourceLimits& limits) {
    if (ell < 1) throw validation_error("moment_trace: ell must be >= 1");
    if (ell > 8) throw resource_guard_error("moment_trace: ell > 8 exceeds cost guard");
    if (m.N > limits.max_n) throw resource_guard_error("moment_trace: N exceeds cap");
    const double n = static_cast<double>(m.N);
    const Eigen::MatrixXd scaled = m.to_dense() / n; // A*A / N
    Eigen::MatrixXd power = scaled;
    for (int i = 1; i < ell; ++i) power = (power * scaled).eval();
    return {ell, power.trace() / n, MomentMethod::trace, m.Q, m.N, alpha_of(m.Q, m.N)};
}

MomentReport moment_dual(const DualGramMatrix& d, int ell) {
    if (ell < 1) throw validation_error("moment_dual: ell must be >= 1");
    if (ell > 8) throw resource_guard_error("moment_dual: ell > 8 exceeds cost guard");
    const double n = static_cast<double>(d.N);
    const Eigen::MatrixXcd scaled = d.entries / n;
    Eigen::MatrixXcd power = scaled;
    for (int i = 1; i < ell; ++i) power = (power * scaled).eval();
    return {ell, power.trace().real() / n, MomentMethod::dual, d.Q, d.N, alpha_of(d.Q, d.N)};
}

std::vector<HistogramBin> histogram(const EmpiricalMeasure& e, double bin_width,
                                    std::optional<double> omit_below) {
    if (!(bin_width > 0)) throw validation_error("histogram: bin_width must be > 0");
    std::map<std::int64_t, std::int64_t> counts;
    for (double atom : e.atoms) {
        if (omit_below && atom < *omit_below) continue;
        counts[static_cast<std::int64_t>(std::floor(atom / bin_width))]++;
    }
    std::vector<HistogramBin> bins;
    bins.reserve(counts.size());
    const double norm = static_cast<double>(e.N) * bin_width;
    for (auto [idx, count] : counts)
        bins.push_back({(static_cast<double>(idx) + 0.5) * bin_width,
                        static_cast<double>(count) / norm});
    return bins;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw validation_error("cannot open " + path.string());
    out.precision(12);
    return out;
}

} // namespace

void write_eigenvalues_csv(const Spectrum& s, const std::filesystem::path& path) {
    auto out = open_csv(path);
    out << "eigenvalue\n";
    for (double v : s.eigenvalues) out << v << '\n';
}

void write_histogram_csv(const std::vector<HistogramBin>& bins, const std::filesystem::path& path) {
    auto out = open_csv(path);
    out << "bin_center,density\n";
    for (const auto& b : bins) out << b.center << ',' << b.density << '\n';
}

void write_moments_csv(const std::vector<MomentReport>& reports, const std::filesystem::path& path) {
    auto out = open_csv(path);
    out << "ell,value,method,Q,N,alpha\n";
    for (const auto& r : reports)
        out << r.ell << ',' << r.value << ',' << to_string(r.method) << ',' << r.Q << ',' << r.N
            << ',' << r.alpha << '\n';
}

} // namespace sievespectra
