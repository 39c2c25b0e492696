#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sievespectra/gram.hpp"

namespace sievespectra {

// Full spectrum of a Gram or dual Gram matrix, sorted descending.
struct Spectrum {
    std::int64_t Q = 1;
    std::int64_t N = 1;
    std::vector<double> eigenvalues;
};

enum class MomentMethod { spectral, trace, dual, lattice, g2, smoothed };

std::string to_string(MomentMethod m);

struct MomentReport {
    int ell = 1;
    double value = 0.0;
    MomentMethod method = MomentMethod::spectral;
    std::int64_t Q = 0;
    std::int64_t N = 0;
    double alpha = 0.0; // N / Q^2
};

// Scaled eigenvalue atoms lambda_i / N, each of weight 1/N.
struct EmpiricalMeasure {
    std::int64_t N = 1;
    std::vector<double> atoms;
};

Spectrum eigenvalues(const GramMatrix& m, const ResourceLimits& limits = {});
Spectrum eigenvalues(const DualGramMatrix& d, const ResourceLimits& limits = {});

EmpiricalMeasure empirical_measure(const Spectrum& s);

// (1/N) sum (lambda_i/N)^ell, negative eigenvalues clamped to 0 before powering.
MomentReport moment_spectral(const Spectrum& s, int ell);

// Tr((A*A)^ell) / N^{ell+1} via repeated dense products; ell <= 8.
MomentReport moment_trace(const GramMatrix& m, int ell, const ResourceLimits& limits = {});

// Tr((AA*)^ell) / N^{ell+1}; shares the nonzero spectrum with the Gram route.
MomentReport moment_dual(const DualGramMatrix& d, int ell);

struct HistogramBin {
    double center = 0.0;
    double density = 0.0;
};

// Density = count / (N * bin_width); atoms below omit_below are excluded when set.
std::vector<HistogramBin> histogram(const EmpiricalMeasure& e, double bin_width,
                                    std::optional<double> omit_below = std::nullopt);

void write_eigenvalues_csv(const Spectrum& s, const std::filesystem::path& path);
void write_histogram_csv(const std::vector<HistogramBin>& bins, const std::filesystem::path& path);
void write_moments_csv(const std::vector<MomentReport>& reports, const std::filesystem::path& path);

} // namespace sievespectra
