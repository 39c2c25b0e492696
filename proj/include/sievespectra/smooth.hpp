#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "sievespectra/spectra.hpp"

namespace sievespectra {

// Smooth step Xi(x) = sigma(x)/(sigma(x)+sigma(1-x)), sigma(t) = exp(-1/t) for
// t > 0 else 0; Xi = 0 for x <= 0, 1 for x >= 1, and Xi(x) + Xi(1-x) = 1.
double xi(double x);

// Analytic derivative of xi; supported on (0, 1).
double xi_prime(double x);

// Plateau bump: Xi(x/delta) on [0, delta], 1 on [delta, 1],
// Xi((1+delta-x)/delta) on [1, 1+delta], 0 elsewhere. Requires 0 < delta < 1/2.
// Satisfies f_delta(x) + f_delta(x+1) = 1 on [0,1] and integrates to 1.
double f_delta(double x, double delta);

// Window spectrum phi_win(u) = int_0^1 xi'(y) e^{-2 pi i u y} dy, by composite
// Gauss-Legendre quadrature with per-u memoization. |phi_win(u)| <= phi_win(0) = 1.
std::complex<double> phi_win(double u);

// Closed-form Fourier transform of f_delta: e^{-pi i u} sinc(pi u) phi_win(delta u).
std::complex<double> fhat_delta(double u, double delta);

// Hermitian |F_Q| x |F_Q| transfer matrix
// T(theta, theta') = sum_{0 < n < (1+delta) N} f_delta(n/N) e(n (theta' - theta)).
Eigen::MatrixXcd smoothed_transfer_matrix(std::int64_t Q, std::int64_t N, double delta,
                                          const ResourceLimits& limits = {});

// Smoothed moment Tr(T^ell) / N^{ell+1} via the eigenvalues of T.
MomentReport smoothed_moment(std::int64_t Q, std::int64_t N, int ell, double delta,
                             const ResourceLimits& limits = {});

} // namespace sievespectra
