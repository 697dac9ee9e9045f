#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "skewlab/model.hpp"

namespace skewlab {

// Singular values of X, descending. Computed from the smaller Gram matrix
// (XX* or X*X) by a Hermitian eigensolve; tiny negative Gram eigenvalues
// are clamped to zero before the square root.
std::vector<double> singular_values(const std::vector<std::complex<double>>& entries, int M, int N);
std::vector<double> singular_values(const PhaseMatrix& X);

// Gram matrix XX^* (M x M, row-major) of a row-major M x N matrix.
std::vector<std::complex<double>> gram_matrix(const std::vector<std::complex<double>>& entries,
                                              int M, int N);

// Eigenvalue multiset of H = [[0, X], [X*, 0]]: {±sigma_i} plus |M-N| zeros,
// ascending.
std::vector<double> eigenvalues_H(const std::vector<double>& sigma, int M, int N);

// mu^(2k) = (1/N) sum_i sigma_i^{2k} for k = 1..k_max (compensated sums).
std::vector<double> trace_moments(const std::vector<double>& sigma, int N, int k_max);

double semicircle_density(double x);
double semicircle_cdf(double x);

// Rescaled Marchenko-Pastur density with support [(1-sqrt(rho))^2, (1+sqrt(rho))^2].
double mp_density(double t, double rho);
void mp_support(double rho, double& lo, double& hi);

// sup over sample points of |empirical CDF - reference CDF|.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

double wigner_surmise(double s);
double wigner_surmise_cdf(double s);

struct SpacingSample {
    double E = 0.0;
    double t = 0.0;
    std::vector<double> s_values;                      // normalized consecutive gaps
    std::vector<std::pair<double, double>> lambda_cdf; // (s, Lambda_N(s)) on a grid
};

// Gaps of consecutive sorted eigenvalues with lambda_j within t of E,
// normalized by the local semicircle mean gap 1/(2 N rho_sc(E)); Lambda_N
// carries the 1/(4 N t rho_sc(E)) prefactor.
SpacingSample level_spacing(const std::vector<double>& eigs, double E, double t, int N);

enum class HistNorm { Count, Density };

struct Histogram {
    std::vector<double> bin_edges;
    std::vector<std::int64_t> counts;
    HistNorm normalization = HistNorm::Count;

    std::vector<double> densities(std::int64_t total_points) const;
};

Histogram make_histogram(const std::vector<double>& data, int bins);
Histogram make_histogram(const std::vector<double>& data, int bins, double lo, double hi);

struct SpectralSummary {
    std::vector<double> sigma;
    std::vector<double> eigs;
    std::vector<double> moments; // mu^(2), mu^(4), ...
    ModelConfig config;
};

SpectralSummary spectral_summary(const PhaseMatrix& X, int k_max);

} // namespace skewlab
