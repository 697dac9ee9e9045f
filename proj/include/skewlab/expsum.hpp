#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/frequencies.hpp"

namespace skewlab {

enum class ESMethod { BruteForce, CompletedSquare, GeometricBound };

struct ESResult {
    int N = 0;
    int M = 0;
    double value = 0.0;          // exact value (brute / completed square) or bound
    std::optional<double> bound; // set for GeometricBound
    ESMethod method = ESMethod::BruteForce;
    double seconds = 0.0;
};

// The normalized constrained quadruple sum
//   ES_N = N^{-5} sum_{i1,i2<=M} sum_{j1+j3=j2+j4} e[(w_{i1}-w_{i2})/2 (j1^2-j2^2+j3^2-j4^2)]
// evaluated literally with j4 eliminated (O(M^2 N^3)). Capped at N <= 128.
ESResult es_bruteforce(const FrequencySequence& freq, int N, double rho);

// Same value through the (a,t) reparametrization: per frequency pair,
// sum over net current t of a closed-form geometric-series square.
ESResult es_completed_square(const FrequencySequence& freq, int N, double rho);
// Generic O(M^2 N) path, bypassing the difference-structure shortcut.
ESResult es_completed_square_generic(const FrequencySequence& freq, int N, double rho);

// Upper bound (1/4N^5) sum min{N^2, ||(w_{i1}-w_{i2}) t||^{-2}}; dominates the
// exact value.
ESResult es_geometric_bound(const FrequencySequence& freq, int N, double rho);

struct DecayFit {
    std::vector<int> N_list;
    std::vector<double> es_values;
    double slope = 0.0;
    double r2 = 0.0;
};

// Least-squares slope of log ES vs log N over the given N list.
DecayFit fit_decay(const FrequencySpec& kind, const std::vector<int>& N_list, double rho);
DecayFit fit_loglog(const std::vector<int>& N_list, const std::vector<double>& values);

// Count of (j1,j2,j3,j4) in {1..N}^4 with j1+j3=j2+j4 and j1^2+j3^2=j2^2+j4^2.
// Returns 2N^2-N; for N <= 40 the formula is verified against exhaustive search.
std::int64_t diophantine_count(int N);

struct MeanESResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::vector<double> samples;
};

// Monte Carlo mean of ES_N over omega uniform on [0,2]^M.
MeanESResult random_freq_mean(int N, double rho, int samples, std::uint64_t seed);

} // namespace skewlab
