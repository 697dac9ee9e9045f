#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/frequencies.hpp"

namespace skewlab {

// Exponent of the frequency term in the entry phase:
//   Binomial : q(j) = j(j-1)/2   (skew-shift orbit, row model of the main laws)
//   Square   : q(j) = j^2        (deterministic models A and B)
//   Linear   : q(j) = j          (deterministic model C, a shift not a skew-shift)
enum class QuadForm { Binomial, Square, Linear };

enum class LinearTerm { RandomY, Zero };

struct ModelConfig {
    int M = 0;
    int N = 0;
    double rho = 1.0; // M = floor(rho * N)
    FrequencySpec freq;
    QuadForm quad_form = QuadForm::Binomial;
    LinearTerm linear = LinearTerm::Zero;
    std::uint64_t y_seed = 0;
    std::vector<double> offsets_x; // empty means all zero

    void validate() const; // throws std::domain_error on violated invariants
    std::string to_json() const;
};

// Convenience constructors. For "skewshift", M = floor(rho*N), Binomial form,
// y sampled from y_seed. Models A/B/C are the deterministic table models.
ModelConfig skewshift_config(int N, double rho, const FrequencySpec& freq, std::uint64_t y_seed);
ModelConfig table_model_config(char model, int N); // 'A', 'B' or 'C'

struct PhaseMatrix {
    int M = 0;
    int N = 0;
    ModelConfig config;
    std::vector<double> y;                    // resolved linear coefficients (length M)
    std::vector<std::complex<double>> entries; // row-major M x N

    std::complex<double>& at(int i, int j) { return entries[std::size_t(i) * N + j]; }
    const std::complex<double>& at(int i, int j) const { return entries[std::size_t(i) * N + j]; }
};

// entries[i][j] = N^{-1/2} e[q(j) w_i + j y_i + x_i], rows filled in parallel,
// per-entry deterministic.
PhaseMatrix build_matrix(const ModelConfig& config);

std::uint64_t quad_term(QuadForm form, std::uint64_t j);

std::complex<double> unit_phase(double frac01); // e[t] = exp(2 pi i t)

} // namespace skewlab
