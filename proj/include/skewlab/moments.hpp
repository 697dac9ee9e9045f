#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "skewlab/expsum.hpp"
#include "skewlab/graphs.hpp"
#include "skewlab/model.hpp"

namespace skewlab {

// Edge factor K_{(i,i')}(j) in the graph sums.
//   Effective     : e[(w_i - w_i') j^2 / 2]        (y-averaged)
//   TrueSkewShift : e[(w_i - w_i')(j^2 - j)/2 + (y_i - y_i') j + (x_i - x_i')]
//   Deterministic : N X_{i,j} conj(X_{i',j})
struct PropagatorSpec {
    enum class Mode { Effective, TrueSkewShift, Deterministic };
    Mode mode = Mode::Effective;
    FrequencySequence freq; // Effective / TrueSkewShift
    int N = 0;
    int M = 0;
    std::vector<double> y, x;    // TrueSkewShift only
    const PhaseMatrix* X = nullptr; // Deterministic only

    static PropagatorSpec effective(const FrequencySequence& freq, int N, int M);
    static PropagatorSpec deterministic(const PhaseMatrix& X);
};

// (1/N^{1+k}) sum over distinct index realizations of the exploration pattern
// and Kirchhoff-admissible currents of the propagator product.
std::complex<double> phi(const ExplorationGraph& g, const PropagatorSpec& prop);

struct ReducibleLimitReport {
    std::vector<int> N_list;
    std::vector<double> phi_values;
    std::vector<double> deviations; // |phi - rho^l|
    double C = 0.0;                 // the bound constant used
};

// Asserts |phi(G) - rho^l| <= C/N for a fully reducible graph across N_list;
// throws property_violation_error naming the graph on failure.
ReducibleLimitReport phi_reducible_limit_check(const Exploration& e, const FrequencySpec& freq,
                                               double rho, const std::vector<int>& N_list);

// Sum of phi over all explorations on k edges (effective propagator); equals
// E_y[mu^(2k)] for the skew-shift model.
double moment_graph_sum(int k, const FrequencySpec& freq, double rho, int N);

struct MonteCarloMoment {
    double mean = 0.0;
    double stderr_ = 0.0;
    int samples = 0;
};

// Sample mean/stderr of mu^(2k) over independent y draws.
MonteCarloMoment moment_montecarlo(int k, const ModelConfig& config, int samples,
                                   std::uint64_t seed);

struct DeterministicIdentity {
    double lhs = 0.0; // (1/2N) Tr[H^{2k}] via singular values
    double rhs = 0.0; // graph sum, deterministic propagator, unrestricted currents
    double diff = 0.0;
};

DeterministicIdentity moment_deterministic_identity(int k, const PhaseMatrix& X);

// Exact rational over __int128 (the recursion stays well inside this range
// for k <= 30 and modest denominators).
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    Rat() = default;
    Rat(long long n) : num(n), den(1) {}
    Rat(long long n, long long d);
    void reduce();
    double to_double() const;
    std::string to_string() const;
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
};

Rat operator+(const Rat& a, const Rat& b);
Rat operator*(const Rat& a, const Rat& b);

// Integer-coefficient polynomial in rho, coefficient i belongs to rho^i.
struct Poly {
    std::vector<long long> c;

    long long coeff(std::size_t i) const { return i < c.size() ? c[i] : 0; }
    void trim();
    bool operator==(const Poly& o) const;
    std::string to_string() const;
    double eval(double rho) const;
    Rat eval(const Rat& rho) const;
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_shift(const Poly& a); // multiply by rho

// Which side of the recursion discrepancy to use. Proof: mu_k = rho mu_{k-1}
// + sum mu_{n-1} mu_{k-n}; Statement: mu_k = mu_{k-1} + sum rho mu_{n-1} mu_{k-n}.
// The enumeration oracle matches Proof; Statement is retained for comparison.
enum class RecursionForm { Proof, Statement };

struct MomentTable {
    Rat rho;
    std::vector<Rat> mu_tilde;      // mu~_0 .. mu~_kmax at rho
    std::vector<long long> catalan; // c_0 .. c_kmax
    std::vector<Poly> polys;        // mu~_k as polynomial in rho
    RecursionForm form = RecursionForm::Proof;
};

MomentTable recursion_moments(int k_max, const Rat& rho,
                              RecursionForm form = RecursionForm::Proof);

// Enumerates explorations on k edges, keeps the fully reducible ones, and
// sums rho^{|V|} symbolically. Must match the Proof-form recursion.
Poly reducible_weight_sum(int k); // k <= 7

struct MpCrosscheck {
    int k = 0;
    double mu_tilde = 0.0;       // recursion value
    double quad_moment = 0.0;    // \int t^k f(t) dt by quadrature
    double ratio_rho = 0.0;      // rho * quad_moment        (ratio-rho reading)
    double ratio_inv_rho = 0.0;  // rho^{k-1} * moment of MP with parameter 1/rho
    bool ratio_rho_matches = false;
};

// Checks the recursion against quadrature moments of the rescaled density,
// evaluating both parameter conventions; (rho x moment of f) is the one that
// matches the enumeration.
std::vector<MpCrosscheck> mp_moment_crosscheck(int k_max, double rho);

// |phi| of a non-reducible graph across N_list with a fitted log-log slope.
DecayFit subleading_decay_check(const Exploration& e, const FrequencySpec& freq,
                                const std::vector<int>& N_list, double rho);

struct ModelBFourthBound {
    int N = 0;
    int N2 = 0; // floor(8N/7)
    double sum_at_N = 0.0;
    double sum_at_N2 = 0.0;
    double max_sum = 0.0;
    double implied_lower_bound = 0.0; // 2 + max_sum
};

// The double sum (4 / pi^2 N'^3) sum_{s,r <= N'/2} (||4N' sqrt2 rs|| / ||4 sqrt2 rs||)^2
// at N' in {N, floor(8N/7)}.
ModelBFourthBound modelB_fourth_bound(int N); // N <= 4000

} // namespace skewlab
