#include "skewlab/expsum.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "skewlab/errors.hpp"
#include "skewlab/model.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int m_of(double rho, int N) {
    int M = static_cast<int>(std::floor(rho * N));
    if (M < 1) throw std::domain_error("rho*N must be >= 1");
    return M;
}

// Neumaier compensated sum.
struct CompSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

constexpr double k_theta_int_tol = 1e-13; // switch to the L^2 branch near integers

// |sum_{a=a0}^{a0+L-1} e[a theta]|^2 with frac(theta) and frac(L theta) given.
double geom_square(double frac_theta, double frac_Ltheta, double L) {
    double dist = std::min(frac_theta, 1.0 - frac_theta);
    if (dist < k_theta_int_tol) return L * L;
    double sn = std::sin(M_PI * frac_theta);
    double sl = std::sin(M_PI * frac_Ltheta);
    return (sl * sl) / (sn * sn);
}

// sum over t=1-N..N-1 of |geometric sum|^2 for theta = delta * t.
// Uses the t <-> -t symmetry; the t=0 term is N^2.
double pair_completed_square(const DD& delta, int N) {
    CompSum acc;
    acc.add(double(N) * double(N));
    for (int t = 1; t <= N - 1; ++t) {
        std::uint64_t L = std::uint64_t(N - t);
        double f = phase_frac(std::uint64_t(t), delta);
        double g = phase_frac(L * std::uint64_t(t), delta);
        acc.add(2.0 * geom_square(f, g, double(L)));
    }
    return acc.value();
}

// Per-term geometric-series bound min{L^2, 1/(4 ||theta||^2)}; both branches
// dominate |sum_a e[a theta]|^2 pointwise, so the total dominates ES_N.
double pair_geometric_bound(const DD& delta, int N) {
    double acc = double(N) * double(N); // t = 0: theta = 0, term = L^2 = N^2
    for (int t = 1; t <= N - 1; ++t) {
        double L = double(N - t);
        double f = phase_frac(std::uint64_t(t), delta);
        double dist = std::min(f, 1.0 - f);
        double term = L * L;
        if (dist > 0.0) term = std::min(term, 1.0 / (4.0 * dist * dist));
        acc += 2.0 * term;
    }
    return acc;
}

// Number of constrained quadruples with all phases zero: sum_t (N-|t|)^2.
double diagonal_count(int N) {
    double n = double(N);
    return (2.0 * n * n * n + n) / 3.0;
}

} // namespace

ESResult es_bruteforce(const FrequencySequence& freq, int N, double rho) {
    auto t0 = clock_type::now();
    if (N > 128) throw size_error("es_bruteforce: N capped at 128 (O(M^2 N^3))");
    const int M = m_of(rho, N);
    if (M > freq.M) throw std::domain_error("es_bruteforce: frequency sequence shorter than M");

    // c = j1^2 - j2^2 + j3^2 - j4^2 ranges over even integers in [-2N^2+2, 2N^2-2].
    const int cmax = 2 * N * N;
    std::vector<std::complex<double>> table(2 * cmax + 1);
    std::complex<double> total = 0.0;
    for (int i1 = 0; i1 < M; ++i1) {
        for (int i2 = 0; i2 < M; ++i2) {
            DD half_delta = dd::mul_pow2(dd::sub(freq.values[i1], freq.values[i2]), 0.5);
            for (int c = 0; c <= cmax; c += 2) {
                double f = phase_frac(std::uint64_t(c), half_delta);
                std::complex<double> z = unit_phase(f);
                table[cmax + c] = z;
                table[cmax - c] = std::conj(z);
            }
            std::complex<double> pair = 0.0;
            for (int j1 = 1; j1 <= N; ++j1) {
                for (int j2 = 1; j2 <= N; ++j2) {
                    for (int j3 = 1; j3 <= N; ++j3) {
                        int j4 = j1 + j3 - j2;
                        if (j4 < 1 || j4 > N) continue;
                        int c = j1 * j1 - j2 * j2 + j3 * j3 - j4 * j4;
                        pair += table[cmax + c];
                    }
                }
            }
            total += pair;
        }
    }
    double n5 = std::pow(double(N), 5);
    std::complex<double> es = total / n5;
    if (std::fabs(es.imag()) > 1e-9)
        throw numeric_error("es_bruteforce: imaginary part " + std::to_string(es.imag()) +
                            " did not cancel");
    ESResult r;
    r.N = N;
    r.M = M;
    r.value = es.real();
    r.method = ESMethod::BruteForce;
    r.seconds = elapsed(t0);
    return r;
}

ESResult es_completed_square_generic(const FrequencySequence& freq, int N, double rho) {
    auto t0 = clock_type::now();
    const int M = m_of(rho, N);
    if (M > freq.M) throw std::domain_error("es_completed_square: frequency sequence shorter than M");

    std::vector<double> partial(M, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i1 = 1; i1 < M; ++i1) {
        double acc = 0.0;
        for (int i2 = 0; i2 < i1; ++i2) {
            DD delta = dd::sub(freq.values[i1], freq.values[i2]);
            acc += pair_completed_square(delta, N);
        }
        partial[i1] = acc;
    }
    CompSum sum;
    sum.add(M * diagonal_count(N));
    for (int i1 = 1; i1 < M; ++i1) sum.add(2.0 * partial[i1]);

    ESResult r;
    r.N = N;
    r.M = M;
    r.value = sum.value() / std::pow(double(N), 5);
    r.method = ESMethod::CompletedSquare;
    r.seconds = elapsed(t0);
    return r;
}

ESResult es_completed_square(const FrequencySequence& freq, int N, double rho) {
    // For ialpha / constant frequencies the pair term depends on i1-i2 only,
    // collapsing the M^2 pair loop to M-1 differences.
    if (freq.spec.kind != FreqKind::IAlpha && freq.spec.kind != FreqKind::Constant)
        return es_completed_square_generic(freq, N, rho);

    auto t0 = clock_type::now();
    const int M = m_of(rho, N);
    if (M > freq.M) throw std::domain_error("es_completed_square: frequency sequence shorter than M");

    std::vector<double> per_diff(M, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int rdiff = 1; rdiff < M; ++rdiff) {
        DD delta = dd::sub(freq.values[rdiff], freq.values[0]); // = rdiff * alpha (or 0)
        per_diff[rdiff] = pair_completed_square(delta, N);
    }
    CompSum sum;
    sum.add(M * diagonal_count(N));
    for (int rdiff = 1; rdiff < M; ++rdiff) sum.add(2.0 * (M - rdiff) * per_diff[rdiff]);

    ESResult r;
    r.N = N;
    r.M = M;
    r.value = sum.value() / std::pow(double(N), 5);
    r.method = ESMethod::CompletedSquare;
    r.seconds = elapsed(t0);
    return r;
}

ESResult es_geometric_bound(const FrequencySequence& freq, int N, double rho) {
    auto t0 = clock_type::now();
    const int M = m_of(rho, N);
    if (M > freq.M) throw std::domain_error("es_geometric_bound: frequency sequence shorter than M");

    const bool difference_structure =
        freq.spec.kind == FreqKind::IAlpha || freq.spec.kind == FreqKind::Constant;
    CompSum sum;
    sum.add(M * diagonal_count(N)); // diagonal pairs: every t takes the L^2 branch
    if (difference_structure) {
        std::vector<double> per_diff(M, 0.0);
#pragma omp parallel for schedule(dynamic)
        for (int rdiff = 1; rdiff < M; ++rdiff) {
            DD delta = dd::sub(freq.values[rdiff], freq.values[0]);
            per_diff[rdiff] = pair_geometric_bound(delta, N);
        }
        for (int rdiff = 1; rdiff < M; ++rdiff) sum.add(2.0 * (M - rdiff) * per_diff[rdiff]);
    } else {
        std::vector<double> partial(M, 0.0);
#pragma omp parallel for schedule(dynamic)
        for (int i1 = 1; i1 < M; ++i1) {
            double acc = 0.0;
            for (int i2 = 0; i2 < i1; ++i2)
                acc += pair_geometric_bound(dd::sub(freq.values[i1], freq.values[i2]), N);
            partial[i1] = acc;
        }
        for (int i1 = 1; i1 < M; ++i1) sum.add(2.0 * partial[i1]);
    }

    ESResult r;
    r.N = N;
    r.M = M;
    r.value = sum.value() / std::pow(double(N), 5);
    r.bound = r.value;
    r.method = ESMethod::GeometricBound;
    r.seconds = elapsed(t0);
    return r;
}

DecayFit fit_loglog(const std::vector<int>& N_list, const std::vector<double>& values) {
    if (N_list.size() < 3) throw std::domain_error("fit_decay: need at least 3 values of N");
    if (N_list.size() != values.size()) throw std::domain_error("fit_decay: length mismatch");
    DecayFit fit;
    fit.N_list = N_list;
    fit.es_values = values;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = double(N_list.size());
    for (std::size_t i = 0; i < N_list.size(); ++i) {
        if (!(values[i] > 0.0))
            throw numeric_error("fit_decay: non-positive ES value at N=" +
                                std::to_string(N_list[i]));
        double x = std::log(double(N_list[i]));
        double y = std::log(values[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    }
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    double ss_tot = syy - sy * sy / n;
    double ss_res = ss_tot - fit.slope * fit.slope * denom / n;
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

DecayFit fit_decay(const FrequencySpec& kind, const std::vector<int>& N_list, double rho) {
    std::vector<double> values;
    values.reserve(N_list.size());
    for (int N : N_list) {
        FrequencySequence freq = make_frequencies(kind, m_of(rho, N), N);
        values.push_back(es_completed_square(freq, N, rho).value);
    }
    return fit_loglog(N_list, values);
}

std::int64_t diophantine_count(int N) {
    if (N < 1) throw std::domain_error("diophantine_count: N must be >= 1");
    std::int64_t formula = 2LL * N * N - N;
    if (N <= 40) {
        std::int64_t count = 0;
        for (int j1 = 1; j1 <= N; ++j1)
            for (int j2 = 1; j2 <= N; ++j2)
                for (int j3 = 1; j3 <= N; ++j3) {
                    int j4 = j1 + j3 - j2;
                    if (j4 < 1 || j4 > N) continue;
                    if (j1 * j1 + j3 * j3 == j2 * j2 + j4 * j4) ++count;
                }
        if (count != formula)
            throw property_violation_error("diophantine_count: exhaustive search gave " +
                                           std::to_string(count) + ", formula gives " +
                                           std::to_string(formula));
    }
    return formula;
}

MeanESResult random_freq_mean(int N, double rho, int samples, std::uint64_t seed) {
    if (samples < 1) throw std::domain_error("random_freq_mean: samples must be >= 1");
    const int M = m_of(rho, N);
    MeanESResult out;
    out.samples.reserve(samples);
    CounterRng rng(seed);
    for (int s = 0; s < samples; ++s) {
        FrequencySequence freq;
        freq.spec.kind = FreqKind::Random;
        freq.spec.seed = seed;
        freq.M = M;
        freq.values.reserve(M);
        for (int i = 0; i < M; ++i)
            freq.values.push_back(DD(2.0 * rng.uniform01(std::uint64_t(s) * M + i)));
        out.samples.push_back(es_completed_square_generic(freq, N, rho).value);
    }
    double mean = 0.0;
    for (double v : out.samples) mean += v;
    mean /= samples;
    double var = 0.0;
    for (double v : out.samples) var += (v - mean) * (v - mean);
    out.mean = mean;
    out.stderr_ = samples > 1 ? std::sqrt(var / (samples - 1.0) / samples) : 0.0;
    return out;
}

} // namespace skewlab
