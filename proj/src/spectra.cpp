#include "skewlab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skewlab/errors.hpp"

// Fortran BLAS/LAPACK entry points (column-major).
extern "C" {
void zherk_(const char* uplo, const char* trans, const int* n, const int* k, const double* alpha,
            const std::complex<double>* a, const int* lda, const double* beta,
            std::complex<double>* c, const int* ldc);
void zheev_(const char* jobz, const char* uplo, const int* n, std::complex<double>* a,
            const int* lda, double* w, std::complex<double>* work, const int* lwork, double* rwork,
            int* info);
}

namespace skewlab {

namespace {

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

std::vector<double> hermitian_eigenvalues(std::vector<std::complex<double>>& a, int n) {
    std::vector<double> w(n);
    int info = 0;
    int lwork = -1;
    std::complex<double> wkopt;
    std::vector<double> rwork(std::max(1, 3 * n - 2));
    zheev_("N", "L", &n, a.data(), &n, w.data(), &wkopt, &lwork, rwork.data(), &info);
    lwork = static_cast<int>(wkopt.real());
    std::vector<std::complex<double>> work(lwork);
    zheev_("N", "L", &n, a.data(), &n, w.data(), work.data(), &lwork, rwork.data(), &info);
    if (info != 0) throw numeric_error("zheev failed with info=" + std::to_string(info));
    return w;
}

} // namespace

std::vector<std::complex<double>> gram_matrix(const std::vector<std::complex<double>>& entries,
                                              int M, int N) {
    // The row-major M x N buffer is A = X^T in column-major (N x M).
    // zherk with trans='C' forms A^H A = conj(G); Hermitian, same spectrum
    // as G = XX^*, and we also return it as the (row-major) Gram matrix.
    std::vector<std::complex<double>> g(std::size_t(M) * M);
    const double one = 1.0, zero = 0.0;
    zherk_("L", "C", &M, &N, &one, entries.data(), &N, &zero, g.data(), &M);
    // Mirror the filled triangle so callers can read any element.
    for (int c = 0; c < M; ++c)
        for (int r = 0; r < c; ++r) g[std::size_t(c) * M + r] = std::conj(g[std::size_t(r) * M + c]);
    return g;
}

std::vector<double> singular_values(const std::vector<std::complex<double>>& entries, int M,
                                    int N) {
    for (const auto& z : entries)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw numeric_error("singular_values: non-finite matrix entry");
    std::vector<std::complex<double>> g;
    int n = 0;
    if (M <= N) {
        g = gram_matrix(entries, M, N);
        n = M;
    } else {
        // X*X is the Gram of the conjugate transpose; build it directly.
        std::vector<std::complex<double>> xt(std::size_t(N) * M);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < N; ++j)
                xt[std::size_t(j) * M + i] = std::conj(entries[std::size_t(i) * N + j]);
        g = gram_matrix(xt, N, M);
        n = N;
    }
    std::vector<double> w = hermitian_eigenvalues(g, n);
    std::vector<double> sigma(n);
    for (int i = 0; i < n; ++i) sigma[i] = std::sqrt(std::max(0.0, w[n - 1 - i]));
    return sigma; // descending
}

std::vector<double> singular_values(const PhaseMatrix& X) {
    return singular_values(X.entries, X.M, X.N);
}

std::vector<double> eigenvalues_H(const std::vector<double>& sigma, int M, int N) {
    std::vector<double> eigs;
    eigs.reserve(std::size_t(M) + N);
    for (double s : sigma) eigs.push_back(-s);
    int zeros = M + N - 2 * static_cast<int>(sigma.size());
    for (int i = 0; i < zeros; ++i) eigs.push_back(0.0);
    for (double s : sigma) eigs.push_back(s);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
}

std::vector<double> trace_moments(const std::vector<double>& sigma, int N, int k_max) {
    if (k_max < 1) throw std::domain_error("trace_moments: k_max must be >= 1");
    double smax = sigma.empty() ? 0.0 : sigma.front();
    if (smax > 0.0 && 2.0 * k_max * std::log(smax) > 690.0)
        throw std::range_error("trace_moments: sigma^{2k} overflows double range");
    std::vector<double> mu(k_max);
    for (int k = 1; k <= k_max; ++k) {
        CompSum acc; // sigma is descending, so terms are added large-to-small
        for (double s : sigma) acc.add(std::pow(s, 2 * k));
        mu[k - 1] = acc.value() / double(N);
    }
    return mu;
}

double semicircle_density(double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * M_PI);
}

double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * M_PI) + std::asin(0.5 * x) / M_PI;
}

void mp_support(double rho, double& lo, double& hi) {
    if (!(rho > 0.0)) throw std::domain_error("mp_density: rho must be positive");
    double s = std::sqrt(rho);
    lo = (1.0 - s) * (1.0 - s);
    hi = (1.0 + s) * (1.0 + s);
}

double mp_density(double t, double rho) {
    double lo, hi;
    mp_support(rho, lo, hi);
    if (t <= lo || t >= hi) return 0.0;
    return std::sqrt((hi - t) * (t - lo)) / (2.0 * M_PI * rho * t);
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::domain_error("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = double(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::fabs(f - double(i + 1) / n));
        d = std::max(d, std::fabs(f - double(i) / n));
    }
    return d;
}

double wigner_surmise(double s) {
    if (s < 0.0) throw std::domain_error("wigner_surmise: s must be >= 0");
    return 32.0 / (M_PI * M_PI) * s * s * std::exp(-4.0 * s * s / M_PI);
}

double wigner_surmise_cdf(double s) {
    if (s <= 0.0) return 0.0;
    return std::erf(2.0 * s / std::sqrt(M_PI)) - (4.0 * s / M_PI) * std::exp(-4.0 * s * s / M_PI);
}

SpacingSample level_spacing(const std::vector<double>& eigs, double E, double t, int N) {
    if (!(E > -2.0 && E < 2.0)) throw std::domain_error("level_spacing: E must be in (-2,2)");
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("level_spacing: t must be in (0,1)");
    std::vector<double> sorted(eigs);
    std::sort(sorted.begin(), sorted.end());
    const double rho_sc = semicircle_density(E);

    SpacingSample out;
    out.E = E;
    out.t = t;
    for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
        if (std::fabs(sorted[j] - E) <= t)
            out.s_values.push_back(2.0 * N * rho_sc * (sorted[j + 1] - sorted[j]));
    }
    if (out.s_values.empty())
        throw empty_window_error("level_spacing: no eigenvalues within " + std::to_string(t) +
                                 " of E=" + std::to_string(E));

    std::vector<double> s_sorted(out.s_values);
    std::sort(s_sorted.begin(), s_sorted.end());
    const double prefactor = 1.0 / (4.0 * N * t * rho_sc);
    const double s_max = std::max(4.0, s_sorted.back());
    const int grid = 200;
    std::size_t idx = 0;
    for (int g = 0; g <= grid; ++g) {
        double s = s_max * g / grid;
        while (idx < s_sorted.size() && s_sorted[idx] <= s) ++idx;
        out.lambda_cdf.emplace_back(s, prefactor * double(idx));
    }
    return out;
}

std::vector<double> Histogram::densities(std::int64_t total_points) const {
    std::vector<double> d(counts.size(), 0.0);
    for (std::size_t b = 0; b < counts.size(); ++b) {
        double width = bin_edges[b + 1] - bin_edges[b];
        d[b] = double(counts[b]) / (double(total_points) * width);
    }
    return d;
}

Histogram make_histogram(const std::vector<double>& data, int bins, double lo, double hi) {
    if (bins < 1 || !(hi > lo)) throw std::domain_error("make_histogram: bad bin layout");
    Histogram h;
    h.normalization = HistNorm::Density;
    h.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.bin_edges[b] = lo + (hi - lo) * b / bins;
    h.counts.assign(bins, 0);
    const double inv_width = bins / (hi - lo);
    for (double x : data) {
        if (x < lo || x > hi) continue;
        int b = std::min(bins - 1, static_cast<int>((x - lo) * inv_width));
        ++h.counts[b];
    }
    return h;
}

Histogram make_histogram(const std::vector<double>& data, int bins) {
    if (data.empty()) throw std::domain_error("make_histogram: empty data");
    auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    double eps = std::max(1e-12, (*mx - *mn) * 1e-6);
    return make_histogram(data, bins, *mn - eps, *mx + eps);
}

SpectralSummary spectral_summary(const PhaseMatrix& X, int k_max) {
    SpectralSummary s;
    s.config = X.config;
    s.sigma = singular_values(X);
    s.eigs = eigenvalues_H(s.sigma, X.M, X.N);
    s.moments = trace_moments(s.sigma, X.N, k_max);
    return s;
}

} // namespace skewlab
