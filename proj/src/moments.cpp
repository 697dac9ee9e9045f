#include "skewlab/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/spectra.hpp"

namespace skewlab {

PropagatorSpec PropagatorSpec::effective(const FrequencySequence& freq, int N, int M) {
    PropagatorSpec p;
    p.mode = Mode::Effective;
    p.freq = freq;
    p.N = N;
    p.M = M;
    return p;
}

PropagatorSpec PropagatorSpec::deterministic(const PhaseMatrix& X) {
    PropagatorSpec p;
    p.mode = Mode::Deterministic;
    p.X = &X;
    p.N = X.N;
    p.M = X.M;
    return p;
}

namespace {

// Set partitions of {0..l-1} as restricted-growth block labels, with the
// Moebius weight prod_blocks (-1)^{|B|-1} (|B|-1)! used to turn sums over all
// label maps into sums over injective ones.
struct Partition {
    std::vector<int> block; // block index per element, 0-based
    int blocks = 0;
    double moebius = 1.0;
};

std::vector<Partition> all_partitions(int l) {
    std::vector<Partition> out;
    std::vector<int> a(l, 0);
    std::function<void(int, int)> rec = [&](int pos, int maxb) {
        if (pos == l) {
            Partition p;
            p.block = a;
            p.blocks = maxb + 1;
            std::vector<int> size(p.blocks, 0);
            for (int x : a) ++size[x];
            double w = 1.0;
            for (int b = 0; b < p.blocks; ++b) {
                for (int m = 1; m < size[b]; ++m) w *= -double(m);
            }
            p.moebius = w;
            out.push_back(std::move(p));
            return;
        }
        for (int b = 0; b <= maxb + 1; ++b) {
            a[pos] = b;
            rec(pos + 1, std::max(maxb, b));
        }
    };
    if (l > 0) rec(1, 0), a[0] = 0;
    return out;
}

// Falling factorial M (M-1) ... (M-l+1).
double falling(double M, int l) {
    double r = 1.0;
    for (int i = 0; i < l; ++i) r *= (M - i);
    return r;
}

std::int64_t edge_weight(PropagatorSpec::Mode mode, std::int64_t j) {
    // per-edge integer weight applied to the current: j^2 (effective) or
    // j^2 - j (true skew-shift; the linear part cancels on admissible
    // currents, making the two modes agree).
    return mode == PropagatorSpec::Mode::TrueSkewShift ? j * j - j : j * j;
}

} // namespace

std::complex<double> phi(const ExplorationGraph& g, const PropagatorSpec& prop) {
    const int k = g.k();
    const int l = g.l;
    const int N = prop.N;
    const int M = prop.M;
    if (M < l) return 0.0; // no injective index assignment exists

    // Self-loop edges factor out: propagator 1, current free over {1..N}.
    Exploration core_expl;
    std::vector<int> core_edges; // indices of non-loop edges
    for (int e = 0; e < k; ++e)
        if (g.edges[e].first != g.edges[e].second) core_edges.push_back(e);
    const int loops = k - static_cast<int>(core_edges.size());

    ExplorationGraph core;
    core.l = l;
    for (int e : core_edges) core.edges.push_back(g.edges[e]);

    const auto partitions = all_partitions(l);

    std::complex<double> acc = 0.0;

    if (prop.mode == PropagatorSpec::Mode::Deterministic) {
        if (prop.X == nullptr) throw std::invalid_argument("phi: deterministic mode needs X");
        const PhaseMatrix& X = *prop.X;
        const double sqrtN = std::sqrt(double(N));
        auto body = [&](const std::vector<int>& jcore) {
            // g_v(i) = prod over core edges touching v of sqrt(N) X / conj
            std::vector<std::vector<std::complex<double>>> gv(
                l, std::vector<std::complex<double>>(M, 1.0));
            for (std::size_t r = 0; r < core.edges.size(); ++r) {
                int tail = core.edges[r].first - 1, head = core.edges[r].second - 1;
                int j = jcore[r];
                for (int i = 0; i < M; ++i) {
                    gv[tail][i] *= sqrtN * X.at(i, j - 1);
                    gv[head][i] *= sqrtN * std::conj(X.at(i, j - 1));
                }
            }
            std::complex<double> here = 0.0;
            for (const auto& p : partitions) {
                std::complex<double> term = p.moebius;
                for (int b = 0; b < p.blocks; ++b) {
                    std::complex<double> s = 0.0;
                    for (int i = 0; i < M; ++i) {
                        std::complex<double> prod = 1.0;
                        for (int v = 0; v < l; ++v)
                            if (p.block[v] == b) prod *= gv[v][i];
                        s += prod;
                    }
                    term *= s;
                }
                here += term;
            }
            acc += here;
        };
        if (core.edges.empty()) {
            std::vector<int> empty;
            body(empty);
        } else {
            for_each_admissible_current(core, N, body);
        }
    } else {
        // Phase-based propagators: the product over edges collapses to
        // e[ sum_v w_{i(v)} c_v(j) ] with integer 2 c_v; block sums
        // S(key) = sum_i e[w_i key / 2] are cached by key.
        std::vector<DD> half_omega(M);
        for (int i = 0; i < M; ++i) half_omega[i] = dd::mul_pow2(prop.freq.values[i], 0.5);
        std::unordered_map<long long, std::complex<double>> cache;
        auto block_sum = [&](long long key) {
            auto it = cache.find(key);
            if (it != cache.end()) return it->second;
            std::complex<double> s = 0.0;
            if (key == 0) {
                s = double(M);
            } else {
                std::uint64_t mag = std::uint64_t(key < 0 ? -key : key);
                for (int i = 0; i < M; ++i) {
                    std::complex<double> z = unit_phase(phase_frac(mag, half_omega[i]));
                    s += (key < 0) ? std::conj(z) : z;
                }
            }
            cache.emplace(key, s);
            return s;
        };

        std::vector<long long> c2(l, 0);
        auto body = [&](const std::vector<int>& jcore) {
            std::fill(c2.begin(), c2.end(), 0);
            for (std::size_t r = 0; r < core.edges.size(); ++r) {
                std::int64_t w = edge_weight(prop.mode, jcore[r]);
                c2[core.edges[r].first - 1] += w;  // tail carries +w_i
                c2[core.edges[r].second - 1] -= w; // head carries -w_i'
            }
            std::complex<double> here = 0.0;
            for (const auto& p : partitions) {
                std::complex<double> term = p.moebius;
                for (int b = 0; b < p.blocks; ++b) {
                    long long key = 0;
                    for (int v = 0; v < l; ++v)
                        if (p.block[v] == b) key += c2[v];
                    term *= block_sum(key);
                }
                here += term;
            }
            acc += here;
        };
        if (core.edges.empty()) {
            std::vector<int> empty;
            body(empty);
        } else {
            for_each_admissible_current(core, N, body);
        }
    }

    return acc * std::pow(double(N), loops) / std::pow(double(N), k + 1);
}

ReducibleLimitReport phi_reducible_limit_check(const Exploration& e, const FrequencySpec& freq,
                                               double rho, const std::vector<int>& N_list) {
    ExplorationGraph g = exploration_graph(e);
    if (!is_fully_reducible(to_multigraph(g)))
        throw std::invalid_argument("phi_reducible_limit_check: graph is not fully reducible");
    ReducibleLimitReport rep;
    rep.N_list = N_list;
    rep.C = std::max(5.0, 2.0 * e.k) * std::pow(std::max(1.0, rho), e.l);
    for (int N : N_list) {
        int M = static_cast<int>(std::floor(rho * N));
        FrequencySequence fs = make_frequencies(freq, M, N);
        std::complex<double> p = phi(g, PropagatorSpec::effective(fs, N, M));
        double dev = std::fabs(p.real() - std::pow(rho, e.l)) + std::fabs(p.imag());
        rep.phi_values.push_back(p.real());
        rep.deviations.push_back(dev);
        if (dev > rep.C / N) {
            std::ostringstream os;
            os << "phi_reducible_limit_check: graph nu=(";
            for (std::size_t i = 0; i < e.nu.size(); ++i) os << (i ? "," : "") << e.nu[i];
            os << ") freq=" << freq.to_string() << " N=" << N << ": |phi - rho^l| = " << dev
               << " > " << rep.C / N;
            throw property_violation_error(os.str());
        }
    }
    return rep;
}

double moment_graph_sum(int k, const FrequencySpec& freq, double rho, int N) {
    int M = static_cast<int>(std::floor(rho * N));
    FrequencySequence fs = make_frequencies(freq, M, N);
    PropagatorSpec prop = PropagatorSpec::effective(fs, N, M);
    std::complex<double> total = 0.0;
    for (const auto& e : enumerate_explorations(k)) total += phi(exploration_graph(e), prop);
    if (std::fabs(total.imag()) > 1e-9 * std::max(1.0, std::fabs(total.real())))
        throw numeric_error("moment_graph_sum: imaginary part did not cancel");
    return total.real();
}

MonteCarloMoment moment_montecarlo(int k, const ModelConfig& config, int samples,
                                   std::uint64_t seed) {
    if (samples < 1) throw std::domain_error("moment_montecarlo: samples must be >= 1");
    CounterRng derive(seed);
    std::vector<double> vals;
    vals.reserve(samples);
    for (int s = 0; s < samples; ++s) {
        ModelConfig cfg = config;
        cfg.linear = LinearTerm::RandomY;
        cfg.y_seed = derive.bits(std::uint64_t(s));
        PhaseMatrix X = build_matrix(cfg);
        // mu^(2k) = (1/N) Tr[G^k] with G the M x M Gram matrix
        auto G = gram_matrix(X.entries, X.M, X.N);
        const int M = X.M;
        std::vector<std::complex<double>> P = G;
        for (int power = 1; power < k; ++power) {
            std::vector<std::complex<double>> Q(std::size_t(M) * M, 0.0);
            for (int i = 0; i < M; ++i)
                for (int t = 0; t < M; ++t) {
                    std::complex<double> a = P[std::size_t(i) * M + t];
                    if (a == std::complex<double>(0.0)) continue;
                    for (int j = 0; j < M; ++j) Q[std::size_t(i) * M + j] += a * G[std::size_t(t) * M + j];
                }
            P.swap(Q);
        }
        std::complex<double> tr = 0.0;
        for (int i = 0; i < M; ++i) tr += P[std::size_t(i) * M + i];
        vals.push_back(tr.real() / double(X.N));
    }
    MonteCarloMoment out;
    out.samples = samples;
    for (double v : vals) out.mean += v;
    out.mean /= samples;
    double var = 0.0;
    for (double v : vals) var += (v - out.mean) * (v - out.mean);
    out.stderr_ = samples > 1 ? std::sqrt(var / (samples - 1.0) / samples) : 0.0;
    return out;
}

DeterministicIdentity moment_deterministic_identity(int k, const PhaseMatrix& X) {
    if (X.M != X.N)
        throw std::domain_error("moment_deterministic_identity: requires M = N");
    double cost = std::pow(double(X.M) * double(X.N), k);
    if (cost > 1e7) throw size_error("moment_deterministic_identity: (MN)^k exceeds 1e7");

    DeterministicIdentity out;
    out.lhs = trace_moments(singular_values(X), X.N, k).back();

    // Unrestricted currents factor per edge: sum_j K_(a,b)(j) = N G_{a,b}.
    auto G = gram_matrix(X.entries, X.M, X.N);
    const int M = X.M;
    double rhs_acc_re = 0.0;
    for (const auto& expl : enumerate_explorations(k)) {
        ExplorationGraph g = exploration_graph(expl);
        // sum over injective assignments of {1..l} -> {0..M-1}
        std::vector<int> assign(expl.l, -1);
        std::vector<char> used(M, 0);
        std::complex<double> sum = 0.0;
        std::function<void(int)> rec = [&](int v) {
            if (v == expl.l) {
                std::complex<double> prod = 1.0;
                for (const auto& [a, b] : g.edges)
                    prod *= G[std::size_t(assign[a - 1]) * M + assign[b - 1]];
                sum += prod;
                return;
            }
            for (int i = 0; i < M; ++i) {
                if (used[i]) continue;
                used[i] = 1;
                assign[v] = i;
                rec(v + 1);
                used[i] = 0;
            }
        };
        rec(0);
        rhs_acc_re += sum.real();
    }
    out.rhs = rhs_acc_re / double(X.N);
    out.diff = std::fabs(out.lhs - out.rhs);
    return out;
}

// ---------------------------------------------------------------------------
// Exact recursion
// ---------------------------------------------------------------------------

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::string int128_str(__int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    if (neg) v = -v;
    std::string s;
    while (v > 0) {
        s += char('0' + int(v % 10));
        v /= 10;
    }
    if (neg) s += '-';
    std::reverse(s.begin(), s.end());
    return s;
}

} // namespace

Rat::Rat(long long n, long long d) : num(n), den(d) {
    if (d == 0) throw std::domain_error("Rat: zero denominator");
    reduce();
}

void Rat::reduce() {
    if (den < 0) {
        den = -den;
        num = -num;
    }
    __int128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

double Rat::to_double() const { return double(num) / double(den); }

std::string Rat::to_string() const {
    if (den == 1) return int128_str(num);
    return int128_str(num) + "/" + int128_str(den);
}

Rat operator+(const Rat& a, const Rat& b) {
    Rat r;
    r.num = a.num * b.den + b.num * a.den;
    r.den = a.den * b.den;
    r.reduce();
    return r;
}

Rat operator*(const Rat& a, const Rat& b) {
    Rat r;
    r.num = a.num * b.num;
    r.den = a.den * b.den;
    r.reduce();
    return r;
}

void Poly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

bool Poly::operator==(const Poly& o) const {
    std::size_t n = std::max(c.size(), o.c.size());
    for (std::size_t i = 0; i < n; ++i)
        if (coeff(i) != o.coeff(i)) return false;
    return true;
}

std::string Poly::to_string() const {
    std::ostringstream os;
    bool any = false;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (any) os << " + ";
        if (c[i] != 1 || i == 0) os << c[i];
        if (i >= 1) {
            if (c[i] != 1) os << "*";
            os << "rho";
            if (i > 1) os << "^" << i;
        }
        any = true;
    }
    if (!any) os << "0";
    return os.str();
}

double Poly::eval(double rho) const {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * rho + double(c[i]);
    return r;
}

Rat Poly::eval(const Rat& rho) const {
    Rat r(0);
    for (std::size_t i = c.size(); i-- > 0;) r = r * rho + Rat(c[i]);
    return r;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.coeff(i) + b.coeff(i);
    r.trim();
    return r;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
}

Poly poly_shift(const Poly& a) {
    Poly r;
    if (a.c.empty()) return r;
    r.c.assign(a.c.size() + 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i + 1] = a.c[i];
    return r;
}

MomentTable recursion_moments(int k_max, const Rat& rho, RecursionForm form) {
    if (k_max < 0 || k_max > 30) throw size_error("recursion_moments: k_max must be in 0..30");
    MomentTable t;
    t.rho = rho;
    t.form = form;

    t.polys.resize(k_max + 1);
    t.polys[0].c = {1}; // mu~_0 = 1
    if (k_max >= 1) t.polys[1].c = {0, 1}; // mu~_1 = rho
    for (int k = 2; k <= k_max; ++k) {
        Poly sum;
        for (int n = 2; n <= k; ++n)
            sum = poly_add(sum, poly_mul(t.polys[n - 1], t.polys[k - n]));
        if (form == RecursionForm::Proof)
            t.polys[k] = poly_add(poly_shift(t.polys[k - 1]), sum);
        else
            t.polys[k] = poly_add(t.polys[k - 1], poly_shift(sum));
    }

    t.mu_tilde.reserve(k_max + 1);
    for (int k = 0; k <= k_max; ++k) t.mu_tilde.push_back(t.polys[k].eval(rho));

    t.catalan.resize(k_max + 1);
    t.catalan[0] = 1;
    for (int k = 1; k <= k_max; ++k)
        t.catalan[k] = t.catalan[k - 1] * 2 * (2 * k - 1) / (k + 1);
    return t;
}

Poly reducible_weight_sum(int k) {
    if (k < 1 || k > 7) throw size_error("reducible_weight_sum: k must be in 1..7");
    Poly sum;
    for (const auto& e : enumerate_explorations(k)) {
        if (!is_fully_reducible(to_multigraph(exploration_graph(e)))) continue;
        Poly term;
        term.c.assign(e.l + 1, 0);
        term.c[e.l] = 1; // rho^{|V|}
        sum = poly_add(sum, term);
    }
    return sum;
}

// ---------------------------------------------------------------------------
// Marchenko-Pastur cross-check
// ---------------------------------------------------------------------------

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

// \int t^k f dt where f(t) = sqrt((b-t)(t-a)) / (2 pi lambda t) on [a,b] with
// a,b = (1 -+ sqrt(lambda))^2. The substitution t = m + h sin(theta) removes
// the square-root endpoints: integrand -> h^2 cos^2(theta) t^{k-1} / (2 pi lambda).
double mp_power_moment(int k, double lambda) {
    double s = std::sqrt(lambda);
    double a = (1.0 - s) * (1.0 - s), b = (1.0 + s) * (1.0 + s);
    double m = 0.5 * (a + b), h = 0.5 * (b - a);
    static std::vector<double> gx, gw;
    if (gx.empty()) gauss_legendre(240, gx, gw);
    double acc = 0.0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
        double theta = 0.5 * M_PI * gx[i];
        double t = m + h * std::sin(theta);
        double c = std::cos(theta);
        acc += gw[i] * c * c * std::pow(t, k - 1);
    }
    acc *= 0.5 * M_PI; // theta-interval scaling
    return acc * h * h / (2.0 * M_PI * lambda);
}

} // namespace

std::vector<MpCrosscheck> mp_moment_crosscheck(int k_max, double rho) {
    if (!(rho > 0.0)) throw std::domain_error("mp_moment_crosscheck: rho must be positive");
    if (k_max < 1 || k_max > 8) throw size_error("mp_moment_crosscheck: k_max must be in 1..8");
    // exact recursion values at a double rho: evaluate the polynomials
    MomentTable t = recursion_moments(k_max, Rat(1), RecursionForm::Proof);
    std::vector<MpCrosscheck> out;
    for (int k = 1; k <= k_max; ++k) {
        MpCrosscheck c;
        c.k = k;
        c.mu_tilde = t.polys[k].eval(rho);
        c.quad_moment = mp_power_moment(k, rho);
        c.ratio_rho = rho * c.quad_moment;
        c.ratio_inv_rho = std::pow(rho, k - 1) * mp_power_moment(k, 1.0 / rho);
        c.ratio_rho_matches =
            std::fabs(c.ratio_rho - c.mu_tilde) <= 1e-6 * std::max(1.0, std::fabs(c.mu_tilde));
        if (!c.ratio_rho_matches)
            throw numeric_error("mp_moment_crosscheck: rho-convention moment " +
                                std::to_string(c.ratio_rho) + " does not match recursion " +
                                std::to_string(c.mu_tilde) + " at k=" + std::to_string(k));
        out.push_back(c);
    }
    return out;
}

DecayFit subleading_decay_check(const Exploration& e, const FrequencySpec& freq,
                                const std::vector<int>& N_list, double rho) {
    ExplorationGraph g = exploration_graph(e);
    std::vector<double> values;
    for (int N : N_list) {
        int M = static_cast<int>(std::floor(rho * N));
        FrequencySequence fs = make_frequencies(freq, M, N);
        values.push_back(std::abs(phi(g, PropagatorSpec::effective(fs, N, M))));
    }
    return fit_loglog(N_list, values);
}

ModelBFourthBound modelB_fourth_bound(int N) {
    if (N < 2 || N > 4000) throw size_error("modelB_fourth_bound: N must be in 2..4000");
    DD sqrt2 = dd::sqrt(DD(2.0));
    auto lemma_sum = [&](int Np) {
        int half = Np / 2;
        double acc = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : acc)
        for (int s = 1; s <= half; ++s) {
            double local = 0.0;
            for (int r = 1; r <= half; ++r) {
                std::uint64_t rs4 = 4ULL * std::uint64_t(r) * std::uint64_t(s);
                double f1 = phase_frac(rs4, sqrt2);
                double d1 = std::min(f1, 1.0 - f1);
                double f2 = phase_frac(rs4 * std::uint64_t(Np), sqrt2);
                double d2 = std::min(f2, 1.0 - f2);
                if (d1 < 1e-18) continue;
                double q = d2 / d1;
                local += q * q;
            }
            acc += local;
        }
        return 4.0 / (M_PI * M_PI * std::pow(double(Np), 3)) * acc;
    };
    ModelBFourthBound out;
    out.N = N;
    out.N2 = (8 * N) / 7;
    out.sum_at_N = lemma_sum(N);
    out.sum_at_N2 = lemma_sum(out.N2);
    out.max_sum = std::max(out.sum_at_N, out.sum_at_N2);
    out.implied_lower_bound = 2.0 + out.max_sum;
    return out;
}

} // namespace skewlab
