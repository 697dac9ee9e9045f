#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "skewlab/errors.hpp"
#include "skewlab/expsum.hpp"
#include "skewlab/rng.hpp"

using namespace skewlab;

namespace {

FrequencySequence random_freq(int M, std::uint64_t seed) {
    FrequencySequence f;
    f.spec.kind = FreqKind::Random;
    f.spec.seed = seed;
    f.M = M;
    CounterRng rng(seed);
    for (int i = 0; i < M; ++i) f.values.push_back(DD(2.0 * rng.uniform01(i)));
    return f;
}

double constant_closed_form(int N, int M) {
    double n = double(N);
    return double(M) * double(M) * (2.0 * n * n * n + n) / (3.0 * std::pow(n, 5));
}

} // namespace

TEST_CASE("N=1: single term, value 1") {
    auto f = random_freq(1, 9);
    CHECK(es_bruteforce(f, 1, 1.0).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es_completed_square(f, 1, 1.0).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant frequencies: closed-form count") {
    auto f = make_frequencies(parse_freq_spec("constant:0.3"), 64, 64);
    for (int N : {4, 8, 16}) {
        CHECK(es_bruteforce(f, N, 1.0).value ==
              doctest::Approx(constant_closed_form(N, N)).epsilon(1e-10));
        CHECK(es_completed_square(f, N, 1.0).value ==
              doctest::Approx(constant_closed_form(N, N)).epsilon(1e-10));
    }
    // large-N limit (2/3) rho^2
    CHECK(es_completed_square(f, 64, 1.0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-2));
}

TEST_CASE("route equivalence: brute vs completed square, random omega") {
    for (int trial = 0; trial < 12; ++trial) {
        int N = 2 << (trial % 4); // 2, 4, 8, 16
        auto f = random_freq(N, 1000 + trial);
        double brute = es_bruteforce(f, N, 1.0).value;
        double square = es_completed_square_generic(f, N, 1.0).value;
        CHECK(brute == doctest::Approx(square).epsilon(1e-10));
        CHECK(brute >= -1e-12); // non-negativity of the exact value
    }
}

TEST_CASE("ialpha difference path equals generic path") {
    auto f = make_frequencies(parse_freq_spec("ialpha:sqrt2"), 96, 96);
    for (int N : {32, 96}) {
        double fast = es_completed_square(f, N, 1.0).value;
        double generic = es_completed_square_generic(f, N, 1.0).value;
        CHECK(fast == doctest::Approx(generic).epsilon(1e-11));
    }
}

TEST_CASE("geometric bound dominates the exact value") {
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_freq(32, 500 + trial);
        double exact = es_completed_square_generic(f, 32, 1.0).value;
        double bound = es_geometric_bound(f, 32, 1.0).value;
        CHECK(bound >= exact - 1e-9);
    }
    // constant omega: every term takes the L^2 branch, so the bound meets the
    // exact value M^2 (2N^3+N) / (3 N^5)
    auto c = make_frequencies(parse_freq_spec("constant:2"), 16, 16);
    int N = 16;
    CHECK(es_geometric_bound(c, N, 1.0).value ==
          doctest::Approx(constant_closed_form(N, N)).epsilon(1e-12));
    CHECK(es_geometric_bound(c, N, 1.0).value >= es_completed_square(c, N, 1.0).value);
}

TEST_CASE("shift invariance: omega_i -> omega_i + 1 leaves ES unchanged") {
    auto f = random_freq(16, 77);
    double base = es_completed_square_generic(f, 16, 1.0).value;
    for (int which : {0, 3, 15}) {
        auto g = f;
        g.values[which] = dd::add_double(g.values[which], 1.0);
        CHECK(es_completed_square_generic(g, 16, 1.0).value ==
              doctest::Approx(base).epsilon(1e-9));
    }
    // brute route agrees
    auto g = f;
    g.values[5] = dd::add_double(g.values[5], 1.0);
    CHECK(es_bruteforce(g, 16, 1.0).value == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("brute-force size cap") {
    auto f = random_freq(256, 1);
    CHECK_THROWS_AS(es_bruteforce(f, 256, 1.0), size_error);
}

TEST_CASE("rho enters through M = floor(rho N)") {
    auto f = random_freq(64, 4);
    ESResult r = es_completed_square_generic(f, 64, 0.5);
    CHECK(r.M == 32);
    ESResult r2 = es_bruteforce(f, 16, 0.25);
    CHECK(r2.M == 4);
}

TEST_CASE("fit_decay: constant frequencies give slope near zero") {
    DecayFit fit = fit_decay(parse_freq_spec("constant:0.7"), {16, 32, 64, 128}, 1.0);
    CHECK(std::fabs(fit.slope) < 0.05);
    CHECK_THROWS_AS(fit_decay(parse_freq_spec("constant:0"), {16, 32}, 1.0), std::domain_error);
    CHECK_THROWS_AS(fit_loglog({16, 32, 64}, {1.0, -1.0, 0.5}), numeric_error);
}

TEST_CASE("fit_decay: ialpha sqrt2 decays") {
    DecayFit fit = fit_decay(parse_freq_spec("ialpha:sqrt2"), {32, 64, 128, 256}, 1.0);
    CHECK(fit.slope < -0.3);
    CHECK(fit.r2 > 0.9);
}

TEST_CASE("diophantine count: formula vs exhaustive search") {
    CHECK(diophantine_count(1) == 1);
    CHECK(diophantine_count(2) == 6);
    CHECK(diophantine_count(5) == 45);
    CHECK(diophantine_count(40) == 2 * 40 * 40 - 40); // exhaustively verified inside
    CHECK(diophantine_count(1000) == 2LL * 1000 * 1000 - 1000);
}

#ifdef _OPENMP
TEST_CASE("ES reduction is bitwise independent of the thread count") {
    auto f = random_freq(48, 64);
    int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    double serial = es_completed_square_generic(f, 48, 1.0).value;
    omp_set_num_threads(saved > 1 ? saved : 2);
    double parallel = es_completed_square_generic(f, 48, 1.0).value;
    omp_set_num_threads(saved);
    CHECK(serial == parallel);
}
#endif

TEST_CASE("random_freq_mean: determinism and magnitude") {
    MeanESResult a = random_freq_mean(16, 1.0, 1, 123);
    MeanESResult b = random_freq_mean(16, 1.0, 1, 123);
    CHECK(a.mean == b.mean); // bit-identical for identical seeds
    MeanESResult c = random_freq_mean(32, 1.0, 40, 7);
    // expectation = [M (2N^3+N)/3 + M(M-1)(2N^2-N)] / N^5
    double n = 32, m = 32;
    double expect = (m * (2 * n * n * n + n) / 3.0 + m * (m - 1) * (2 * n * n - n)) /
                    std::pow(n, 5);
    CHECK(c.mean == doctest::Approx(expect).epsilon(0.25)); // 40 samples, loose
    CHECK(c.mean <= 16.0 / 32.0 + 3.0 * c.stderr_);         // the mean bound
}
