#include "skewlab/ddreal.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace skewlab {
namespace dd {

DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

#if defined(FP_FAST_FMA)
DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}
#else
// Dekker split; exact for |a|,|b| < 2^996.
static inline void split(double a, double& hi, double& lo) {
    constexpr double splitter = 134217729.0; // 2^27 + 1
    double t = splitter * a;
    hi = t - (t - a);
    lo = a - hi;
}

DD two_prod(double a, double b) {
    double p = a * b;
    double ahi, alo, bhi, blo;
    split(a, ahi, alo);
    split(b, bhi, blo);
    double err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    return {p, err};
}
#endif

DD add(const DD& a, const DD& b) {
    DD s = two_sum(a.hi, b.hi);
    DD t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

DD neg(const DD& a) { return {-a.hi, -a.lo}; }

DD sub(const DD& a, const DD& b) { return add(a, neg(b)); }

DD mul(const DD& a, const DD& b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

DD mul_double(const DD& a, double b) {
    DD p = two_prod(a.hi, b);
    p.lo += a.lo * b;
    return quick_two_sum(p.hi, p.lo);
}

DD mul_pow2(const DD& a, double p) { return {a.hi * p, a.lo * p}; }

DD add_double(const DD& a, double b) {
    DD s = two_sum(a.hi, b);
    s.lo += a.lo;
    return quick_two_sum(s.hi, s.lo);
}

DD div(const DD& a, const DD& b) {
    double q1 = a.hi / b.hi;
    DD r = sub(a, mul_double(b, q1));
    double q2 = r.hi / b.hi;
    r = sub(r, mul_double(b, q2));
    double q3 = r.hi / b.hi;
    DD q = quick_two_sum(q1, q2);
    return add_double(q, q3);
}

DD sqrt(const DD& a) {
    if (a.hi == 0.0 && a.lo == 0.0) return DD(0.0);
    if (a.hi < 0.0) throw std::domain_error("dd::sqrt of negative value");
    // One Newton step on top of the double square root (Karp's trick).
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    DD err = sub(a, two_prod(ax, ax));
    return add_double(DD(ax), err.hi * (x * 0.5));
}

DD exp(const DD& a) {
    // e^a = 2^m * e^r with r = a - m ln2, |r| <= ln2/2, then Taylor in r.
    if (a.hi > 709.0) throw std::overflow_error("dd::exp overflow");
    if (a.hi < -709.0) return DD(0.0);
    double m = std::floor(a.hi / k_ln2.hi + 0.5);
    DD r = sub(a, mul_double(k_ln2, m));
    DD sum = add_double(r, 1.0);
    DD term = r;
    for (int n = 2; n < 64; ++n) {
        term = mul(term, r);
        term = div(term, DD(double(n)));
        sum = add(sum, term);
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    int im = static_cast<int>(m);
    return {std::ldexp(sum.hi, im), std::ldexp(sum.lo, im)};
}

DD log(const DD& a) {
    if (a.hi <= 0.0) throw std::domain_error("dd::log of non-positive value");
    // Newton iteration on exp(x) = a, starting from the double log.
    DD x(std::log(a.hi));
    for (int it = 0; it < 2; ++it) {
        DD e = exp(neg(x));
        x = add(x, add_double(mul(a, e), -1.0));
    }
    return x;
}

DD pow_int(const DD& a, int n) {
    if (n < 0) return div(DD(1.0), pow_int(a, -n));
    DD r(1.0);
    DD base = a;
    while (n > 0) {
        if (n & 1) r = mul(r, base);
        base = mul(base, base);
        n >>= 1;
    }
    return r;
}

DD floor(const DD& a) {
    double f = std::floor(a.hi);
    if (f != a.hi) return DD(f);
    // hi is integral; the fractional information lives in lo
    return quick_two_sum(f, std::floor(a.lo));
}

DD frac(const DD& a) {
    DD r = sub(a, floor(a));
    // Guard against rounding landing exactly on 1.0 or slightly below 0.
    if (r.hi >= 1.0) r = add_double(r, -1.0);
    if (r.hi < 0.0) r = add_double(r, 1.0);
    return r;
}

DD from_string(const std::string& s) {
    std::size_t i = 0;
    auto fail = [&]() { throw std::invalid_argument("not a decimal real: '" + s + "'"); };
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = (s[i] == '-');
        ++i;
    }
    DD value(0.0);
    int digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        value = add_double(mul_double(value, 10.0), double(s[i] - '0'));
        ++digits;
        ++i;
    }
    int frac_digits = 0;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            value = add_double(mul_double(value, 10.0), double(s[i] - '0'));
            ++frac_digits;
            ++digits;
            ++i;
        }
    }
    if (digits == 0) fail();
    long expo = 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        std::size_t start = i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        std::size_t d0 = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == d0) fail();
        expo = std::strtol(s.c_str() + start, nullptr, 10);
    }
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i != s.size()) fail();

    long p = expo - frac_digits;
    if (p != 0) {
        DD ten(10.0);
        DD scale = pow_int(ten, static_cast<int>(p < 0 ? -p : p));
        value = (p > 0) ? mul(value, scale) : div(value, scale);
    }
    return negative ? neg(value) : value;
}

} // namespace dd

double phase_frac(std::uint64_t m, const DD& w) {
    if (m > (std::uint64_t(1) << 62)) throw std::overflow_error("phase_frac: multiplier above 2^62");
    if (m == 0) return 0.0;
    DD wf = dd::frac(w);
    DD acc;
    if (m <= (std::uint64_t(1) << 31)) {
        acc = dd::mul_double(wf, double(m));
    } else {
        // m = m1 * 2^31 + m0; the integer part of m1 * (2^31 w) drops mod 1.
        std::uint64_t m1 = m >> 31;
        std::uint64_t m0 = m & ((std::uint64_t(1) << 31) - 1);
        DD w1 = dd::frac(dd::mul_pow2(wf, 2147483648.0));
        acc = dd::mul_double(w1, double(m1));
        if (m0 != 0) acc = dd::add(acc, dd::mul_double(wf, double(m0)));
    }
    DD r = dd::frac(acc);
    double out = r.hi + r.lo;
    if (out >= 1.0) out = 0.0;
    if (out < 0.0) out = 0.0;
    return out;
}

} // namespace skewlab
