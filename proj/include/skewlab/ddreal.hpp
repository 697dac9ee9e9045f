#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace skewlab {

// Double-double ("compensated pair") real number: value = hi + lo with
// |lo| <= ulp(hi)/2. Gives ~106 bits of mantissa, enough to keep the
// fractional part of q(j)*omega meaningful up to q(j) ~ 2^62.
//
// The arithmetic below follows the classic error-free transformations
// (Dekker / Knuth / Bailey's qd library).
struct DD {
    double hi = 0.0;
    double lo = 0.0;

    DD() = default;
    constexpr DD(double h, double l) : hi(h), lo(l) {}
    explicit constexpr DD(double h) : hi(h), lo(0.0) {}

    double to_double() const { return hi + lo; }
};

namespace dd {

DD two_sum(double a, double b);
DD quick_two_sum(double a, double b); // requires |a| >= |b|
DD two_prod(double a, double b);

DD add(const DD& a, const DD& b);
DD sub(const DD& a, const DD& b);
DD mul(const DD& a, const DD& b);
DD div(const DD& a, const DD& b);
DD neg(const DD& a);
DD mul_double(const DD& a, double b);
DD mul_pow2(const DD& a, double p); // p a power of two; exact
DD add_double(const DD& a, double b);

DD sqrt(const DD& a);
DD exp(const DD& a);
DD log(const DD& a);
DD pow_int(const DD& a, int n);

DD floor(const DD& a);
// Fractional part in [0, 1).
DD frac(const DD& a);

// Parses a decimal literal ([+-]ddd[.ddd][eNN]) into a DD. Throws
// std::invalid_argument on malformed input.
DD from_string(const std::string& s);

inline constexpr DD k_pi{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr DD k_2pi{6.283185307179586232e+00, 2.449293598294706414e-16};
inline constexpr DD k_ln2{6.931471805599452862e-01, 2.319046813846299558e-17};

} // namespace dd

// frac(m * w) as a double in [0, 1), with the integer multiplier split
// exactly against both components of w. Absolute error < 2^-70 for
// m <= 2^62. Throws std::overflow_error for larger m.
double phase_frac(std::uint64_t m, const DD& w);

} // namespace skewlab
