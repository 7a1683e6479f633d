#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "radcap/errors.hpp"

namespace radcap {

// Signed real stored as sign and natural log of the magnitude.
class LogScalar {
public:
    constexpr LogScalar() = default;

    static LogScalar zero() { return {}; }
    static LogScalar one() { return from_log(0.0); }
    static LogScalar pos_inf();
    static LogScalar from_real(double x);
    static LogScalar from_log(double log_mag, int sign = 1);

    int sign() const { return sign_; }
    double log_mag() const { return log_mag_; }
    bool is_zero() const { return sign_ == 0; }
    bool is_pos_inf() const;
    bool is_finite() const;

    // Under- and overflow silently to 0 / inf.
    double to_real() const;
    double log10_mag() const;

    LogScalar operator-() const;
    LogScalar abs() const;

    friend LogScalar operator+(LogScalar a, LogScalar b);
    friend LogScalar operator-(LogScalar a, LogScalar b);
    friend LogScalar operator*(LogScalar a, LogScalar b);
    friend LogScalar operator/(LogScalar a, LogScalar b);
    LogScalar& operator+=(LogScalar o) { return *this = *this + o; }
    LogScalar& operator-=(LogScalar o) { return *this = *this - o; }
    LogScalar& operator*=(LogScalar o) { return *this = *this * o; }
    LogScalar& operator/=(LogScalar o) { return *this = *this / o; }

    friend std::strong_ordering operator<=>(const LogScalar& a, const LogScalar& b);
    friend bool operator==(const LogScalar& a, const LogScalar& b);

    std::string debug_string() const;

private:
    std::int8_t sign_ = 0;
    double log_mag_ = 0.0;
};

LogScalar log_add(LogScalar a, LogScalar b);
LogScalar log_pow(LogScalar a, double e);

// Surface area of the unit sphere in R^n, 2 pi^{n/2} / Gamma(n/2).
double unit_sphere_area(int n);

// mantissa in [1, 10) times 10^exp10; zero gives {0, 0}.
struct Decimal {
    double mantissa = 0.0;
    long exp10 = 0;
};
Decimal to_decimal(LogScalar x);
// Decimal text with explicit exponent, e.g. "3.141592653589793e+00".
std::string format_decimal(LogScalar x, int digits = 15);

// |a - b| / max(|a|, |b|), computed without leaving the log domain.
double relative_difference(LogScalar a, LogScalar b);

// log(exp(a) + exp(b)) and log(exp(a) - exp(b)) for a >= b.
double log_sum_exp(double a, double b);
double log_diff_exp(double a, double b);

class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, LogScalar estimate, LogScalar error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}
    LogScalar estimate() const { return estimate_; }
    LogScalar error_bound() const { return error_bound_; }

private:
    LogScalar estimate_;
    LogScalar error_bound_;
};

enum class Substitution { identity, log };

struct QuadratureSpec {
    double rel_tol = 1e-10;
    long max_subdivisions = 1L << 20;
    Substitution substitution = Substitution::log;

    void validate() const;
};

struct QuadratureResult {
    LogScalar value;
    LogScalar abs_error;
    long subdivisions = 0;

    double relative_error() const;
};

using Integrand = std::function<LogScalar(double)>;
// Closed-form value of the integral from x to +infinity.
using TailFn = std::function<LogScalar(double)>;

// Integrate over [lo, hi]; hi may be +inf only when a tail is supplied, in which
// case the quadrature stops at the largest breakpoint and the tail covers the rest.
LogScalar integrate(const Integrand& f, double lo, double hi, const QuadratureSpec& spec = {},
                    std::vector<double> breakpoints = {}, const TailFn& tail = {});
QuadratureResult integrate_detailed(const Integrand& f, double lo, double hi,
                                    const QuadratureSpec& spec = {},
                                    std::vector<double> breakpoints = {},
                                    const TailFn& tail = {});

// Adaptive Gauss-Kronrod on a finite interval of the integration variable itself;
// g already contains any Jacobian.
QuadratureResult integrate_variable(const Integrand& g, double a, double b,
                                    const QuadratureSpec& spec,
                                    const std::vector<double>& breaks = {});

}  // namespace radcap
