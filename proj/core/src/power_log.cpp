#include "radcap/power_log.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace radcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSnap = 1e-12;
constexpr int kMaxSeriesDegree = 40;
// Below |kappa| s = 40 the parts expansion cannot reach a 1e-13 remainder.
constexpr double kPartsMinArg = 40.0;

double snap(double x) {
    const double r = std::round(x);
    return std::fabs(x - r) <= kSnap * std::max(1.0, std::fabs(x)) ? r : x;
}

bool is_small_nonneg_int(double b) { return b >= 0 && b <= kMaxSeriesDegree && std::trunc(b) == b; }

// log of (1 - exp(x)) for x <= 0.
double log1mexp(double x) { return std::log(-std::expm1(x)); }

// s-variable kernel exp(kappa s) s^b on [s1, s2], 0 <= s1 < s2 <= inf.
struct SKernel {
    double kappa, b;
    LogScalar at(double s) const {
        if (s == 0.0) {
            if (b > 0) return LogScalar::zero();
            if (b == 0) return LogScalar::one();
            return LogScalar::pos_inf();
        }
        return LogScalar::from_log(kappa * s + b * std::log(s));
    }
};

TermIntegral pure_power(double b, double s1, double s2) {
    // integral of s^b
    const double e = b + 1.0;
    TermIntegral r;
    r.rel_error = 4e-16;
    if (e == 0.0) {
        const double d = std::isfinite(s2) ? std::log1p((s2 - s1) / s1) : kInf;
        r.value = LogScalar::from_log(std::log(d));
        return r;
    }
    if (e > 0) {
        const double ls2 = std::log(s2);
        const double ls1 = s1 > 0 ? std::log(s1) : -kInf;
        r.value = LogScalar::from_log(e * ls2 + log1mexp(e * (ls1 - ls2)) - std::log(e));
        return r;
    }
    const double ls1 = std::log(s1);
    const double ls2 = std::isfinite(s2) ? std::log(s2) : kInf;
    r.value = LogScalar::from_log(e * ls1 + log1mexp(e * (ls2 - ls1)) - std::log(-e));
    return r;
}

// Antiderivative exp(k s) * sum_j (-1)^j m!/(m-j)! s^(m-j) / k^(j+1); also returns the
// sum of absolute term values for the cancellation check.
std::pair<LogScalar, LogScalar> series_antiderivative(double kappa, int m, double s) {
    LogScalar sum, abs_sum;
    if (!std::isfinite(s)) return {sum, abs_sum};  // kappa < 0 here
    const double lk = std::log(std::fabs(kappa));
    const double ls = s > 0 ? std::log(s) : -kInf;
    const double lfm = std::lgamma(m + 1.0);
    for (int j = 0; j <= m; ++j) {
        const int pw = m - j;
        if (pw > 0 && s == 0.0) continue;
        const double lm = kappa * s + lfm - std::lgamma(pw + 1.0) + (pw > 0 ? pw * ls : 0.0) -
                          (j + 1) * lk;
        int sg = (j % 2 == 0) ? 1 : -1;
        if (kappa < 0 && (j + 1) % 2 == 1) sg = -sg;
        const LogScalar term = LogScalar::from_log(lm, sg);
        sum += term;
        abs_sum += term.abs();
    }
    return {sum, abs_sum};
}

TermIntegral kernel_quadrature(const SKernel& k, double s1, double s2, const QuadratureSpec& spec) {
    // Integrate in u = s - s1 with exp(kappa s1) s1^b pulled out, so that nodes far from
    // the origin do not lose their offset to rounding.
    const bool shift = s1 > 0.0;
    const LogScalar pre = shift ? k.at(s1) : LogScalar::one();
    auto g = [&k, s1, shift](double u) {
        if (!shift) return k.at(u);
        return LogScalar::from_log(k.kappa * u + k.b * std::log1p(u / s1));
    };
    TermIntegral r;
    r.method = IntegralMethod::quadrature;
    if (std::isfinite(s2)) {
        const QuadratureResult q = integrate_variable(g, 0.0, s2 - s1, spec);
        r.value = pre * q.value;
        r.rel_error = q.relative_error();
        return r;
    }
    // Decaying exponential: truncate where the tail bound is negligible.
    const double c = -k.kappa;
    double span = (40.0 + 2.0 * std::max(0.0, k.b)) / c;
    for (int iter = 0; iter < 200; ++iter) {
        const QuadratureResult q = integrate_variable(g, 0.0, span, spec);
        double denom = c;
        if (k.b > 0) denom = c - k.b / (s1 + span);
        if (denom > 0) {
            const LogScalar bound = g(span) / LogScalar::from_real(denom);
            if (bound <= q.value * LogScalar::from_real(1e-3 * spec.rel_tol)) {
                r.value = pre * q.value;
                r.rel_error = q.relative_error() + std::exp(bound.log_mag() - q.value.log_mag());
                return r;
            }
        }
        span *= 2.0;
    }
    throw AccuracyError("integrate_power_log: tail truncation failed", r.value, LogScalar::pos_inf());
}

// Repeated integration by parts:
//   int e^{ks} s^b = [e^{ks} sum_{j<N} (-1)^j (b)_j s^{b-j} / k^{j+1}] + (-1)^N (b)_N / k^N int e^{ks} s^{b-N},
// (b)_j the falling factorial. With N > b the remainder is at most
// |(b)_N| / |k|^N * s1^{b-N} * |int e^{ks}|. Only used when |k| s1 is large.
std::optional<TermIntegral> parts_expansion(double kappa, double b, double s1, double s2, double rel_tol) {
    if (!(s1 > 0) || std::fabs(kappa) * s1 < kPartsMinArg) return std::nullopt;
    if (!std::isfinite(s2) && kappa >= 0) return std::nullopt;
    // Series factor S(s) = sum_j (-1)^j (b)_j / (k s)^j; returns S and the number of terms.
    auto series = [&](double s, int n_terms) {
        double sum = 0.0, term = 1.0;
        for (int j = 0; j < n_terms; ++j) {
            sum += term;
            term *= -(b - j) / (kappa * s);
        }
        return sum;
    };
    // Pick N: past b, and the remainder factor below rel_tol * 1e-3.
    int N = 1;
    double lfall = 0.0;  // log |(b)_N|
    bool exact = false;
    for (;; ++N) {
        const double f = std::fabs(b - (N - 1));
        if (f == 0.0) {
            exact = true;  // integer b: the series terminates
            break;
        }
        lfall += std::log(f);
        const double lrem = lfall - N * std::log(std::fabs(kappa) * s1);
        if (N > b && lrem < std::log(1e-3 * rel_tol)) break;
        if (N > 200) return std::nullopt;
    }
    const double lk = std::log(std::fabs(kappa));
    // Boundary values B(s) = e^{ks} s^b S(s) / |k|.
    auto boundary = [&](double s) {
        if (!std::isfinite(s)) return LogScalar::zero();
        const double S = series(s, N);
        return LogScalar::from_log(kappa * s + b * std::log(s) - lk) * LogScalar::from_real(S);
    };
    const LogScalar hi = boundary(s2), lo = boundary(s1);
    const LogScalar value = kappa > 0 ? hi - lo : lo - hi;
    const LogScalar scale = hi.abs() + lo.abs();
    if (value.is_zero() || value.sign() < 0 || value.log_mag() - scale.log_mag() < std::log(1e-4))
        return std::nullopt;
    TermIntegral r;
    r.value = value;
    r.method = IntegralMethod::closed_form;
    double rel = 1e-15 * std::exp(scale.log_mag() - value.log_mag());
    if (!exact) {
        // |int_{s1}^{s2} e^{ks}| <= e^{k s_max} / |k| with s_max the dominant end.
        const double dom = kappa > 0 ? kappa * s2 : kappa * s1;
        const double lrem = lfall - N * lk + (b - N) * std::log(s1) + dom - lk;
        rel += std::exp(lrem - value.log_mag());
    }
    r.rel_error = rel;
    return r;
}

TermIntegral s_integral(double kappa, double b, double s1, double s2, const QuadratureSpec& spec,
                        bool force_quadrature) {
    if (kappa == 0.0) {
        if (!force_quadrature || !std::isfinite(s2)) {
            if (force_quadrature) {
                // Finite part numerically, closed-form tail.
                const double x = std::max(2.0 * s1, 1.0);
                TermIntegral head = kernel_quadrature({0.0, b}, s1, x, spec);
                TermIntegral tail = pure_power(b, x, s2);
                head.value += tail.value;
                head.method = IntegralMethod::mixed;
                return head;
            }
            return pure_power(b, s1, s2);
        }
        return kernel_quadrature({kappa, b}, s1, s2, spec);
    }
    if (!force_quadrature && is_small_nonneg_int(b)) {
        const int m = static_cast<int>(b);
        auto [f2, a2] = series_antiderivative(kappa, m, s2);
        auto [f1, a1] = series_antiderivative(kappa, m, s1);
        const LogScalar diff = f2 - f1;
        const LogScalar scale = a2 + a1;
        if (!diff.is_zero() && diff.sign() > 0 &&
            diff.log_mag() - scale.log_mag() > std::log(1e-4)) {
            TermIntegral r;
            r.value = diff;
            r.rel_error = 4e-16 * (m + 2) * std::exp(scale.log_mag() - diff.log_mag());
            return r;
        }
    }
    if (!force_quadrature) {
        if (auto r = parts_expansion(kappa, b, s1, s2, spec.rel_tol)) return *r;
        // Long ranges: quadrature only up to where the expansion takes over.
        const double sc = kPartsMinArg / std::fabs(kappa);
        if (s1 < sc && sc < s2) {
            if (auto far = parts_expansion(kappa, b, sc, s2, spec.rel_tol)) {
                TermIntegral near = kernel_quadrature({kappa, b}, s1, sc, spec);
                near.value += far->value;
                near.rel_error = std::max(near.rel_error, far->rel_error);
                near.method = IntegralMethod::mixed;
                return near;
            }
        }
    }
    return kernel_quadrature({kappa, b}, s1, s2, spec);
}

}  // namespace

const char* to_string(IntegralMethod m) {
    switch (m) {
        case IntegralMethod::closed_form: return "closed-form";
        case IntegralMethod::quadrature: return "quadrature";
        case IntegralMethod::mixed: return "mixed";
    }
    return "?";
}

IntegralMethod combine(IntegralMethod x, IntegralMethod y) { return x == y ? x : IntegralMethod::mixed; }

bool power_log_converges(double a, double b, double t1, double t2) {
    a = std::fabs(a) <= kSnap ? 0.0 : a;
    if (t1 == -kInf) {
        if (a < 0 || (a == 0 && !(b < -1))) return false;
    }
    if (t2 == kInf) {
        if (a > 0 || (a == 0 && !(b < -1))) return false;
    }
    return true;
}

TermIntegral integrate_power_log(const PowerLogTerm& term, double t1, double t2,
                                 const QuadratureSpec& spec, bool force_quadrature) {
    if (std::isnan(t1) || std::isnan(t2) || !(t1 < t2)) {
        if (t1 == t2) return {};
        throw ParameterError("integrate_power_log: need t1 < t2");
    }
    const double a = std::fabs(term.a) <= kSnap ? 0.0 : term.a;
    const double b = snap(term.b);
    if (b != 0.0 && t1 <= 0.0 && t2 >= 0.0)
        throw DomainError("integrate_power_log: |t|^b term must avoid t = 0");
    if (!power_log_converges(a, b, t1, t2)) throw DivergenceError("integrate_power_log: integral diverges");
    if (term.coeff.is_zero()) return {};

    TermIntegral r;
    if (b == 0.0 && !force_quadrature) {
        r.rel_error = 4e-16;
        if (a == 0.0) {
            r.value = LogScalar::from_log(std::log(t2 - t1));
        } else if (a > 0) {
            r.value = LogScalar::from_log(a * t2 + log1mexp(-a * (t2 - t1)) - std::log(a));
        } else {
            r.value = LogScalar::from_log(a * t1 + log1mexp(a * (t2 - t1)) - std::log(-a));
        }
        r.value *= term.coeff;
        return r;
    }
    if (b == 0.0 && t1 < 0.0 && t2 > 0.0) {
        // Quadrature across t = 0 is fine when there is no log factor.
        TermIntegral lo = integrate_power_log(term, t1, 0.0, spec, true);
        TermIntegral hi = integrate_power_log(term, 0.0, t2, spec, true);
        lo.value += hi.value;
        lo.rel_error = std::max(lo.rel_error, hi.rel_error);
        lo.method = combine(lo.method, hi.method);
        return lo;
    }
    if (t2 <= 0.0) {
        r = s_integral(-a, b, -t2, -t1, spec, force_quadrature);
    } else {
        r = s_integral(a, b, t1, t2, spec, force_quadrature);
    }
    r.value *= term.coeff;
    return r;
}

}  // namespace radcap
