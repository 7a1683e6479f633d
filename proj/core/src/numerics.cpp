#include "radcap/numerics.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace radcap {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LogScalar LogScalar::pos_inf() { return from_log(kInf, 1); }

LogScalar LogScalar::from_log(double log_mag, int sign) {
    if (std::isnan(log_mag)) throw DomainError("LogScalar: NaN log magnitude");
    LogScalar r;
    if (sign == 0 || log_mag == -kInf) return r;
    r.sign_ = static_cast<std::int8_t>(sign > 0 ? 1 : -1);
    r.log_mag_ = log_mag;
    return r;
}

LogScalar LogScalar::from_real(double x) {
    if (std::isnan(x)) throw DomainError("LogScalar: NaN input");
    if (x == 0.0) return {};
    return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
}

bool LogScalar::is_pos_inf() const { return sign_ > 0 && log_mag_ == kInf; }
bool LogScalar::is_finite() const { return sign_ == 0 || std::isfinite(log_mag_); }

double LogScalar::to_real() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_mag_);
}

double LogScalar::log10_mag() const {
    if (sign_ == 0) return -kInf;
    return log_mag_ / std::log(10.0);
}

LogScalar LogScalar::operator-() const {
    LogScalar r = *this;
    r.sign_ = static_cast<std::int8_t>(-r.sign_);
    return r;
}

LogScalar LogScalar::abs() const {
    LogScalar r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

double log_sum_exp(double a, double b) {
    if (a < b) std::swap(a, b);
    if (b == -kInf) return a;
    if (a == kInf) return kInf;
    return a + std::log1p(std::exp(b - a));
}

double log_diff_exp(double a, double b) {
    if (b > a) throw DomainError("log_diff_exp: negative difference");
    if (b == -kInf) return a;
    if (a == b) return -kInf;
    return a + std::log(-std::expm1(b - a));
}

LogScalar log_add(LogScalar a, LogScalar b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const bool ainf = !a.is_finite();
    const bool binf = !b.is_finite();
    if (ainf || binf) {
        if (ainf && binf && a.sign() != b.sign())
            throw DomainError("log_add: inf - inf is undefined");
        return ainf ? a : b;
    }
    if (a.sign() == b.sign())
        return LogScalar::from_log(log_sum_exp(a.log_mag(), b.log_mag()), a.sign());
    // Opposite signs: the larger magnitude decides the sign; equal magnitudes cancel to Zero.
    if (a.log_mag() == b.log_mag()) return LogScalar::zero();
    const LogScalar& big = a.log_mag() > b.log_mag() ? a : b;
    const LogScalar& small = a.log_mag() > b.log_mag() ? b : a;
    return LogScalar::from_log(log_diff_exp(big.log_mag(), small.log_mag()), big.sign());
}

LogScalar operator+(LogScalar a, LogScalar b) { return log_add(a, b); }
LogScalar operator-(LogScalar a, LogScalar b) { return log_add(a, -b); }

LogScalar operator*(LogScalar a, LogScalar b) {
    if (a.is_zero() || b.is_zero()) {
        if (!a.is_finite() || !b.is_finite()) throw DomainError("LogScalar: 0 * inf");
        return LogScalar::zero();
    }
    return LogScalar::from_log(a.log_mag() + b.log_mag(), a.sign() * b.sign());
}

LogScalar operator/(LogScalar a, LogScalar b) {
    if (b.is_zero()) throw DomainError("LogScalar: division by zero");
    if (a.is_zero()) {
        if (!b.is_finite()) return LogScalar::zero();
        return LogScalar::zero();
    }
    if (!a.is_finite() && !b.is_finite()) throw DomainError("LogScalar: inf / inf");
    return LogScalar::from_log(a.log_mag() - b.log_mag(), a.sign() * b.sign());
}

std::strong_ordering operator<=>(const LogScalar& a, const LogScalar& b) {
    if (a.sign() != b.sign()) return a.sign() <=> b.sign();
    if (a.sign() == 0 || a.log_mag() == b.log_mag()) return std::strong_ordering::equal;
    const bool larger_mag = a.log_mag() > b.log_mag();
    if (a.sign() > 0) return larger_mag ? std::strong_ordering::greater : std::strong_ordering::less;
    return larger_mag ? std::strong_ordering::less : std::strong_ordering::greater;
}

bool operator==(const LogScalar& a, const LogScalar& b) {
    return (a <=> b) == std::strong_ordering::equal;
}

std::string LogScalar::debug_string() const {
    std::ostringstream os;
    os.precision(17);
    if (sign_ == 0) return "Zero";
    os << (sign_ > 0 ? "(+, " : "(-, ") << log_mag_ << ")";
    return os.str();
}

LogScalar log_pow(LogScalar a, double e) {
    if (std::isnan(e)) throw DomainError("log_pow: NaN exponent");
    if (e == 0.0) return LogScalar::one();
    if (a.is_zero()) return e > 0 ? LogScalar::zero() : LogScalar::pos_inf();
    if (a.sign() < 0) {
        if (std::trunc(e) != e) throw DomainError("log_pow: negative base with non-integer exponent");
        const bool odd = std::fmod(std::fabs(e), 2.0) == 1.0;
        if (!a.is_finite()) return e > 0 ? LogScalar::from_log(kInf, odd ? -1 : 1) : LogScalar::zero();
        return LogScalar::from_log(a.log_mag() * e, odd ? -1 : 1);
    }
    if (!a.is_finite()) return e > 0 ? LogScalar::pos_inf() : LogScalar::zero();
    return LogScalar::from_log(a.log_mag() * e, 1);
}

double unit_sphere_area(int n) {
    if (n < 1) throw ParameterError("unit_sphere_area: n must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

Decimal to_decimal(LogScalar x) {
    if (x.is_zero()) return {};
    if (!x.is_finite()) return {x.sign() * kInf, 0};
    const double l10 = x.log10_mag();
    long e = static_cast<long>(std::floor(l10));
    double m = std::pow(10.0, l10 - static_cast<double>(e));
    if (m >= 10.0) {
        m /= 10.0;
        ++e;
    }
    if (m < 1.0) {
        m *= 10.0;
        --e;
    }
    return {x.sign() * m, e};
}

std::string format_decimal(LogScalar x, int digits) {
    if (x.is_zero()) return "0";
    if (!x.is_finite()) return x.sign() > 0 ? "inf" : "-inf";
    Decimal d = to_decimal(x);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, std::fabs(d.mantissa));
    // Rounding can carry the mantissa to 10.
    if (buf[0] == '1' && buf[1] == '0') {
        d.exp10 += 1;
        std::snprintf(buf, sizeof buf, "%.*f", digits, std::fabs(d.mantissa) / 10.0);
    }
    char out[96];
    std::snprintf(out, sizeof out, "%s%se%+03ld", d.mantissa < 0 ? "-" : "", buf, d.exp10);
    return out;
}

double relative_difference(LogScalar a, LogScalar b) {
    if (a.is_zero() && b.is_zero()) return 0.0;
    if (a == b) return 0.0;
    const LogScalar d = (a - b).abs();
    const LogScalar m = std::max(a.abs(), b.abs());
    if (!m.is_finite()) return kInf;
    return std::exp(d.log_mag() - m.log_mag());
}

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0)) throw ParameterError("QuadratureSpec: rel_tol must be positive");
    if (max_subdivisions < 1) throw ParameterError("QuadratureSpec: max_subdivisions must be >= 1");
}

double QuadratureResult::relative_error() const {
    if (value.is_zero()) return abs_error.is_zero() ? 0.0 : kInf;
    return std::exp(abs_error.log_mag() - value.log_mag());
}

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15.

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    LogScalar value, err;
};

struct PanelOrder {
    bool operator()(const Panel& x, const Panel& y) const { return x.err < y.err; }
};

Panel gk15(const Integrand& g, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    LogScalar vals[15];
    double xs[15];
    for (int i = 0; i < 7; ++i) {
        xs[2 * i] = c - h * kXgk[i];
        xs[2 * i + 1] = c + h * kXgk[i];
    }
    xs[14] = c;
    double top = -kInf;
    for (int i = 0; i < 15; ++i) {
        vals[i] = g(xs[i]);
        if (!vals[i].is_finite()) throw DomainError("integrate: integrand not finite");
        if (!vals[i].is_zero()) top = std::max(top, vals[i].log_mag());
    }
    Panel p{a, b, LogScalar::zero(), LogScalar::zero()};
    if (top == -kInf) return p;
    auto scaled = [&](int i) {
        const LogScalar& v = vals[i];
        return v.is_zero() ? 0.0 : v.sign() * std::exp(v.log_mag() - top);
    };
    double k = kWgk[7] * scaled(14);
    double gs = kWg[3] * scaled(14);
    for (int i = 0; i < 7; ++i) {
        const double s = scaled(2 * i) + scaled(2 * i + 1);
        k += kWgk[i] * s;
        if (i % 2 == 1) gs += kWg[i / 2] * s;
    }
    const double log_h = std::log(h);
    p.value = LogScalar::from_real(k) * LogScalar::from_log(top + log_h);
    double e = std::fabs(k - gs);
    // Roundoff floor so flat panels stop refining.
    e = std::max(e, 50.0 * std::numeric_limits<double>::epsilon() * std::fabs(k));
    p.err = LogScalar::from_real(e) * LogScalar::from_log(top + log_h);
    return p;
}

}  // namespace

QuadratureResult integrate_variable(const Integrand& g, double a, double b,
                                    const QuadratureSpec& spec, const std::vector<double>& breaks) {
    spec.validate();
    if (!(std::isfinite(a) && std::isfinite(b))) throw ParameterError("integrate: limits must be finite");
    if (!(a < b)) {
        if (a == b) return {};
        throw ParameterError("integrate: lower limit exceeds upper limit");
    }
    std::vector<double> cuts{a};
    std::vector<double> inner;
    for (double x : breaks)
        if (x > a && x < b) inner.push_back(x);
    std::sort(inner.begin(), inner.end());
    inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
    for (double x : inner) cuts.push_back(x);
    cuts.push_back(b);

    std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
    long count = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const int pieces = static_cast<int>(std::clamp(std::ceil(len / 4.0), 1.0, 64.0));
        for (int j = 0; j < pieces; ++j) {
            const double lo = cuts[i] + len * j / pieces;
            const double hi = (j + 1 == pieces) ? cuts[i + 1] : cuts[i] + len * (j + 1) / pieces;
            heap.push(gk15(g, lo, hi));
            ++count;
        }
    }

    auto totals = [&heap]() {
        // Sum in a fixed order for determinism.
        std::vector<Panel> all;
        auto copy = heap;
        while (!copy.empty()) {
            all.push_back(copy.top());
            copy.pop();
        }
        std::sort(all.begin(), all.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
        LogScalar v, e;
        for (const auto& p : all) {
            v += p.value;
            e += p.err;
        }
        return std::pair{v, e};
    };

    LogScalar run_v, run_e;
    {
        auto [v, e] = totals();
        run_v = v;
        run_e = e;
    }
    long subdivisions = 0;
    for (;;) {
        const LogScalar target = run_v.abs() * LogScalar::from_real(spec.rel_tol);
        if (run_e <= target) {
            auto [v, e] = totals();
            run_v = v;
            run_e = e;
            if (run_e <= run_v.abs() * LogScalar::from_real(spec.rel_tol)) break;
        }
        if (subdivisions >= spec.max_subdivisions) {
            auto [v, e] = totals();
            throw AccuracyError("integrate: no convergence within max_subdivisions", v, e);
        }
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            auto [v, e] = totals();
            if (e <= v.abs() * LogScalar::from_real(spec.rel_tol)) break;
            throw AccuracyError("integrate: interval cannot be subdivided further", v, e);
        }
        heap.pop();
        Panel left = gk15(g, worst.a, mid);
        Panel right = gk15(g, mid, worst.b);
        run_v = run_v - worst.value + left.value + right.value;
        run_e = run_e - worst.err + left.err + right.err;
        if (run_e.sign() < 0) run_e = LogScalar::zero();
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        ++count;
    }
    QuadratureResult r;
    r.value = run_v;
    r.abs_error = run_e;
    r.subdivisions = subdivisions;
    return r;
}

QuadratureResult integrate_detailed(const Integrand& f, double lo, double hi,
                                    const QuadratureSpec& spec, std::vector<double> breakpoints,
                                    const TailFn& tail) {
    spec.validate();
    if (!(lo >= 0.0) || std::isnan(hi)) throw ParameterError("integrate: invalid limits");
    if (spec.substitution == Substitution::log && !(lo > 0.0))
        throw ParameterError("integrate: log substitution needs lo > 0");
    LogScalar tail_value;
    if (hi == kInf) {
        if (!tail) throw UnsupportedError("integrate: infinite upper limit needs a closed-form tail");
        double cut = -kInf;
        for (double x : breakpoints)
            if (x > lo && std::isfinite(x)) cut = std::max(cut, x);
        if (cut == -kInf) throw UnsupportedError("integrate: infinite upper limit needs a finite breakpoint");
        tail_value = tail(cut);
        hi = cut;
    }
    QuadratureResult r;
    if (spec.substitution == Substitution::log) {
        std::vector<double> tb;
        for (double x : breakpoints)
            if (x > 0 && std::isfinite(x)) tb.push_back(std::log(x));
        Integrand g = [&f](double t) {
            const LogScalar v = f(std::exp(t));
            return v.is_zero() ? v : v * LogScalar::from_log(t);
        };
        r = integrate_variable(g, std::log(lo), std::log(hi), spec, tb);
    } else {
        r = integrate_variable(f, lo, hi, spec, breakpoints);
    }
    r.value += tail_value;
    return r;
}

LogScalar integrate(const Integrand& f, double lo, double hi, const QuadratureSpec& spec,
                    std::vector<double> breakpoints, const TailFn& tail) {
    return integrate_detailed(f, lo, hi, spec, std::move(breakpoints), tail).value;
}

}  // namespace radcap
