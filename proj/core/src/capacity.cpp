#include "radcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_p(double p) {
    if (std::isnan(p)) throw ParameterError("capacity: p is NaN");
    if (!(p > 1)) throw UnsupportedError("capacity: exact capacity needs p > 1");
}

void require_weight(const MeasureProfile& P) {
    if (!P.has_density()) throw UnsupportedError("capacity: profile has no density (tabulated)");
}

// Integral sum and bookkeeping over pieces meeting [t1, t2]; t1 may be -inf, t2 may be +inf.
struct Accumulated {
    LogScalar value;
    IntegralMethod method = IntegralMethod::closed_form;
    double rel_error = 0.0;
    bool divergent = false;
};

Accumulated integrate_capacity(const MeasureProfile& P, double p, double t1, double t2, bool force_quadrature) {
    const auto& w = P.weight();
    Accumulated acc;
    bool first = true;
    const std::size_t start = std::isfinite(t1) ? w.piece_index_log(t1) : 0;
    for (std::size_t i = start; i < w.pieces.size(); ++i) {
        const auto& pc = w.pieces[i];
        const double lo = std::max(pc.t_lo, t1);
        const double hi = std::min(pc.t_hi, t2);
        if (lo >= t2) break;
        if (!(lo < hi)) continue;
        const PowerLogTerm term = capacity_term(P, i, p);
        if (!power_log_converges(term.a, term.b, lo, hi)) {
            acc.divergent = true;
            return acc;
        }
        const TermIntegral ti = integrate_power_log(term, lo, hi, P.quadrature(), force_quadrature);
        acc.value += ti.value;
        acc.rel_error = std::max(acc.rel_error, ti.rel_error);
        acc.method = first ? ti.method : combine(acc.method, ti.method);
        first = false;
    }
    return acc;
}

CapacityResult from_integral(const Accumulated& acc, double p) {
    CapacityResult r;
    r.method = acc.method;
    if (acc.divergent) {
        r.integral_value = LogScalar::pos_inf();
        r.value = LogScalar::zero();
        return r;
    }
    r.integral_value = acc.value;
    r.value = acc.value.is_zero() ? LogScalar::pos_inf() : log_pow(acc.value, 1.0 - p);
    r.error_bound = (p - 1.0) * acc.rel_error;
    return r;
}

}  // namespace

PowerLogTerm capacity_term(const MeasureProfile& P, std::size_t i, double p) {
    const auto& pc = P.weight().pieces.at(i);
    const double e = 1.0 / (1.0 - p);
    const LogScalar oc = LogScalar::from_real(P.omega()) * pc.coeff;
    return {log_pow(oc, e), (pc.alpha + P.n() - 1.0) * e + 1.0, pc.beta * e};
}

CapacityResult annulus_capacity_log(const MeasureProfile& P, double p, double t_r, double t_R, bool force_quadrature) {
    require_p(p);
    require_weight(P);
    if (std::isnan(t_r) || std::isnan(t_R)) throw ParameterError("capacity: NaN radius");
    if (!(t_r < t_R)) throw ParameterError("capacity: need r < R");
    if (!std::isfinite(t_R)) throw ParameterError("capacity: R = inf goes through whole_space_capacity");
    if (!std::isfinite(t_r)) throw ParameterError("capacity: r must be positive");
    return from_integral(integrate_capacity(P, p, t_r, t_R, force_quadrature), p);
}

CapacityResult annulus_capacity(const MeasureProfile& P, double p, double r, double R, bool force_quadrature) {
    if (!(r > 0)) throw ParameterError("capacity: r must be positive");
    if (!(r < R)) throw ParameterError("capacity: need r < R");
    return annulus_capacity_log(P, p, std::log(r), std::log(R), force_quadrature);
}

CapacityResult whole_space_capacity_log(const MeasureProfile& P, double p, double t_r) {
    require_p(p);
    require_weight(P);
    if (!std::isfinite(t_r)) throw ParameterError("whole_space_capacity: r must be positive and finite");
    const auto& last = P.weight().pieces.back();
    if (last.extended)
        throw UnsupportedError("whole_space_capacity: the final piece continues a truncated ladder, not a power-log tail");
    const CapacityResult res = from_integral(integrate_capacity(P, p, t_r, kInf, false), p);
    // The annuli B_{2^j r} must decrease towards the limit.
    LogScalar prev = LogScalar::pos_inf();
    for (int j : {1, 2, 4, 8, 16, 32}) {
        const LogScalar c = annulus_capacity_log(P, p, t_r, t_r + j * std::log(2.0)).value;
        const LogScalar slack = LogScalar::from_real(1.0 + 1e-8);
        if (c > prev * slack || res.value > c * slack)
            throw AccuracyError("whole_space_capacity: annulus limit check failed", res.value, c);
        prev = c;
    }
    return res;
}

CapacityResult whole_space_capacity(const MeasureProfile& P, double p, double r) {
    if (!(r > 0)) throw ParameterError("whole_space_capacity: r must be positive");
    return whole_space_capacity_log(P, p, std::log(r));
}

const char* to_string(PointCapacity c) {
    switch (c) {
        case PointCapacity::zero: return "zero";
        case PointCapacity::positive: return "positive";
        case PointCapacity::indeterminate: return "indeterminate";
    }
    return "?";
}

PointCapacityLimit point_capacity_limit_log(const MeasureProfile& P, double p, double t_R) {
    require_p(p);
    require_weight(P);
    if (!std::isfinite(t_R)) throw ParameterError("point_capacity_limit: R must be positive and finite");
    if (P.weight().pieces.front().extended)
        throw UnsupportedError("point_capacity_limit: the leading piece continues a truncated ladder");
    const CapacityResult res = from_integral(integrate_capacity(P, p, -kInf, t_R, false), p);
    PointCapacityLimit out;
    if (res.integral_value.is_pos_inf()) {
        out.kind = PointCapacity::zero;
    } else {
        out.kind = PointCapacity::positive;
        out.value = res;
    }
    return out;
}

PointCapacityLimit point_capacity_limit(const MeasureProfile& P, double p, double R) {
    if (!(R > 0)) throw ParameterError("point_capacity_limit: R must be positive");
    return point_capacity_limit_log(P, p, std::log(R));
}

namespace {

// q in a lower set (0, e] / (0, e): below by margin, or at the endpoint when attained.
bool in_lower(const SetEstimate& s, double q, double margin) {
    if (q < s.endpoint - margin) return true;
    return std::fabs(q - s.endpoint) <= margin && s.attained == Attainment::yes;
}

bool outside_upper(const SetEstimate& s, double q, double margin) {
    if (q < s.endpoint - margin) return true;
    return std::fabs(q - s.endpoint) <= margin && s.attained == Attainment::no;
}

bool outside_lower(const SetEstimate& s, double q, double margin) {
    if (q > s.endpoint + margin) return true;
    return std::fabs(q - s.endpoint) <= margin && s.attained == Attainment::no;
}

bool in_upper(const SetEstimate& s, double q, double margin) {
    if (q > s.endpoint + margin) return true;
    return std::fabs(q - s.endpoint) <= margin && s.attained == Attainment::yes;
}

}  // namespace

PointCapacity classify_point_capacity_by_exponents(const ExponentReport& report, double p, double margin) {
    const SetEstimate& lS = report.get(SetId::lS0);
    const SetEstimate& uS = report.get(SetId::uS0);
    if (outside_upper(uS, p, margin) || (p > 1 && in_lower(lS, p, margin))) return PointCapacity::zero;
    if (p > uS.endpoint + margin) return PointCapacity::positive;
    return PointCapacity::indeterminate;
}

const char* to_string(Parabolicity v) {
    switch (v) {
        case Parabolicity::parabolic: return "parabolic";
        case Parabolicity::hyperbolic: return "hyperbolic";
        case Parabolicity::indeterminate: return "indeterminate";
    }
    return "?";
}

ParabolicityResult parabolicity(const MeasureProfile& P, double p, const ExponentReport& report, double margin) {
    const SetEstimate& lS = report.get(SetId::lSinf);
    const SetEstimate& uS = report.get(SetId::uSinf);
    ParabolicityResult out;
    if (outside_lower(lS, p, margin) || (p > 1 && in_upper(uS, p, margin)))
        out.verdict = Parabolicity::parabolic;
    else if (p < lS.endpoint - margin)
        out.verdict = Parabolicity::hyperbolic;
    if (out.verdict != Parabolicity::indeterminate || !(p > 1) || !P.has_density() ||
        P.weight().pieces.back().extended)
        return out;
    // Zero capacity for one ball means zero for all, so any radius past the last breakpoint will do.
    const double t_r = std::max(P.weight().pieces.back().t_lo, 0.0) + 1.0;
    out.whole_space = whole_space_capacity_log(P, p, t_r);
    out.resolved_by_integral = true;
    out.verdict = out.whole_space->value.is_zero() ? Parabolicity::parabolic : Parabolicity::hyperbolic;
    return out;
}

ParabolicityResult parabolicity(const MeasureProfile& P, double p) { return parabolicity(P, p, exponent_report(P)); }

std::string capacity_csv(const MeasureProfile& P, double p, const std::vector<std::pair<double, double>>& pairs) {
    std::ostringstream os;
    os << "r,R,capacity,integral,method,error_bound\n";
    for (const auto& [tr, tR] : pairs) {
        const CapacityResult c =
            std::isfinite(tR) ? annulus_capacity_log(P, p, tr, tR) : whole_space_capacity_log(P, p, tr);
        os << format_decimal(LogScalar::from_log(tr)) << ','
           << (std::isfinite(tR) ? format_decimal(LogScalar::from_log(tR)) : std::string("inf")) << ','
           << format_decimal(c.value) << ',' << format_decimal(c.integral_value) << ',' << to_string(c.method)
           << ',' << format_decimal(LogScalar::from_real(c.error_bound), 3) << '\n';
    }
    return os.str();
}

}  // namespace radcap
