#include "radcap/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSameExponent = 1e-9;

LogScalar over_power(LogScalar f, double t, double q) { return f * LogScalar::from_log(-q * t); }
LogScalar log_ratio_pow(const BoundInputs& in, double e) {
    return log_pow(LogScalar::from_real(in.t_R - in.t_r), e);
}
LogScalar radius_pow(double t, double e) { return LogScalar::from_log(e * t); }

// Membership tests against an estimated endpoint; margin absorbs grid error.
bool member_lower(const SetEstimate& s, double q, double margin) {
    if (!(q > 0)) return false;
    if (q < s.endpoint - margin) return true;
    return std::fabs(q - s.endpoint) <= margin && s.attained == Attainment::yes;
}
bool member_upper(const SetEstimate& s, double q, double margin) {
    if (q > s.endpoint + margin) return true;
    return std::fabs(q - s.endpoint) <= margin && s.attained == Attainment::yes;
}
double default_lower_q(const SetEstimate& s, double margin) {
    return s.attained == Attainment::yes ? s.endpoint : s.endpoint - margin;
}
double default_upper_q(const SetEstimate& s, double margin) {
    return s.attained == Attainment::yes ? s.endpoint : s.endpoint + margin;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

enum class Family { lQ, uQ, lS, uS };

// Set used in a regime: small radii read the at-0 sets, large radii the at-infinity sets.
SetId set_for(Family f, bool small) {
    switch (f) {
        case Family::lQ: return small ? SetId::lQ0 : SetId::lQinf;
        case Family::uQ: return small ? SetId::uQ0 : SetId::uQinf;
        case Family::lS: return small ? SetId::lS0 : SetId::lSinf;
        case Family::uS: return small ? SetId::uS0 : SetId::uSinf;
    }
    return SetId::lQ0;
}

bool is_lower_family(Family f) { return f == Family::lQ || f == Family::lS; }

using Check = std::function<HypothesisResult(const HypothesisContext&, bool small)>;

// Runs a per-regime check once (small or large) or in both regimes (all).
std::function<HypothesisResult(const HypothesisContext&)> per_regime(Check c) {
    return [c](const HypothesisContext& ctx) {
        if (!ctx.report) return HypothesisResult{false, "no exponent report", std::nullopt};
        if (ctx.regime != Regime::all) return c(ctx, ctx.regime == Regime::small);
        HypothesisResult a = c(ctx, true);
        if (!a.ok) return a;
        HypothesisResult b = c(ctx, false);
        if (!b.ok) return b;
        a.reason += "; " + b.reason;
        return a;
    };
}

// p in the set (or its interior).
Check p_in(Family f, bool interior) {
    return [f, interior](const HypothesisContext& ctx, bool small) {
        const SetEstimate& s = ctx.report->get(set_for(f, small));
        const bool lower = is_lower_family(f);
        bool ok;
        if (interior)
            ok = lower ? ctx.p < s.endpoint - ctx.margin : ctx.p > s.endpoint + ctx.margin;
        else
            ok = lower ? member_lower(s, ctx.p, ctx.margin) : member_upper(s, ctx.p, ctx.margin);
        const std::string rel = interior ? " in interior " : " in ";
        HypothesisResult r;
        r.ok = ok;
        r.reason = std::string(ok ? "" : "not ") + "p=" + fmt(ctx.p) + rel + to_string(s.set) + " (endpoint " +
                   fmt(s.endpoint) + ", attained " + to_string(s.attained) + ")";
        return r;
    };
}

// q in the set with a required side of p: -1 (q < p), +1 (q > p), 0 (any).
Check q_in(Family f, int side, bool allow_equal) {
    return [f, side, allow_equal](const HypothesisContext& ctx, bool small) {
        const SetEstimate& s = ctx.report->get(set_for(f, small));
        const bool lower = is_lower_family(f);
        const double q = ctx.q.value_or(lower ? default_lower_q(s, ctx.margin) : default_upper_q(s, ctx.margin));
        HypothesisResult r;
        r.q = q;
        const bool member = lower ? member_lower(s, q, ctx.margin) : member_upper(s, q, ctx.margin);
        const bool equal = std::fabs(q - ctx.p) <= kSameExponent;
        bool side_ok = side < 0 ? q < ctx.p - kSameExponent : side > 0 ? q > ctx.p + kSameExponent : true;
        if (equal && !allow_equal) side_ok = false;
        r.ok = member && side_ok && q > 0;
        r.reason = "q=" + fmt(q) + (member ? " in " : " not in ") + to_string(s.set) + " (endpoint " +
                   fmt(s.endpoint) + ", attained " + to_string(s.attained) + ")";
        if (!side_ok) r.reason += side < 0 ? ", need q < p" : side > 0 ? ", need q > p" : ", need q != p";
        return r;
    };
}

// Different sets at 0 and at infinity (the S-set bounds).
Check split(Check small_check, Check large_check) {
    return [small_check, large_check](const HypothesisContext& ctx, bool small) {
        return small ? small_check(ctx, true) : large_check(ctx, false);
    };
}

Check with_p_above_one(Check c) {
    return [c](const HypothesisContext& ctx, bool small) {
        if (!(ctx.p > 1)) return HypothesisResult{false, "need p > 1", std::nullopt};
        return c(ctx, small);
    };
}

std::vector<BoundSpec> build_catalog() {
    std::vector<BoundSpec> c;
    auto add = [&](std::string id, Direction d, std::string summary, bool needs_q, bool p1,
                   std::function<LogScalar(const BoundInputs&)> formula,
                   std::function<HypothesisResult(const HypothesisContext&)> hyp) {
        c.push_back({std::move(id), d, std::move(summary), needs_q, p1, std::move(formula), std::move(hyp)});
    };
    const auto always = [](const HypothesisContext&) { return HypothesisResult{true, "2r <= R", std::nullopt}; };

    add("UB-MIN", Direction::upper, "min(mu(B_r)/r^p, mu(B_R)/R^p)", false, true,
        [](const BoundInputs& in) {
            return std::min(over_power(in.f_r, in.t_r, in.p), over_power(in.f_R, in.t_R, in.p));
        },
        always);
    add("UB-LOG-lQ", Direction::upper, "mu(B_R)/R^p log(R/r)^(1-p), p in lQ", false, true,
        [](const BoundInputs& in) { return over_power(in.f_R, in.t_R, in.p) * log_ratio_pow(in, 1 - in.p); },
        per_regime(p_in(Family::lQ, false)));
    add("UB-LOG-uQ", Direction::upper, "mu(B_r)/r^p log(R/r)^(1-p), p in uQ", false, true,
        [](const BoundInputs& in) { return over_power(in.f_r, in.t_r, in.p) * log_ratio_pow(in, 1 - in.p); },
        per_regime(p_in(Family::uQ, false)));
    add("LB-INT-lQ", Direction::lower, "mu(B_r)/r^p, p in interior of lQ", false, false,
        [](const BoundInputs& in) { return over_power(in.f_r, in.t_r, in.p); },
        per_regime(p_in(Family::lQ, true)));
    add("LB-INT-uQ", Direction::lower, "mu(B_R)/R^p, p in interior of uQ", false, false,
        [](const BoundInputs& in) { return over_power(in.f_R, in.t_R, in.p); },
        per_regime(p_in(Family::uQ, true)));
    add("LB-BEYOND-lQ", Direction::lower, "mu(B_r)/r^q R^(q-p), q < p, q in lQ", true, false,
        [](const BoundInputs& in) {
            const double q = *in.q;
            return over_power(in.f_r, in.t_r, q) * radius_pow(in.t_R, q - in.p);
        },
        per_regime(q_in(Family::lQ, -1, false)));
    add("LB-BEYOND-uQ", Direction::lower, "mu(B_R)/R^q r^(q-p), q > p, q in uQ", true, false,
        [](const BoundInputs& in) {
            const double q = *in.q;
            return over_power(in.f_R, in.t_R, q) * radius_pow(in.t_r, q - in.p);
        },
        per_regime(q_in(Family::uQ, +1, false)));
    add("LB-LOGP-lQ", Direction::lower, "mu(B_r)/r^p log(R/r)^(-p), p in lQ", false, true,
        [](const BoundInputs& in) { return over_power(in.f_r, in.t_r, in.p) * log_ratio_pow(in, -in.p); },
        per_regime(p_in(Family::lQ, false)));
    add("LB-LOGP-uQ", Direction::lower, "mu(B_R)/R^p log(R/r)^(-p), p in uQ", false, true,
        [](const BoundInputs& in) { return over_power(in.f_R, in.t_R, in.p) * log_ratio_pow(in, -in.p); },
        per_regime(p_in(Family::uQ, false)));
    add("LB-BORDER-lQ", Direction::lower, "mu(B_r)/r^p log(R/r)^(1-p), p in lQ, p > 1", false, false,
        [](const BoundInputs& in) { return over_power(in.f_r, in.t_r, in.p) * log_ratio_pow(in, 1 - in.p); },
        per_regime(with_p_above_one(p_in(Family::lQ, false))));
    add("LB-BORDER-uQ", Direction::lower, "mu(B_R)/R^p log(R/r)^(1-p), p in uQ, p > 1", false, false,
        [](const BoundInputs& in) { return over_power(in.f_R, in.t_R, in.p) * log_ratio_pow(in, 1 - in.p); },
        per_regime(with_p_above_one(p_in(Family::uQ, false))));
    add("UB-S", Direction::upper, "R^(q-p) if q < p, r^(q-p) if q > p; q in lS0 (small) or uSinf (large)", true,
        true,
        [](const BoundInputs& in) {
            const double q = *in.q;
            return q < in.p ? radius_pow(in.t_R, q - in.p) : radius_pow(in.t_r, q - in.p);
        },
        per_regime(split(q_in(Family::lS, 0, false), q_in(Family::uS, 0, false))));
    add("UB-S-LOG", Direction::upper, "log(R/r)^(1-p); p in lS0 (small) or uSinf (large)", false, true,
        [](const BoundInputs& in) { return log_ratio_pow(in, 1 - in.p); },
        per_regime(split(p_in(Family::lS, false), p_in(Family::uS, false))));
    add("LB-S", Direction::lower,
        "R^(q-p) if q < p, r^(q-p) if q > p, log(R/r)^(-p) if q = p; q in uS0 (small) or lSinf (large)", true, true,
        [](const BoundInputs& in) {
            const double q = *in.q;
            if (std::fabs(q - in.p) <= kSameExponent) return log_ratio_pow(in, -in.p);
            return q < in.p ? radius_pow(in.t_R, q - in.p) : radius_pow(in.t_r, q - in.p);
        },
        per_regime(split(q_in(Family::uS, 0, true), q_in(Family::lS, 0, true))));
    add("LB-S-LOG", Direction::lower, "log(R/r)^(1-p); p in uS0 (small) or lSinf (large), p > 1", false, false,
        [](const BoundInputs& in) { return log_ratio_pow(in, 1 - in.p); },
        per_regime(with_p_above_one(split(p_in(Family::uS, false), p_in(Family::lS, false)))));
    return c;
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::upper ? "upper" : "lower"; }

const char* to_string(Regime r) {
    switch (r) {
        case Regime::small: return "small";
        case Regime::large: return "large";
        case Regime::all: return "all";
    }
    return "?";
}

Regime regime_from_string(const std::string& s) {
    if (s == "small") return Regime::small;
    if (s == "large") return Regime::large;
    if (s == "all") return Regime::all;
    throw ParameterError("unknown regime '" + s + "' (small, large, all)");
}

const std::vector<BoundSpec>& catalog() {
    static const std::vector<BoundSpec> c = build_catalog();
    return c;
}

const BoundSpec& find_bound(const std::string& id) {
    for (const auto& b : catalog())
        if (b.id == id) return b;
    throw ParameterError("unknown bound '" + id + "'");
}

std::vector<std::pair<BoundSpec, HypothesisResult>> applicable_bounds(const ExponentReport& report, double p,
                                                                      std::optional<double> q, Regime regime,
                                                                      double margin) {
    std::vector<std::pair<BoundSpec, HypothesisResult>> out;
    const HypothesisContext ctx{&report, p, q, regime, margin};
    for (const auto& b : catalog()) {
        if (!(p > 1) && !b.valid_at_p1) continue;
        HypothesisResult h = b.hypotheses(ctx);
        if (h.ok) out.emplace_back(b, std::move(h));
    }
    return out;
}

LogScalar evaluate_bound(const BoundSpec& spec, const MeasureProfile& P, double p, std::optional<double> q,
                         double t_r, double t_R) {
    if (spec.needs_q && !q) throw ParameterError(spec.id + ": needs an exponent q");
    if (!(t_r < t_R)) throw ParameterError(spec.id + ": need r < R");
    BoundInputs in{P.ball_measure_log(t_r), P.ball_measure_log(t_R), t_r, t_R, p, q};
    return spec.formula(in);
}

GridSpec default_grid(const MeasureProfile& P, Regime regime) {
    GridSpec g;
    if (regime == Regime::large) {
        g.t_lo = 1.0;
        g.t_hi = 41.0;
    } else {
        g.t_hi = P.t_ladder_top();
        double lo = g.t_hi - 200.0;
        if (P.has_density()) lo = std::max(lo, P.weight().t_generated_lo);
        g.t_lo = lo;
        if (regime == Regime::all) g.t_hi = 41.0;
    }
    return g;
}

std::vector<std::pair<double, double>> grid_pairs(const MeasureProfile& P, const GridSpec& grid) {
    if (!(grid.t_lo < grid.t_hi)) throw ParameterError("grid: need r_lo < r_hi");
    if (grid.points < 2) throw ParameterError("grid: need at least 2 points");
    if (!(grid.min_log_ratio >= 0.6931471805599453 * (1 - 1e-12)))
        throw ParameterError("grid: R/r must be at least 2");
    std::vector<double> t = log_grid(grid.t_lo, grid.t_hi, grid.points);
    if (grid.include_landmarks && P.has_density())
        for (const auto& l : P.weight().landmarks)
            if (l.t >= grid.t_lo && l.t <= grid.t_hi) t.push_back(l.t);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            const double d = t[j] - t[i];
            if (d >= grid.min_log_ratio * (1 - 1e-12) && d <= grid.max_log_ratio) out.emplace_back(t[i], t[j]);
        }
    return out;
}

double BoundCheckReport::ratio_min() const { return std::exp(log_ratio_min); }
double BoundCheckReport::ratio_max() const { return std::exp(log_ratio_max); }

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y, double* intercept = nullptr) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double s = sxx > 0 ? sxy / sxx : 0.0;
    if (intercept) *intercept = my - s * mx;
    return s;
}

bool in_regime(const MeasureProfile& P, Regime r, double t_r, double t_R) {
    constexpr double slack = 1e-12;
    if (r == Regime::small) return t_R <= P.t_ladder_top() + slack * std::max(1.0, std::fabs(P.t_ladder_top()));
    if (r == Regime::large) return t_r >= 1.0 - slack;
    return true;
}

}  // namespace

BoundCheckReport check_bound(const BoundSpec& spec, const MeasureProfile& P, double p, std::optional<double> q,
                             const GridSpec& grid, const ExponentReport& report, const CheckOptions& opt) {
    if (!(p > 1)) throw UnsupportedError("check_bound: exact capacity needs p > 1; use compare_bounds at p = 1");
    if (!(opt.tol > 1)) throw ParameterError("check_bound: tolerance must exceed 1");
    BoundCheckReport rep;
    rep.bound_id = spec.id;
    rep.direction = spec.direction;
    rep.regime = opt.regime;
    rep.grid = grid;
    rep.p = p;
    rep.audit = opt.audit;
    const HypothesisResult h = spec.hypotheses({&report, p, q, opt.regime, opt.margin});
    rep.hypotheses_hold = h.ok;
    rep.hypothesis_note = h.reason;
    if (!h.ok && !opt.audit) throw PreconditionError(spec.id + ": hypothesis fails: " + h.reason);
    rep.q = q ? q : h.q;
    if (spec.needs_q && !rep.q) throw ParameterError(spec.id + ": needs an exponent q");

    double lo = kInf, hi = -kInf;
    std::pair<double, double> arg_lo, arg_hi;
    std::vector<double> xs, ys;
    for (const auto& [tr, tR] : grid_pairs(P, grid)) {
        if (!in_regime(P, opt.regime, tr, tR)) continue;
        const LogScalar cap = annulus_capacity_log(P, p, tr, tR).value;
        const LogScalar b = spec.formula({P.ball_measure_log(tr), P.ball_measure_log(tR), tr, tR, p, rep.q});
        const double lr = cap.log_mag() - b.log_mag();
        if (lr < lo) {
            lo = lr;
            arg_lo = {tr, tR};
        }
        if (lr > hi) {
            hi = lr;
            arg_hi = {tr, tR};
        }
        xs.push_back(std::log(tR - tr));
        ys.push_back(lr);
        if (opt.keep_rows) rep.rows.push_back({tr, tR, cap, b, lr});
    }
    rep.pairs = static_cast<long>(xs.size());
    if (rep.pairs == 0) throw ParameterError(spec.id + ": grid has no pairs in the " + to_string(opt.regime) + " regime");
    rep.log_ratio_min = lo;
    rep.log_ratio_max = hi;
    const double ltol = std::log(opt.tol);
    if (spec.direction == Direction::upper) {
        rep.fitted_constant = std::exp(hi);
        rep.consistent = std::isfinite(hi) && hi <= ltol;
        rep.witness = arg_hi;
    } else {
        rep.fitted_constant = std::exp(lo);
        rep.consistent = std::isfinite(lo) && lo >= -ltol;
        rep.witness = arg_lo;
    }
    rep.trend = ls_slope(xs, ys);
    return rep;
}

std::string check_rows_csv(const BoundCheckReport& rep) {
    std::ostringstream os;
    os << "r,R,capacity,bound,ratio\n";
    for (const auto& row : rep.rows)
        os << format_decimal(LogScalar::from_log(row.t_r)) << ',' << format_decimal(LogScalar::from_log(row.t_R))
           << ',' << format_decimal(row.capacity) << ',' << format_decimal(row.bound) << ','
           << format_decimal(LogScalar::from_log(row.log_ratio)) << '\n';
    return os.str();
}

TrendReport sharpness_scan(const MeasureProfile& P, double p, const BoundSpec& spec, std::optional<double> q,
                           const std::vector<std::pair<double, double>>& log_pairs,
                           std::optional<std::vector<double>> x) {
    if (!(p > 1)) throw UnsupportedError("sharpness_scan: needs p > 1");
    if (x && x->size() != log_pairs.size()) throw ParameterError("sharpness_scan: x and pairs differ in length");
    TrendReport t;
    for (std::size_t i = 0; i < log_pairs.size(); ++i) {
        const auto [tr, tR] = log_pairs[i];
        const LogScalar cap = annulus_capacity_log(P, p, tr, tR).value;
        const LogScalar b = evaluate_bound(spec, P, p, q, tr, tR);
        t.log_ratio.push_back(cap.log_mag() - b.log_mag());
        t.x.push_back(x ? (*x)[i] : static_cast<double>(i));
    }
    t.slope = ls_slope(t.x, t.log_ratio, &t.intercept);
    return t;
}

BoundPairReport compare_bounds(const BoundSpec& lower, const BoundSpec& upper, const MeasureProfile& P, double p,
                               std::optional<double> q, const GridSpec& grid, double tol) {
    if (lower.direction != Direction::lower || upper.direction != Direction::upper)
        throw ParameterError("compare_bounds: need a lower and an upper bound");
    BoundPairReport rep{lower.id, upper.id, -kInf, true};
    for (const auto& [tr, tR] : grid_pairs(P, grid)) {
        const double l = evaluate_bound(lower, P, p, q, tr, tR).log_mag();
        const double u = evaluate_bound(upper, P, p, q, tr, tR).log_mag();
        rep.log_ratio_max = std::max(rep.log_ratio_max, l - u);
    }
    rep.consistent = rep.log_ratio_max <= std::log(tol);
    return rep;
}

}  // namespace radcap
