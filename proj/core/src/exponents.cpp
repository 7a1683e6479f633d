#include "radcap/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace radcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> log_measures(const MeasureProfile& P, const std::vector<double>& grid) {
    std::vector<double> lf(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) lf[i] = P.ball_measure_log(grid[i]).log_mag();
    return lf;
}

// Geometric grid plus any ladder landmarks inside the window; ladder features can be far
// narrower than the grid spacing.
std::vector<double> sample_grid(const MeasureProfile& P, double t_lo, double t_hi, int count) {
    auto grid = log_grid(t_lo, t_hi, count);
    if (!P.has_density()) return grid;
    for (const auto& l : P.weight().landmarks)
        if (l.t > t_lo && l.t < t_hi) grid.push_back(l.t);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

void check_window(double t_lo, double t_hi, int samples) {
    if (samples < 8) throw ParameterError("exponent estimation needs at least 8 samples");
    if (!(t_lo < t_hi)) throw ParameterError("exponent estimation: need r_lo < r_hi");
    if (t_lo < 0 && t_hi > 0) throw ParameterError("exponent estimation: window must not straddle r = 1");
}

// Index pairs (i, j), i < j, with t_j - t_i >= min_spread, subsampled deterministically.
std::vector<std::pair<int, int>> grid_pairs(const std::vector<double>& t, double min_spread, long max_pairs,
                                            std::uint64_t seed) {
    std::vector<std::pair<int, int>> all;
    const int m = static_cast<int>(t.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (t[j] - t[i] >= min_spread * (1 - 1e-12)) all.emplace_back(i, j);
    if (static_cast<long>(all.size()) <= max_pairs) return all;
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(max_pairs));
    std::sort(all.begin(), all.end());
    return all;
}

double min_spread(const MeasureProfile& P, const ExponentConfig& cfg) {
    const double s = cfg.min_log_ratio.value_or(P.q_min_log_ratio());
    if (!(s > 0)) throw ParameterError("exponent estimation: minimum log(R/r) must be positive");
    return s;
}

// x grows towards the limit (r -> 0, r -> inf, or R/r -> inf).
double peak_growth(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.empty()) throw ParameterError("attainment: window holds no usable samples");
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) return 0.0;
    const double split = lo > 0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    double near = -kInf, far = -kInf;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double& peak = x[i] < split ? near : far;
        peak = std::max(peak, y[i]);
    }
    if (near == -kInf || far == -kInf) return 0.0;
    return (far - near) / (0.5 * (split + hi) - 0.5 * (lo + split));
}

}  // namespace

const char* to_string(SetId s) {
    switch (s) {
        case SetId::lQ0: return "lQ0";
        case SetId::lS0: return "lS0";
        case SetId::uS0: return "uS0";
        case SetId::uQ0: return "uQ0";
        case SetId::lQinf: return "lQinf";
        case SetId::lSinf: return "lSinf";
        case SetId::uSinf: return "uSinf";
        case SetId::uQinf: return "uQinf";
    }
    return "?";
}

const char* to_string(Attainment a) {
    switch (a) {
        case Attainment::yes: return "yes";
        case Attainment::no: return "no";
        case Attainment::inconclusive: return "inconclusive";
    }
    return "?";
}

bool is_at_zero(SetId s) { return static_cast<int>(s) < 4; }

bool is_lower_set(SetId s) {
    return s == SetId::lQ0 || s == SetId::lS0 || s == SetId::lQinf || s == SetId::lSinf;
}

SEndpoints s_endpoints_log(const MeasureProfile& P, double t_lo, double t_hi, int samples,
                           const ExponentConfig& cfg) {
    check_window(t_lo, t_hi, samples);
    auto extremes = [&](int count) {
        SEndpoints e{kInf, -kInf, count};
        for (double t : sample_grid(P, t_lo, t_hi, count)) {
            if (std::fabs(t) < 1e-9) continue;
            const double q = P.ball_measure_log(t).log_mag() / t;
            e.q0 = std::min(e.q0, q);
            e.q1 = std::max(e.q1, q);
        }
        return e;
    };
    SEndpoints cur = extremes(samples);
    for (int count = 2 * samples; count <= cfg.max_samples; count *= 2) {
        const SEndpoints next = extremes(count);
        const bool settled = std::fabs(next.q0 - cur.q0) < cfg.refine_tol && std::fabs(next.q1 - cur.q1) < cfg.refine_tol;
        cur = next;
        if (settled) break;
    }
    return cur;
}

SEndpoints s_endpoints(const MeasureProfile& P, double r_lo, double r_hi, int samples) {
    if (!(r_lo > 0)) throw ParameterError("s_endpoints: r_lo must be positive");
    return s_endpoints_log(P, std::log(r_lo), std::log(r_hi), samples);
}

QEndpoints q_endpoints_log(const MeasureProfile& P, double t_lo, double t_hi, int samples,
                           const ExponentConfig& cfg) {
    check_window(t_lo, t_hi, samples);
    const auto grid = sample_grid(P, t_lo, t_hi, samples);
    const auto lf = log_measures(P, grid);
    const auto pairs = grid_pairs(grid, min_spread(P, cfg), cfg.max_pairs, cfg.seed);
    if (pairs.empty()) throw ParameterError("q_endpoints: window shorter than the minimum ratio R/r");
    QEndpoints e{kInf, -kInf, static_cast<long>(pairs.size())};
    for (auto [i, j] : pairs) {
        const double s = (lf[j] - lf[i]) / (grid[j] - grid[i]);
        e.sup_lQ = std::min(e.sup_lQ, s);
        e.inf_uQ = std::max(e.inf_uQ, s);
    }
    return e;
}

QEndpoints q_endpoints(const MeasureProfile& P, double r_lo, double r_hi, int samples) {
    if (!(r_lo > 0)) throw ParameterError("q_endpoints: r_lo must be positive");
    return q_endpoints_log(P, std::log(r_lo), std::log(r_hi), samples);
}

Bracket q_bracket_analytic(const MeasureProfile& P, std::optional<ScaleWindow> window, bool at_zero) {
    if (!P.has_density()) throw UnsupportedError("q_bracket_analytic: profile has no density");
    const ScaleWindow win = window.value_or(at_zero ? P.window_zero() : P.window_inf());
    const auto& w = P.weight();
    Bracket b{kInf, -kInf};
    constexpr int per_piece = 17;
    for (const auto& p : w.pieces) {
        const double lo = std::max(p.t_lo, win.t_lo);
        const double hi = std::min(p.t_hi, win.t_hi);
        if (!(lo < hi)) continue;
        // Interior points only; r f'/f is taken essentially.
        const double pad = 1e-9 * (hi - lo);
        for (int i = 0; i < per_piece; ++i) {
            const double t = (lo + pad) + (hi - lo - 2 * pad) * i / (per_piece - 1);
            const double v = std::exp(P.density_log(t).log_mag() + t - P.ball_measure_log(t).log_mag());
            b.loq = std::min(b.loq, v);
            b.uq = std::max(b.uq, v);
        }
    }
    if (!(b.loq <= b.uq)) throw ParameterError("q_bracket_analytic: window contains no piece");
    return b;
}

AttainmentFit attainment_fit(const MeasureProfile& P, double q, SetId set, ScaleWindow win,
                             const ExponentConfig& cfg) {
    if (!(q > 0)) throw ParameterError("attainment: q must be positive");
    const auto grid = sample_grid(P, win.t_lo, win.t_hi, std::max(cfg.attain_samples, 8));
    const auto lf = log_measures(P, grid);
    std::vector<double> xs, ys;
    switch (set) {
        case SetId::lQ0:
        case SetId::lQinf:
        case SetId::uQ0:
        case SetId::uQinf: {
            const bool lower = set == SetId::lQ0 || set == SetId::lQinf;
            for (auto [i, j] : grid_pairs(grid, min_spread(P, cfg), cfg.max_pairs, cfg.seed)) {
                const double lr = grid[j] - grid[i];  // log(R/r)
                const double lratio = lf[i] - lf[j];  // log(f(r)/f(R))
                xs.push_back(lr);
                ys.push_back(lower ? lratio + q * lr : -lratio - q * lr);
            }
            break;
        }
        case SetId::lS0:  // f <= C r^q as r -> 0
        case SetId::uS0:  // f >= C r^q
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double y = lf[i] - q * grid[i];
                xs.push_back(-grid[i]);
                ys.push_back(set == SetId::lS0 ? y : -y);
            }
            break;
        case SetId::lSinf:  // f >= C r^q as r -> inf
        case SetId::uSinf:  // f <= C r^q
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double y = lf[i] - q * grid[i];
                xs.push_back(grid[i]);
                ys.push_back(set == SetId::uSinf ? y : -y);
            }
            break;
    }
    AttainmentFit fit;
    fit.slope = peak_growth(xs, ys);
    if (fit.slope <= cfg.attain_tol)
        fit.verdict = Attainment::yes;
    else if (fit.slope >= 3 * cfg.attain_tol)
        fit.verdict = Attainment::no;
    else
        fit.verdict = Attainment::inconclusive;
    return fit;
}

Attainment attainment(const MeasureProfile& P, double q, SetId set, const ExponentConfig& cfg) {
    const bool zero = is_at_zero(set);
    const ScaleWindow win = zero ? cfg.attain_zero.value_or(P.attain_zero()) : cfg.attain_inf.value_or(P.attain_inf());
    return attainment_fit(P, q, set, win, cfg).verdict;
}

ExponentReport exponent_report(const MeasureProfile& P, const ExponentConfig& cfg) {
    ExponentReport rep;
    for (int side = 0; side < 2; ++side) {
        const bool zero = side == 0;
        const ScaleWindow win = zero ? cfg.window_zero.value_or(P.window_zero()) : cfg.window_inf.value_or(P.window_inf());
        const ScaleWindow att = zero ? cfg.attain_zero.value_or(P.attain_zero()) : cfg.attain_inf.value_or(P.attain_inf());
        const SEndpoints s = s_endpoints_log(P, win.t_lo, win.t_hi, cfg.samples, cfg);
        const QEndpoints q = q_endpoints_log(P, win.t_lo, win.t_hi, cfg.samples, cfg);
        // At infinity log f / log r grows with f, so q0/q1 swap roles relative to 0.
        const SetId ids[4] = {zero ? SetId::lQ0 : SetId::lQinf, zero ? SetId::lS0 : SetId::lSinf,
                              zero ? SetId::uS0 : SetId::uSinf, zero ? SetId::uQ0 : SetId::uQinf};
        const double ends[4] = {q.sup_lQ, zero ? s.q0 : s.q0, zero ? s.q1 : s.q1, q.inf_uQ};
        for (int i = 0; i < 4; ++i) {
            SetEstimate& e = rep.get(ids[i]);
            e.set = ids[i];
            e.endpoint = ends[i];
            e.r_range = win;
            const AttainmentFit fit = attainment_fit(P, e.endpoint, ids[i], att, cfg);
            e.attained = fit.verdict;
            e.evidence_slope = fit.slope;
        }
        const double tol = rep.ordering_tolerance;
        const bool ok = ends[0] <= ends[1] + tol && ends[1] <= ends[2] + tol && ends[2] <= ends[3] + tol;
        rep.ordering_holds = rep.ordering_holds && ok;
        if (P.has_density()) {
            const Bracket b = q_bracket_analytic(P, win, zero);
            (zero ? rep.bracket_zero : rep.bracket_inf) = b;
        }
    }
    return rep;
}

}  // namespace radcap
