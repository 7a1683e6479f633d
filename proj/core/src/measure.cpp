#include "radcap/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace radcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);
const double kLn3 = std::log(3.0);

// Cantor function on [0, 1], resolved to `depth` ternary levels and interpolated
// log-linearly inside the unresolved intervals.
double cantor_function(double x, int depth) {
    constexpr double eps = 1e-12;
    if (x <= 0) return 0.0;
    if (x >= 1) return 1.0;
    double lo = 0.0, width = 1.0, flo = 0.0, fw = 1.0;
    // Doubles cannot resolve intervals much below 3^-32.
    const int levels = std::min(depth, 32);
    for (int i = 0; i < levels; ++i) {
        const double u = (x - lo) / width;
        if (u >= 1.0 - eps) return flo + fw;
        if (u <= eps) return flo;
        const double third = width / 3.0;
        if (u < 1.0 / 3.0 - eps) {
            width = third;
            fw *= 0.5;
        } else if (u <= 2.0 / 3.0 + eps) {
            return flo + 0.5 * fw;
        } else {
            lo += 2.0 * third;
            width = third;
            flo += 0.5 * fw;
            fw *= 0.5;
        }
    }
    const double u = std::clamp((x - lo) / width, 0.0, 1.0);
    if (flo > 0 && lo > 0) {
        const double s = std::log(x / lo) / std::log((lo + width) / lo);
        return flo * std::pow((flo + fw) / flo, s);
    }
    return flo + fw * u;
}

}  // namespace

std::vector<double> log_grid(double t_lo, double t_hi, int count) {
    if (count < 2) throw ParameterError("grid: need at least 2 points");
    if (!(t_lo < t_hi)) throw ParameterError("grid: need lo < hi");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = t_lo + (t_hi - t_lo) * i / (count - 1);
    g.back() = t_hi;
    return g;
}

MeasureProfile MeasureProfile::from_weight(RadialWeight w, QuadratureSpec spec) {
    w.validate();
    spec.validate();
    MeasureProfile P;
    P.source_ = ProfileSource::weight_derived;
    P.n_ = w.n;
    P.omega_ = unit_sphere_area(w.n);
    P.name_ = w.name;
    P.spec_ = spec;
    P.window_zero_ = w.window_zero;
    P.window_inf_ = w.window_inf;
    P.attain_zero_ = w.attain_zero;
    P.attain_inf_ = w.attain_inf;
    P.t_ladder_top_ = w.t_ladder_top;
    P.q_min_log_ratio_ = w.q_min_log_ratio;
    P.weight_ = std::make_shared<const RadialWeight>(std::move(w));
    const auto& pieces = P.weight_->pieces;
    P.cum_.assign(pieces.size(), LogScalar::zero());
    try {
        LogScalar acc;
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            const TermIntegral ti = integrate_power_log(P.measure_term(i), pieces[i].t_lo, pieces[i].t_hi, spec);
            acc += ti.value;
            P.cum_[i + 1] = acc;
            P.cum_err_ = std::max(P.cum_err_, ti.rel_error);
            P.cum_method_ = i == 0 ? ti.method : combine(P.cum_method_, ti.method);
        }
    } catch (const DivergenceError&) {
        P.divergent_ = true;
    }
    return P;
}

MeasureProfile MeasureProfile::cantor(int depth) {
    if (depth < 1 || depth > 40) throw ParameterError("cantor profile: depth must be in [1, 40]");
    MeasureProfile P;
    P.source_ = ProfileSource::tabulated;
    P.n_ = 1;
    P.omega_ = 2.0;
    P.name_ = "cantor";
    P.cantor_depth_ = depth;
    // Self-similarity makes the extrapolated scales exact; the deep window uses them.
    P.window_zero_ = {-std::ldexp(1.0, 21) * kLn3, -std::ldexp(1.0, 20) * kLn3};
    P.window_inf_ = {std::ldexp(1.0, 20) * kLn3, std::ldexp(1.0, 21) * kLn3};
    P.attain_zero_ = {-depth * kLn3, 0.0};
    P.attain_inf_ = {0.0, depth * kLn3};
    P.t_ladder_top_ = 0.0;
    return P;
}

MeasureProfile make_cantor_profile(int depth) { return MeasureProfile::cantor(depth); }

const RadialWeight& MeasureProfile::weight() const {
    if (!weight_) throw UnsupportedError("profile has no weight (tabulated)");
    return *weight_;
}

PowerLogTerm MeasureProfile::measure_term(std::size_t i) const {
    const auto& p = weight().pieces.at(i);
    return {LogScalar::from_real(omega_) * p.coeff, p.alpha + n_, p.beta};
}

LogScalar MeasureProfile::cantor_log(double t) const {
    // Reduce to x in [1/3, 1] using f(3x) = 2 f(x), then evaluate the staircase.
    double m;
    if (t <= 0) {
        m = std::ceil(-t / kLn3 - 1e-12) - 1.0;
        if (m < 0) m = 0;
    } else {
        m = -std::ceil(t / kLn3 - 1e-12);
    }
    const double x = std::exp(t + m * kLn3);
    const double F = cantor_function(x, cantor_depth_);
    return LogScalar::from_log(std::log(F) - m * kLn2);
}

LogScalar MeasureProfile::ball_measure_log(double t) const {
    if (std::isnan(t)) throw ParameterError("ball_measure: NaN radius");
    if (t == -kInf) return LogScalar::zero();
    if (source_ == ProfileSource::tabulated) return cantor_log(t);
    if (divergent_) throw DivergenceError("ball_measure: the measure of small balls is infinite");
    const auto& w = *weight_;
    const std::size_t i = w.piece_index_log(t);
    const auto& p = w.pieces[i];
    const TermIntegral ti = integrate_power_log(measure_term(i), p.t_lo, t, spec_);
    return cum_[i] + ti.value;
}

LogScalar MeasureProfile::density_log(double t) const {
    if (source_ == ProfileSource::tabulated)
        throw UnsupportedError("density: tabulated profile is not absolutely continuous");
    // f'(rho) = omega w(rho) rho^{n-1}
    return LogScalar::from_real(omega_) * eval_weight_log(*weight_, t) * LogScalar::from_log((n_ - 1) * t);
}

bool MeasureProfile::extrapolated_log(double t) const {
    if (source_ == ProfileSource::tabulated) return t < -cantor_depth_ * kLn3 || t > 0.0;
    return t < weight_->t_generated_lo || t > weight_->t_generated_hi;
}

LogScalar ball_measure(const MeasureProfile& P, double r) {
    if (!(r > 0)) throw ParameterError("ball_measure: r must be positive");
    return P.ball_measure_log(std::log(r));
}

LogScalar density(const MeasureProfile& P, double rho) {
    if (!(rho > 0)) throw ParameterError("density: rho must be positive");
    return P.density_log(std::log(rho));
}

DoublingReport doubling_scan_log(const MeasureProfile& P, double t_min, double t_max, int samples) {
    const auto grid = log_grid(t_min, t_max, samples);
    DoublingReport rep;
    rep.r_min = std::exp(t_min);
    rep.r_max = std::exp(t_max);
    std::vector<double> lf(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) lf[i] = P.ball_measure_log(grid[i]).log_mag();
    double best = -kInf;
    for (std::size_t i = 0; i < grid.size(); ++i)
        best = std::max(best, P.ball_measure_log(grid[i] + kLn2).log_mag() - lf[i]);
    rep.doubling_const = std::exp(best);
    for (double tau : {2.0, 4.0, 8.0, 16.0}) {
        double worst = kInf;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::min(worst, P.ball_measure_log(grid[i] + std::log(tau)).log_mag() - lf[i]);
        if (std::exp(worst) > 1.05) {
            rep.reverse_doubling = ReverseDoubling{tau, std::exp(worst)};
            break;
        }
    }
    return rep;
}

DoublingReport doubling_scan(const MeasureProfile& P, double r_min, double r_max, int samples) {
    if (!(r_min > 0 && r_min < r_max)) throw ParameterError("doubling_scan: need 0 < r_min < r_max");
    return doubling_scan_log(P, std::log(r_min), std::log(r_max), samples);
}

std::string measure_csv(const MeasureProfile& P, const std::vector<double>& log_radii) {
    std::ostringstream os;
    os << "r,f,fprime,flags\n";
    for (double t : log_radii) {
        os << format_decimal(LogScalar::from_log(t)) << ',' << format_decimal(P.ball_measure_log(t)) << ',';
        if (P.has_density())
            os << format_decimal(P.density_log(t));
        else
            os << "NA";
        os << ',' << (P.extrapolated_log(t) ? "extrapolated" : "") << '\n';
    }
    return os.str();
}

}  // namespace radcap
