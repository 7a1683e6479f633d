#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radcap/numerics.hpp"
#include "radcap/power_log.hpp"
#include "radcap/weights.hpp"

namespace radcap {

enum class ProfileSource { weight_derived, tabulated };

// f(r) = mu(B_r), either from a radial weight or a tabulated Cantor staircase.
class MeasureProfile {
public:
    static MeasureProfile from_weight(RadialWeight w, QuadratureSpec spec = {});
    static MeasureProfile cantor(int depth);

    ProfileSource source() const { return source_; }
    bool has_density() const { return source_ == ProfileSource::weight_derived; }
    int n() const { return n_; }
    double omega() const { return omega_; }
    const std::string& name() const { return name_; }
    const RadialWeight& weight() const;
    const QuadratureSpec& quadrature() const { return spec_; }

    LogScalar ball_measure_log(double t) const;
    LogScalar density_log(double t) const;
    bool extrapolated_log(double t) const;

    ScaleWindow window_zero() const { return window_zero_; }
    ScaleWindow window_inf() const { return window_inf_; }
    ScaleWindow attain_zero() const { return attain_zero_; }
    ScaleWindow attain_inf() const { return attain_inf_; }
    double t_ladder_top() const { return t_ladder_top_; }
    double q_min_log_ratio() const { return q_min_log_ratio_; }

    // Per weight piece: omega * c * exp((alpha + n) t) |t|^beta.
    PowerLogTerm measure_term(std::size_t piece) const;
    // Worst relative error of the cached cumulative values.
    double cumulative_rel_error() const { return cum_err_; }
    IntegralMethod cumulative_method() const { return cum_method_; }

private:
    ProfileSource source_ = ProfileSource::weight_derived;
    int n_ = 2;
    double omega_ = 0.0;
    std::string name_;
    std::shared_ptr<const RadialWeight> weight_;
    QuadratureSpec spec_;
    std::vector<LogScalar> cum_;  // f at the left end of each piece
    bool divergent_ = false;
    double cum_err_ = 0.0;
    IntegralMethod cum_method_ = IntegralMethod::closed_form;
    int cantor_depth_ = 0;
    ScaleWindow window_zero_, window_inf_, attain_zero_, attain_inf_;
    double t_ladder_top_ = 0.0;
    double q_min_log_ratio_ = 0.6931471805599453;

    LogScalar cantor_log(double t) const;
};

LogScalar ball_measure(const MeasureProfile& P, double r);
LogScalar density(const MeasureProfile& P, double rho);
MeasureProfile make_cantor_profile(int depth);

struct ReverseDoubling {
    double tau = 0.0;
    double gamma = 0.0;
};

struct DoublingReport {
    double doubling_const = 0.0;
    std::optional<ReverseDoubling> reverse_doubling;
    double r_min = 0.0, r_max = 0.0;
};

DoublingReport doubling_scan(const MeasureProfile& P, double r_min, double r_max, int samples);
DoublingReport doubling_scan_log(const MeasureProfile& P, double t_min, double t_max, int samples);

// Columns r, f, fprime, flags.
std::string measure_csv(const MeasureProfile& P, const std::vector<double>& log_radii);

// Geometric grid of `count` log-radii from t_lo to t_hi inclusive.
std::vector<double> log_grid(double t_lo, double t_hi, int count);

}  // namespace radcap
