#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radcap/numerics.hpp"

namespace radcap {

// c * rho^alpha * |log rho|^beta on [lo, hi). Radii are kept as log-radii t so that
// ladders far below the double range stay representable; lo/hi are the plain radii
// (they may underflow to 0 for very deep pieces).
struct WeightPiece {
    double lo = 0.0, hi = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    LogScalar coeff = LogScalar::one();
    double alpha = 0.0;
    double beta = 0.0;
    bool extended = false;  // continuation of the deepest generated ladder piece

    static WeightPiece from_radii(double lo, double hi, LogScalar c, double alpha, double beta = 0.0);
    static WeightPiece from_log_radii(double t_lo, double t_hi, LogScalar c, double alpha,
                                      double beta = 0.0);

    LogScalar value_at_log(double t) const;
    double log_derivative_at_log(double t) const { return alpha + (beta == 0.0 ? 0.0 : beta / t); }
};

struct ScaleWindow {
    double t_lo = 0.0, t_hi = 0.0;
};

struct Landmark {
    std::string label;
    int k = 0;
    double t = 0.0;
};

struct RadialWeight {
    int n = 2;
    std::vector<WeightPiece> pieces;
    bool continuity_enforced = true;
    std::string name = "explicit";
    int ladder_depth = 0;
    std::vector<Landmark> landmarks;
    // Range of log-radii where pieces are generated rather than extended.
    double t_generated_lo = -1e300, t_generated_hi = 1e300;
    // Log-radius of the top of the small-radius ladder (R0 of the small regime).
    double t_ladder_top = 0.0;
    // Scales used by the exponent estimators (deep) and attainment fits (moderate).
    ScaleWindow window_zero{-1e12, -1e11}, window_inf{1e11, 1e12};
    ScaleWindow attain_zero{-44.3614195558365, 0.0}, attain_inf{0.0, 44.3614195558365};
    // Smallest log(R/r) used for ratio slopes. Log-periodic profiles need it large:
    // over half a period the slope sits at the local rf'/f, not at the endpoint.
    double q_min_log_ratio = 0.6931471805599453;

    void validate() const;
    std::size_t piece_index_log(double t) const;  // right-continuous
    std::vector<double> log_breakpoints() const;
};

enum class Side { none, left, right };

LogScalar eval_weight(const RadialWeight& w, double rho);
LogScalar eval_weight_log(const RadialWeight& w, double t);

// rho w'/w. At a breakpoint requires a side, otherwise UndefinedPointError.
double log_derivative_ratio(const RadialWeight& w, double rho, Side side = Side::none);
double log_derivative_ratio_log(const RadialWeight& w, double t, Side side = Side::none);

struct AdmissibilityVerdict {
    bool passes = false;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double witness_rho = 0.0;     // where the lower bound is attained (for a failure)
    double witness_t = 0.0;
    // Fails only because gamma1 >= n-1 while gamma1 < n: the criterion is sufficient,
    // not necessary, so no claim is made about the weight itself.
    bool caveat = false;
};

AdmissibilityVerdict check_admissible(const RadialWeight& w);

struct StretchVerdict {
    bool ok = false;
    double m = 0.0;
    double M = 0.0;
};

StretchVerdict check_quasiconformal_stretch(const RadialWeight& w);

struct LadderOptions {
    int depth = -1;  // -1: deepest level with all log-radii within 2^30 log 2, at most 64
};

RadialWeight make_constant(int n);
RadialWeight make_power(int n, double alpha);
RadialWeight make_power_log_at_zero(int n, double p, double beta);
RadialWeight make_power_log_at_infinity(int n, double p, double beta);
RadialWeight make_ex1(LadderOptions opt = {});
RadialWeight make_ex_S_touch(LadderOptions opt = {});
RadialWeight make_abcd(int n, double a, double b, double c, double d, LadderOptions opt = {});
RadialWeight make_oscillating(int n, LadderOptions opt = {});
// log(2 + rho) as a continuous piecewise power-log interpolant.
RadialWeight make_log_two_plus(int n, int pieces_per_decade = 8);

// Ladder quantities shared by builders and tests.
double ex1_log_alpha(int k);  // log 2^{-2^k}
double ex1_log_beta(int k);   // 1.5 log alpha_k

// Weight grammar: JSON object {"builder": name, ...params} or {"n": .., "pieces": [..]}.
RadialWeight parse_weight(const std::string& text);
std::string serialize_weight(const RadialWeight& w);
bool bitwise_equal(const RadialWeight& a, const RadialWeight& b);

// Builder dispatch by name; params are builder-specific (n, p, beta, a, b, c, d, depth).
struct BuilderParams {
    std::optional<int> n;
    std::optional<double> p, beta, alpha, a, b, c, d;
    std::optional<int> depth;
};
RadialWeight build_weight(const std::string& name, const BuilderParams& params);
std::vector<std::string> builder_names();

}  // namespace radcap
