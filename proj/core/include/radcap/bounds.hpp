#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radcap/capacity.hpp"
#include "radcap/exponents.hpp"
#include "radcap/measure.hpp"

namespace radcap {

enum class Direction { upper, lower };
// small: R <= R0 (top of the small-radius ladder); large: r >= e.
enum class Regime { small, large, all };

const char* to_string(Direction d);
const char* to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct BoundInputs {
    LogScalar f_r, f_R;  // mu(B_r), mu(B_R)
    double t_r = 0.0, t_R = 0.0;
    double p = 2.0;
    std::optional<double> q;
};

struct HypothesisContext {
    const ExponentReport* report = nullptr;
    double p = 2.0;
    std::optional<double> q;  // user-supplied exponent, if any
    Regime regime = Regime::small;
    double margin = 0.05;
};

struct HypothesisResult {
    bool ok = false;
    std::string reason;       // failed predicate, or the predicate that held
    std::optional<double> q;  // exponent the formula will use
};

struct BoundSpec {
    std::string id;
    Direction direction = Direction::upper;
    std::string summary;
    bool needs_q = false;
    bool valid_at_p1 = false;
    std::function<LogScalar(const BoundInputs&)> formula;
    std::function<HypothesisResult(const HypothesisContext&)> hypotheses;
};

const std::vector<BoundSpec>& catalog();
const BoundSpec& find_bound(const std::string& id);

// Catalog entries whose hypotheses hold, each with the exponent it would use.
std::vector<std::pair<BoundSpec, HypothesisResult>> applicable_bounds(const ExponentReport& report, double p,
                                                                      std::optional<double> q, Regime regime,
                                                                      double margin = 0.05);

LogScalar evaluate_bound(const BoundSpec& spec, const MeasureProfile& P, double p, std::optional<double> q,
                         double t_r, double t_R);

// Log-radii grid; pairs (r, R) from the grid with min_log_ratio <= log(R/r) <= max_log_ratio.
struct GridSpec {
    double t_lo = -20.0, t_hi = -1.0;
    int points = 40;
    double min_log_ratio = 0.6931471805599453;
    double max_log_ratio = 1e300;
    bool include_landmarks = true;
};

GridSpec default_grid(const MeasureProfile& P, Regime regime);
std::vector<std::pair<double, double>> grid_pairs(const MeasureProfile& P, const GridSpec& grid);

struct CheckOptions {
    bool audit = false;  // evaluate even when hypotheses fail
    double tol = 1e3;
    double margin = 0.05;
    Regime regime = Regime::small;
    bool keep_rows = false;
};

struct CheckRow {
    double t_r = 0.0, t_R = 0.0;
    LogScalar capacity, bound;
    double log_ratio = 0.0;
};

struct BoundCheckReport {
    std::string bound_id;
    Direction direction = Direction::upper;
    Regime regime = Regime::small;
    GridSpec grid;
    long pairs = 0;
    double p = 2.0;
    std::optional<double> q;
    double log_ratio_min = 0.0, log_ratio_max = 0.0;  // log(capacity / bound)
    double fitted_constant = 0.0;  // extreme ratio in the direction of the bound
    bool consistent = true;
    std::pair<double, double> witness{0.0, 0.0};  // log-radii of the extreme pair
    std::optional<double> trend;  // slope of log ratio against log(R/r)
    bool audit = false;
    bool hypotheses_hold = true;
    std::string hypothesis_note;
    std::vector<CheckRow> rows;

    double ratio_min() const;
    double ratio_max() const;
};

BoundCheckReport check_bound(const BoundSpec& spec, const MeasureProfile& P, double p, std::optional<double> q,
                             const GridSpec& grid, const ExponentReport& report, const CheckOptions& opt = {});

// Columns r, R, capacity, bound, ratio.
std::string check_rows_csv(const BoundCheckReport& rep);

struct TrendReport {
    std::vector<double> x, log_ratio;
    double slope = 0.0, intercept = 0.0;
};

// log(capacity / bound) along a sequence of annuli, least-squares slope against x
// (x defaults to the sequence index).
TrendReport sharpness_scan(const MeasureProfile& P, double p, const BoundSpec& spec, std::optional<double> q,
                           const std::vector<std::pair<double, double>>& log_pairs,
                           std::optional<std::vector<double>> x = std::nullopt);

// Ratio of a lower bound to an upper bound over a grid; used where no exact capacity exists (p = 1).
struct BoundPairReport {
    std::string lower_id, upper_id;
    double log_ratio_max = 0.0;
    bool consistent = true;
};

BoundPairReport compare_bounds(const BoundSpec& lower, const BoundSpec& upper, const MeasureProfile& P, double p,
                               std::optional<double> q, const GridSpec& grid, double tol = 1e3);

}  // namespace radcap
