#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "radcap/measure.hpp"

namespace radcap {

enum class SetId { lQ0, lS0, uS0, uQ0, lQinf, lSinf, uSinf, uQinf };
enum class Attainment { yes, no, inconclusive };

const char* to_string(SetId s);
const char* to_string(Attainment a);
bool is_at_zero(SetId s);
// Lower sets are intervals (0, e] or (0, e); upper sets [e, inf) or (e, inf).
bool is_lower_set(SetId s);

struct SEndpoints {
    double q0 = 0.0, q1 = 0.0;
    int samples_used = 0;
};

struct QEndpoints {
    double sup_lQ = 0.0, inf_uQ = 0.0;
    long pairs_used = 0;
};

struct Bracket {
    double loq = 0.0, uq = 0.0;
};

struct ExponentConfig {
    int samples = 256;
    int max_samples = 1 << 14;
    double refine_tol = 1e-3;
    long max_pairs = 100000;
    std::uint64_t seed = 1;
    double attain_tol = 0.02;  // "no" from 3 * attain_tol upwards
    int attain_samples = 96;
    std::optional<double> min_log_ratio;  // default: the profile's hint
    std::optional<ScaleWindow> window_zero, window_inf, attain_zero, attain_inf;
};

// min and max of log f(r) / log r on a geometric grid, refined by doubling.
SEndpoints s_endpoints(const MeasureProfile& P, double r_lo, double r_hi, int samples);
SEndpoints s_endpoints_log(const MeasureProfile& P, double t_lo, double t_hi, int samples,
                           const ExponentConfig& cfg = {});

// Extreme slopes of log f over grid pairs with log(R/r) >= the minimum spread (log 2 by default).
QEndpoints q_endpoints(const MeasureProfile& P, double r_lo, double r_hi, int samples);
QEndpoints q_endpoints_log(const MeasureProfile& P, double t_lo, double t_hi, int samples,
                           const ExponentConfig& cfg = {});

// Extremes of r f'(r) / f(r) over the pieces meeting the window.
Bracket q_bracket_analytic(const MeasureProfile& P, std::optional<ScaleWindow> window = std::nullopt,
                           bool at_zero = true);

struct AttainmentFit {
    Attainment verdict = Attainment::inconclusive;
    double slope = 0.0;
};

// Growth rate of the comparison constant log C for exponent q (heuristic): the peak of
// log C over the far half of the window minus the peak over the near half, divided by
// the distance between the half centres. Bounded log C gives ~0.
AttainmentFit attainment_fit(const MeasureProfile& P, double q, SetId set, ScaleWindow window,
                             const ExponentConfig& cfg = {});
Attainment attainment(const MeasureProfile& P, double q, SetId set, const ExponentConfig& cfg = {});

struct SetEstimate {
    SetId set = SetId::lQ0;
    double endpoint = 0.0;
    Attainment attained = Attainment::inconclusive;
    double evidence_slope = 0.0;
    ScaleWindow r_range;  // log-radii used for the endpoint
};

struct ExponentReport {
    std::array<SetEstimate, 8> sets;
    std::optional<Bracket> bracket_zero, bracket_inf;
    bool ordering_holds = true;
    double ordering_tolerance = 0.05;

    const SetEstimate& get(SetId s) const { return sets[static_cast<int>(s)]; }
    SetEstimate& get(SetId s) { return sets[static_cast<int>(s)]; }
};

ExponentReport exponent_report(const MeasureProfile& P, const ExponentConfig& cfg = {});

}  // namespace radcap
