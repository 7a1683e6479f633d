#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radcap/exponents.hpp"
#include "radcap/measure.hpp"

namespace radcap {

// cap_p(B_r, B_R) = (int_r^R (f')^{1/(1-p)} d rho)^{1-p} for radial weights.
struct CapacityResult {
    LogScalar value;           // PosInf when the integral is zero
    LogScalar integral_value;  // int (f')^{1/(1-p)}
    IntegralMethod method = IntegralMethod::closed_form;
    double error_bound = 0.0;  // relative
};

// Per weight piece: (omega c)^{1/(1-p)} exp(a t) |t|^b with the d rho = e^t dt factor folded in.
PowerLogTerm capacity_term(const MeasureProfile& P, std::size_t piece, double p);

CapacityResult annulus_capacity(const MeasureProfile& P, double p, double r, double R, bool force_quadrature = false);
CapacityResult annulus_capacity_log(const MeasureProfile& P, double p, double t_r, double t_R,
                                    bool force_quadrature = false);

// R = inf. A divergent tail integral gives capacity zero.
CapacityResult whole_space_capacity(const MeasureProfile& P, double p, double r);
CapacityResult whole_space_capacity_log(const MeasureProfile& P, double p, double t_r);

enum class PointCapacity { zero, positive, indeterminate };
const char* to_string(PointCapacity c);

struct PointCapacityLimit {
    PointCapacity kind = PointCapacity::zero;
    std::optional<CapacityResult> value;  // set when positive
};

// lim_{r -> 0} cap_p(B_r, B_R), decided by convergence of the integral at 0.
PointCapacityLimit point_capacity_limit(const MeasureProfile& P, double p, double R);
PointCapacityLimit point_capacity_limit_log(const MeasureProfile& P, double p, double t_R);

// zero if p is outside uS0 or 1 < p in lS0; positive if p is inside uS0 by more than margin.
PointCapacity classify_point_capacity_by_exponents(const ExponentReport& report, double p, double margin = 0.05);

enum class Parabolicity { parabolic, hyperbolic, indeterminate };
const char* to_string(Parabolicity v);

struct ParabolicityResult {
    Parabolicity verdict = Parabolicity::indeterminate;
    bool resolved_by_integral = false;
    std::optional<CapacityResult> whole_space;  // cap(B_r, R^n) used for the resolution
};

ParabolicityResult parabolicity(const MeasureProfile& P, double p, const ExponentReport& report,
                                double margin = 0.05);
ParabolicityResult parabolicity(const MeasureProfile& P, double p);

// Columns r, R, capacity, integral, method, error_bound. Pairs are log-radii; t_R may be +inf.
std::string capacity_csv(const MeasureProfile& P, double p, const std::vector<std::pair<double, double>>& pairs);

}  // namespace radcap
