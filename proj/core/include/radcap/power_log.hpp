#pragma once

#include "radcap/numerics.hpp"

namespace radcap {

// coeff * exp(a t) * |t|^b, with t the log-radius.
struct PowerLogTerm {
    LogScalar coeff = LogScalar::one();
    double a = 0.0;
    double b = 0.0;
};

enum class IntegralMethod { closed_form, quadrature, mixed };
const char* to_string(IntegralMethod m);
IntegralMethod combine(IntegralMethod x, IntegralMethod y);

struct TermIntegral {
    LogScalar value;
    IntegralMethod method = IntegralMethod::closed_form;
    double rel_error = 0.0;
};

// Exact convergence test for the integral over [t1, t2]; t1 may be -inf, t2 +inf.
bool power_log_converges(double a, double b, double t1, double t2);

// Integral of the term over [t1, t2] in t. Requires 0 outside [t1, t2] whenever b != 0.
// Closed forms: b == 0, a == 0, b a small nonnegative integer. Otherwise quadrature where
// |a t| is small and an integration-by-parts series with a remainder bound where it is
// large; an exponentially decaying infinite end is truncated once its tail bound is
// below tolerance. Divergence throws DivergenceError.
TermIntegral integrate_power_log(const PowerLogTerm& term, double t1, double t2,
                                 const QuadratureSpec& spec = {}, bool force_quadrature = false);

}  // namespace radcap
