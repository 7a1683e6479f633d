#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "radcap/weights.hpp"

using namespace radcap;

namespace {

RadialWeight sample_explicit() {
    RadialWeight w;
    w.n = 3;
    w.continuity_enforced = false;
    w.pieces.push_back(WeightPiece::from_radii(0.0, 0.1, LogScalar::from_real(2.5), 0.3, 0.0));
    w.pieces.push_back(WeightPiece::from_radii(0.1, 0.2, LogScalar::from_real(0.1 / 3), -1.25, 1.0));
    w.pieces.push_back(WeightPiece::from_radii(0.2, INFINITY, LogScalar::from_real(std::numbers::pi), 0.0, 0.0));
    w.validate();
    return w;
}

}  // namespace

TEST_CASE("constant and power weights") {
    const RadialWeight c = make_constant(3);
    CHECK(eval_weight(c, 0.37).to_real() == doctest::Approx(1.0));
    const RadialWeight p = make_power(2, 0.75);
    CHECK(eval_weight(p, 3.0).to_real() == doctest::Approx(std::pow(3.0, 0.75)));
    CHECK(log_derivative_ratio(p, 0.01) == doctest::Approx(0.75));
}

TEST_CASE("ex1 ladder radii") {
    for (int k = 0; k <= 10; ++k) {
        CHECK(ex1_log_alpha(k) == doctest::Approx(-std::ldexp(1.0, k) * std::numbers::ln2));
        CHECK(ex1_log_beta(k) == doctest::Approx(1.5 * ex1_log_alpha(k)));
    }
    const RadialWeight w = make_ex1();
    CHECK(w.ladder_depth == 29);
    for (const auto& pc : w.pieces)
        if (std::isfinite(pc.t_lo)) CHECK(std::fabs(pc.t_lo) <= std::ldexp(1.0, 30) * std::numbers::ln2 * (1 + 1e-12));
    LadderOptions o;
    o.depth = 6;
    CHECK(make_ex1(o).ladder_depth == 6);
}

TEST_CASE("continuous builders are continuous at breakpoints") {
    for (const RadialWeight& w : {make_ex1(), make_power_log_at_zero(2, 2, 3), make_power_log_at_infinity(3, 2, -1),
                                  make_log_two_plus(2)}) {
        CAPTURE(w.name);
        for (std::size_t i = 1; i < w.pieces.size(); ++i) {
            const double t = w.pieces[i].t_lo;
            if (!std::isfinite(t)) continue;
            const double left = w.pieces[i - 1].value_at_log(t).log_mag();
            const double right = w.pieces[i].value_at_log(t).log_mag();
            CHECK(left == doctest::Approx(right).epsilon(1e-9).scale(std::max(1.0, std::fabs(t))));
        }
    }
}

TEST_CASE("log derivative at breakpoints needs a side") {
    const RadialWeight w = make_power_log_at_zero(2, 2, -1);
    const double t = -1.0;  // breakpoint at 1/e
    CHECK_THROWS_AS(log_derivative_ratio_log(w, t), UndefinedPointError);
    CHECK(log_derivative_ratio_log(w, t, Side::left) == doctest::Approx(-1.0 / t));
    CHECK(log_derivative_ratio_log(w, t, Side::right) == doctest::Approx(0.0));
    CHECK(log_derivative_ratio_log(w, -2.0) == doctest::Approx(-1.0 / -2.0));
}

TEST_CASE("validation rejects malformed piece lists") {
    RadialWeight w = sample_explicit();
    w.pieces[1].t_lo += 0.01;  // gap
    CHECK_THROWS_AS(w.validate(), ParameterError);
    RadialWeight v = sample_explicit();
    v.continuity_enforced = true;  // jumps present
    CHECK_THROWS_AS(v.validate(), ParameterError);
    RadialWeight e;
    CHECK_THROWS_AS(e.validate(), ParameterError);
    CHECK_THROWS_AS(make_abcd(2, 2.0, 1.5, 2.5, 3.0), ParameterError);
    CHECK_THROWS_AS(build_weight("nope", {}), ParameterError);
    CHECK_THROWS_AS(build_weight("powerlog0", {}), ParameterError);  // needs p
}

TEST_CASE("serialization round-trips bit for bit") {
    std::vector<RadialWeight> ws = {sample_explicit(), make_ex1(), make_ex_S_touch(), make_abcd(3, 1.5, 2, 2.5, 3),
                                    make_oscillating(2), make_log_two_plus(2), make_power_log_at_zero(4, 3, 0.7),
                                    make_power_log_at_infinity(2, 2, 2)};
    // Random explicit lists with awkward doubles.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int k = 0; k < 20; ++k) {
        RadialWeight w;
        w.n = 2 + k % 3;
        w.continuity_enforced = false;
        double t = u(rng) - 5;
        w.pieces.push_back(WeightPiece::from_log_radii(-INFINITY, t, LogScalar::from_log(u(rng)), u(rng) + 3));
        for (int i = 0; i < 4; ++i) {
            const double t2 = t + std::fabs(u(rng)) + 1e-3;
            w.pieces.push_back(WeightPiece::from_log_radii(t, t2, LogScalar::from_log(u(rng) / 7), u(rng) / 3, 0.0));
            t = t2;
        }
        w.pieces.push_back(WeightPiece::from_log_radii(t, INFINITY, LogScalar::from_log(u(rng)), -1.0 - w.n));
        w.validate();
        ws.push_back(w);
    }
    for (const auto& w : ws) {
        CAPTURE(w.name);
        const std::string s = serialize_weight(w);
        const RadialWeight back = parse_weight(s);
        CHECK(bitwise_equal(w, back));
        CHECK(serialize_weight(back) == s);
    }
}

TEST_CASE("weight grammar") {
    const RadialWeight b = parse_weight(R"({"builder": "powerlog0", "n": 3, "p": 2.5, "beta": -1})");
    CHECK(bitwise_equal(b, make_power_log_at_zero(3, 2.5, -1)));
    const RadialWeight e = parse_weight(
        R"({"n": 2, "continuity_enforced": false, "pieces": [{"lo": 0, "hi": 2, "c": 2, "alpha": 1},)"
        R"( {"lo": 2, "hi": "inf", "c": 3, "alpha": 0, "beta": 0.5}]})");
    CHECK(e.pieces.size() == 2);
    CHECK(eval_weight(e, 0.5).to_real() == doctest::Approx(1.0));
    CHECK(eval_weight(e, std::exp(4.0)).to_real() == doctest::Approx(6.0));
    CHECK_THROWS_AS(parse_weight(R"({"builder": "ex1", "colour": 1})"), ParameterError);
    CHECK_THROWS_AS(parse_weight(R"({"n": 2, "pieces": [{"lo": 0, "hi": 1, "c": 1, "alpha": 0, "gamma": 1}]})"),
                    ParameterError);
    CHECK_THROWS_AS(parse_weight("{not json"), ParameterError);
}

TEST_CASE("admissibility criterion") {
    for (const RadialWeight& w : {make_ex1(), make_ex_S_touch(), make_abcd(2, 1.5, 2, 2.5, 3),
                                  make_abcd(3, 1.2, 2, 3, 4.5), make_log_two_plus(2), make_log_two_plus(3)}) {
        CAPTURE(w.name);
        CHECK(check_admissible(w).passes);
    }
    for (int n = 2; n <= 4; ++n) {
        const AdmissibilityVerdict v = check_admissible(make_power(n, 1 - n - 0.1));
        CHECK_FALSE(v.passes);
        CHECK(v.gamma1 == doctest::Approx(n - 0.9));
    }
    // rho w'/w for the ladders lies in [0, 2].
    const AdmissibilityVerdict ex = check_admissible(make_ex1());
    CHECK(ex.gamma1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ex.gamma2 == doctest::Approx(2.0));
}

TEST_CASE("quasiconformal radial stretch") {
    const StretchVerdict c = check_quasiconformal_stretch(make_constant(2));
    CHECK(c.ok);
    CHECK(c.m == doctest::Approx(1.0));
    const StretchVerdict e = check_quasiconformal_stretch(make_ex1());
    CHECK(e.ok);
    CHECK(e.M == doctest::Approx(3.0));
    CHECK_FALSE(check_quasiconformal_stretch(make_power(2, -1.1)).ok);
}
