#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "radcap/capacity.hpp"

using namespace radcap;

namespace {

double cap(const MeasureProfile& P, double p, double r, double R) { return annulus_capacity(P, p, r, R).value.to_real(); }

}  // namespace

TEST_CASE("unweighted capacities match the classical formulas") {
    for (int n = 2; n <= 4; ++n) {
        const MeasureProfile P = MeasureProfile::from_weight(make_constant(n));
        for (double p : {1.5, 2.0, 3.0, 4.0, 6.5})
            for (auto [r, R] : {std::pair{1e-3, 0.5}, {0.2, 0.3}, {1.0, 40.0}, {3.0, 1e6}}) {
                CAPTURE(n);
                CAPTURE(p);
                CAPTURE(r);
                CHECK(cap(P, p, r, R) == doctest::Approx(oracle::classical_capacity(n, p, r, R)).epsilon(1e-10));
            }
    }
    // examples with a known number: 2 pi / log 2 and 4 pi / (1 - 1/2)
    CHECK(cap(MeasureProfile::from_weight(make_constant(2)), 2, 1, 2) ==
          doctest::Approx(2 * std::numbers::pi / std::numbers::ln2).epsilon(1e-13));
    CHECK(cap(MeasureProfile::from_weight(make_constant(3)), 2, 1, 2) ==
          doctest::Approx(8 * std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("log weight at zero matches its closed form") {
    for (double beta : {-1.0, 0.5, 1.0, 3.0})
        for (double p : {2.0, 3.0}) {
            const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_zero(2, p, beta));
            for (auto [r, R] : {std::pair{1e-12, 1e-3}, {1e-5, 0.2}, {1e-300, 1e-100}}) {
                CAPTURE(beta);
                CAPTURE(p);
                CAPTURE(r);
                CHECK(cap(P, p, r, R) == doctest::Approx(oracle::powerlog0_capacity(2, p, beta, r, R)).epsilon(1e-9));
            }
        }
}

TEST_CASE("closed form agrees with forced quadrature and with Simpson") {
    LadderOptions o;
    o.depth = 6;
    const std::vector<RadialWeight> ws = {make_ex1(o), make_abcd(2, 1.5, 2, 2.5, 3), make_oscillating(2),
                                          make_log_two_plus(3), make_power_log_at_infinity(2, 2, 0.5)};
    for (const auto& w : ws) {
        const MeasureProfile P = MeasureProfile::from_weight(w);
        for (double p : {1.5, 2.0, 3.5})
            for (auto [tr, tR] : {std::pair{-6.0, -1.0}, {-3.0, 2.0}, {0.5, 4.0}}) {
                CAPTURE(w.name);
                CAPTURE(p);
                CAPTURE(tr);
                const CapacityResult a = annulus_capacity_log(P, p, tr, tR);
                const CapacityResult b = annulus_capacity_log(P, p, tr, tR, true);
                CHECK(relative_difference(a.value, b.value) < 1e-8);
                std::vector<double> breaks;
                for (const auto& pc : w.pieces) breaks.push_back(pc.t_lo);
                const double s = oracle::capacity_by_simpson_split(
                    w.n, p, [&](double t) { return eval_weight_log(w, t).to_real(); }, tr, tR, breaks, 20000);
                CHECK(a.value.to_real() == doctest::Approx(s).epsilon(1e-7));
            }
    }
}

TEST_CASE("series composition: cap^(1/(1-p)) adds over nested annuli") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30.0, 10.0);
    const std::vector<RadialWeight> ws = {make_constant(2), make_ex1(), make_ex_S_touch(), make_oscillating(2),
                                          make_power_log_at_zero(2, 2, 3), make_log_two_plus(2)};
    for (const auto& w : ws) {
        const MeasureProfile P = MeasureProfile::from_weight(w);
        for (int i = 0; i < 50; ++i) {
            double t[3] = {u(rng), u(rng), u(rng)};
            std::sort(t, t + 3);
            if (t[1] - t[0] < 1e-6 || t[2] - t[1] < 1e-6) continue;
            const double p = 1.5 + i % 3;
            const double e = 1 / (1 - p);
            const LogScalar whole = log_pow(annulus_capacity_log(P, p, t[0], t[2]).value, e);
            const LogScalar parts = log_pow(annulus_capacity_log(P, p, t[0], t[1]).value, e) +
                                    log_pow(annulus_capacity_log(P, p, t[1], t[2]).value, e);
            CAPTURE(w.name);
            CHECK(relative_difference(whole, parts) < 1e-9);
        }
    }
}

TEST_CASE("monotone in both radii") {
    const MeasureProfile P = MeasureProfile::from_weight(make_ex1());
    const double p = 2.5;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-200.0, -1.0);
    for (int i = 0; i < 200; ++i) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        if (b - a < 0.5) continue;
        const LogScalar c = annulus_capacity_log(P, p, a, b).value;
        CHECK(annulus_capacity_log(P, p, a - 0.3, b).value <= c);
        CHECK(annulus_capacity_log(P, p, a, b + 0.3).value <= c);
        CHECK(c <= annulus_capacity_log(P, p, a + 0.2, b).value);
    }
}

TEST_CASE("power weights scale homogeneously") {
    for (double a : {-0.5, 0.0, 2.0}) {
        const MeasureProfile P = MeasureProfile::from_weight(make_power(3, a));
        const double p = 2.5;
        for (double lam : {1e-3, 0.5, 7.0}) {
            const double lhs = cap(P, p, lam * 0.1, lam * 0.9);
            const double rhs = std::pow(lam, 3 + a - p) * cap(P, p, 0.1, 0.9);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("whole-space capacity") {
    const MeasureProfile R3 = MeasureProfile::from_weight(make_constant(3));
    CHECK(whole_space_capacity(R3, 2, 1).value.to_real() == doctest::Approx(4 * std::numbers::pi).epsilon(1e-12));
    CHECK(whole_space_capacity(R3, 2.5, 3).value.to_real() ==
          doctest::Approx(oracle::classical_capacity_inf(3, 2.5, 3)).epsilon(1e-12));
    const MeasureProfile R2 = MeasureProfile::from_weight(make_constant(2));
    CHECK(whole_space_capacity(R2, 2, 1).value.is_zero());
    CHECK(whole_space_capacity(R2, 3, 1).value.is_zero());
    // the limit of annuli approaches the whole-space value
    CHECK(annulus_capacity(R3, 2, 1, 1e8).value.to_real() ==
          doctest::Approx(4 * std::numbers::pi).epsilon(1e-7));
    LadderOptions o;
    o.depth = 6;
    // the truncated ladder continues its last piece towards 0, so only the point limit refuses
    CHECK_THROWS_AS(point_capacity_limit(MeasureProfile::from_weight(make_ex1(o)), 2, 0.1), UnsupportedError);
}

TEST_CASE("capacity of a point") {
    const MeasureProfile R2 = MeasureProfile::from_weight(make_constant(2));
    CHECK(point_capacity_limit(R2, 2, 1).kind == PointCapacity::zero);
    const PointCapacityLimit pos = point_capacity_limit(R2, 3, 1);
    REQUIRE(pos.kind == PointCapacity::positive);
    // p > n: cap({0}, B_1) = omega ((p-n)/(p-1))^{p-1}
    CHECK(pos.value->value.to_real() == doctest::Approx(2 * std::numbers::pi * 0.25).epsilon(1e-12));
    const double p = 2;
    CHECK(point_capacity_limit_log(MeasureProfile::from_weight(make_power_log_at_zero(2, p, 0.5)), p, -1.0).kind ==
          PointCapacity::zero);
    CHECK(point_capacity_limit_log(MeasureProfile::from_weight(make_power_log_at_zero(2, p, 1.0)), p, -1.0).kind ==
          PointCapacity::zero);
    const PointCapacityLimit c = point_capacity_limit_log(MeasureProfile::from_weight(make_power_log_at_zero(2, p, 3.0)), p, -1.0);
    REQUIRE(c.kind == PointCapacity::positive);
    // sigma = -2: omega (int_1^inf s^-3 ds)^{-1} = 2 omega
    CHECK(c.value->value.to_real() == doctest::Approx(4 * std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("point capacity classified from exponents") {
    const MeasureProfile P = MeasureProfile::from_weight(make_power(2, 0.5));
    const ExponentReport rep = exponent_report(P);
    CHECK(classify_point_capacity_by_exponents(rep, 2.0) == PointCapacity::zero);
    CHECK(classify_point_capacity_by_exponents(rep, 2.5) == PointCapacity::zero);  // endpoint attained
    CHECK(classify_point_capacity_by_exponents(rep, 3.0) == PointCapacity::positive);
    CHECK(point_capacity_limit(P, 3.0, 1).kind == PointCapacity::positive);
    CHECK(point_capacity_limit(P, 2.5, 1).kind == PointCapacity::zero);
}

TEST_CASE("parabolicity") {
    CHECK(parabolicity(MeasureProfile::from_weight(make_constant(2)), 2).verdict == Parabolicity::parabolic);
    CHECK(parabolicity(MeasureProfile::from_weight(make_constant(3)), 2).verdict == Parabolicity::hyperbolic);
    CHECK(parabolicity(MeasureProfile::from_weight(make_constant(3)), 3).verdict == Parabolicity::parabolic);
    const double p = 2;
    for (double beta : {-1.0, 0.5, 1.0, 2.0}) {
        const ParabolicityResult r = parabolicity(MeasureProfile::from_weight(make_power_log_at_infinity(2, p, beta)), p);
        CAPTURE(beta);
        // sigma = 1 - beta for p = 2
        CHECK(r.verdict == (1 - beta < 0 ? Parabolicity::hyperbolic : Parabolicity::parabolic));
    }
}

TEST_CASE("capacity argument errors") {
    const MeasureProfile P = MeasureProfile::from_weight(make_constant(2));
    CHECK_THROWS_AS(annulus_capacity(P, 1.0, 0.1, 1), UnsupportedError);
    CHECK_THROWS_AS(annulus_capacity(P, NAN, 0.1, 1), ParameterError);
    CHECK_THROWS_AS(annulus_capacity(P, 2, 1, 0.5), ParameterError);
    CHECK_THROWS_AS(annulus_capacity(P, 2, 0, 0.5), ParameterError);
    CHECK_THROWS_AS(annulus_capacity_log(P, 2, 0, INFINITY), ParameterError);
    CHECK_THROWS_AS(annulus_capacity(make_cantor_profile(6), 2, 0.1, 0.5), UnsupportedError);
    CHECK_THROWS_AS(point_capacity_limit(P, 2, 0), ParameterError);
}

TEST_CASE("capacity CSV") {
    const std::string csv = capacity_csv(MeasureProfile::from_weight(make_constant(3)), 2, {{0.0, INFINITY}});
    CHECK(csv.rfind("r,R,capacity,integral,method,error_bound\n", 0) == 0);
    CHECK(csv.find(",inf,1.256637061435") != std::string::npos);
}
