#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "radcap/bounds.hpp"

using namespace radcap;

TEST_CASE("catalog") {
    const auto& c = catalog();
    CHECK(c.size() == 15);
    std::set<std::string> ids;
    for (const auto& b : c) {
        ids.insert(b.id);
        CHECK(b.formula);
        CHECK(b.hypotheses);
        CHECK_FALSE(b.summary.empty());
        CHECK(b.id.rfind(b.direction == Direction::upper ? "UB-" : "LB-", 0) == 0);
    }
    CHECK(ids.size() == 15);
    CHECK(find_bound("UB-MIN").direction == Direction::upper);
    CHECK(find_bound("LB-BEYOND-uQ").needs_q);
    CHECK_THROWS_AS(find_bound("UB-NOPE"), ParameterError);
    CHECK(regime_from_string("large") == Regime::large);
    CHECK_THROWS_AS(regime_from_string("medium"), ParameterError);
}

TEST_CASE("bound formulas on the unweighted plane") {
    const MeasureProfile P = MeasureProfile::from_weight(make_constant(2));
    const double tr = std::log(0.01), tR = std::log(0.5), p = 2;
    // mu(B_r)/r^2 = pi for every r
    CHECK(evaluate_bound(find_bound("UB-MIN"), P, p, std::nullopt, tr, tR).to_real() ==
          doctest::Approx(std::numbers::pi));
    CHECK(evaluate_bound(find_bound("UB-LOG-uQ"), P, p, std::nullopt, tr, tR).to_real() ==
          doctest::Approx(std::numbers::pi / std::log(50.0)));
    CHECK(evaluate_bound(find_bound("LB-LOGP-lQ"), P, p, std::nullopt, tr, tR).to_real() ==
          doctest::Approx(std::numbers::pi / std::pow(std::log(50.0), 2)));
    CHECK(evaluate_bound(find_bound("UB-S"), P, p, 1.5, tr, tR).to_real() == doctest::Approx(std::pow(0.5, -0.5)));
    CHECK(evaluate_bound(find_bound("UB-S"), P, p, 2.5, tr, tR).to_real() == doctest::Approx(std::pow(0.01, 0.5)));
    CHECK_THROWS_AS(evaluate_bound(find_bound("UB-S"), P, p, std::nullopt, tr, tR), ParameterError);
    CHECK_THROWS_AS(evaluate_bound(find_bound("UB-MIN"), P, p, std::nullopt, tR, tr), ParameterError);
    // the exact capacity is 2 pi / log(R/r): twice the UB-LOG-uQ form
    CHECK(annulus_capacity_log(P, p, tr, tR).value.to_real() ==
          doctest::Approx(2 * evaluate_bound(find_bound("UB-LOG-uQ"), P, p, std::nullopt, tr, tR).to_real()));
}

TEST_CASE("every applicable bound is consistent for R^3, p = 2") {
    const MeasureProfile P = MeasureProfile::from_weight(make_constant(3));
    const ExponentReport rep = exponent_report(P);
    for (Regime reg : {Regime::small, Regime::large}) {
        const auto app = applicable_bounds(rep, 2.0, std::nullopt, reg);
        CHECK(app.size() >= 4);
        for (const auto& [spec, h] : app) {
            if (spec.needs_q && !h.q) continue;
            CAPTURE(spec.id);
            CHECK(h.ok);
            CheckOptions opt;
            opt.regime = reg;
            const BoundCheckReport r = check_bound(spec, P, 2.0, std::nullopt, default_grid(P, reg), rep, opt);
            CHECK(r.consistent);
            CHECK(r.pairs > 0);
            CHECK(r.hypotheses_hold);
        }
    }
}

TEST_CASE("upper and lower bounds sandwich the capacity on gallery weights") {
    LadderOptions o;
    o.depth = 6;
    struct Case {
        RadialWeight w;
        double p;
    };
    const std::vector<Case> cases = {{make_ex1(), 2.0}, {make_abcd(2, 1.5, 2, 2.5, 3), 2.2},
                                     {make_power_log_at_zero(2, 2, 0.5), 2.0}, {make_oscillating(2), 1.6}};
    for (const auto& [w, p] : cases) {
        const MeasureProfile P = MeasureProfile::from_weight(w);
        const ExponentReport rep = exponent_report(P);
        const GridSpec g = default_grid(P, Regime::small);
        long checked = 0;
        for (const auto& [spec, h] : applicable_bounds(rep, p, std::nullopt, Regime::small)) {
            if (spec.needs_q && !h.q) continue;
            CAPTURE(w.name);
            CAPTURE(spec.id);
            const BoundCheckReport r = check_bound(spec, P, p, std::nullopt, g, rep);
            CHECK(r.consistent);
            if (spec.direction == Direction::upper)
                CHECK(r.log_ratio_max <= std::log(1e3));
            else
                CHECK(r.log_ratio_min >= -std::log(1e3));
            ++checked;
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("audit finds a violated lower bound on the ladder") {
    const MeasureProfile P = MeasureProfile::from_weight(make_ex1());
    const ExponentReport rep = exponent_report(P);
    const double p = 3;  // outside lQ0 = (0, 2]
    const BoundSpec& spec = find_bound("LB-INT-lQ");
    const GridSpec g = default_grid(P, Regime::small);
    CHECK_THROWS_AS(check_bound(spec, P, p, std::nullopt, g, rep), PreconditionError);
    CheckOptions opt;
    opt.audit = true;
    opt.keep_rows = true;
    const BoundCheckReport r = check_bound(spec, P, p, std::nullopt, g, rep, opt);
    CHECK_FALSE(r.hypotheses_hold);
    CHECK_FALSE(r.consistent);
    CHECK(r.log_ratio_min < -std::log(1e3));
    // the witness is a grid pair whose ratio is the minimum
    const LogScalar cap = annulus_capacity_log(P, p, r.witness.first, r.witness.second).value;
    const LogScalar b = evaluate_bound(spec, P, p, std::nullopt, r.witness.first, r.witness.second);
    CHECK(cap.log_mag() - b.log_mag() == doctest::Approx(r.log_ratio_min));
    CHECK(static_cast<long>(r.rows.size()) == r.pairs);
    CHECK(check_rows_csv(r).rfind("r,R,capacity,bound,ratio\n", 0) == 0);
}

TEST_CASE("log weight, beta < 0: upper log bound holds without its hypothesis") {
    const double p = 2;
    const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_zero(2, p, -1.0));
    const ExponentReport rep = exponent_report(P);
    const GridSpec g = default_grid(P, Regime::small);
    const BoundSpec& up = find_bound("UB-LOG-uQ");
    CHECK_THROWS_AS(check_bound(up, P, p, std::nullopt, g, rep), PreconditionError);
    CheckOptions opt;
    opt.audit = true;
    const BoundCheckReport r = check_bound(up, P, p, std::nullopt, g, rep, opt);
    CHECK_FALSE(r.hypotheses_hold);
    CHECK(r.consistent);
    const BoundCheckReport low = check_bound(find_bound("LB-BORDER-lQ"), P, p, std::nullopt, g, rep);
    CHECK(low.consistent);
    CHECK(low.hypotheses_hold);
}

TEST_CASE("hypotheses against the exponent sets") {
    const ExponentReport rep = exponent_report(MeasureProfile::from_weight(make_abcd(2, 1.5, 2, 2.5, 3)));
    auto holds = [&](const std::string& id, double p, std::optional<double> q = std::nullopt) {
        return find_bound(id).hypotheses({&rep, p, q, Regime::small, 0.05}).ok;
    };
    CHECK(holds("LB-INT-lQ", 1.2));
    CHECK_FALSE(holds("LB-INT-lQ", 1.5));  // interior only
    CHECK(holds("UB-LOG-lQ", 1.5));         // attained endpoint
    CHECK_FALSE(holds("UB-LOG-lQ", 2.0));
    CHECK(holds("LB-INT-uQ", 3.5));
    CHECK_FALSE(holds("LB-INT-uQ", 2.7));
    CHECK(holds("LB-BEYOND-lQ", 2.0, 1.2));
    CHECK_FALSE(holds("LB-BEYOND-lQ", 2.0, 1.8));
    CHECK(holds("UB-S", 2.2, 1.9));
    CHECK(holds("UB-MIN", 0.5));
}

TEST_CASE("p = 1 goes through bound comparison") {
    const MeasureProfile P = MeasureProfile::from_weight(make_constant(2));
    const ExponentReport rep = exponent_report(P);
    CHECK_THROWS_AS(check_bound(find_bound("UB-MIN"), P, 1.0, std::nullopt, default_grid(P, Regime::small), rep),
                    UnsupportedError);
    const auto app = applicable_bounds(rep, 1.0, std::nullopt, Regime::small);
    for (const auto& [spec, h] : app) CHECK(spec.valid_at_p1);
    const BoundPairReport c = compare_bounds(find_bound("LB-LOGP-lQ"), find_bound("UB-MIN"), P, 1.0, std::nullopt,
                                             default_grid(P, Regime::small));
    CHECK(c.consistent);
    CHECK(c.log_ratio_max <= 0.0);
    CHECK_THROWS_AS(compare_bounds(find_bound("UB-MIN"), find_bound("UB-MIN"), P, 1.0, std::nullopt, GridSpec{}),
                    ParameterError);
}

TEST_CASE("sharpness scan on the ladder") {
    const MeasureProfile P = MeasureProfile::from_weight(make_ex1());
    const double p = 3;
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> x;
    for (int k = 2; k <= 6; ++k) {
        pairs.emplace_back(ex1_log_alpha(k + 1), ex1_log_beta(k));
        x.push_back(ex1_log_alpha(k));
    }
    const TrendReport s = sharpness_scan(P, p, find_bound("LB-INT-lQ"), std::nullopt, pairs, x);
    CHECK(s.slope == doctest::Approx(p / 2 - 1).epsilon(0.1));
    const TrendReport b = sharpness_scan(P, p, find_bound("LB-BEYOND-lQ"), 2.0, pairs, x);
    CHECK(std::fabs(b.slope) < 0.05);
    CHECK_THROWS_AS(sharpness_scan(P, p, find_bound("UB-MIN"), std::nullopt, pairs, std::vector<double>{1.0}),
                    ParameterError);
    CHECK_THROWS_AS(sharpness_scan(P, 1.0, find_bound("UB-MIN"), std::nullopt, pairs), UnsupportedError);
}

TEST_CASE("grids") {
    const MeasureProfile P = MeasureProfile::from_weight(make_constant(2));
    GridSpec g;
    g.t_lo = -5;
    g.t_hi = -1;
    g.points = 9;
    g.include_landmarks = false;
    const auto pairs = grid_pairs(P, g);
    CHECK_FALSE(pairs.empty());
    for (auto [a, b] : pairs) CHECK(b - a >= std::numbers::ln2 - 1e-12);
    GridSpec bad = g;
    bad.points = 1;
    CHECK_THROWS_AS(grid_pairs(P, bad), ParameterError);
    bad = g;
    bad.t_hi = -6;
    CHECK_THROWS_AS(grid_pairs(P, bad), ParameterError);
    bad = g;
    bad.min_log_ratio = 0.1;
    CHECK_THROWS_AS(grid_pairs(P, bad), ParameterError);
}
