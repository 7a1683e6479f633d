#include "report_json.hpp"

#include <cmath>

namespace radcap::cli {

Json number(LogScalar x) {
    if (x.is_zero()) return Json{{"mantissa", "0"}, {"exp10", 0}, {"value", 0.0}};
    if (!x.is_finite())
        return Json{{"mantissa", nullptr}, {"exp10", nullptr}, {"value", x.sign() > 0 ? "inf" : "-inf"}};
    const std::string s = format_decimal(x);
    const auto e = s.find('e');
    const double v = x.to_real();
    Json out{{"mantissa", s.substr(0, e)}, {"exp10", std::stol(s.substr(e + 1))}};
    if (v == 0.0 || !std::isfinite(v))
        out["value"] = nullptr;
    else
        out["value"] = v;
    return out;
}

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json log_radius(double t) { return Json{{"log", number(t)}, {"radius", number(LogScalar::from_log(t))}}; }

namespace {

Json r_range(ScaleWindow w) { return Json::array({log_radius(w.t_lo), log_radius(w.t_hi)}); }

}  // namespace

Json to_json(const ExponentReport& rep) {
    Json sets = Json::array();
    for (const auto& s : rep.sets)
        sets.push_back({{"set", to_string(s.set)},
                        {"endpoint", number(s.endpoint)},
                        {"attained", to_string(s.attained)},
                        {"evidence_slope", number(s.evidence_slope)},
                        {"r_range", r_range(s.r_range)}});
    Json out{{"sets", sets}, {"ordering_holds", rep.ordering_holds}, {"ordering_tolerance", rep.ordering_tolerance}};
    auto bracket = [](const std::optional<Bracket>& b) -> Json {
        if (!b) return nullptr;
        return Json{{"loq", number(b->loq)}, {"uq", number(b->uq)}};
    };
    out["bracket_zero"] = bracket(rep.bracket_zero);
    out["bracket_inf"] = bracket(rep.bracket_inf);
    return out;
}

Json to_json(const BoundCheckReport& rep) {
    // From the log ratio, so the constant survives overflow.
    const double lc = rep.direction == Direction::upper ? rep.log_ratio_max : rep.log_ratio_min;
    return Json{{"bound", rep.bound_id},
             {"direction", to_string(rep.direction)},
             {"regime", to_string(rep.regime)},
             {"p", number(rep.p)},
             {"q", rep.q ? number(*rep.q) : Json(nullptr)},
             {"pairs", rep.pairs},
             {"grid",
              {{"lo", log_radius(rep.grid.t_lo)},
               {"hi", log_radius(rep.grid.t_hi)},
               {"points", rep.grid.points},
               {"min_log_ratio", number(rep.grid.min_log_ratio)}}},
             {"ratio_min", number(LogScalar::from_log(rep.log_ratio_min))},
             {"ratio_max", number(LogScalar::from_log(rep.log_ratio_max))},
             {"fitted_constant", number(LogScalar::from_log(lc))},
             {"consistent", rep.consistent},
             {"witness", {{"r", log_radius(rep.witness.first)}, {"R", log_radius(rep.witness.second)}}},
             {"trend", rep.trend ? number(*rep.trend) : Json(nullptr)},
             {"audit", rep.audit},
             {"hypotheses_hold", rep.hypotheses_hold},
             {"hypothesis_note", rep.hypothesis_note}};
}

Json to_json(const BoundPairReport& rep) {
    return Json{{"lower", rep.lower_id},
                {"upper", rep.upper_id},
                {"max_lower_over_upper", number(LogScalar::from_log(rep.log_ratio_max))},
                {"consistent", rep.consistent}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace radcap::cli
