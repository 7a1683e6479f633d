#include "gallery.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "radcap/bounds.hpp"
#include "radcap/capacity.hpp"
#include "radcap/exponents.hpp"
#include "radcap/weights.hpp"

namespace radcap::cli {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kLn3 = 1.0986122886681098;

class Recorder {
public:
    explicit Recorder(GalleryItem& item) : item_(item) {}

    void near(const std::string& name, double observed, double expected, double tol) {
        item_.checks.push_back({name, Json{{"value", expected}, {"tolerance", tol}}, number(observed),
                                std::fabs(observed - expected) <= tol, false, ""});
    }
    void at_most(const std::string& name, double observed, double limit) {
        item_.checks.push_back({name, Json{{"at_most", limit}}, number(observed), observed <= limit, false, ""});
    }
    void equal(const std::string& name, const std::string& observed, const std::string& expected) {
        item_.checks.push_back({name, expected, observed, observed == expected, false, ""});
    }
    void truth(const std::string& name, bool observed, const std::string& note = "") {
        item_.checks.push_back({name, true, observed, observed, false, note});
    }
    void known(const std::string& name, Json observed, Json expected, bool matches, const std::string& note) {
        item_.checks.push_back({name, std::move(expected), std::move(observed), matches, true, note});
    }

private:
    GalleryItem& item_;
};

void endpoints(Recorder& rec, const ExponentReport& rep, std::initializer_list<std::pair<SetId, double>> want,
               double tol) {
    for (auto [id, v] : want) rec.near(std::string(to_string(id)) + " endpoint", rep.get(id).endpoint, v, tol);
}

void attained(Recorder& rec, const ExponentReport& rep, std::initializer_list<std::pair<SetId, Attainment>> want) {
    for (auto [id, a] : want)
        rec.equal(std::string(to_string(id)) + " attained", to_string(rep.get(id).attained), to_string(a));
}

// Ordering of the four endpoints and the analytic bracket around the Q endpoints.
void structure(Recorder& rec, const ExponentReport& rep, double tol = 0.05) {
    rec.truth("endpoint ordering lQ <= lS <= uS <= uQ", rep.ordering_holds);
    if (rep.bracket_zero) {
        const bool ok = rep.bracket_zero->loq <= rep.get(SetId::lQ0).endpoint + tol &&
                        rep.get(SetId::uQ0).endpoint <= rep.bracket_zero->uq + tol;
        rec.truth("analytic bracket at 0 contains [sup lQ0, inf uQ0]", ok);
    }
    if (rep.bracket_inf) {
        const bool ok = rep.bracket_inf->loq <= rep.get(SetId::lQinf).endpoint + tol &&
                        rep.get(SetId::uQinf).endpoint <= rep.bracket_inf->uq + tol;
        rec.truth("analytic bracket at inf contains [sup lQinf, inf uQinf]", ok);
    }
}

using Form = std::function<LogScalar(double t_r, double t_R)>;

struct Spread {
    double log_lo = INFINITY, log_hi = -INFINITY;
    long pairs = 0;
    double factor() const { return std::exp(log_hi - log_lo); }
};

// log(capacity / form) over r in [e^tr_lo, e^tr_hi], log(R/r) in [lr_lo, lr_hi], keeping R within t_R_max.
Spread ratio_spread(const MeasureProfile& P, double p, const Form& form, double tr_lo, double tr_hi, double lr_lo,
                    double lr_hi, double t_R_max, int steps = 25) {
    Spread s;
    for (double tr : log_grid(tr_lo, tr_hi, steps))
        for (double lr : log_grid(lr_lo, lr_hi, steps)) {
            const double tR = tr + lr;
            if (tR > t_R_max) continue;
            const double l = annulus_capacity_log(P, p, tr, tR).value.log_mag() - form(tr, tR).log_mag();
            s.log_lo = std::min(s.log_lo, l);
            s.log_hi = std::max(s.log_hi, l);
            ++s.pairs;
        }
    return s;
}

Form bound_form(const MeasureProfile& P, double p, const std::string& id) {
    const BoundSpec& b = find_bound(id);
    return [&P, p, &b](double tr, double tR) { return evaluate_bound(b, P, p, std::nullopt, tr, tR); };
}

void spread_check(Recorder& rec, const std::string& name, const Spread& s, double limit) {
    rec.at_most(name + ": max/min of capacity/form", s.factor(), limit);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot write " + path.string());
    f << text;
}

// ---------------------------------------------------------------------------

void item_ex1(GalleryItem& it, Recorder& rec, const std::filesystem::path& dir) {
    it.title = "Four distinct exponent endpoints (ladder to depth 6)";
    LadderOptions opt;
    opt.depth = 6;
    const MeasureProfile P = MeasureProfile::from_weight(make_ex1(opt));
    const ExponentReport rep = exponent_report(P);
    endpoints(rec, rep, {{SetId::lQ0, 2.0}, {SetId::lS0, 3.0}, {SetId::uS0, 10.0 / 3.0}, {SetId::uQ0, 4.0}}, 0.05);
    attained(rec, rep,
             {{SetId::lQ0, Attainment::yes}, {SetId::lS0, Attainment::yes}, {SetId::uS0, Attainment::yes},
              {SetId::uQ0, Attainment::yes}});
    structure(rec, rep);
    rec.truth("weight is admissible", check_admissible(P.weight()).passes);

    // cap(alpha_{k+1}, beta_k) against mu(B_r)/r^p decays like alpha_k^{p/2-1}; against the
    // beyond-borderline bound with q = 2 it stays bounded. Full-depth ladder: at depth 6 the
    // measure below alpha_7 comes from the continued last piece.
    const MeasureProfile F = MeasureProfile::from_weight(make_ex1());
    const double p = 3.0;
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> x;
    for (int k = 2; k <= 6; ++k) {
        pairs.emplace_back(ex1_log_alpha(k + 1), ex1_log_beta(k));
        x.push_back(ex1_log_alpha(k));
    }
    const TrendReport s1 = sharpness_scan(F, p, find_bound("LB-INT-lQ"), std::nullopt, pairs, x);
    const TrendReport s2 = sharpness_scan(F, p, find_bound("LB-BEYOND-lQ"), 2.0, pairs, x);
    rec.near("scan cap/(mu(B_r) r^-p) slope in log alpha_k", s1.slope, p / 2 - 1, 0.05);
    rec.near("scan cap/(mu(B_r) r^-2 R^(2-p)) slope in log alpha_k", s2.slope, 0.0, 0.05);

    std::ostringstream csv;
    csv << "k,log_alpha_k,log_ratio_int_lQ,log_ratio_beyond_lQ\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu,%.15e,%.15e,%.15e\n", i + 2, x[i], s1.log_ratio[i], s2.log_ratio[i]);
        csv << buf;
    }
    write_text(dir / "ex1_scans.csv", csv.str());
    it.artifacts.push_back("ex1_scans.csv");
}

void item_s_touch(GalleryItem& it, Recorder& rec, const std::filesystem::path&) {
    it.title = "S-sets touching at 3 with different Q-sets";
    const MeasureProfile P = MeasureProfile::from_weight(make_ex_S_touch());
    const ExponentReport rep = exponent_report(P);
    endpoints(rec, rep, {{SetId::lQ0, 2.0}, {SetId::lS0, 3.0}, {SetId::uS0, 3.0}}, 0.05);
    attained(rec, rep, {{SetId::lQ0, Attainment::yes}, {SetId::lS0, Attainment::yes}});
    structure(rec, rep);
    rec.truth("weight is admissible", check_admissible(P.weight()).passes);
    const double uq = rep.get(SetId::uQ0).endpoint;
    rec.known("uQ0 endpoint", number(uq), Json{{"value", 4.0}, {"tolerance", 0.05}}, std::fabs(uq - 4.0) <= 0.05,
              "the gap closes like 1/log log k; at the deepest representable level log log k is about 1.2");
    const std::string ua = to_string(rep.get(SetId::uS0).attained);
    rec.known("uS0 attained", ua, "no", ua == "no",
              "non-attainment comes from a 1/log k factor, invisible to the growth statistic");
}

void item_abcd(GalleryItem& it, Recorder& rec, const std::filesystem::path&) {
    it.title = "Prescribed endpoints a < b < c < d";
    const MeasureProfile P = MeasureProfile::from_weight(make_abcd(2, 1.5, 2.0, 2.5, 3.0));
    const ExponentReport rep = exponent_report(P);
    endpoints(rec, rep, {{SetId::lQ0, 1.5}, {SetId::lS0, 2.0}, {SetId::uS0, 2.5}, {SetId::uQ0, 3.0}}, 0.1);
    attained(rec, rep,
             {{SetId::lQ0, Attainment::yes}, {SetId::lS0, Attainment::yes}, {SetId::uS0, Attainment::yes},
              {SetId::uQ0, Attainment::yes}});
    structure(rec, rep);
    rec.truth("weight is admissible", check_admissible(P.weight()).passes);
}

// Small radii for the log weight: r in [1e-12, 1e-3], R/r in [2, 1e6], R below 1/e.
Spread small_log_spread(const MeasureProfile& P, double p, const Form& f) {
    return ratio_spread(P, p, f, std::log(1e-12), std::log(1e-3), kLn2, std::log(1e6), -1.0);
}

void item_log_zero_a(GalleryItem& it, Recorder& rec, const std::filesystem::path& dir) {
    it.title = "Log weight at 0, beta < 0: lower borderline estimate is sharp";
    const double p = 2.0;
    const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_zero(2, p, -1.0));
    const ExponentReport rep = exponent_report(P);
    endpoints(rec, rep, {{SetId::lQ0, p}, {SetId::uQ0, p}}, 0.05);
    attained(rec, rep, {{SetId::lQ0, Attainment::yes}, {SetId::uQ0, Attainment::no}});
    structure(rec, rep);

    const GridSpec grid = default_grid(P, Regime::small);
    CheckOptions opt;
    opt.keep_rows = true;
    const BoundCheckReport border = check_bound(find_bound("LB-BORDER-lQ"), P, p, std::nullopt, grid, rep, opt);
    rec.truth("LB-BORDER-lQ applicable and consistent", border.consistent);
    opt.audit = true;
    const BoundCheckReport up = check_bound(find_bound("UB-LOG-uQ"), P, p, std::nullopt, grid, rep, opt);
    rec.truth("UB-LOG-uQ hypothesis fails (p not in uQ0)", !up.hypotheses_hold);
    rec.truth("UB-LOG-uQ formula still bounds the capacity (audit)", up.consistent);
    spread_check(rec, "two-sided law mu(B_r)/r^p log(R/r)^(1-p)", small_log_spread(P, p, bound_form(P, p, "LB-BORDER-lQ")),
                 3.0);
    write_text(dir / "log-zero-a_border.csv", check_rows_csv(border));
    it.artifacts.push_back("log-zero-a_border.csv");
}

void item_log_zero_b(GalleryItem& it, Recorder& rec, const std::filesystem::path&) {
    it.title = "Log weight at 0, 0 < beta < p-1: upper borderline estimate is sharp";
    const double p = 2.0;
    const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_zero(2, p, 0.5));
    const ExponentReport rep = exponent_report(P);
    endpoints(rec, rep, {{SetId::lQ0, p}, {SetId::uQ0, p}}, 0.05);
    attained(rec, rep, {{SetId::lQ0, Attainment::no}, {SetId::uQ0, Attainment::yes}});
    structure(rec, rep);
    const BoundCheckReport up =
        check_bound(find_bound("UB-LOG-uQ"), P, p, std::nullopt, default_grid(P, Regime::small), rep);
    rec.truth("UB-LOG-uQ applicable and consistent", up.consistent);
    spread_check(rec, "two-sided law mu(B_r)/r^p log(R/r)^(1-p)", small_log_spread(P, p, bound_form(P, p, "UB-LOG-uQ")),
                 3.0);
    rec.equal("point capacity", to_string(point_capacity_limit_log(P, p, -1.0).kind), "zero");
    rec.equal("point capacity from exponents", to_string(classify_point_capacity_by_exponents(rep, p)),
              "indeterminate");
}

void item_log_zero_c(GalleryItem& it, Recorder& rec, const std::filesystem::path&) {
    it.title = "Log weight at 0, beta > p-1: capacity mixes mu(B_r) and mu(B_R)";
    const double p = 2.0, beta = 3.0;
    const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_zero(2, p, beta));
    const ExponentReport rep = exponent_report(P);
    endpoints(rec, rep, {{SetId::lQ0, p}, {SetId::uQ0, p}}, 0.05);
    attained(rec, rep, {{SetId::lQ0, Attainment::no}, {SetId::uQ0, Attainment::yes}});
    structure(rec, rep);
    const double w = (p - 1) / beta;
    const Form composite = [&P, p, w](double tr, double tR) {
        const LogScalar a = P.ball_measure_log(tR) / LogScalar::from_log(p * tR);
        const LogScalar b = P.ball_measure_log(tr) / LogScalar::from_log(p * tr);
        return log_pow(a, 1 - w) * log_pow(b, w) * LogScalar::from_log((1 - p) * std::log(tR - tr));
    };
    spread_check(rec, "composite law", small_log_spread(P, p, composite), 3.0);
    const BoundCheckReport low =
        check_bound(find_bound("LB-BORDER-uQ"), P, p, std::nullopt, default_grid(P, Regime::small), rep);
    rec.truth("LB-BORDER-uQ applicable and consistent", low.consistent);
    rec.equal("point capacity", to_string(point_capacity_limit_log(P, p, -1.0).kind), "positive");
    rec.equal("point capacity from exponents", to_string(classify_point_capacity_by_exponents(rep, p)),
              "indeterminate");
}

void item_log_inf(GalleryItem& it, Recorder& rec, const std::filesystem::path&) {
    it.title = "Log weight at infinity: large-radius law and parabolicity";
    const double p = 2.0;
    const MeasureProfile P = MeasureProfile::from_weight(make_power_log_at_infinity(2, p, -1.0));
    const ExponentReport rep = exponent_report(P);
    endpoints(rec, rep, {{SetId::lQinf, p}, {SetId::uQinf, p}}, 0.05);
    attained(rec, rep, {{SetId::lQinf, Attainment::no}, {SetId::uQinf, Attainment::yes}});
    structure(rec, rep);
    const Form large = bound_form(P, p, "LB-BORDER-uQ");  // mu(B_R)/R^p log(R/r)^(1-p)
    spread_check(rec, "large-radius law mu(B_R)/R^p log(R/r)^(1-p)",
                 ratio_spread(P, p, large, 1.0, std::log(1e12), kLn2, std::log(1e6), INFINITY), 3.0);
    for (double beta : {-1.0, 0.5, 2.0}) {
        const MeasureProfile Q = MeasureProfile::from_weight(make_power_log_at_infinity(2, p, beta));
        const double sigma = 1 + beta / (1 - p);
        char name[96];
        std::snprintf(name, sizeof name, "parabolicity beta=%g (sigma=%g)", beta, sigma);
        rec.equal(name, to_string(parabolicity(Q, p).verdict), sigma < 0 ? "hyperbolic" : "parabolic");
    }
}

void item_oscillating(GalleryItem& it, Recorder& rec, const std::filesystem::path&) {
    it.title = "Analytic bracket (1, 3) strictly wider than the Q endpoints";
    const MeasureProfile P = MeasureProfile::from_weight(make_oscillating(2));
    const ExponentReport rep = exponent_report(P);
    rec.near("bracket lower", rep.bracket_zero->loq, 1.0, 0.01);
    rec.near("bracket upper", rep.bracket_zero->uq, 3.0, 0.01);
    endpoints(rec, rep, {{SetId::lQ0, 2.0}, {SetId::uQ0, 2.0}}, 0.05);
    structure(rec, rep);
}

void item_cantor(GalleryItem& it, Recorder& rec, const std::filesystem::path&) {
    it.title = "Cantor staircase: dimension log 2 / log 3, no density";
    const MeasureProfile P = make_cantor_profile(20);
    const ExponentReport rep = exponent_report(P);
    const double d = kLn2 / kLn3;
    endpoints(rec, rep, {{SetId::lS0, d}, {SetId::uS0, d}}, 0.01);
    structure(rec, rep);
    bool unsupported = false;
    try {
        (void)q_bracket_analytic(P);
    } catch (const UnsupportedError&) {
        unsupported = true;
    }
    rec.truth("analytic bracket refused (not absolutely continuous)", unsupported);
}

using ItemFn = void (*)(GalleryItem&, Recorder&, const std::filesystem::path&);

const std::vector<std::pair<std::string, ItemFn>>& items() {
    static const std::vector<std::pair<std::string, ItemFn>> v = {
        {"ex1", item_ex1},
        {"ex-S-touch", item_s_touch},
        {"abcd", item_abcd},
        {"log-zero-a", item_log_zero_a},
        {"log-zero-b", item_log_zero_b},
        {"log-zero-c", item_log_zero_c},
        {"log-inf", item_log_inf},
        {"oscillating", item_oscillating},
        {"cantor", item_cantor},
    };
    return v;
}

Json item_json(const GalleryItem& it) {
    Json checks = Json::array();
    for (const auto& c : it.checks) {
        Json j{{"name", c.name}, {"expected", c.expected}, {"observed", c.observed}, {"pass", c.pass}};
        if (c.known_deviation) j["known_deviation"] = true;
        if (!c.note.empty()) j["note"] = c.note;
        checks.push_back(std::move(j));
    }
    Json out{{"id", it.id}, {"title", it.title}, {"passed", it.passed()}, {"checks", checks},
             {"artifacts", it.artifacts}};
    if (!it.error.empty()) out["error"] = it.error;
    return out;
}

}  // namespace

bool GalleryItem::passed() const {
    if (!error.empty()) return false;
    for (const auto& c : checks)
        if (!c.pass && !c.known_deviation) return false;
    return true;
}

std::vector<std::string> gallery_ids() {
    std::vector<std::string> ids;
    for (const auto& [id, fn] : items()) ids.push_back(id);
    return ids;
}

GalleryItem run_gallery_item(const std::string& id, const std::filesystem::path& dir) {
    for (const auto& [name, fn] : items()) {
        if (name != id) continue;
        GalleryItem it;
        it.id = id;
        Recorder rec(it);
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(it, rec, dir);
        } catch (const std::exception& e) {
            it.error = e.what();
        }
        it.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return it;
    }
    throw ParameterError("unknown gallery item '" + id + "'");
}

bool run_gallery(const std::filesystem::path& dir, const std::vector<std::string>& only, std::ostream& log) {
    std::filesystem::create_directories(dir);
    const std::vector<std::string> ids = only.empty() ? gallery_ids() : only;
    Json manifest_items = Json::array();
    bool all = true;
    for (const auto& id : ids) {
        const GalleryItem it = run_gallery_item(id, dir);
        write_text(dir / (id + ".json"), dump(item_json(it)));
        long failed = 0, known = 0;
        for (const auto& c : it.checks) {
            if (c.known_deviation)
                ++known;
            else if (!c.pass)
                ++failed;
        }
        manifest_items.push_back({{"id", id},
                                  {"passed", it.passed()},
                                  {"checks", it.checks.size()},
                                  {"failed", failed},
                                  {"known_deviations", known},
                                  {"report", id + ".json"}});
        all = all && it.passed();
        char buf[64];
        std::snprintf(buf, sizeof buf, " (%zu checks, %.2fs)", it.checks.size(), it.seconds);
        log << (it.passed() ? "PASS " : "FAIL ") << id << buf << '\n';
        if (!it.error.empty()) log << "  error: " << it.error << '\n';
        for (const auto& c : it.checks) {
            if (c.pass) continue;
            log << (c.known_deviation ? "  known deviation: " : "  failed: ") << c.name
                << " observed " << c.observed.dump() << " expected " << c.expected.dump() << '\n';
        }
    }
    write_text(dir / "manifest.json", dump(Json{{"passed", all}, {"items", manifest_items}}));
    return all;
}

}  // namespace radcap::cli
