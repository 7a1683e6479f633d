#include "cli.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gallery.hpp"
#include "radcap/bounds.hpp"
#include "radcap/capacity.hpp"
#include "radcap/exponents.hpp"
#include "radcap/measure.hpp"
#include "radcap/weights.hpp"
#include "report_json.hpp"

namespace radcap::cli {

namespace {

struct RunConfig {
    std::string weight = "constant";
    std::string weight_file;
    int n = 2;
    std::optional<double> p, beta, alpha, a, b, c, d;
    std::optional<int> depth;
    std::string out;
    double tol = 1e3;
    std::uint64_t seed = 1;
    bool audit = false;

    std::string grid;  // lo:hi:count in radii
    std::optional<int> grid_ladder;

    int samples = 256;
    std::optional<double> min_log_ratio;

    std::optional<double> r;
    std::string R;

    std::vector<std::string> bounds;
    std::string regime = "small";
    std::optional<double> q;
    std::string rows;
    int grid_points = 40;
    double margin = 0.05;

    std::vector<std::string> only;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read " + path);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

MeasureProfile make_profile(const RunConfig& c) {
    if (!c.weight_file.empty()) return MeasureProfile::from_weight(parse_weight(read_file(c.weight_file)));
    if (!c.weight.empty() && c.weight.front() == '{') return MeasureProfile::from_weight(parse_weight(c.weight));
    if (c.weight == "cantor") return make_cantor_profile(c.depth.value_or(20));
    BuilderParams bp;
    bp.n = c.n;
    bp.p = c.p;
    bp.beta = c.beta;
    bp.alpha = c.alpha;
    bp.a = c.a;
    bp.b = c.b;
    bp.c = c.c;
    bp.d = c.d;
    bp.depth = c.depth;
    return MeasureProfile::from_weight(build_weight(c.weight, bp));
}

struct GridArg {
    double t_lo, t_hi;
    int count;
};

GridArg parse_grid(const std::string& s) {
    std::vector<std::string> f;
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ':');) f.push_back(part);
    if (f.size() != 3) throw ConfigError("grid must be lo:hi:count, got '" + s + "'");
    double lo, hi;
    int count;
    try {
        lo = std::stod(f[0]);
        hi = std::stod(f[1]);
        count = std::stoi(f[2]);
    } catch (const std::exception&) {
        throw ConfigError("grid must be lo:hi:count, got '" + s + "'");
    }
    if (!(lo > 0) || !(hi >= lo) || !std::isfinite(hi)) throw ConfigError("grid needs 0 < lo <= hi < inf");
    if (count < 1 || (count == 1 && hi != lo)) throw ConfigError("grid needs count >= 2 (or lo = hi)");
    return {std::log(lo), std::log(hi), count};
}

std::vector<double> grid_points(const GridArg& g) {
    if (g.count == 1) return {g.t_lo};
    auto t = log_grid(g.t_lo, g.t_hi, g.count);
    // Pin the endpoints to the user's values.
    t.front() = g.t_lo;
    t.back() = g.t_hi;
    return t;
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + c.out);
    f << text;
}

double require_p(const RunConfig& c) {
    if (!c.p) throw ConfigError("--p is required for this subcommand");
    return *c.p;
}

ExponentConfig exponent_config(const RunConfig& c) {
    ExponentConfig cfg;
    cfg.samples = c.samples;
    cfg.seed = c.seed;
    cfg.min_log_ratio = c.min_log_ratio;
    return cfg;
}

// ---------------------------------------------------------------------------

void cmd_measure(const RunConfig& c, std::ostream& out) {
    const MeasureProfile P = make_profile(c);
    std::vector<double> t;
    if (c.grid_ladder) {
        if (!P.has_density() || P.weight().landmarks.empty())
            throw ConfigError("--grid-ladder needs a ladder weight");
        for (const auto& l : P.weight().landmarks)
            if (std::abs(l.k) <= *c.grid_ladder) t.push_back(l.t);
    } else if (!c.grid.empty()) {
        t = grid_points(parse_grid(c.grid));
    } else if (!P.has_density()) {
        const int depth = c.depth.value_or(20);
        for (int j = 0; j <= depth; ++j) {
            t.push_back(-j * std::log(3.0));
            t.push_back(std::log(2.0) - (j + 1) * std::log(3.0));
        }
    } else {
        t = log_grid(std::log(1e-6), std::log(1e6), 49);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    emit(c, out, measure_csv(P, t));
}

void cmd_exponents(const RunConfig& c, std::ostream& out) {
    const MeasureProfile P = make_profile(c);
    const ExponentReport rep = exponent_report(P, exponent_config(c));
    Json j{{"weight", P.name()}, {"n", P.n()}, {"report", to_json(rep)}};
    emit(c, out, dump(j));
}

void cmd_capacity(const RunConfig& c, std::ostream& out) {
    const double p = require_p(c);
    const MeasureProfile P = make_profile(c);
    const bool whole = c.R == "inf";
    double t_R = INFINITY;
    if (!c.R.empty() && !whole) {
        double R;
        try {
            R = std::stod(c.R);
        } catch (const std::exception&) {
            throw ConfigError("--R must be a number or 'inf'");
        }
        if (!(R > 0)) throw ConfigError("--R must be positive");
        t_R = std::log(R);
    }
    std::vector<std::pair<double, double>> pairs;
    if (c.r) {
        if (!(*c.r > 0)) throw ConfigError("--r must be positive");
        if (c.R.empty()) throw ConfigError("--r needs --R");
        pairs.emplace_back(std::log(*c.r), t_R);
    } else if (!c.grid.empty()) {
        const auto t = grid_points(parse_grid(c.grid));
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (whole) {
                pairs.emplace_back(t[i], INFINITY);
                continue;
            }
            for (std::size_t j = i + 1; j < t.size(); ++j)
                if (t[j] - t[i] >= std::log(2.0) * (1 - 1e-12)) pairs.emplace_back(t[i], t[j]);
        }
    } else {
        throw ConfigError("capacity needs --r and --R, or --grid");
    }
    emit(c, out, capacity_csv(P, p, pairs));
}

void cmd_check(const RunConfig& c, std::ostream& out) {
    const double p = require_p(c);
    const MeasureProfile P = make_profile(c);
    const ExponentReport rep = exponent_report(P, exponent_config(c));
    const Regime regime = regime_from_string(c.regime);
    GridSpec g = default_grid(P, regime);
    g.points = c.grid_points;
    if (!c.grid.empty()) {
        const GridArg ga = parse_grid(c.grid);
        g.t_lo = ga.t_lo;
        g.t_hi = ga.t_hi;
        g.points = ga.count;
    }

    std::vector<const BoundSpec*> chosen;
    if (!c.bounds.empty()) {
        for (const auto& id : c.bounds) chosen.push_back(&find_bound(id));
    } else if (c.audit) {
        for (const auto& b : catalog())
            if (p > 1 || b.valid_at_p1) chosen.push_back(&b);
    } else {
        for (const auto& [b, h] : applicable_bounds(rep, p, c.q, regime, c.margin)) {
            if (b.needs_q && !h.q && !c.q) continue;
            // the pairwise comparison below shares one q
            if (!(p > 1) && b.needs_q && !c.q) continue;
            chosen.push_back(&find_bound(b.id));
        }
    }

    Json list = Json::array();
    if (!(p > 1)) {
        // No exact capacity: compare every applicable lower bound with every applicable upper bound.
        for (const BoundSpec* lo : chosen)
            for (const BoundSpec* up : chosen)
                if (lo->direction == Direction::lower && up->direction == Direction::upper)
                    list.push_back(to_json(compare_bounds(*lo, *up, P, p, c.q, g, c.tol)));
        emit(c, out, dump(list));
        return;
    }
    CheckOptions opt;
    opt.audit = c.audit;
    opt.tol = c.tol;
    opt.margin = c.margin;
    opt.regime = regime;
    opt.keep_rows = !c.rows.empty();
    for (const BoundSpec* b : chosen) {
        const BoundCheckReport r = check_bound(*b, P, p, c.q, g, rep, opt);
        list.push_back(to_json(r));
        if (!c.rows.empty()) {
            std::ofstream f(c.rows + "_" + b->id + ".csv", std::ios::binary);
            if (!f) throw ConfigError("cannot write rows for " + b->id);
            f << check_rows_csv(r);
        }
    }
    emit(c, out, dump(list));
}

int cmd_gallery(const RunConfig& c, std::ostream& out) {
    const std::string dir = c.out.empty() ? "gallery" : c.out;
    return run_gallery(dir, c.only, out) ? 0 : 4;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Capacities of annuli for radial weights"};
    app.name("radcap");
    app.fallthrough();
    app.set_config("--config", "", "Read options from a TOML/INI file (flags override it)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    bool dump_config = false;
    app.add_flag("--dump-config", dump_config, "Print the given options as a config file and exit")
        ->configurable(false);

    app.add_option("--weight", c.weight, "Builder name (" + [] {
        std::string s = "cantor";
        for (const auto& n : builder_names()) s += ", " + n;
        return s;
    }() + ") or an inline JSON weight")->capture_default_str();
    app.add_option("--weight-file", c.weight_file, "JSON weight: {\"builder\": ...} or {\"n\": .., \"pieces\": [..]}");
    app.add_option("--n", c.n, "Dimension")->capture_default_str();
    app.add_option("--p", c.p, "Capacity exponent p");
    app.add_option("--beta", c.beta, "Log exponent for powerlog0 / powerloginf");
    app.add_option("--alpha", c.alpha, "Exponent for the power weight");
    app.add_option("--a", c.a, "abcd parameter a");
    app.add_option("--b", c.b, "abcd parameter b");
    app.add_option("--c", c.c, "abcd parameter c");
    app.add_option("--d", c.d, "abcd parameter d");
    app.add_option("--depth", c.depth, "Ladder depth (ladders) or tabulation depth (cantor)");
    app.add_option("--out", c.out, "Output file (gallery: output directory)");
    app.add_option("--tol", c.tol, "Consistency tolerance: bound violated beyond this factor")->capture_default_str();
    app.add_option("--seed", c.seed, "Seed for grid-pair subsampling")->capture_default_str();
    app.add_flag("--audit", c.audit, "Evaluate bounds even when their hypotheses fail");

    auto* measure = app.add_subcommand("measure", "CSV of r, f = mu(B_r), f' on a grid");
    measure->add_option("--grid", c.grid, "lo:hi:count, geometric in r");
    measure->add_option("--grid-ladder", c.grid_ladder, "Rows at every ladder radius with index |k| <= K");

    auto* exponents = app.add_subcommand("exponents", "JSON report of the eight exponent sets");
    exponents->add_option("--samples", c.samples, "Grid samples per window")->capture_default_str();
    exponents->add_option("--min-log-ratio", c.min_log_ratio, "Smallest log(R/r) for Q slopes");

    auto* capacity = app.add_subcommand("capacity", "CSV of annulus capacities");
    capacity->add_option("--r", c.r, "Inner radius");
    capacity->add_option("--R", c.R, "Outer radius, or 'inf' for the whole space");
    capacity->add_option("--grid", c.grid, "lo:hi:count; all pairs with R >= 2r");

    auto* check = app.add_subcommand("check", "JSON list of bound checks");
    check->add_option("--bound", c.bounds, "Bound id (repeatable); default: every applicable bound");
    check->add_option("--regime", c.regime, "small, large or all")->capture_default_str();
    check->add_option("--q", c.q, "Exponent for bounds that take one");
    check->add_option("--margin", c.margin, "Membership margin for exponent sets")->capture_default_str();
    check->add_option("--grid", c.grid, "lo:hi:count radii (default: regime grid)");
    check->add_option("--grid-points", c.grid_points, "Points on the default grid")->capture_default_str();
    check->add_option("--rows", c.rows, "Write per-pair rows to <prefix>_<bound>.csv");
    check->add_option("--samples", c.samples, "Grid samples per exponent window")->capture_default_str();

    auto* gallery = app.add_subcommand("gallery", "Run the example gallery and write expected-vs-observed manifests");
    gallery->add_option("--only", c.only, "Run only these items")->check(CLI::IsMember(gallery_ids()));

    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "radcap: " << e.what() << '\n';
        return 2;
    }

    try {
        if (dump_config) {
            out << app.config_to_str(false, false);  // unset options would read back as empty strings
            return 0;
        }
        if (app.got_subcommand(measure)) {
            cmd_measure(c, out);
        } else if (app.got_subcommand(exponents)) {
            cmd_exponents(c, out);
        } else if (app.got_subcommand(capacity)) {
            cmd_capacity(c, out);
        } else if (app.got_subcommand(check)) {
            cmd_check(c, out);
        } else if (app.got_subcommand(gallery)) {
            return cmd_gallery(c, out);
        } else {
            err << "radcap: a subcommand is required (measure, exponents, capacity, check, gallery)\n";
            return 2;
        }
    } catch (const ConfigError& e) {
        err << "radcap: " << e.what() << '\n';
        return 2;
    } catch (const ParameterError& e) {
        err << "radcap: " << e.what() << '\n';
        return 2;
    } catch (const UnsupportedError& e) {
        err << "radcap: unsupported: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        err << "radcap: " << e.what() << " (use --audit to evaluate anyway)\n";
        return 2;
    } catch (const std::exception& e) {
        err << "radcap: numeric failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace radcap::cli
