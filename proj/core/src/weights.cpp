#include "radcap/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <set>

#include "json.hpp"

namespace radcap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLn2 = std::log(2.0);
const double kLn4 = std::log(4.0);
// Deepest log-radius a default ladder may reach.
const double kDepthBudget = std::ldexp(1.0, 30) * std::log(2.0);

double safe_exp(double t) { return t == -kInf ? 0.0 : std::exp(t); }

bool near_breakpoint(double t, double b) {
    return std::isfinite(b) && std::fabs(t - b) <= 1e-15 * std::max(1.0, std::fabs(b));
}

WeightPiece piece_t(double t_lo, double t_hi, double log_c, double alpha, double beta = 0.0) {
    return WeightPiece::from_log_radii(t_lo, t_hi, LogScalar::from_log(log_c), alpha, beta);
}

int auto_depth(int requested, const auto& deepest_abs_t_for) {
    if (requested >= 0) return requested;
    int k = 0;
    while (k < 64 && deepest_abs_t_for(k + 1) <= kDepthBudget) ++k;
    return k;
}

}  // namespace

WeightPiece WeightPiece::from_radii(double lo, double hi, LogScalar c, double alpha, double beta) {
    WeightPiece p;
    p.lo = lo;
    p.hi = hi;
    p.t_lo = lo > 0 ? std::log(lo) : -kInf;
    p.t_hi = hi == kInf ? kInf : std::log(hi);
    p.coeff = c;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

WeightPiece WeightPiece::from_log_radii(double t_lo, double t_hi, LogScalar c, double alpha, double beta) {
    WeightPiece p;
    p.t_lo = t_lo;
    p.t_hi = t_hi;
    p.lo = safe_exp(t_lo);
    p.hi = safe_exp(t_hi);
    p.coeff = c;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

LogScalar WeightPiece::value_at_log(double t) const {
    double lm = alpha * t;
    if (beta != 0.0) lm += beta * std::log(std::fabs(t));
    return coeff * LogScalar::from_log(lm);
}

void RadialWeight::validate() const {
    if (n < 2) throw ParameterError("weight: dimension n must be >= 2");
    if (pieces.empty()) throw ParameterError("weight: no pieces");
    if (pieces.front().t_lo != -kInf) throw ParameterError("weight: first piece must start at 0");
    if (pieces.back().t_hi != kInf) throw ParameterError("weight: last piece must extend to infinity");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& p = pieces[i];
        if (!(p.t_lo < p.t_hi)) throw ParameterError("weight: piece with empty interval");
        if (p.coeff.sign() <= 0 || !p.coeff.is_finite())
            throw ParameterError("weight: piece coefficient must be positive and finite");
        if (!std::isfinite(p.alpha) || !std::isfinite(p.beta))
            throw ParameterError("weight: non-finite exponent");
        if (p.beta != 0.0 && p.t_lo <= 0.0 && p.t_hi >= 0.0)
            throw ParameterError("weight: a piece with a log factor must avoid rho = 1");
        if (i + 1 < pieces.size() && p.t_hi != pieces[i + 1].t_lo)
            throw ParameterError("weight: pieces do not abut");
    }
    if (continuity_enforced) {
        for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
            const double t = pieces[i].t_hi;
            const double l = pieces[i].value_at_log(t).log_mag();
            const double r = pieces[i + 1].value_at_log(t).log_mag();
            if (std::fabs(l - r) > 1e-12 * std::max(1.0, std::fabs(l)))
                throw ParameterError("weight: discontinuity at breakpoint " + std::to_string(i));
        }
    }
}

std::size_t RadialWeight::piece_index_log(double t) const {
    auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                               [](double x, const WeightPiece& p) { return x < p.t_lo; });
    if (it == pieces.begin()) return 0;
    return static_cast<std::size_t>(it - pieces.begin()) - 1;
}

std::vector<double> RadialWeight::log_breakpoints() const {
    std::vector<double> out;
    for (std::size_t i = 1; i < pieces.size(); ++i) out.push_back(pieces[i].t_lo);
    return out;
}

LogScalar eval_weight_log(const RadialWeight& w, double t) {
    return w.pieces[w.piece_index_log(t)].value_at_log(t);
}

LogScalar eval_weight(const RadialWeight& w, double rho) {
    if (!(rho > 0)) throw ParameterError("eval_weight: rho must be positive");
    return eval_weight_log(w, std::log(rho));
}

double log_derivative_ratio_log(const RadialWeight& w, double t, Side side) {
    std::size_t i = w.piece_index_log(t);
    const bool at_lo = i > 0 && near_breakpoint(t, w.pieces[i].t_lo);
    const bool at_hi = i + 1 < w.pieces.size() && near_breakpoint(t, w.pieces[i].t_hi);
    if (at_lo || at_hi) {
        if (side == Side::none)
            throw UndefinedPointError("log_derivative_ratio: point is a breakpoint; choose a side");
        if (at_lo && side == Side::left) --i;
        if (at_hi && side == Side::right) ++i;
        return w.pieces[i].log_derivative_at_log(t);
    }
    return w.pieces[i].log_derivative_at_log(t);
}

double log_derivative_ratio(const RadialWeight& w, double rho, Side side) {
    if (!(rho > 0)) throw ParameterError("log_derivative_ratio: rho must be positive");
    return log_derivative_ratio_log(w, std::log(rho), side);
}

namespace {

struct RatioRange {
    double lo = kInf, hi = -kInf;
    double t_at_lo = 0.0;
};

RatioRange ratio_range(const RadialWeight& w) {
    RatioRange r;
    for (const auto& p : w.pieces) {
        // Monotone in t on each piece: the extremes are the endpoint limits.
        const double ends[2] = {p.t_lo, p.t_hi};
        for (double t : ends) {
            const double v = std::isfinite(t) ? p.log_derivative_at_log(t) : p.alpha;
            if (v < r.lo) {
                r.lo = v;
                r.t_at_lo = std::isfinite(t) ? t : (std::isfinite(p.t_lo) ? p.t_lo : (std::isfinite(p.t_hi) ? p.t_hi : 0.0));
            }
            r.hi = std::max(r.hi, v);
        }
    }
    return r;
}

}  // namespace

AdmissibilityVerdict check_admissible(const RadialWeight& w) {
    w.validate();
    const RatioRange r = ratio_range(w);
    AdmissibilityVerdict v;
    v.gamma1 = -r.lo;
    v.gamma2 = r.hi;
    v.witness_t = r.t_at_lo;
    v.witness_rho = safe_exp(r.t_at_lo);
    v.passes = v.gamma1 < w.n - 1 && std::isfinite(v.gamma2);
    v.caveat = !v.passes && v.gamma1 >= w.n - 1 && v.gamma1 < w.n;
    return v;
}

StretchVerdict check_quasiconformal_stretch(const RadialWeight& w) {
    w.validate();
    const RatioRange r = ratio_range(w);
    StretchVerdict v;
    v.m = 1.0 + r.lo / (w.n - 1);
    v.M = 1.0 + r.hi / (w.n - 1);
    v.ok = v.m > 0 && v.m <= v.M && std::isfinite(v.M);
    return v;
}

// ---------------------------------------------------------------------------
// Builders.

double ex1_log_alpha(int k) { return -std::ldexp(1.0, k) * kLn2; }
double ex1_log_beta(int k) { return 1.5 * ex1_log_alpha(k); }

RadialWeight make_constant(int n) { return make_power(n, 0.0); }

RadialWeight make_power(int n, double alpha) {
    RadialWeight w;
    w.n = n;
    w.name = alpha == 0.0 ? "constant" : "power";
    w.pieces.push_back(piece_t(-kInf, kInf, 0.0, alpha));
    w.validate();
    return w;
}

RadialWeight make_power_log_at_zero(int n, double p, double beta) {
    if (!(p > 0)) throw ParameterError("powerlog0: p must be positive");
    RadialWeight w;
    w.n = n;
    w.name = "powerlog0";
    w.pieces.push_back(piece_t(-kInf, -1.0, 0.0, p - n, beta));
    w.pieces.push_back(piece_t(-1.0, kInf, 0.0, p - n));
    w.t_ladder_top = -1.0;
    w.attain_zero = {-1.0 - 32 * kLn2, -1.0};
    w.validate();
    return w;
}

RadialWeight make_power_log_at_infinity(int n, double p, double beta) {
    if (!(p > 0)) throw ParameterError("powerloginf: p must be positive");
    RadialWeight w;
    w.n = n;
    w.name = "powerloginf";
    w.pieces.push_back(piece_t(-kInf, 1.0, 0.0, p - n));
    w.pieces.push_back(piece_t(1.0, kInf, 0.0, p - n, beta));
    w.attain_inf = {1.0, 1.0 + 32 * kLn2};
    w.validate();
    return w;
}

RadialWeight make_ex1(LadderOptions opt) {
    const int K = auto_depth(opt.depth, [](int k) { return -ex1_log_alpha(k + 1); });
    RadialWeight w;
    w.n = 2;
    w.name = "ex1";
    w.ladder_depth = K;
    auto la = ex1_log_alpha;
    auto lb = ex1_log_beta;
    WeightPiece deep = piece_t(-kInf, la(K + 1), la(K + 1), 0.0);
    deep.extended = true;
    w.pieces.push_back(deep);
    for (int k = K; k >= 0; --k) {
        w.pieces.push_back(piece_t(la(k + 1), lb(k), la(k + 1), 0.0));
        w.pieces.push_back(piece_t(lb(k), la(k), -la(k), 2.0));
    }
    w.pieces.push_back(piece_t(la(0), kInf, 0.0, 1.0));
    for (int k = 0; k <= K + 1; ++k) w.landmarks.push_back({"alpha", k, la(k)});
    for (int k = 0; k <= K; ++k) w.landmarks.push_back({"beta", k, lb(k)});
    w.t_generated_lo = la(K + 1);
    w.t_generated_hi = la(0);
    w.t_ladder_top = la(0);
    w.window_zero = {la(K + 1), la(K)};
    w.attain_zero = {la(K + 1), la(std::max(K - 3, 0))};
    w.validate();
    return w;
}

RadialWeight make_ex_S_touch(LadderOptions opt) {
    const int K = auto_depth(opt.depth, [](int k) { return -ex1_log_alpha(k + 1); });
    if (K < 3) throw ParameterError("ex-S-touch: depth must be >= 3");
    RadialWeight w;
    w.n = 2;
    w.name = "ex-S-touch";
    w.ladder_depth = K;
    w.continuity_enforced = false;
    auto la = ex1_log_alpha;
    auto lg = [](int k) { return ex1_log_alpha(k + 1) + std::log(std::log(double(k))); };
    auto ld = [](int k) { return ex1_log_alpha(k + 1) + 2.0 * std::log(std::log(double(k))); };
    WeightPiece deep = piece_t(-kInf, la(K + 1), la(K + 1), 0.0);
    deep.extended = true;
    w.pieces.push_back(deep);
    for (int k = K; k >= 3; --k) {
        w.pieces.push_back(piece_t(la(k + 1), lg(k), la(k + 1), 0.0));
        w.pieces.push_back(piece_t(lg(k), ld(k), -ld(k), 2.0));
        w.pieces.push_back(piece_t(ld(k), k > 3 ? la(k) : kInf, 0.0, 1.0));
    }
    for (int k = 3; k <= K + 1; ++k) w.landmarks.push_back({"alpha", k, la(k)});
    for (int k = 3; k <= K; ++k) {
        w.landmarks.push_back({"gamma", k, lg(k)});
        w.landmarks.push_back({"delta", k, ld(k)});
    }
    w.t_generated_lo = la(K + 1);
    w.t_generated_hi = la(3);
    w.t_ladder_top = la(3);
    w.window_zero = {la(K + 1), la(K)};
    w.attain_zero = {la(K + 1), la(std::max(K - 3, 0))};
    w.validate();
    return w;
}

RadialWeight make_abcd(int n, double a, double b, double c, double d, LadderOptions opt) {
    if (!(1 < a && a < b && b < c && c < d))
        throw ParameterError("abcd: need 1 < a < b < c < d");
    if (n < 2) throw ParameterError("abcd: n must be >= 2");
    const double lambda = (c - a) * (d - b) / ((b - a) * (d - c));
    auto la = [lambda](int k) { return -std::pow(lambda, k) * kLn2; };
    const double ratio = (d - b) / (d - c);
    auto lb = [&](int k) { return ratio * la(k); };
    const int K = auto_depth(opt.depth, [&](int k) { return -la(k + 1); });
    RadialWeight w;
    w.n = n;
    w.name = "abcd";
    w.ladder_depth = K;
    w.continuity_enforced = false;
    WeightPiece deep = piece_t(-kInf, la(K + 1), (b - a) * la(K + 1), a - n);
    deep.extended = true;
    w.pieces.push_back(deep);
    for (int k = K; k >= 0; --k) {
        w.pieces.push_back(piece_t(la(k + 1), lb(k), (b - a) * la(k + 1), a - n));
        w.pieces.push_back(piece_t(lb(k), la(k), (b - d) * la(k), d - n));
    }
    // Constant tail alpha_0, taken as stated even though it need not match at alpha_0.
    w.pieces.push_back(piece_t(la(0), kInf, la(0), 0.0));
    for (int k = 0; k <= K + 1; ++k) w.landmarks.push_back({"alpha", k, la(k)});
    for (int k = 0; k <= K; ++k) w.landmarks.push_back({"beta", k, lb(k)});
    w.t_generated_lo = la(K + 1);
    w.t_generated_hi = la(0);
    w.t_ladder_top = la(0);
    w.window_zero = {la(K + 1), la(K)};
    w.attain_zero = {la(K + 1), la(std::max(K - 3, 0))};
    w.validate();
    return w;
}

RadialWeight make_oscillating(int n, LadderOptions opt) {
    if (n < 2) throw ParameterError("oscillating: n must be >= 2");
    const int K = opt.depth >= 0 ? opt.depth : 64;
    if (K < 1) throw ParameterError("oscillating: depth must be >= 1");
    const double log_omega = std::log(unit_sphere_area(n));
    RadialWeight w;
    w.n = n;
    w.name = "oscillating";
    w.ladder_depth = K;
    w.continuity_enforced = false;  // f is continuous, f' jumps by (n+1)/(n-1)
    auto log_a = [](int k) { return kLn2 - k * kLn4; };
    // f = a_k r^{n-1} on [4^-k, 2 4^-k], r^{n+1}/a_k on [2 4^-k, 4^{1-k}]; w = f'/(omega rho^{n-1}).
    auto piece_a = [&](int k, double t_lo, double t_hi) {
        return piece_t(t_lo, t_hi, std::log(n - 1.0) + log_a(k) - log_omega, -1.0);
    };
    auto piece_b = [&](int k, double t_lo, double t_hi) {
        return piece_t(t_lo, t_hi, std::log(n + 1.0) - log_a(k) - log_omega, 1.0);
    };
    WeightPiece deep = piece_a(K, -kInf, -K * kLn4);  // == t0(K)
    deep.extended = true;
    w.pieces.push_back(deep);
    auto t0 = [](int k) { return -k * kLn4; };
    for (int k = K; k >= -K; --k) {
        w.pieces.push_back(piece_a(k, t0(k), t0(k) + kLn2));
        w.pieces.push_back(piece_b(k, t0(k) + kLn2, t0(k - 1)));
    }
    WeightPiece top = piece_b(-K, t0(-K - 1), kInf);
    top.extended = true;
    w.pieces.push_back(top);
    for (int k = K; k >= -K; --k) w.landmarks.push_back({"quarter", k, -k * kLn4});
    w.t_generated_lo = -K * kLn4;
    w.t_generated_hi = (K + 1) * kLn4;
    w.t_ladder_top = 0.0;
    const int span = std::min(K, 48);
    w.window_zero = w.attain_zero = {-K * kLn4, -(K - span) * kLn4};
    w.window_inf = w.attain_inf = {(K + 1 - span) * kLn4, (K + 1) * kLn4};
    // log(f / r^n) wobbles by log 2 per period; a spread of span/2 periods keeps the slope error below 0.03.
    w.q_min_log_ratio = 0.5 * span * kLn4;
    w.validate();
    return w;
}

RadialWeight make_log_two_plus(int n, int pieces_per_decade) {
    if (pieces_per_decade < 1) throw ParameterError("log2plus: pieces_per_decade must be >= 1");
    RadialWeight w;
    w.n = n;
    w.name = "log2plus";
    const int decades = 16;  // nodes from 1e-8 to 1e8
    const int N = decades * pieces_per_decade;
    std::vector<double> t(N + 1), lv(N + 1);
    for (int i = 0; i <= N; ++i) {
        t[i] = std::log(10.0) * (-8.0 + 16.0 * i / N);
        lv[i] = std::log(std::log(2.0 + std::exp(t[i])));
    }
    lv[0] = std::log(std::log(2.0));
    w.pieces.push_back(piece_t(-kInf, t[0], lv[0], 0.0));
    for (int i = 0; i < N; ++i) {
        const double alpha = (lv[i + 1] - lv[i]) / (t[i + 1] - t[i]);
        w.pieces.push_back(piece_t(t[i], t[i + 1], lv[i] - alpha * t[i], alpha));
    }
    // log(2+rho) ~ c log rho beyond the last node.
    w.pieces.push_back(piece_t(t[N], kInf, lv[N] - std::log(t[N]), 0.0, 1.0));
    w.validate();
    return w;
}

// ---------------------------------------------------------------------------
// Grammar.

namespace {

using nlohmann::json;

json encode_real(double x) {
    if (x == kInf) return "inf";
    if (x == -kInf) return "-inf";
    return x;
}

double decode_real(const json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
    }
    throw ParameterError(std::string("weight: bad number for ") + what);
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ParameterError(std::string("weight: unknown key '") + it.key() + "' in " + where);
}

json encode_window(const ScaleWindow& w) { return json::array({w.t_lo, w.t_hi}); }

ScaleWindow decode_window(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParameterError("weight: window must be [t_lo, t_hi]");
    return {decode_real(j[0], "window"), decode_real(j[1], "window")};
}

}  // namespace

std::string serialize_weight(const RadialWeight& w) {
    json pieces = json::array();
    for (const auto& p : w.pieces) {
        json jp;
        jp["lo"] = encode_real(p.lo);
        jp["hi"] = encode_real(p.hi);
        jp["log_lo"] = encode_real(p.t_lo);
        jp["log_hi"] = encode_real(p.t_hi);
        jp["log_c"] = p.coeff.log_mag();
        jp["alpha"] = p.alpha;
        jp["beta"] = p.beta;
        if (p.extended) jp["extended"] = true;
        pieces.push_back(jp);
    }
    json j;
    j["n"] = w.n;
    j["name"] = w.name;
    j["continuity_enforced"] = w.continuity_enforced;
    j["ladder_depth"] = w.ladder_depth;
    j["t_ladder_top"] = w.t_ladder_top;
    j["t_generated"] = json::array({encode_real(w.t_generated_lo), encode_real(w.t_generated_hi)});
    j["windows"] = {{"zero", encode_window(w.window_zero)},
                    {"inf", encode_window(w.window_inf)},
                    {"attain_zero", encode_window(w.attain_zero)},
                    {"attain_inf", encode_window(w.attain_inf)}};
    j["q_min_log_ratio"] = w.q_min_log_ratio;
    json lm = json::array();
    for (const auto& l : w.landmarks) lm.push_back({{"label", l.label}, {"k", l.k}, {"t", l.t}});
    j["landmarks"] = lm;
    j["pieces"] = pieces;
    return j.dump();
}

RadialWeight parse_weight(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("weight: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParameterError("weight: expected a JSON object");
    try {
        if (j.contains("builder")) {
            reject_unknown(j, {"builder", "n", "p", "beta", "alpha", "a", "b", "c", "d", "depth"}, "builder spec");
            BuilderParams bp;
            if (j.contains("n")) bp.n = j["n"].get<int>();
            if (j.contains("p")) bp.p = j["p"].get<double>();
            if (j.contains("beta")) bp.beta = j["beta"].get<double>();
            if (j.contains("alpha")) bp.alpha = j["alpha"].get<double>();
            if (j.contains("a")) bp.a = j["a"].get<double>();
            if (j.contains("b")) bp.b = j["b"].get<double>();
            if (j.contains("c")) bp.c = j["c"].get<double>();
            if (j.contains("d")) bp.d = j["d"].get<double>();
            if (j.contains("depth")) bp.depth = j["depth"].get<int>();
            return build_weight(j["builder"].get<std::string>(), bp);
        }
        reject_unknown(j, {"n", "name", "continuity_enforced", "ladder_depth", "t_ladder_top", "t_generated",
                           "windows", "q_min_log_ratio", "landmarks", "pieces"},
                       "explicit weight");
        RadialWeight w;
        if (!j.contains("n") || !j.contains("pieces")) throw ParameterError("weight: need n and pieces");
        w.n = j["n"].get<int>();
        if (j.contains("name")) w.name = j["name"].get<std::string>();
        w.continuity_enforced = j.value("continuity_enforced", false);
        w.ladder_depth = j.value("ladder_depth", 0);
        if (j.contains("t_ladder_top")) w.t_ladder_top = decode_real(j["t_ladder_top"], "t_ladder_top");
        if (j.contains("t_generated")) {
            const ScaleWindow g = decode_window(j["t_generated"]);
            w.t_generated_lo = g.t_lo;
            w.t_generated_hi = g.t_hi;
        }
        if (j.contains("windows")) {
            const auto& ws = j["windows"];
            reject_unknown(ws, {"zero", "inf", "attain_zero", "attain_inf"}, "windows");
            if (ws.contains("zero")) w.window_zero = decode_window(ws["zero"]);
            if (ws.contains("inf")) w.window_inf = decode_window(ws["inf"]);
            if (ws.contains("attain_zero")) w.attain_zero = decode_window(ws["attain_zero"]);
            if (ws.contains("attain_inf")) w.attain_inf = decode_window(ws["attain_inf"]);
        }
        if (j.contains("q_min_log_ratio")) w.q_min_log_ratio = decode_real(j["q_min_log_ratio"], "q_min_log_ratio");
        if (j.contains("landmarks"))
            for (const auto& l : j["landmarks"])
                w.landmarks.push_back({l.at("label").get<std::string>(), l.at("k").get<int>(),
                                       decode_real(l.at("t"), "landmark")});
        for (const auto& jp : j["pieces"]) {
            reject_unknown(jp, {"lo", "hi", "log_lo", "log_hi", "c", "log_c", "alpha", "beta", "extended"}, "piece");
            LogScalar c;
            if (jp.contains("log_c")) {
                c = LogScalar::from_log(decode_real(jp["log_c"], "log_c"));
            } else if (jp.contains("c")) {
                const double cv = decode_real(jp["c"], "c");
                if (!(cv > 0)) throw ParameterError("weight: c must be positive");
                c = LogScalar::from_real(cv);
            } else {
                c = LogScalar::one();
            }
            const double alpha = jp.contains("alpha") ? decode_real(jp["alpha"], "alpha") : 0.0;
            const double beta = jp.contains("beta") ? decode_real(jp["beta"], "beta") : 0.0;
            WeightPiece p;
            if (jp.contains("log_lo") && jp.contains("log_hi")) {
                p = WeightPiece::from_log_radii(decode_real(jp["log_lo"], "log_lo"),
                                                decode_real(jp["log_hi"], "log_hi"), c, alpha, beta);
                if (jp.contains("lo")) p.lo = decode_real(jp["lo"], "lo");
                if (jp.contains("hi")) p.hi = decode_real(jp["hi"], "hi");
            } else {
                if (!jp.contains("lo") || !jp.contains("hi")) throw ParameterError("weight: piece needs lo and hi");
                p = WeightPiece::from_radii(decode_real(jp["lo"], "lo"), decode_real(jp["hi"], "hi"), c, alpha,
                                            beta);
            }
            p.extended = jp.value("extended", false);
            w.pieces.push_back(p);
        }
        w.validate();
        return w;
    } catch (const json::exception& e) {
        throw ParameterError(std::string("weight: malformed specification: ") + e.what());
    }
}

bool bitwise_equal(const RadialWeight& a, const RadialWeight& b) {
    auto same = [](double x, double y) { return std::memcmp(&x, &y, sizeof(double)) == 0; };
    if (a.n != b.n || a.continuity_enforced != b.continuity_enforced || a.pieces.size() != b.pieces.size())
        return false;
    if (!same(a.q_min_log_ratio, b.q_min_log_ratio)) return false;
    for (std::size_t i = 0; i < a.pieces.size(); ++i) {
        const auto& p = a.pieces[i];
        const auto& q = b.pieces[i];
        if (!same(p.lo, q.lo) || !same(p.hi, q.hi) || !same(p.t_lo, q.t_lo) || !same(p.t_hi, q.t_hi) ||
            !same(p.alpha, q.alpha) || !same(p.beta, q.beta) || p.coeff.sign() != q.coeff.sign() ||
            !same(p.coeff.log_mag(), q.coeff.log_mag()) || p.extended != q.extended)
            return false;
    }
    return true;
}

std::vector<std::string> builder_names() {
    return {"constant", "power", "powerlog0", "powerloginf", "ex1", "ex-S-touch", "abcd", "oscillating", "log2plus"};
}

RadialWeight build_weight(const std::string& name, const BuilderParams& bp) {
    const int n = bp.n.value_or(2);
    LadderOptions lo;
    if (bp.depth) lo.depth = *bp.depth;
    auto need_p = [&]() {
        if (!bp.p) throw ParameterError("weight '" + name + "' needs p");
        return *bp.p;
    };
    if (name == "constant") return make_constant(n);
    if (name == "power") return make_power(n, bp.alpha.value_or(0.0));
    if (name == "powerlog0") return make_power_log_at_zero(n, need_p(), bp.beta.value_or(0.0));
    if (name == "powerloginf") return make_power_log_at_infinity(n, need_p(), bp.beta.value_or(0.0));
    if (name == "ex1" || name == "ex-S-touch") {
        if (bp.n && *bp.n != 2) throw ParameterError("weight '" + name + "' is defined for n = 2 only");
        return name == "ex1" ? make_ex1(lo) : make_ex_S_touch(lo);
    }
    if (name == "abcd")
        return make_abcd(n, bp.a.value_or(2.0), bp.b.value_or(3.0), bp.c.value_or(10.0 / 3.0), bp.d.value_or(4.0),
                         lo);
    if (name == "oscillating") return make_oscillating(n, lo);
    if (name == "log2plus") return make_log_two_plus(n);
    throw ParameterError("unknown weight builder '" + name + "'");
}

}  // namespace radcap
