#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sturmspec/cli/expr.hpp"
#include "sturmspec/error.hpp"
#include "sturmspec/heleshaw.hpp"
#include "sturmspec/numerics.hpp"
#include "sturmspec/problem.hpp"
#include "sturmspec/specfun.hpp"

namespace sturmspec::cli {

using json = nlohmann::json;

enum class CoefficientKind { Constant, LinearViscosity, Expression, Tabulated };

struct ProblemConfig {
    double L = 1.0;
    CoefficientKind kind = CoefficientKind::Constant;
    // constant
    double p = 1.0, q = 1.0, r = 1.0;
    // linear-viscosity: p = slope x + intercept, q = k^2 p, r = k^2 slope
    double k = 1.0, mu0_slope = 0.0, mu0_intercept = 1.0;
    // expression
    std::string p_src, q_src, r_src;
    // tabulated
    std::vector<double> xs, ps, qs, rs;
    BoundaryParams boundary;
    SolverSettings settings;
};

struct HeleShawConfig {
    HeleShawParams params;
    std::vector<double> k_values{1, 2, 3, 4, 5, 6, 7, 8, 9};
    SolverSettings settings;
};

using Config = std::variant<ProblemConfig, HeleShawConfig>;

// linear viscosity data, for the hypergeometric cross-checks
struct LinearProfileRef {
    LinearProfile profile;
    double k = 1.0;
};

namespace detail {

// Walks one JSON object and remembers which keys were consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ParseError("expected an object", path_.empty() ? "<root>" : path_);
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
    bool has(const std::string& k) const { return j_.contains(k); }

    const json& at(const std::string& k) {
        seen_.insert(k);
        if (!j_.contains(k)) throw ParseError("missing field", key(k));
        return j_.at(k);
    }
    double num(const std::string& k) {
        const json& v = at(k);
        if (!v.is_number()) throw ParseError("expected a number", key(k));
        double d = v.get<double>();
        if (!std::isfinite(d)) throw ParseError("expected a finite number", key(k));
        return d;
    }
    double num(const std::string& k, double dflt) { return has(k) ? num(k) : (seen_.insert(k), dflt); }
    std::string str(const std::string& k) {
        const json& v = at(k);
        if (!v.is_string()) throw ParseError("expected a string", key(k));
        return v.get<std::string>();
    }
    std::vector<double> nums(const std::string& k) {
        const json& v = at(k);
        if (!v.is_array()) throw ParseError("expected an array of numbers", key(k));
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ParseError("expected a number", key(k) + "[" + std::to_string(i) + "]");
            out.push_back(v[i].get<double>());
        }
        return out;
    }
    Reader sub(const std::string& k) {
        const json& v = at(k);
        return Reader(v, key(k));
    }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ParseError("unknown key", key(it.key()));
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline SolverSettings read_settings(Reader& parent) {
    SolverSettings s;
    if (!parent.has("settings")) return s;
    Reader r = parent.sub("settings");
    s.rel_tol = r.num("rel_tol", s.rel_tol);
    s.abs_tol = r.num("abs_tol", s.abs_tol);
    s.root_tol = r.num("root_tol", s.root_tol);
    double ms = r.num("max_steps", double(s.max_steps));
    if (!(ms >= 1) || ms != std::floor(ms)) throw ParseError("expected a positive integer", r.key("max_steps"));
    s.max_steps = std::size_t(ms);
    r.finish();
    try {
        s.validate();
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), parent.key("settings"));
    }
    return s;
}

inline ExprPtr parse_field(const std::string& src, const std::string& where) {
    try {
        return parse_expression(src);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), where);
    }
}

inline ProblemConfig read_problem(Reader& root) {
    ProblemConfig c;
    c.L = root.num("L");
    if (!(c.L > 0)) throw ParseError("must be positive", "L");
    Reader co = root.sub("coefficients");
    std::string kind = co.str("kind");
    if (kind == "constant") {
        c.kind = CoefficientKind::Constant;
        c.p = co.num("p");
        c.q = co.num("q");
        c.r = co.num("r");
    } else if (kind == "linear-viscosity") {
        c.kind = CoefficientKind::LinearViscosity;
        c.k = co.num("k");
        c.mu0_slope = co.num("mu0_slope");
        c.mu0_intercept = co.num("mu0_intercept");
    } else if (kind == "expression") {
        c.kind = CoefficientKind::Expression;
        c.p_src = co.str("p");
        c.q_src = co.str("q");
        c.r_src = co.str("r");
        parse_field(c.p_src, co.key("p"));
        parse_field(c.q_src, co.key("q"));
        parse_field(c.r_src, co.key("r"));
    } else if (kind == "tabulated") {
        c.kind = CoefficientKind::Tabulated;
        c.xs = co.nums("x");
        c.ps = co.nums("p");
        c.qs = co.nums("q");
        c.rs = co.nums("r");
        if (c.xs.size() < 3) throw ParseError("need at least 3 nodes", co.key("x"));
        if (c.ps.size() != c.xs.size() || c.qs.size() != c.xs.size() || c.rs.size() != c.xs.size())
            throw ParseError("p, q, r must have as many entries as x", co.key("x"));
        for (std::size_t i = 1; i < c.xs.size(); ++i)
            if (!(c.xs[i] > c.xs[i - 1])) throw ParseError("nodes must increase", co.key("x"));
        if (c.xs.front() != 0.0 || c.xs.back() != c.L) throw ParseError("nodes must span [0, L]", co.key("x"));
    } else {
        throw ParseError("unknown coefficient kind '" + kind + "'", co.key("kind"));
    }
    co.finish();

    Reader b = root.sub("boundary");
    c.boundary.alpha1 = b.num("alpha1");
    c.boundary.alpha2 = b.num("alpha2");
    c.boundary.beta1 = b.num("beta1");
    c.boundary.beta2 = b.num("beta2");
    b.finish();

    c.settings = read_settings(root);
    root.finish();
    return c;
}

inline HeleShawConfig read_heleshaw(Reader& root) {
    HeleShawConfig c;
    Reader h = root.sub("heleshaw");
    auto& p = c.params;
    p.mu1 = h.num("mu1", p.mu1);
    p.mu2 = h.num("mu2", p.mu2);
    p.S = h.num("S", p.S);
    p.T = h.num("T", p.T);
    p.U = h.num("U", p.U);
    p.L = h.num("L", p.L);
    std::string prof = h.has("profile") ? h.str("profile") : "linear";
    if (prof == "linear") {
        p.profile = ViscosityProfile::Linear;
        p.J1 = h.num("J1", p.J1);
        p.J2 = h.num("J2", p.J2);
    } else if (prof == "constant") {
        p.profile = ViscosityProfile::Constant;
        p.mu = h.num("mu0", p.mu);
    } else {
        throw ParseError("expected \"linear\" or \"constant\"", h.key("profile"));
    }
    if (h.has("k_values")) {
        c.k_values = h.nums("k_values");
        if (c.k_values.empty()) throw ParseError("needs at least one wave number", h.key("k_values"));
        for (double k : c.k_values)
            if (!(k > 0)) throw ParseError("wave numbers must be positive", h.key("k_values"));
    }
    h.finish();
    try {
        p.validate();
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), "heleshaw");
    }
    c.settings = read_settings(root);
    root.finish();
    return c;
}

}  // namespace detail

/** @brief Parse a JSON config; errors carry a key path or the JSON line/column. */
inline Config parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // nlohmann reports "line L, column C" in the message
        std::string msg = e.what();
        auto at = msg.find("line ");
        std::string where = at == std::string::npos ? "byte " + std::to_string(e.byte) : msg.substr(at);
        auto colon = where.find(':');
        if (colon != std::string::npos) where = where.substr(0, colon);
        throw ParseError("malformed JSON", where);
    }
    detail::Reader root(j, "");
    if (j.contains("heleshaw")) return detail::read_heleshaw(root);
    return detail::read_problem(root);
}

inline json settings_json(const SolverSettings& s) {
    return json{{"rel_tol", s.rel_tol}, {"abs_tol", s.abs_tol}, {"root_tol", s.root_tol}, {"max_steps", s.max_steps}};
}

/** @brief Normalized form: every default written out. */
inline json to_json(const Config& cfg) {
    if (auto* h = std::get_if<HeleShawConfig>(&cfg)) {
        const auto& p = h->params;
        json hj{{"mu1", p.mu1}, {"mu2", p.mu2}, {"S", p.S}, {"T", p.T}, {"U", p.U}, {"L", p.L}, {"k_values", h->k_values}};
        if (p.profile == ViscosityProfile::Linear) {
            hj["profile"] = "linear";
            hj["J1"] = p.J1;
            hj["J2"] = p.J2;
        } else {
            hj["profile"] = "constant";
            hj["mu0"] = p.mu;
        }
        return json{{"heleshaw", hj}, {"settings", settings_json(h->settings)}};
    }
    const auto& c = std::get<ProblemConfig>(cfg);
    json co;
    switch (c.kind) {
        case CoefficientKind::Constant: co = {{"kind", "constant"}, {"p", c.p}, {"q", c.q}, {"r", c.r}}; break;
        case CoefficientKind::LinearViscosity:
            co = {{"kind", "linear-viscosity"}, {"k", c.k}, {"mu0_slope", c.mu0_slope}, {"mu0_intercept", c.mu0_intercept}};
            break;
        case CoefficientKind::Expression: co = {{"kind", "expression"}, {"p", c.p_src}, {"q", c.q_src}, {"r", c.r_src}}; break;
        case CoefficientKind::Tabulated: co = {{"kind", "tabulated"}, {"x", c.xs}, {"p", c.ps}, {"q", c.qs}, {"r", c.rs}}; break;
    }
    const auto& b = c.boundary;
    return json{{"L", c.L},
                {"coefficients", co},
                {"boundary", {{"alpha1", b.alpha1}, {"alpha2", b.alpha2}, {"beta1", b.beta1}, {"beta2", b.beta2}}},
                {"settings", settings_json(c.settings)}};
}

/** @brief Build and validate the problem; validation failures keep their type. */
inline SLProblem to_problem(const ProblemConfig& c) {
    CoefficientSet cs;
    cs.L = c.L;
    switch (c.kind) {
        case CoefficientKind::Constant: cs = constant_coefficients(c.p, c.q, c.r, c.L); break;
        case CoefficientKind::LinearViscosity: {
            double a = c.mu0_slope, b = c.mu0_intercept, k2 = c.k * c.k;
            cs = CoefficientSet{[a, b](double x) { return a * x + b; }, [a, b, k2](double x) { return k2 * (a * x + b); },
                                [a, k2](double) { return k2 * a; }, c.L, true, "linear"};
            break;
        }
        case CoefficientKind::Expression: {
            auto p = parse_expression(c.p_src), q = parse_expression(c.q_src), r = parse_expression(c.r_src);
            cs = CoefficientSet{[p](double x) { return p->eval(x); }, [q](double x) { return q->eval(x); },
                                [r](double x) { return r->eval(x); }, c.L, false, "expression"};
            break;
        }
        case CoefficientKind::Tabulated: {
            auto mk = [&](const std::vector<double>& y) {
                num::Hermite h(c.xs, y, num::three_point_slopes(c.xs, y));
                return Fn([h](double x) { return h(x); });
            };
            cs = CoefficientSet{mk(c.ps), mk(c.qs), mk(c.rs), c.L, false, "C1"};
            break;
        }
    }
    return make_problem(std::move(cs), c.boundary);
}

}  // namespace sturmspec::cli
