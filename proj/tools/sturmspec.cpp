// sturmspec command line: spectra, scans and verification reports from a JSON config.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sturmspec/sturmspec.hpp"

using namespace sturmspec;
using cli::json;

namespace {

struct Flags {
    std::string config;
    int nmax = 2;
    double tol = 0.0;  // 0 = keep the config's settings
    std::string format;
    std::string out;
    bool oracle = false;
    double k = 0.0;  // Hele-Shaw configs: which wave number
    double lambda = 0.0;
    int points = 201;
    bool error_json = false;
};

// Exit codes: 2 config/usage, 3 validation, 4 solver failure, 5 verify report failed.
int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return 2;
    if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const DomainError*>(&e)) return 3;
    return 4;
}

std::string error_kind(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const IntegrationError*>(&e)) return "IntegrationError";
    if (dynamic_cast<const EvaluationError*>(&e)) return "EvaluationError";
    if (dynamic_cast<const PoleError*>(&e)) return "PoleError";
    if (dynamic_cast<const SearchError*>(&e)) return "SearchError";
    if (dynamic_cast<const RegimeError*>(&e)) return "RegimeError";
    if (dynamic_cast<const SeriesError*>(&e)) return "SeriesError";
    if (dynamic_cast<const TransformError*>(&e)) return "TransformError";
    return "Error";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file", path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Flags& f, const std::string& text) {
    if (f.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream o(f.out);
    if (!o) throw DomainError("cannot write " + f.out);
    o << text;
}

SolverSettings settings_for(const cli::Config& cfg, const Flags& f) {
    SolverSettings s = std::visit([](const auto& c) { return c.settings; }, cfg);
    if (f.tol > 0) {
        // one knob: relative error per step and root width; absolute floor two decades below
        s.rel_tol = f.tol;
        s.root_tol = f.tol;
        s.abs_tol = f.tol * 1e-2;
    }
    s.validate();
    return s;
}

// A single problem: the config itself or one wave number of a Hele-Shaw config.
SLProblem problem_for(const cli::Config& cfg, const Flags& f, std::optional<cli::LinearProfileRef>* lin = nullptr) {
    if (auto* p = std::get_if<cli::ProblemConfig>(&cfg)) {
        if (lin && p->kind == cli::CoefficientKind::LinearViscosity)
            *lin = cli::LinearProfileRef{LinearProfile{p->mu0_slope, p->mu0_intercept}, p->k};
        return cli::to_problem(*p);
    }
    const auto& h = std::get<cli::HeleShawConfig>(cfg);
    double k = f.k > 0 ? f.k : h.k_values.front();
    if (lin && h.params.profile == ViscosityProfile::Linear)
        *lin = cli::LinearProfileRef{LinearProfile{h.params.slope(), h.params.mu0_left()}, k};
    return build_slp(h.params, k);
}

const cli::HeleShawConfig& need_heleshaw(const cli::Config& cfg, const char* cmd) {
    auto* h = std::get_if<cli::HeleShawConfig>(&cfg);
    if (!h) throw ParseError(std::string(cmd) + " needs a \"heleshaw\" config", "heleshaw");
    return *h;
}

// Hypergeometric residual at each eigenvalue (linear viscosity only).
void attach_oracle(json& recs, const std::vector<EigenvalueRecord>& spec, const SLProblem& prob,
                   const std::optional<cli::LinearProfileRef>& lin) {
    for (std::size_t i = 0; i < spec.size(); ++i) {
        if (!lin) {
            recs[i]["oracle"] = nullptr;
            continue;
        }
        try {
            recs[i]["oracle"] = {{"hypergeometric_residual",
                                  linear_profile_residual(lin->profile, lin->k, spec[i].lambda, prob.boundary, prob.L())}};
        } catch (const Error& e) {
            recs[i]["oracle"] = {{"error", e.what()}};
        }
    }
}

int cmd_aux(const cli::Config& cfg, const Flags& f) {
    auto s = settings_for(cfg, f);
    auto prob = problem_for(cfg, f);
    auto aux = aux_spectrum(prob, f.nmax, s);
    if (f.format == "csv") {
        std::string t = "index,eta,zero_count\n";
        if (aux.eta_neg0) t += "-0," + cli::fmt6(*aux.eta_neg0) + ",0\n";
        for (std::size_t i = 0; i < aux.etas.size(); ++i)
            t += std::to_string(i) + "," + cli::fmt6(aux.etas[i]) + "," + std::to_string(aux.zero_counts[i]) + "\n";
        emit(f, t);
    } else {
        emit(f, cli::to_json(aux).dump(2) + "\n");
    }
    return 0;
}

int cmd_spectrum(const cli::Config& cfg, const Flags& f) {
    auto s = settings_for(cfg, f);
    std::optional<cli::LinearProfileRef> lin;
    auto prob = problem_for(cfg, f, &lin);
    auto spec = full_spectrum(prob, f.nmax, s);
    if (f.format == "csv") {
        emit(f, cli::spectrum_csv(spec));
        return 0;
    }
    json j = cli::to_json(spec);
    if (f.oracle) attach_oracle(j, spec, prob, lin);
    emit(f, j.dump(2) + "\n");
    return 0;
}

std::vector<ScanRow> run_scan(const cli::HeleShawConfig& h, const Flags& f, const SolverSettings& s) {
    std::vector<double> ks = h.k_values;
    if (f.k > 0) ks = {f.k};
    return scan(h.params, ks, f.nmax, s);
}

int cmd_scan(const cli::Config& cfg, const Flags& f, bool table) {
    const auto& h = need_heleshaw(cfg, table ? "table" : "scan");
    auto s = settings_for(cfg, f);
    Flags g = f;
    if (table) g.nmax = std::max(g.nmax, 2);
    auto rows = run_scan(h, g, s);
    bool failed = false;
    for (const auto& r : rows) failed = failed || !r.error.empty();
    std::string fmt = f.format.empty() ? (table ? "csv" : "json") : f.format;
    if (fmt == "csv") {
        std::string t = std::string(cli::table_header()) + "\n";
        for (const auto& r : rows) t += cli::table_line(r) + "\n";
        emit(f, t);
    } else {
        json a = json::array();
        for (const auto& r : rows) {
            json rj = cli::to_json(r);
            if (f.oracle && h.params.profile == ViscosityProfile::Linear && r.error.empty()) {
                std::optional<cli::LinearProfileRef> lin =
                    cli::LinearProfileRef{LinearProfile{h.params.slope(), h.params.mu0_left()}, r.k};
                attach_oracle(rj["records"], r.spectrum, build_slp(h.params, r.k), lin);
            }
            a.push_back(rj);
        }
        emit(f, a.dump(2) + "\n");
    }
    for (const auto& r : rows)
        if (!r.error.empty()) std::cerr << "k=" << r.k << ": " << r.error << "\n";
    return failed ? 4 : 0;
}

int cmd_eigenfunction(const cli::Config& cfg, const Flags& f) {
    auto s = settings_for(cfg, f);
    auto prob = problem_for(cfg, f);
    if (f.points < 2) throw ParseError("--points must be at least 2", "--points");
    auto smp = eigenfunction_samples(prob, f.lambda, uniform_grid(prob.L(), std::size_t(f.points)), s);
    if (f.format == "json") {
        json a = json::array();
        for (const auto& v : smp) a.push_back({{"x", v.x}, {"f", v.f}, {"pf", v.pf}});
        emit(f, a.dump(2) + "\n");
    } else {
        std::string t = "x,f,pf\n";
        for (const auto& v : smp) t += cli::fmt6(v.x) + "," + cli::fmt6(v.f) + "," + cli::fmt6(v.pf) + "\n";
        emit(f, t);
    }
    return 0;
}

int cmd_verify(const cli::Config& cfg, const Flags& f) {
    auto s = settings_for(cfg, f);
    auto prob = problem_for(cfg, f);
    const int n_hi = std::max(f.nmax, 20);
    AuxSpectrum aux;
    auto spec = full_spectrum(prob, n_hi, s, &aux);
    json rep;
    bool ok = true;

    auto il = verify_interlacing(spec, aux);
    rep["interlacing"] = cli::to_json(il);
    ok = ok && il.all_ok;

    const auto* e1 = find_index(spec, BranchIndex::nonneg(1));
    const auto* e2 = find_index(spec, BranchIndex::nonneg(2));
    if (e1 && e2) {
        auto sep = separation_check(e1->zeros, e2->zeros);
        rep["separation"] = cli::to_json(sep);
        ok = ok && sep.ok();
    } else {
        rep["separation"] = {{"ok", false}, {"error", "lambda_1 or lambda_2 missing"}};
        ok = false;
    }

    try {
        const auto* e0 = find_index(spec, BranchIndex::nonneg(0));
        if (!e0) throw RegimeError("no lambda_0 to remove");
        auto ctx = make_context(prob, e0->lambda, s);
        auto reg = build_regular_slp(ctx, prob);
        auto grid = uniform_grid(prob.L(), 1001);
        json cd = json::array();
        double worst = 0.0;
        for (int n = 1; n <= 2; ++n) {
            const auto* en = find_index(spec, BranchIndex::nonneg(n));
            if (!en) continue;
            auto rr = regular_residual(reg, crum_darboux(ctx, prob, en->lambda, eigenfunction_samples(prob, en->lambda, grid, s)),
                                       en->lambda);
            worst = std::max(worst, rr.worst());
            cd.push_back({{"n", n}, {"ode", rr.ode}, {"derivative", rr.derivative}, {"robin_left", rr.robin_left},
                          {"robin_right", rr.robin_right}});
        }
        rep["crum_darboux"] = {{"ok", worst < 1e-6}, {"tolerance", 1e-6}, {"worst", worst}, {"residuals", cd}};
        ok = ok && worst < 1e-6;
    } catch (const Error& e) {
        rep["crum_darboux"] = {{"ok", false}, {"error", e.what()}};
        ok = false;
    }

    // sqrt(lambda_n) against n pi / T with T the Liouville length int sqrt(r/p)
    auto xs = uniform_grid(prob.L(), 4097);
    std::vector<double> w(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) w[i] = std::sqrt(prob.r(xs[i]) / prob.p(xs[i]));
    double T = num::cumulative_simpson(w, xs[1] - xs[0]).back();
    auto lit = asymptotic_check(spec, T, 5, n_hi);
    auto sh = asymptotic_check(spec, T, 5, n_hi, 1);
    rep["asymptotic"] = {{"ok", lit.bounded}, {"length", T}, {"literal", cli::to_json(lit)}, {"shifted_by_one", cli::to_json(sh)}};
    ok = ok && lit.bounded;

    rep["ok"] = ok;
    emit(f, rep.dump(2) + "\n");
    return ok ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra of Sturm-Liouville problems with eigenparameter-dependent boundary conditions"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&](CLI::App* c) {
        c->add_option("--config", f.config, "JSON config file")->required();
        c->add_option("--nmax", f.nmax, "highest nonnegative index")->check(CLI::NonNegativeNumber);
        c->add_option("--tol", f.tol, "relative tolerance for integration and roots")->check(CLI::PositiveNumber);
        c->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        c->add_option("--out", f.out, "write here instead of stdout");
        c->add_flag("--oracle", f.oracle, "add hypergeometric cross-checks");
        c->add_option("--k", f.k, "wave number (Hele-Shaw configs)")->check(CLI::PositiveNumber);
        c->add_flag("--error-json", f.error_json, "print failures as JSON on stdout");
    };
    auto* aux = app.add_subcommand("aux-spectrum", "Dirichlet-at-L eigenvalues eta_n");
    auto* spec = app.add_subcommand("spectrum", "eigenvalues lambda_-1, lambda_-0, lambda_0..lambda_nmax");
    auto* scn = app.add_subcommand("scan", "Hele-Shaw scan over k with growth rates");
    auto* efn = app.add_subcommand("eigenfunction", "sample the solution at one lambda");
    auto* ver = app.add_subcommand("verify", "interlacing, separation, Crum-Darboux and asymptotic checks");
    auto* tbl = app.add_subcommand("table", "Hele-Shaw table as CSV");
    auto* nrm = app.add_subcommand("normalize", "print the config with every default filled in");
    for (auto* c : {aux, spec, scn, efn, ver, tbl}) common(c);
    efn->add_option("--lambda", f.lambda, "eigenparameter")->required();
    efn->add_option("--points", f.points, "number of samples");
    nrm->add_option("--config", f.config, "JSON config file")->required();
    nrm->add_flag("--error-json", f.error_json, "print failures as JSON on stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = cli::parse_config(read_file(f.config));
        if (*aux) return cmd_aux(cfg, f);
        if (*spec) return cmd_spectrum(cfg, f);
        if (*scn) return cmd_scan(cfg, f, false);
        if (*efn) return cmd_eigenfunction(cfg, f);
        if (*ver) return cmd_verify(cfg, f);
        if (*tbl) return cmd_scan(cfg, f, true);
        if (*nrm) {
            std::cout << cli::to_json(cfg).dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        if (f.error_json) {
            json j{{"error", error_kind(e)}, {"message", e.what()}};
            if (auto* pe = dynamic_cast<const ParseError*>(&e)) j["where"] = pe->where;
            if (auto* ie = dynamic_cast<const IntegrationError*>(&e)) j["reached"] = ie->reached;
            std::cout << j.dump() << "\n";
        } else {
            std::cerr << "sturmspec: " << e.what() << "\n";
        }
        return exit_code_for(e);
    }
    return 0;
}
