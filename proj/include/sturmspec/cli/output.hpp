#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sturmspec/heleshaw.hpp"
#include "sturmspec/spectrum.hpp"
#include "sturmspec/transforms.hpp"

namespace sturmspec::cli {

using json = nlohmann::json;

/** @brief 6 significant digits like %.6g, but never locale dependent. */
inline std::string fmt6(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, r.ptr);
}

// JSON has no infinities; unbounded branch ends become null
inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const EigenvalueRecord& r) {
    return json{{"index", r.index.label()},
                {"lambda", r.lambda},
                {"zero_count", r.zero_count},
                {"branch", {{"lo", finite_or_null(r.branch.lo)}, {"hi", finite_or_null(r.branch.hi)}}},
                {"char_residual", r.char_residual},
                {"zeros", r.zeros}};
}

inline json to_json(const std::vector<EigenvalueRecord>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(to_json(r));
    return a;
}

inline json to_json(const AuxSpectrum& a) {
    json j{{"eta_-0", a.eta_neg0 ? json(*a.eta_neg0) : json(nullptr)}, {"etas", json::array()}};
    for (std::size_t i = 0; i < a.etas.size(); ++i)
        j["etas"].push_back({{"n", i}, {"eta", a.etas[i]}, {"zero_count", a.zero_counts[i]}, {"residual", a.residuals[i]}});
    return j;
}

inline json to_json(const InterlacingReport& r) {
    json links = json::array();
    for (const auto& l : r.links) links.push_back({{"left", l.left}, {"right", l.right}, {"a", l.a}, {"b", l.b}, {"ok", l.ok}});
    return json{{"ok", r.all_ok}, {"links", links}};
}

inline json to_json(const SeparationReport& r) {
    return json{{"ok", r.ok()},
                {"at_least_one", r.at_least_one},
                {"exactly_one", r.exactly_one},
                {"clear_margins", r.clear_margins},
                {"gap_counts_a", r.gap_counts_a},
                {"gap_counts_b", r.gap_counts_b}};
}

inline json to_json(const AsymptoticReport& r) {
    return json{{"bounded", r.bounded}, {"slope", r.slope}, {"max_rho", r.max_rho}, {"ordered", r.ordered}, {"n", r.n}, {"rho", r.rho}};
}

inline json to_json(const ScanRow& row) {
    json vals = json::object();
    for (const auto& [idx, lam] : row.values()) vals["lambda_" + idx.label()] = lam;
    json j{{"k", row.k}, {"alpha1", row.alpha1}, {"beta1", row.beta1}, {"regime", to_string(row.regime)},
           {"eigenvalues", vals}, {"sigmas", row.sigmas}, {"sigma0", row.sigma0 ? json(*row.sigma0) : json(nullptr)}};
    if (!row.spectrum.empty()) j["records"] = to_json(row.spectrum);
    if (row.existence) {
        const auto& e = *row.existence;
        j["existence"] = {{"lambda_-1", e.lambda_m1}, {"lambda_-0", e.lambda_m0}, {"lambda_0", e.lambda_0}, {"lambda_1", e.lambda_1}};
    }
    if (!row.error.empty()) j["error"] = row.error;
    return j;
}

inline const char* table_header() { return "k,alpha1,beta1,lambda_-1,lambda_-0,lambda_0,lambda_1,lambda_2"; }

/** @brief One table line; `-` where the eigenvalue does not exist. */
inline std::string table_line(const ScanRow& row) {
    std::string s = fmt6(row.k) + "," + fmt6(row.alpha1) + "," + fmt6(row.beta1);
    for (BranchIndex idx : {BranchIndex::neg_beyond(), BranchIndex::neg_zero(), BranchIndex::nonneg(0),
                            BranchIndex::nonneg(1), BranchIndex::nonneg(2)}) {
        auto v = row.value(idx);
        s += "," + (v ? fmt6(*v) : std::string("-"));
    }
    return s;
}

inline std::string spectrum_csv(const std::vector<EigenvalueRecord>& spec) {
    std::string s = "index,lambda,zero_count,char_residual\n";
    for (const auto& r : spec)
        s += r.index.label() + "," + fmt6(r.lambda) + "," + std::to_string(r.zero_count) + "," + fmt6(r.char_residual) + "\n";
    return s;
}

}  // namespace sturmspec::cli
