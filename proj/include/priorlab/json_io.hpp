#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "priorlab/convergence.hpp"
#include "priorlab/dsl.hpp"
#include "priorlab/errors.hpp"
#include "priorlab/families.hpp"
#include "priorlab/measure.hpp"
#include "priorlab/posterior.hpp"

namespace priorlab::io {

using json = nlohmann::ordered_json;

// configuration / schema problems: CLI exit code 2
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

namespace detail {

inline void require_version(const json& j, const char* what) {
    if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
    if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
        j["schema_version"].get<int>() != 1)
        throw ConfigError(std::string(what) + ": schema_version must be 1");
}

inline double parse_bound(const json& j, const char* what) {
    if (j.is_null()) throw ConfigError(std::string(what) + ": bound may not be null");
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ConfigError(std::string(what) + ": bad bound '" + s + "'");
    }
    if (!j.is_number()) throw ConfigError(std::string(what) + ": bound must be number or inf");
    return j.get<double>();
}

inline json bound_json(double v) {
    if (v == kInf) return json("inf");
    if (v == -kInf) return json("-inf");
    return json(v);
}

// compile a DSL expression; parse errors already carry offsets in what()
inline dsl::DensityExpr compile(const std::string& src, const char* what) {
    try {
        return dsl::parse(src);
    } catch (const Error& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

}  // namespace detail

inline ParameterSpace parse_space(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("space: expected object with 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "continuous") {
        if (!j.contains("interval")) throw ConfigError("space: continuous needs 'interval'");
        const json& iv = j["interval"];
        Interval out{detail::parse_bound(iv.at("lower"), "interval.lower"),
                     detail::parse_bound(iv.at("upper"), "interval.upper"),
                     iv.value("lower_open", false), iv.value("upper_open", false)};
        if (!(out.lower < out.upper)) throw ConfigError("space: interval is empty");
        // infinite ends are necessarily open
        if (out.lower == -kInf) out.lower_open = true;
        if (out.upper == kInf) out.upper_open = true;
        return ParameterSpace::continuous(out);
    }
    if (kind == "naturals") return ParameterSpace::naturals();
    if (kind == "discrete") {
        if (!j.contains("points")) throw ConfigError("space: discrete needs 'points'");
        std::vector<double> pts;
        for (const auto& p : j["points"]) pts.push_back(p.get<double>());
        return ParameterSpace::discrete(std::move(pts));
    }
    throw ConfigError("space: unknown kind '" + kind + "'");
}

inline json space_json(const ParameterSpace& sp) {
    json j;
    if (sp.is_continuous()) {
        j["kind"] = "continuous";
        j["interval"] = {{"lower", detail::bound_json(sp.iv.lower)},
                         {"upper", detail::bound_json(sp.iv.upper)},
                         {"lower_open", sp.iv.lower_open},
                         {"upper_open", sp.iv.upper_open}};
    } else if (sp.all_naturals) {
        j["kind"] = "naturals";
    } else {
        j["kind"] = "discrete";
        j["points"] = sp.support;
    }
    return j;
}

// measure: {schema_version, space, density: DSL in theta, params, atoms, mass_hint}
inline RadonMeasure parse_measure(const json& j) {
    detail::require_version(j, "measure");
    RadonMeasure out;
    out.space = parse_space(j.at("space"));
    dsl::Binding params;
    if (j.contains("params"))
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
            params[it.key()] = it.value().get<double>();
    if (j.contains("density") && !j["density"].is_null()) {
        dsl::DensityExpr expr = detail::compile(j["density"].get<std::string>(), "measure.density");
        for (const auto& v : dsl::free_variables(expr))
            if (v != "theta" && !params.count(v))
                throw ConfigError("measure.density: unbound variable '" + v + "'");
        out.density = [expr, params](double t) {
            dsl::Binding b = params;
            b["theta"] = t;
            return dsl::evaluate(expr, b);
        };
    } else {
        out.density = [](double) { return 0.0; };
    }
    if (j.contains("atoms"))
        for (const auto& a : j["atoms"])
            out.atoms.push_back({a.at("at").get<double>(), a.at("weight").get<double>()});
    if (j.contains("mass_hint") && !j["mass_hint"].is_null()) {
        const json& mh = j["mass_hint"];
        const std::string k = mh.at("kind").get<std::string>();
        if (k == "finite")
            out.mass_hint = MassClass::finite(mh.at("value").get<double>());
        else if (k == "infinite")
            out.mass_hint = MassClass::infinite();
        else
            throw ConfigError("measure.mass_hint: unknown kind '" + k + "'");
    }
    return out;
}

// family: {schema_version, label, space, density: DSL in theta and n,
//          scaling_hint: optional DSL in n}
inline MeasureFamily parse_family(const json& j) {
    detail::require_version(j, "family");
    MeasureFamily fam;
    fam.label = j.value("label", "family");
    ParameterSpace sp = parse_space(j.at("space"));
    if (!j.contains("density")) throw ConfigError("family: missing 'density'");
    dsl::DensityExpr expr = detail::compile(j["density"].get<std::string>(), "family.density");
    dsl::Binding params;
    if (j.contains("params"))
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
            params[it.key()] = it.value().get<double>();
    for (const auto& v : dsl::free_variables(expr))
        if (v != "theta" && v != "n" && !params.count(v))
            throw ConfigError("family.density: unbound variable '" + v + "'");
    fam.member = [expr, params, sp](int n) {
        return RadonMeasure::from_density(sp, [expr, params, n](double t) {
            dsl::Binding b = params;
            b["theta"] = t;
            b["n"] = double(n);
            return dsl::evaluate(expr, b);
        });
    };
    if (j.contains("scaling_hint") && !j["scaling_hint"].is_null()) {
        dsl::DensityExpr hint =
            detail::compile(j["scaling_hint"].get<std::string>(), "family.scaling_hint");
        for (const auto& v : dsl::free_variables(hint))
            if (v != "n" && !params.count(v))
                throw ConfigError("family.scaling_hint: unbound variable '" + v + "'");
        fam.scaling_hint = [hint, params](int n) {
            dsl::Binding b = params;
            b["n"] = double(n);
            return dsl::evaluate(hint, b);
        };
    }
    return fam;
}

// model: {schema_version, likelihood: DSL in x and theta, continuous_in_theta,
//         vanishes_at_infinity, x}
struct Model {
    Likelihood lik;
    double x = 0.0;
};

inline Model parse_model(const json& j) {
    detail::require_version(j, "model");
    if (!j.contains("likelihood")) throw ConfigError("model: missing 'likelihood'");
    dsl::DensityExpr expr = detail::compile(j["likelihood"].get<std::string>(), "model.likelihood");
    for (const auto& v : dsl::free_variables(expr))
        if (v != "x" && v != "theta")
            throw ConfigError("model.likelihood: unbound variable '" + v + "'");
    Model out;
    out.lik.eval = [expr](double x, double t) {
        dsl::Binding b{{"x", x}, {"theta", t}};
        return dsl::evaluate(expr, b);
    };
    out.lik.continuous_in_theta = j.value("continuous_in_theta", true);
    out.lik.vanishes_at_infinity = j.value("vanishes_at_infinity", false);
    if (!j.contains("x")) throw ConfigError("model: missing observation 'x'");
    out.x = j["x"].get<double>();
    return out;
}

inline const char* verdict_name(ConvergenceReport::Verdict v) {
    switch (v) {
        case ConvergenceReport::Verdict::ConvergesTo: return "ConvergesTo";
        case ConvergenceReport::Verdict::Diverges: return "Diverges";
        default: return "Inconclusive";
    }
}

inline json report_json(const ConvergenceReport& rep, const NGrid& grid,
                        const std::string& family_label, const std::string& candidate_label) {
    json j;
    j["schema_version"] = 1;
    j["family"] = family_label;
    j["candidate"] = candidate_label;
    j["grid"] = grid.values;
    json probes = json::array();
    for (const auto& tr : rep.per_probe) probes.push_back(tr.probe_id);
    j["probes"] = probes;
    json pp = json::array();
    for (const auto& tr : rep.per_probe) {
        json t;
        t["probe_id"] = tr.probe_id;
        json rr = json::array();
        for (double r : tr.ratios) {
            if (std::isinf(r))
                rr.push_back("inf");
            else
                rr.push_back(r);
        }
        t["ratios"] = rr;
        t["tail_drift"] = tr.tail_drift;
        pp.push_back(t);
    }
    j["per_probe"] = pp;
    j["verdict"] = verdict_name(rep.verdict);
    j["candidate_confirmed"] = rep.candidate_confirmed;
    if (!rep.scaling.empty()) {
        json sc = json::array();
        for (const auto& s : rep.scaling) sc.push_back({{"n", s.n}, {"a_n", s.a_n}});
        j["scaling"] = sc;
    }
    if (!rep.witness.empty()) {
        j["witness"] = rep.witness;
        json wt = json::array();
        for (double r : rep.witness_trajectory) {
            if (std::isinf(r))
                wt.push_back("inf");
            else
                wt.push_back(r);
        }
        j["witness_trajectory"] = wt;
    }
    if (!rep.reason.empty()) j["reason"] = rep.reason;
    j["thresholds"] = {{"tail_tol", rep.tail_tol}, {"divergence_factor_per_decade", 10.0}};
    return j;
}

// CSV projection: probe-ratio trajectories when present, else assertion rows
inline std::string report_csv(const json& report) {
    std::ostringstream os;
    os.precision(12);
    if (report.contains("per_probe") && report.contains("grid")) {
        os << "n";
        for (const auto& tr : report["per_probe"]) os << "," << tr["probe_id"].get<std::string>();
        os << "\n";
        const auto& grid = report["grid"];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            os << grid[i].get<int>();
            for (const auto& tr : report["per_probe"]) {
                const auto& r = tr["ratios"][i];
                os << ",";
                if (r.is_string())
                    os << r.get<std::string>();
                else
                    os << r.get<double>();
            }
            os << "\n";
        }
        return os.str();
    }
    os << "assertion,pass\n";
    if (report.contains("assertions"))
        for (const auto& a : report["assertions"])
            os << a["name"].get<std::string>() << "," << (a["pass"].get<bool>() ? 1 : 0) << "\n";
    return os.str();
}

}  // namespace priorlab::io
