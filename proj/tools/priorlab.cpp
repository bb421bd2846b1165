// priorlab CLI: catalog of worked examples plus config-driven analysis of
// user-defined vague-prior families. Exit codes: 0 success, 1 assertion
// failure, 2 usage/config error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "priorlab/catalog.hpp"
#include "priorlab/convergence.hpp"
#include "priorlab/json_io.hpp"
#include "priorlab/posterior.hpp"
#include "priorlab/svg.hpp"

namespace {

using priorlab::io::json;

constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw priorlab::io::ConfigError("cannot open output file: " + out_path);
    os << text;
}

// polyline series for the SVG projection: explicit "series" entries when the
// report carries them, else one trajectory per probe
std::vector<priorlab::svg::Series> report_series(const json& rep) {
    std::vector<priorlab::svg::Series> out;
    auto value_of = [](const json& v) {
        return v.is_number() ? v.get<double>() : std::nan("");
    };
    if (rep.contains("series")) {
        for (const auto& s : rep["series"]) {
            priorlab::svg::Series ser;
            ser.label = s["label"].get<std::string>();
            for (const auto& x : s["x"]) ser.x.push_back(value_of(x));
            for (const auto& y : s["y"]) ser.y.push_back(value_of(y));
            out.push_back(std::move(ser));
        }
        return out;
    }
    if (rep.contains("per_probe") && rep.contains("grid")) {
        std::vector<double> xs;
        for (const auto& n : rep["grid"]) xs.push_back(n.get<double>());
        for (const auto& tr : rep["per_probe"]) {
            priorlab::svg::Series ser;
            ser.label = tr["probe_id"].get<std::string>();
            ser.x = xs;
            for (const auto& r : tr["ratios"]) ser.y.push_back(value_of(r));
            out.push_back(std::move(ser));
        }
    }
    return out;
}

std::string render(const json& rep, const std::string& format, const std::string& title) {
    if (format == "csv") return priorlab::io::report_csv(rep);
    if (format == "svg")
        return priorlab::svg::line_chart(report_series(rep), title, "n", "probe ratio");
    return rep.dump(2) + "\n";
}

int cmd_list(const std::string& format, const std::string& filter) {
    json arr = json::array();
    std::ostringstream text;
    for (const auto& ex : priorlab::catalog::all()) {
        if (!filter.empty() && ex.id.find(filter) == std::string::npos) continue;
        arr.push_back({{"id", ex.id}, {"description", ex.description}, {"section", ex.section}});
        text << ex.id << "  [" << ex.section << "]  " << ex.description << "\n";
    }
    if (format == "json")
        std::cout << json{{"schema_version", 1}, {"examples", arr}}.dump(2) << "\n";
    else
        std::cout << text.str();
    return 0;
}

int cmd_run(const std::string& id, const std::string& format, const std::string& out_path) {
    json rep = priorlab::catalog::run_example(id);
    emit(render(rep, format, id), out_path);
    return rep["pass"].get<bool>() ? 0 : kExitAssertion;
}

json read_json_file(const std::string& path, const char* what) {
    std::ifstream is(path);
    if (!is) throw priorlab::io::ConfigError(std::string(what) + ": cannot read " + path);
    json j;
    try {
        is >> j;
    } catch (const json::parse_error& e) {
        throw priorlab::io::ConfigError(std::string(what) + ": " + path + ": " + e.what());
    }
    return j;
}

// theta grid for the density criteria, adapted to the candidate's space
std::vector<double> make_theta_grid(const priorlab::ParameterSpace& sp) {
    std::vector<double> out;
    if (!sp.is_continuous()) {
        for (int k = 0; k <= 20; ++k) out.push_back(double(k));
        return out;
    }
    const priorlab::Interval& iv = sp.iv;
    if (iv.bounded()) {
        for (int i = 1; i < 40; ++i) out.push_back(iv.lower + iv.width() * i / 40.0);
    } else if (iv.lower_finite() || iv.upper_finite()) {
        const double base = iv.lower_finite() ? iv.lower : iv.upper;
        const double sgn = iv.lower_finite() ? 1.0 : -1.0;
        for (int i = -8; i <= 8; ++i) out.push_back(base + sgn * std::pow(10.0, i / 4.0));
    } else {
        for (int i = -20; i <= 20; ++i) out.push_back(i / 2.0);
    }
    return out;
}

json trend_json(const priorlab::Trend& t) {
    const char* kind = "NoTrend";
    switch (t.kind) {
        case priorlab::Trend::Kind::ToValue: kind = "ToValue"; break;
        case priorlab::Trend::Kind::ToPlusInf: kind = "ToPlusInf"; break;
        case priorlab::Trend::Kind::ToMinusInf: kind = "ToMinusInf"; break;
        default: break;
    }
    json j{{"kind", kind}};
    if (t.kind == priorlab::Trend::Kind::ToValue) j["value"] = t.value;
    return j;
}

int cmd_analyze(const std::string& family_path, const std::string& candidate_path,
                const std::string& model_path, const std::string& ngrid_csv, double tail_tol,
                const std::string& format, const std::string& out_path) {
    using namespace priorlab;

    MeasureFamily fam = io::parse_family(read_json_file(family_path, "family"));
    std::optional<RadonMeasure> cand;
    if (!candidate_path.empty())
        cand = io::parse_measure(read_json_file(candidate_path, "candidate"));
    std::optional<io::Model> model;
    if (!model_path.empty()) model = io::parse_model(read_json_file(model_path, "model"));

    NGrid grid = NGrid::default_grid();
    if (!ngrid_csv.empty()) {
        grid.values.clear();
        std::stringstream ss(ngrid_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                size_t used = 0;
                const int n = std::stoi(tok, &used);
                if (used != tok.size() || n < 1) throw std::invalid_argument(tok);
                grid.values.push_back(n);
            } catch (const std::exception&) {
                throw io::ConfigError("--ngrid: bad entry '" + tok + "'");
            }
        }
    }
    if (!grid.valid())
        throw io::ConfigError(
            "--ngrid: need >= 4 strictly increasing values spanning a factor >= 100");
    if (!(tail_tol > 0.0)) throw io::ConfigError("--tail-tol must be > 0");

    const ParameterSpace& probe_space = cand ? cand->space : fam.member(1).space;
    json rep;
    try {
        ConvergenceReport cr =
            check_q_vague(fam, cand, default_probes(probe_space), grid, tail_tol);
        rep = io::report_json(cr, grid, fam.label, cand ? "candidate" : "");
    } catch (const Error& e) {
        rep["schema_version"] = 1;
        rep["family"] = fam.label;
        rep["error"] = e.what();
    }

    // the paper's sufficient criteria apply to a_n pi_n, so they need both a
    // declared scaling and a candidate density to compare against
    if (fam.scaling_hint && cand) {
        json crit;
        const std::vector<double> tg = make_theta_grid(probe_space);
        const std::vector<std::pair<std::string, DensityCriterion>> kinds = {
            {"monotone", DensityCriterion::monotone()},
            {"compact_sup", DensityCriterion::compact_sup()}};
        for (const auto& [name, c] : kinds) {
            try {
                CriterionResult r = check_density_criterion(fam, *cand, c, grid, tg);
                crit[name] = {{"holds", r.holds}, {"details", r.details}};
            } catch (const Error& e) {
                crit[name] = {{"error", e.what()}};
            }
        }
        rep["criteria"] = crit;
    }

    if (model) {
        json post;
        try {
            json ev = json::array();
            for (int n : grid.values) {
                PosteriorResult pr = posterior(fam.member(n), model->lik, model->x);
                ev.push_back({{"n", n},
                              {"evidence", pr.evidence.is_finite() ? json(pr.evidence.value)
                                                                   : json("inf")},
                              {"proper", pr.proper}});
            }
            post["evidence"] = ev;
        } catch (const Error& e) {
            post["evidence_error"] = e.what();
        }
        try {
            MeasureFamily posts = posterior_family(fam, model->lik, model->x);
            EstimatorReport er = estimator_limit(posts, grid);
            post["means"] = er.means;
            json vars = json::array();
            for (double v : er.vars) vars.push_back(std::isinf(v) ? json("inf") : json(v));
            post["vars"] = vars;
            post["var_bounded"] = er.var_bounded;
            post["mean_trend"] = trend_json(er.mean_trend);
        } catch (const Error& e) {
            post["estimator_error"] = e.what();
        }
        rep["posterior"] = post;
    }

    emit(render(rep, format, fam.label), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"priorlab: numerical q-vague convergence of vague priors"};
    app.require_subcommand(1);

    auto* ls = app.add_subcommand("list-examples", "List the example catalog");
    std::string ls_format = "text", ls_filter;
    ls->add_option("--format", ls_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    ls->add_option("--filter", ls_filter, "keep ids containing this substring");

    auto* run = app.add_subcommand("run", "Run a catalog example and emit its report");
    std::string run_id, run_format = "json", run_out;
    run->add_option("id", run_id, "example id (see list-examples)")->required();
    run->add_option("--format", run_format, "json, csv or svg")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    run->add_option("--out", run_out, "write the report to this path instead of stdout");

    auto* an = app.add_subcommand("analyze", "Analyze a user-defined family");
    std::string an_family, an_candidate, an_model, an_ngrid, an_format = "json", an_out;
    double an_tail_tol = 1e-2;
    an->add_option("--family", an_family, "family JSON file")->required();
    an->add_option("--candidate", an_candidate, "candidate measure JSON file");
    an->add_option("--model", an_model, "likelihood model JSON file");
    an->add_option("--ngrid", an_ngrid, "comma-separated n grid, e.g. 1,10,100,1000,10000");
    an->add_option("--tail-tol", an_tail_tol, "per-probe tail drift tolerance");
    an->add_option("--format", an_format, "json, csv or svg")
        ->check(CLI::IsMember({"json", "csv", "svg"}));
    an->add_option("--out", an_out, "write the report to this path instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (ls->parsed()) return cmd_list(ls_format, ls_filter);
        if (run->parsed()) return cmd_run(run_id, run_format, run_out);
        return cmd_analyze(an_family, an_candidate, an_model, an_ngrid, an_tail_tol, an_format,
                           an_out);
    } catch (const priorlab::catalog::UnknownExampleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const priorlab::io::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const priorlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssertion;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssertion;
    }
}
