// Command-line front end: first-hit distributions, trace-process
// generators, h tables, validation suites and Monte Carlo checks for
// one-dimensional Levy processes on finite point sets.
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure,
// 3 validation failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "levyhit/ctmc.hpp"
#include "levyhit/hitting.hpp"
#include "levyhit/mc.hpp"
#include "levyhit/models.hpp"
#include "levyhit/resolvent.hpp"
#include "levyhit/trace_q.hpp"

using json = nlohmann::ordered_json;
using namespace levyhit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitValidation = 3;

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Model spec strings: "bm:sigma2=1,mu=0", "stable:alpha=1.5,beta=0",
// "stable:alpha=1.5,cplus=0.7,cminus=0.3", "snstable:alpha=1.5".
ProcessModel parse_model(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::stringstream rest(spec.substr(colon + 1));
        std::string item;
        while (std::getline(rest, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw config_error("bad model parameter '" + item +
                                   "' (expected key=value)");
            try {
                kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw config_error("bad numeric value in '" + item + "'");
            }
        }
    }
    auto take = [&kv](const std::string& key, double fallback,
                      bool required = false) {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (required) throw config_error("missing model parameter " + key);
            return fallback;
        }
        const double v = it->second;
        kv.erase(it);
        return v;
    };
    try {
        if (family == "bm") {
            const double s = take("sigma2", 1.0);
            const double mu = take("mu", 0.0);
            if (!kv.empty())
                throw config_error("unknown bm parameter " + kv.begin()->first);
            return ProcessModel::brownian(s, mu);
        }
        if (family == "stable") {
            const double alpha = take("alpha", 0.0, true);
            if (kv.count("cplus") || kv.count("cminus")) {
                const double cp = take("cplus", 0.0);
                const double cm = take("cminus", 0.0);
                if (!kv.empty())
                    throw config_error("unknown stable parameter " +
                                       kv.begin()->first);
                return ProcessModel::stable(alpha, cp, cm);
            }
            const double beta = take("beta", 0.0);
            if (!kv.empty())
                throw config_error("unknown stable parameter " +
                                   kv.begin()->first);
            return ProcessModel::stable_beta(alpha, beta);
        }
        if (family == "snstable") {
            const double alpha = take("alpha", 0.0, true);
            if (!kv.empty())
                throw config_error("unknown snstable parameter " +
                                   kv.begin()->first);
            return ProcessModel::spectrally_negative_stable(alpha);
        }
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    throw config_error("unknown model family '" + family +
                       "' (expected bm, stable or snstable)");
}

struct CommonOpts {
    std::string model_spec;
    std::vector<double> points;
    std::string format = "table";
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool need_points = true) {
    cmd->add_option("--model", c.model_spec,
                    "model spec, e.g. bm:sigma2=1,mu=0 | "
                    "stable:alpha=1.5,beta=0 | snstable:alpha=1.5")
        ->required();
    auto* pts = cmd->add_option("--points", c.points,
                                "target points, strictly increasing");
    if (need_points) pts->required();
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    cmd->add_option("--quad.abs-tol", c.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--quad.rel-tol", c.rel_tol, "quadrature relative tolerance");
}

ResolventEvaluator make_evaluator(const CommonOpts& c) {
    QuadratureConfig cfg;
    cfg.abs_tol = c.abs_tol;
    cfg.rel_tol = c.rel_tol;
    return ResolventEvaluator(parse_model(c.model_spec), cfg);
}

PointSet make_points(const CommonOpts& c) {
    try {
        return PointSet(c.points);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
}

json dist_to_json(double start, const HittingDistribution& d) {
    json j;
    j["start"] = start;
    j["probs"] = d.probs;
    j["raw"] = d.raw;
    j["total"] = d.total;
    j["residual"] = d.residual;
    j["pivot_overlap"] = d.pivot_overlap;
    return j;
}

json qmatrix_to_json(const QMatrix& q) {
    json j;
    j["points"] = q.labels;
    j["recurrent"] = q.recurrence == Recurrence::Recurrent;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < q.q.rows(); ++i) {
        std::vector<double> row;
        for (std::size_t k = 0; k < q.q.cols(); ++k) row.push_back(q.q(i, k));
        rows.push_back(std::move(row));
    }
    j["q"] = rows;
    j["row_sums"] = q.row_sums;
    j["min_offdiag"] = q.min_offdiag;
    j["max_abs_row_sum"] = q.max_abs_row_sum;
    return j;
}

void print_matrix(const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            std::printf("%s%14.10f", j ? "  " : "", m(i, j));
        std::printf("\n");
    }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

int cmd_hit(const CommonOpts& c, const std::vector<double>& starts) {
    auto ev = make_evaluator(c);
    auto set = make_points(c);
    std::vector<HittingDistribution> results;
    results.reserve(starts.size());
    for (double x : starts) results.push_back(multi_point(ev, {set, x}));

    if (c.format == "json") {
        json out;
        out["model"] = c.model_spec;
        out["points"] = set.points();
        out["results"] = json::array();
        for (std::size_t s = 0; s < starts.size(); ++s)
            out["results"].push_back(dist_to_json(starts[s], results[s]));
        std::cout << out.dump(2) << "\n";
    } else if (c.format == "csv") {
        std::cout << "start,point,prob\n";
        for (std::size_t s = 0; s < starts.size(); ++s)
            for (std::size_t i = 0; i < set.size(); ++i)
                std::cout << fmt(starts[s]) << "," << fmt(set[i]) << ","
                          << fmt(results[s].probs[i]) << "\n";
    } else {
        for (std::size_t s = 0; s < starts.size(); ++s) {
            std::printf("start x = %g\n", starts[s]);
            for (std::size_t i = 0; i < set.size(); ++i)
                std::printf("  P(first hit %10g) = %.12f\n", set[i],
                            results[s].probs[i]);
            std::printf("  total %.12f   pivot overlap %.3e\n",
                        results[s].total, results[s].pivot_overlap);
        }
    }
    return kExitOk;
}

int cmd_qmatrix(const CommonOpts& c, const std::vector<std::string>& checks) {
    auto ev = make_evaluator(c);
    auto set = make_points(c);
    if (set.size() < 2) throw config_error("qmatrix needs at least two points");
    auto q = build_Q(ev, set);

    json check_report = json::array();
    bool check_failed = false;
    for (const auto& name : checks) {
        double dev = 0.0;
        double tol = 0.0;
        if (name == "getoor") {
            auto g = getoor_limit_Q(ev, set);
            dev = max_abs_diff(g.q, q.q);
            tol = 1e-3;
        } else if (name == "closed-form") {
            auto golden = closed_form_Q(ev.model(), set);
            dev = max_abs_diff(golden.q, q.q);
            tol = ev.h_tagged(set[1] - set[0]).method == HMethod::ClosedForm
                      ? 1e-8
                      : 1e-5;
        } else {
            throw config_error("unknown check '" + name +
                               "' (expected getoor or closed-form)");
        }
        json cr;
        cr["check"] = name;
        cr["max_deviation"] = dev;
        cr["tolerance"] = tol;
        cr["pass"] = dev < tol;
        if (dev >= tol) check_failed = true;
        check_report.push_back(cr);
        std::cerr << "check " << name << ": max deviation " << fmt(dev)
                  << (dev < tol ? " (pass)" : " (FAIL)") << "\n";
    }

    if (c.format == "json") {
        json out = qmatrix_to_json(q);
        out["model"] = c.model_spec;
        if (!checks.empty()) out["checks"] = check_report;
        std::cout << out.dump(2) << "\n";
    } else if (c.format == "csv") {
        std::cout << "i,j,point_i,point_j,q\n";
        for (std::size_t i = 0; i < set.size(); ++i)
            for (std::size_t j = 0; j < set.size(); ++j)
                std::cout << i << "," << j << "," << fmt(set[i]) << ","
                          << fmt(set[j]) << "," << fmt(q.q(i, j)) << "\n";
    } else {
        std::printf("Q matrix on %zu points (%s):\n", set.size(),
                    q.recurrence == Recurrence::Recurrent ? "recurrent"
                                                          : "transient");
        print_matrix(q.q);
        std::printf("max |row sum| = %.3e\n", q.max_abs_row_sum);
    }
    return check_failed ? kExitValidation : kExitOk;
}

int cmd_h_table(const CommonOpts& c, double lo, double hi, int count) {
    if (count < 2) throw config_error("grid count must be >= 2");
    if (!(hi > lo)) throw config_error("grid max must exceed min");
    auto ev = make_evaluator(c);
    std::cout << "x,h,method\n";
    for (int i = 0; i < count; ++i) {
        const double x = lo + (hi - lo) * i / (count - 1);
        const auto h = ev.h_tagged(x);
        std::cout << fmt(x) << "," << fmt(h.value) << ","
                  << h_method_name(h.method) << "\n";
    }
    return kExitOk;
}

int cmd_mc(const CommonOpts& c, double start, PathConfig cfg, bool extrapolate) {
    auto model = parse_model(c.model_spec);
    auto set = make_points(c);
    McReport rep;
    if (const auto* bm = std::get_if<BrownianMotion>(&model.family())) {
        rep = simulate_bm_hitting(start, set, cfg, bm->mu, bm->sigma2);
    } else if (std::holds_alternative<StrictlyStable>(model.family())) {
        rep = extrapolate
                  ? simulate_stable_eps_extrapolated(model, start, set, cfg)
                  : simulate_stable_eps_hitting(model, start, set, cfg);
    } else {
        throw config_error(
            "mc supports the bm and stable families (snstable paths are not "
            "simulated)");
    }
    json out;
    out["model"] = c.model_spec;
    out["start"] = start;
    out["points"] = set.points();
    out["estimates"] = rep.estimates;
    out["std_errors"] = rep.std_errors;
    out["counts"] = rep.counts;
    out["censored_fraction"] = rep.censored_fraction;
    out["eps_schedule"] = rep.eps_schedule;
    out["seed"] = rep.seed;
    out["paths"] = rep.paths;
    out["eps_bias_warning"] = rep.eps_bias_warning;
    std::cout << out.dump(2) << "\n";
    if (rep.eps_bias_warning)
        std::cerr << "warning: censored fraction above 5%; estimates are "
                     "conditioned on decided paths\n";
    return kExitOk;
}

struct SuiteResult {
    std::string name;
    double max_dev = 0.0;
    double tol = 0.0;
    bool pass = true;
    std::string detail;
};

int cmd_validate(const std::string& suite, std::uint64_t seed) {
    std::vector<SuiteResult> results;

    if (suite == "all" || suite == "oracle") {
        SuiteResult a1{"ctmc-matrix-equation", 0.0, 1e-10, true, ""};
        SuiteResult rt{"ctmc-generator-roundtrip", 0.0, 1e-9, true, ""};
        for (std::uint64_t k = 0; k < 200; ++k) {
            const std::uint64_t s = seed + k;
            const std::size_t m = 3 + s % 6;
            auto chain = random_ctmc(m, s, (s % 4 == 0) ? 1.0 : 0.0);
            std::vector<std::size_t> targets;
            for (std::size_t t = 0; t < std::min<std::size_t>(2 + s % 5, m - 1);
                 ++t)
                targets.push_back(t);
            if (targets.size() < 2) targets = {0, 1};
            auto rep = validate_theorem_A1(chain, m - 1, targets);
            a1.max_dev = std::max(a1.max_dev, rep.max_discrepancy);
            if (!rep.pass) {
                a1.pass = false;
                a1.detail = "seed " + std::to_string(s) + ": " + rep.detail;
            }
        }
        a1.pass = a1.pass && a1.max_dev < a1.tol;
        for (std::uint64_t k = 0; k < 25; ++k) {
            auto chain = random_ctmc(6, seed + 1000 + k);
            auto rep = validate_Q_roundtrip(chain);
            rt.max_dev = std::max(rt.max_dev, rep.max_discrepancy);
            if (!rep.pass) {
                rt.pass = false;
                rt.detail = "seed " + std::to_string(seed + 1000 + k) + ": " +
                            rep.detail;
            }
        }
        rt.pass = rt.pass && rt.max_dev < rt.tol;
        results.push_back(a1);
        results.push_back(rt);
    }

    if (suite == "all" || suite == "golden") {
        SuiteResult g{"closed-form-generators", 0.0, 1e-8, true, ""};
        const PointSet set({0.0, 1.0, 3.0});
        for (const auto& m : {ProcessModel::brownian(1.0, 0.0),
                              ProcessModel::stable_beta(1.5, 0.0),
                              ProcessModel::stable_beta(1.5, 0.5),
                              ProcessModel::spectrally_negative_stable(1.5)}) {
            ResolventEvaluator ev(m);
            auto built = build_Q(ev, set);
            auto golden = closed_form_Q(m, set);
            g.max_dev = std::max(g.max_dev, max_abs_diff(built.q, golden.q));
        }
        g.pass = g.max_dev < g.tol;
        if (!g.pass) g.detail = "generator mismatch on {0,1,3}";
        results.push_back(g);
    }

    if (suite == "all" || suite == "cross") {
        SuiteResult x{"h-cross-method", 0.0, 1e-5, true, ""};
        for (const auto& m : {ProcessModel::brownian(1.0, 0.0),
                              ProcessModel::stable_beta(1.5, 0.0),
                              ProcessModel::stable_beta(1.8, 0.5)}) {
            ResolventEvaluator ev(m);
            for (double v : {-2.0, 0.5, 1.0, 3.0}) {
                const double ht = ev.h_tsukada(v);
                const double hl = ev.h_limit(v);
                const double cf = *m.closed_form_h(v);
                const double scale = std::max(1e-30, std::abs(cf));
                x.max_dev = std::max({x.max_dev, std::abs(ht - cf) / scale,
                                      std::abs(hl - ht) / scale});
            }
        }
        x.pass = x.max_dev < x.tol;
        if (!x.pass) x.detail = "cross-method h disagreement";
        results.push_back(x);
    }

    if (results.empty())
        throw config_error("unknown suite '" + suite +
                           "' (expected all, oracle, golden or cross)");

    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%-28s max dev %-12.3e tol %-9.1e %s\n", r.name.c_str(),
                    r.max_dev, r.tol, r.pass ? "pass" : "FAIL");
        if (!r.pass) {
            all_pass = false;
            if (!r.detail.empty()) std::cerr << "  " << r.detail << "\n";
        }
    }
    return all_pass ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "first-hit distributions and trace-process generators for "
        "one-dimensional Levy processes on finite point sets"};
    app.require_subcommand(1);
    app.set_config("--config");

    CommonOpts hit_opts;
    std::vector<double> starts;
    auto* hit = app.add_subcommand("hit", "first-hit distribution over the points");
    add_common(hit, hit_opts);
    hit->add_option("--start", starts, "start point(s) x")->required();

    CommonOpts qm_opts;
    std::vector<std::string> checks;
    auto* qm = app.add_subcommand("qmatrix", "generator of the trace process");
    add_common(qm, qm_opts);
    qm->add_option("--check", checks, "cross-validation: getoor, closed-form")
        ->check(CLI::IsMember({"getoor", "closed-form"}));

    CommonOpts ht_opts;
    double grid_min = -2.0, grid_max = 2.0;
    int grid_count = 41;
    auto* ht = app.add_subcommand("h-table",
                                  "CSV table of the renormalized zero resolvent");
    add_common(ht, ht_opts, false);
    ht->add_option("--min", grid_min, "grid minimum");
    ht->add_option("--max", grid_max, "grid maximum");
    ht->add_option("--count", grid_count, "grid size");

    std::string suite = "all";
    std::uint64_t val_seed = 12345;
    auto* val = app.add_subcommand("validate", "run the validation suites");
    val->add_option("--suite", suite, "all | oracle | golden | cross");
    val->add_option("--seed", val_seed, "base seed for random chains");

    CommonOpts mc_opts;
    double mc_start = 0.0;
    PathConfig pcfg;
    bool extrapolate = true;
    auto* mc = app.add_subcommand("mc", "Monte Carlo check of hit probabilities");
    add_common(mc, mc_opts);
    mc->add_option("--start", mc_start, "start point x")->required();
    mc->add_option("--paths", pcfg.paths, "number of paths");
    mc->add_option("--eps", pcfg.eps, "hitting radius (stable paths)");
    mc->add_option("--step", pcfg.step, "time step (stable paths)");
    mc->add_option("--horizon", pcfg.horizon, "censoring horizon");
    mc->add_option("--seed", pcfg.seed, "RNG seed");
    mc->add_flag("--extrapolate,!--no-extrapolate", extrapolate,
                 "eps -> 0 extrapolation for stable paths");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (hit->parsed()) return cmd_hit(hit_opts, starts);
        if (qm->parsed()) return cmd_qmatrix(qm_opts, checks);
        if (ht->parsed())
            return cmd_h_table(ht_opts, grid_min, grid_max, grid_count);
        if (val->parsed()) return cmd_validate(suite, val_seed);
        if (mc->parsed()) return cmd_mc(mc_opts, mc_start, pcfg, extrapolate);
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const singular_matrix& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
