#include "hardyp/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hardyp/ball_shooting.hpp"
#include "hardyp/closed_forms.hpp"
#include "hardyp/errors.hpp"
#include "hardyp/exponents.hpp"
#include "hardyp/io.hpp"
#include "hardyp/math.hpp"
#include "hardyp/verify.hpp"

namespace hardyp {

namespace {

using nlohmann::json;

Task task_from_name(const std::string& name) {
    static const std::map<std::string, Task> table{
        {"exponents", Task::exponents}, {"closed-form", Task::closed_form},
        {"ground-state", Task::ground_state}, {"ball", Task::ball},
        {"eigen", Task::eigen}, {"verify", Task::verify}, {"sweep", Task::sweep}};
    auto it = table.find(name);
    if (it == table.end())
        throw usage_error("unknown task '" + name +
                          "' (expected exponents|closed-form|ground-state|ball|eigen|"
                          "verify|sweep)");
    return it->second;
}

std::vector<double> parse_value_list(const std::string& text, const std::string& flag) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            vals.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw usage_error(flag + ": cannot parse value '" + cell + "'");
        }
    }
    if (vals.empty()) throw usage_error(flag + ": empty value list");
    return vals;
}

json params_json(const Params& P) {
    return json{{"N", P.N}, {"p", P.p}, {"mu", P.mu}, {"s", P.s}, {"lambda", P.lambda}};
}

void put_finite(json& j, const char* key, double v) {
    if (std::isfinite(v)) j[key] = v;
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void write_outputs(const RunConfig& cfg, const json& summary,
                   const RadialProfile* prof,
                   std::span<const std::pair<double, double>> w) {
    std::cout << summary.dump(2) << '\n';
    if (cfg.out.empty()) return;
    emit_summary(summary, cfg.out + "_summary.json");
    if (prof) emit_profile(*prof, w, cfg.out + "_profile.csv");
}

json exponents_summary(const Params& P, const Exponents& E) {
    json j;
    j["params"] = params_json(P);
    j["gamma1"] = E.gamma1;
    j["gamma2"] = E.gamma2;
    j["delta"] = E.delta;
    j["mu_bar"] = E.mu_bar;
    j["p_star_s"] = E.p_star_s;
    j["M"] = E.M;
    j["sphere_measure"] = E.sphere_measure;
    if (P.mu < 0.0) j["t_minus_level"] = t_minus_level(P);
    return j;
}

int run_exponents(const RunConfig& cfg) {
    const Exponents E = derive(cfg.params);
    write_outputs(cfg, exponents_summary(cfg.params, E), nullptr, {});
    return kExitOk;
}

int run_closed_form(const RunConfig& cfg) {
    const Params& P = cfg.params;
    auto fam = select(P);
    if (!fam)
        throw numerical_error("no closed form is known for p != 2 with mu != 0");
    const Exponents E = derive(P);
    RadialProfile prof;
    const int n = cfg.grid.samples;
    const double x0 = std::log(cfg.grid.r_min);
    const double dx = (std::log(cfg.grid.r_max) - x0) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double r = std::exp(x0 + dx * i);
        PointValue v = eval(*fam, P, r);
        prof.r.push_back(r);
        prof.u.push_back(v.u);
        prof.du_dr.push_back(v.du_dr);
        prof.flux.push_back(std::pow(r, P.N - 1.0) * spow(v.du_dr, P.p - 1.0));
    }
    WTraceReport wrep = w_trace(prof, P, E);

    json j;
    j["params"] = params_json(P);
    j["family"] = fam->kind == FamilyKind::P2 ? "P2" : "MU0";
    j["constant_c"] = fam->constant_c;
    if (fam->kind == FamilyKind::P2) j["nu"] = fam->nu;
    j["gamma1"] = E.gamma1;
    j["gamma2"] = E.gamma2;
    write_outputs(cfg, j, &prof, wrep.trace);
    return kExitOk;
}

int run_ground_state(const RunConfig& cfg) {
    Timer timer;
    GroundStateSolution sol = solve(cfg.params, cfg.grid, cfg.quad_tol);
    WTraceReport wrep = w_trace(sol.profile, cfg.params, sol.exps);

    json j;
    j["params"] = params_json(cfg.params);
    j["gamma1"] = sol.exps.gamma1;
    j["gamma2"] = sol.exps.gamma2;
    j["M"] = sol.exps.M;
    j["C1"] = sol.C1;
    j["C2"] = sol.C2;
    if (sol.t_minus) j["t_minus"] = *sol.t_minus;
    j["max_first_integral"] = sol.report.max_abs_V;
    put_finite(j, "max_ode_residual", sol.report.max_ode_residual);
    put_finite(j, "slope_fit_0", sol.report.slope_fit_zero);
    put_finite(j, "slope_fit_inf", sol.report.slope_fit_inf);
    j["runtime_seconds"] = timer.seconds();
    write_outputs(cfg, j, &sol.profile, wrep.trace);
    return kExitOk;
}

int run_ball(const RunConfig& cfg) {
    Timer timer;
    const Exponents E = derive(cfg.params);
    ShootOptions opt;
    opt.ode_tol = cfg.ode_tol;
    opt.root_tol = cfg.root_tol;
    BallSolution sol = solve_ball(cfg.params, E, {0.0, 0.0}, opt);

    json j;
    j["params"] = params_json(cfg.params);
    j["gamma1"] = E.gamma1;
    j["gamma2"] = E.gamma2;
    j["M"] = E.M;
    j["C1"] = sol.amplitude_C;
    j["boundary_slope"] = sol.boundary_slope;
    j["pohozaev_defect"] = sol.pohozaev_defect;
    put_finite(j, "max_ode_residual", max_ode_residual(sol.profile, cfg.params));
    j["runtime_seconds"] = timer.seconds();
    write_outputs(cfg, j, &sol.profile, sol.w_report.trace);
    return kExitOk;
}

int run_eigen(const RunConfig& cfg) {
    Timer timer;
    const Exponents E = derive(cfg.params);
    const double lam1 =
        first_eigenvalue(cfg.params.N, cfg.params.p, cfg.params.mu,
                         std::fmax(cfg.root_tol, 1e-8));
    json j;
    j["params"] = params_json(cfg.params);
    j["gamma1"] = E.gamma1;
    j["gamma2"] = E.gamma2;
    j["lambda1"] = lam1;
    j["runtime_seconds"] = timer.seconds();
    write_outputs(cfg, j, nullptr, {});
    return kExitOk;
}

void apply_axis(Params& P, const std::string& name, double value) {
    if (name == "N")
        P.N = static_cast<int>(value);
    else if (name == "p")
        P.p = value;
    else if (name == "mu")
        P.mu = value;
    else if (name == "s")
        P.s = value;
    else if (name == "lambda")
        P.lambda = value;
    else
        throw usage_error("--sweep: unknown parameter axis '" + name + "'");
}

int run_sweep(const RunConfig& cfg) {
    if (cfg.sweep.empty()) throw usage_error("--sweep: at least one axis required");
    std::vector<std::size_t> shape;
    std::size_t total = 1;
    for (const auto& ax : cfg.sweep) {
        shape.push_back(ax.values.size());
        total *= ax.values.size();
    }

    std::vector<json> summaries(total);
    std::vector<std::string> failures(total);
    for_index(total, Exec::openmp, [&](std::size_t idx) {
        Params P = cfg.params;
        std::size_t rem = idx;
        for (std::size_t a = 0; a < cfg.sweep.size(); ++a) {
            apply_axis(P, cfg.sweep[a].name, cfg.sweep[a].values[rem % shape[a]]);
            rem /= shape[a];
        }
        try {
            if (cfg.sweep_task == "exponents") {
                summaries[idx] = exponents_summary(P, derive(P));
            } else if (cfg.sweep_task == "eigen") {
                Timer t;
                json j;
                j["params"] = params_json(P);
                j["lambda1"] = first_eigenvalue(P.N, P.p, P.mu, 1e-8);
                j["runtime_seconds"] = t.seconds();
                summaries[idx] = j;
            } else if (cfg.sweep_task == "ground-state") {
                Timer t;
                GroundStateSolution sol = solve(P, cfg.grid, cfg.quad_tol, Exec::serial);
                json j;
                j["params"] = params_json(P);
                j["gamma1"] = sol.exps.gamma1;
                j["gamma2"] = sol.exps.gamma2;
                j["M"] = sol.exps.M;
                j["C1"] = sol.C1;
                j["C2"] = sol.C2;
                if (sol.t_minus) j["t_minus"] = *sol.t_minus;
                j["max_first_integral"] = sol.report.max_abs_V;
                put_finite(j, "max_ode_residual", sol.report.max_ode_residual);
                j["runtime_seconds"] = t.seconds();
                summaries[idx] = j;
                if (!cfg.out.empty()) {
                    WTraceReport wrep = w_trace(sol.profile, P, sol.exps);
                    emit_profile(sol.profile, wrep.trace,
                                 cfg.out + "_pt" + std::to_string(idx) + "_profile.csv");
                }
            } else {
                failures[idx] = "unknown sweep task '" + cfg.sweep_task + "'";
            }
        } catch (const std::exception& e) {
            failures[idx] = e.what();
        }
    });

    for (std::size_t i = 0; i < total; ++i)
        if (!failures[i].empty() && failures[i].rfind("unknown sweep", 0) == 0)
            throw usage_error(failures[i]);

    json index = json::array();
    for (std::size_t i = 0; i < total; ++i) {
        if (!failures[i].empty()) {
            index.push_back(json{{"point", i}, {"error", failures[i]}});
            continue;
        }
        if (!cfg.out.empty()) {
            const std::string path = cfg.out + "_pt" + std::to_string(i) + "_summary.json";
            emit_summary(summaries[i], path);
            index.push_back(json{{"point", i}, {"summary", path}});
        } else {
            index.push_back(summaries[i]);
        }
    }
    std::cout << index.dump(2) << '\n';
    if (!cfg.out.empty()) emit_summary(index, cfg.out + "_index.json");
    return kExitOk;
}

} // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    std::string task_name;
    std::string config_path;
    std::vector<std::string> sweep_specs;

    CLI::App app{"singular Hardy p-Laplacian radial solver"};
    app.add_option("task", task_name,
                   "exponents|closed-form|ground-state|ball|eigen|verify|sweep")
        ->required();
    auto* oN = app.add_option("--N", cfg.params.N, "spatial dimension (default 4)");
    auto* op = app.add_option("--p", cfg.params.p, "p-Laplacian exponent (default 2)");
    auto* omu = app.add_option("--mu", cfg.params.mu, "Hardy coefficient (default 0)");
    auto* os = app.add_option("--s", cfg.params.s, "singularity exponent (default 0)");
    auto* olam = app.add_option("--lambda", cfg.params.lambda,
                                "lower-order coefficient (default 0)");
    auto* ormin = app.add_option("--r-min", cfg.grid.r_min, "grid start (default 1e-6)");
    auto* ormax = app.add_option("--r-max", cfg.grid.r_max, "grid end (default 1e6)");
    auto* osamp = app.add_option("--samples", cfg.grid.samples,
                                 "grid samples (default 2001)");
    auto* oquad = app.add_option("--quad-tol", cfg.quad_tol,
                                 "quadrature tolerance (default 1e-12)");
    auto* oode = app.add_option("--ode-tol", cfg.ode_tol,
                                "integrator tolerance (default 1e-10)");
    auto* oroot = app.add_option("--root-tol", cfg.root_tol,
                                 "root-finding tolerance (default 1e-12)");
    auto* oout = app.add_option("--out", cfg.out, "output path prefix");
    auto* oin = app.add_option("--in", cfg.in, "profile CSV to verify");
    app.add_option("--config", config_path, "key=value config file; flags override");
    app.add_option("--sweep", sweep_specs,
                   "sweep axis as name=v1,v2,... (repeatable; sweep task only)");
    auto* osweeptask = app.add_option("--sweep-task", cfg.sweep_task,
                                      "solver run per sweep point (default ground-state)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        throw help_requested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw usage_error(e.what());
    }
    cfg.task = task_from_name(task_name);

    if (!config_path.empty()) {
        std::ifstream is(config_path);
        if (!is) throw usage_error("--config: cannot open " + config_path);
        std::map<std::string, std::string> kv;
        std::string line;
        while (std::getline(is, line)) {
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string v) {
                const auto a = v.find_first_not_of(" \t\r");
                const auto b = v.find_last_not_of(" \t\r");
                return a == std::string::npos ? std::string{} : v.substr(a, b - a + 1);
            };
            kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        auto apply_num = [&](CLI::Option* opt, const std::string& key, auto& target) {
            auto it = kv.find(key);
            if (it == kv.end() || opt->count() > 0) return; // flags win
            try {
                if constexpr (std::is_same_v<std::decay_t<decltype(target)>, int>)
                    target = std::stoi(it->second);
                else
                    target = std::stod(it->second);
            } catch (const std::exception&) {
                throw usage_error("--config: cannot parse " + key + "=" + it->second);
            }
        };
        apply_num(oN, "N", cfg.params.N);
        apply_num(op, "p", cfg.params.p);
        apply_num(omu, "mu", cfg.params.mu);
        apply_num(os, "s", cfg.params.s);
        apply_num(olam, "lambda", cfg.params.lambda);
        apply_num(ormin, "r-min", cfg.grid.r_min);
        apply_num(ormax, "r-max", cfg.grid.r_max);
        apply_num(osamp, "samples", cfg.grid.samples);
        apply_num(oquad, "quad-tol", cfg.quad_tol);
        apply_num(oode, "ode-tol", cfg.ode_tol);
        apply_num(oroot, "root-tol", cfg.root_tol);
        if (auto it = kv.find("out"); it != kv.end() && oout->count() == 0)
            cfg.out = it->second;
        if (auto it = kv.find("in"); it != kv.end() && oin->count() == 0)
            cfg.in = it->second;
        if (auto it = kv.find("sweep-task"); it != kv.end() && osweeptask->count() == 0)
            cfg.sweep_task = it->second;
    }

    for (const std::string& spec : sweep_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw usage_error("--sweep: expected name=v1,v2,... got '" + spec + "'");
        SweepAxis ax;
        ax.name = spec.substr(0, eq);
        ax.values = parse_value_list(spec.substr(eq + 1), "--sweep");
        cfg.sweep.push_back(std::move(ax));
    }

    const std::string why = validate(cfg.params);
    if (!why.empty()) throw usage_error(why);
    if (!(cfg.grid.r_min < cfg.grid.r_max) || !(cfg.grid.r_min > 0.0))
        throw usage_error("requires 0 < r-min < r-max");
    if (cfg.grid.samples < 2) throw usage_error("requires samples >= 2");
    for (double tol : {cfg.quad_tol, cfg.ode_tol, cfg.root_tol})
        if (!(tol > 0.0 && tol < 1.0))
            throw usage_error("requires tolerances in (0, 1)");
    return cfg;
}

int run(const RunConfig& cfg) {
    switch (cfg.task) {
    case Task::exponents: return run_exponents(cfg);
    case Task::closed_form: return run_closed_form(cfg);
    case Task::ground_state: return run_ground_state(cfg);
    case Task::ball: return run_ball(cfg);
    case Task::eigen: return run_eigen(cfg);
    case Task::verify: return run_verify(cfg);
    case Task::sweep: return run_sweep(cfg);
    }
    return kExitUsage;
}

int run_cli(int argc, char** argv) {
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        return run(parse_args(args));
    } catch (const help_requested& h) {
        std::cout << h.text;
        return kExitOk;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const verification_error& e) {
        std::cerr << "verification failure: " << e.what() << '\n';
        return kExitVerifyFailure;
    } catch (const numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

} // namespace hardyp
