// Command line front end: profile ingestion, reachability verdicts, design
// envelopes, forward evolution, localized design and traffic scenarios.
// Exit codes: 0 success, 1 error, 2 infeasible verdict.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "invdes/io.hpp"

namespace fs = std::filesystem;
using invdes::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

std::string g_format = "json";

// Verdict printing honours --format: JSON as-is, or flat key,value rows.
void print_verdict(const json& j) {
    if (g_format == "csv") {
        std::cout << "key,value\n";
        for (auto it = j.begin(); it != j.end(); ++it)
            std::cout << it.key() << ',' << it.value().dump() << "\n";
        return;
    }
    std::cout << j.dump(2) << "\n";
}

json parse_flux_arg(const std::string& arg) {
    if (arg.empty()) return json{{"kind", "burgers"}};
    if (arg.front() == '{') return json::parse(arg);
    if (arg == "burgers" || arg == "traffic" || arg == "table")
        return json{{"kind", arg}};
    return json::parse(invdes::io::read_text_file(arg));
}

invdes::Interval parse_interval(const std::string& s, const char* what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument(std::string(what) + " expects \"lo,hi\"");
    return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
}

invdes::SampledProfile load_profile(const std::string& path, double grid_dx) {
    invdes::SampledProfile u = invdes::io::read_profile_csv_file(path);
    if (grid_dx > 0.0 && std::abs(grid_dx - u.grid.dx) > 1e-12 * grid_dx) {
        const invdes::Grid g = invdes::Grid::aligned(u.grid.x0, u.grid.x0,
                                                     u.grid.right(), grid_dx);
        u = invdes::resample(u, g);
    }
    return u;
}

void emit(const fs::path& out_dir, const std::string& name,
          const std::string& content) {
    fs::create_directories(out_dir);
    invdes::io::write_text_file((out_dir / name).string(), content);
}

void emit_json(const fs::path& out_dir, const std::string& name, const json& j) {
    emit(out_dir, name, j.dump(2) + "\n");
}

struct CommonOpts {
    std::string flux_arg = "burgers";
    std::string input;
    std::string out_dir = ".";
    double grid_dx = 0.0;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_flux = true) {
    if (needs_flux)
        cmd->add_option("--flux", o.flux_arg,
                        "flux spec: burgers | JSON | path to JSON");
    cmd->add_option("--input,-i", o.input, "input profile CSV")->required();
    cmd->add_option("--out-dir,-o", o.out_dir, "output directory");
    cmd->add_option("--grid-dx", o.grid_dx, "resample input to this spacing");
    cmd->add_flag("--svg", o.svg, "also write an SVG plot");
}

void write_envelope_outputs(const fs::path& out_dir,
                            const invdes::DesignEnvelope& env, bool svg,
                            const invdes::FluxModel* flux = nullptr) {
    std::ostringstream csv;
    invdes::io::write_envelope_csv(csv, env);
    emit(out_dir, "envelope.csv", csv.str());
    json sidecar = invdes::io::envelope_sidecar_json(env);
    if (flux && flux->slope_domain().bounded()) {
        // Tabulated fluxes only cover a compact speed range; record it so
        // downstream consumers know the validity window.
        sidecar["flux_slope_domain"] = {flux->slope_domain().lo,
                                        flux->slope_domain().hi};
    }
    emit_json(out_dir, "envelope.json", sidecar);
    if (svg) {
        std::vector<double> xs(env.grid_o.n);
        for (int i = 0; i < env.grid_o.n; ++i) xs[i] = env.grid_o.node(i + 1);
        std::ostringstream s;
        invdes::io::write_svg_plot(
            s,
            {{"u_flat", &xs, &env.u_flat.values},
             {"u_sharp", &xs, &env.u_sharp.values}},
            "design envelope");
        emit(out_dir, "envelope.svg", s.str());
    }
}

int run_traffic_scenario(const json& scenario, const std::string& input,
                         const fs::path& out_dir, double grid_dx) {
    json flux_spec{{"kind", "traffic"}, {"rho_bar", scenario.at("rho_bar")}};
    if (scenario.contains("speed_law")) flux_spec["speed"] = scenario["speed_law"];
    else if (scenario.contains("speed")) flux_spec["speed"] = scenario["speed"];
    const invdes::TrafficFlux f = invdes::io::make_traffic_flux(flux_spec);

    invdes::SampledProfile q = load_profile(input, grid_dx);
    if (scenario.contains("T1") && scenario.contains("T2")) {
        const invdes::Grid window = invdes::Grid::aligned(
            q.grid.x0, scenario["T1"].get<double>(), scenario["T2"].get<double>(),
            q.grid.dx);
        q = invdes::resample(q, window);
    }
    const invdes::OutflowRecord rec = invdes::make_outflow_record(q, f);
    const invdes::RoadLengthBound bound = invdes::max_road_length(rec, f);

    const double L = scenario.value("L", 0.0);
    json feas = invdes::io::traffic_feasibility_json(bound, L);
    emit_json(out_dir, "feasibility.json", feas);

    if (L <= 0.0) {
        print_verdict(feas);
        return kExitOk;
    }
    if (L > bound.L_max) {
        print_verdict(feas);
        return kExitInfeasible;
    }
    const invdes::InflowEnvelope env = invdes::inflow_envelope(rec, L, f);
    std::vector<invdes::TrafficEvent> events = env.kinks;
    if (scenario.contains("kink_threshold"))
        events = invdes::detect_events(env, scenario["kink_threshold"].get<double>());

    std::ostringstream csv;
    invdes::io::write_inflow_csv(csv, env);
    emit(out_dir, "inflow.csv", csv.str());
    emit_json(out_dir, "events.json", invdes::io::events_json(events));
    print_verdict(feas);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"inverse design toolkit for scalar conservation laws"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--format", g_format, "stdout verdict format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));

    CommonOpts reach_o, design_o, member_o, evolve_o, localize_o;
    double T = 1.0, t_evolve = 1.0, cfl = 0.45, lambda = -1.0;
    double x_check = std::numeric_limits<double>::quiet_NaN();
    double slack = -1.0;
    std::uint64_t seed = 0;
    std::string J_arg, window_arg, candidate_path, target_path, scheme = "hopflax";
    std::string scenario_path, jobs_path;
    std::string traffic_input, traffic_out = ".";
    double traffic_dx = 0.0;
    int threads = static_cast<int>(std::thread::hardware_concurrency());

    CLI::App* reach = app.add_subcommand("reach", "one-sided slope test at horizon T");
    add_common(reach, reach_o);
    reach->add_option("--T", T, "horizon")->required();
    reach->add_option("--slack", slack, "ratio tolerance (default: grid based)");

    CLI::App* design = app.add_subcommand("design", "flat/sharp design envelopes");
    add_common(design, design_o);
    design->add_option("--T", T, "horizon")->required();
    design->add_option("--J", J_arg, "constraint interval lo,hi")->required();
    design->add_option("--x-check", x_check, "base point (default: window midpoint)");
    design->add_option("--sample", lambda, "also write the lambda-sample profile");
    CLI::Option* seed_opt =
        design->add_option("--seed", seed, "also write a random sample profile");

    CLI::App* member = app.add_subcommand("member", "membership in the design set");
    add_common(member, member_o);
    member->add_option("--T", T, "horizon")->required();
    member->add_option("--J", J_arg, "constraint interval lo,hi")->required();
    member->add_option("--target", target_path, "target profile CSV")->required();
    member->add_option("--x-check", x_check, "base point");

    CLI::App* evolve_cmd = app.add_subcommand("evolve", "forward entropy evolution");
    add_common(evolve_cmd, evolve_o);
    evolve_cmd->add_option("--t", t_evolve, "evolution time")->required();
    evolve_cmd->add_option("--scheme", scheme, "hopflax | godunov")
        ->check(CLI::IsMember({"hopflax", "godunov"}));
    evolve_cmd->add_option("--cfl", cfl, "CFL factor for godunov");
    evolve_cmd->add_option("--window", window_arg, "output window lo,hi");

    CLI::App* localize = app.add_subcommand("localize", "design from a windowed target");
    add_common(localize, localize_o);
    localize->add_option("--T", T, "horizon")->required();
    localize->add_option("--J", J_arg, "constraint interval lo,hi")->required();
    localize->add_option("--window", window_arg, "target window x1,x2");

    CLI::App* traffic = app.add_subcommand("traffic", "inflow reconstruction from outflow");
    traffic->add_option("--scenario", scenario_path, "scenario JSON")->required();
    traffic->add_option("--input,-i", traffic_input, "outflow CSV (t,q_out)")->required();
    traffic->add_option("--out-dir,-o", traffic_out, "output directory");
    traffic->add_option("--grid-dx", traffic_dx, "resample input to this spacing");

    CLI::App* batch = app.add_subcommand("batch", "run many traffic scenarios");
    batch->add_option("--jobs", jobs_path, "jobs JSON")->required();
    batch->add_option("--threads", threads, "worker count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*reach) {
            const invdes::FluxModel flux = invdes::io::make_flux(parse_flux_arg(reach_o.flux_arg));
            const invdes::SampledProfile u = load_profile(reach_o.input, reach_o.grid_dx);
            const double s = slack >= 0.0 ? slack : invdes::default_oleinik_slack(u, flux, T);
            const invdes::OleinikVerdict v = invdes::oleinik_check(u, flux, T, s);
            const json j = invdes::io::oleinik_verdict_json(v);
            emit_json(reach_o.out_dir, "reach.json", j);
            print_verdict(j);
            return v.ok ? kExitOk : kExitInfeasible;
        }

        if (*design) {
            const invdes::FluxModel flux = invdes::io::make_flux(parse_flux_arg(design_o.flux_arg));
            const invdes::SampledProfile u_T = load_profile(design_o.input, design_o.grid_dx);
            const invdes::Interval J = parse_interval(J_arg, "--J");
            const double xc = std::isnan(x_check)
                                  ? 0.5 * (u_T.grid.x0 + u_T.grid.right())
                                  : x_check;
            const invdes::DesignEnvelope env = invdes::design_envelope(u_T, flux, T, J, xc);
            write_envelope_outputs(design_o.out_dir, env, design_o.svg, &flux);
            if (lambda >= 0.0) {
                std::ostringstream csv;
                invdes::io::write_profile_csv(csv, invdes::sample_design(env, lambda));
                emit(design_o.out_dir, "sample.csv", csv.str());
            }
            if (seed_opt->count() > 0) {
                std::ostringstream csv;
                invdes::io::write_profile_csv(csv, invdes::sample_design_random(env, seed));
                emit(design_o.out_dir, "sample_random.csv", csv.str());
            }
            std::cout << invdes::io::envelope_sidecar_json(env).dump(2) << "\n";
            return kExitOk;
        }

        if (*member) {
            const invdes::FluxModel flux = invdes::io::make_flux(parse_flux_arg(member_o.flux_arg));
            const invdes::SampledProfile u_T = load_profile(target_path, member_o.grid_dx);
            const invdes::SampledProfile cand = load_profile(member_o.input, member_o.grid_dx);
            const invdes::Interval J = parse_interval(J_arg, "--J");
            const double xc = std::isnan(x_check)
                                  ? 0.5 * (u_T.grid.x0 + u_T.grid.right())
                                  : x_check;
            const invdes::DesignEnvelope env = invdes::design_envelope(u_T, flux, T, J, xc);
            const invdes::MembershipVerdict v =
                invdes::membership(invdes::resample(cand, env.grid_o), env);
            const json j = invdes::io::membership_verdict_json(v);
            emit_json(member_o.out_dir, "member.json", j);
            print_verdict(j);
            return v.member ? kExitOk : kExitInfeasible;
        }

        if (*evolve_cmd) {
            const invdes::FluxModel flux = invdes::io::make_flux(parse_flux_arg(evolve_o.flux_arg));
            const invdes::SampledProfile u0 = load_profile(evolve_o.input, evolve_o.grid_dx);
            invdes::SampledProfile out;
            if (scheme == "godunov") {
                out = invdes::godunov(u0, flux, t_evolve, cfl);
            } else {
                const invdes::Interval w = window_arg.empty()
                                               ? u0.grid.span()
                                               : parse_interval(window_arg, "--window");
                out = invdes::evolve(u0, flux, t_evolve, w);
            }
            std::ostringstream csv;
            invdes::io::write_profile_csv(csv, out);
            emit(evolve_o.out_dir, "evolved.csv", csv.str());
            std::cout << "wrote " << (fs::path(evolve_o.out_dir) / "evolved.csv").string()
                      << "\n";
            return kExitOk;
        }

        if (*localize) {
            const invdes::FluxModel flux = invdes::io::make_flux(parse_flux_arg(localize_o.flux_arg));
            invdes::SampledProfile u = load_profile(localize_o.input, localize_o.grid_dx);
            if (!window_arg.empty()) {
                const invdes::Interval w = parse_interval(window_arg, "--window");
                u = invdes::resample(u, invdes::Grid::aligned(u.grid.x0, w.lo, w.hi, u.grid.dx));
            }
            const invdes::Interval J = parse_interval(J_arg, "--J");
            const invdes::LocalizedTarget target{u, J, T};
            const invdes::RestrictedDesign rd = invdes::restricted_design(target, flux);
            write_envelope_outputs(localize_o.out_dir, rd.envelope, localize_o.svg, &flux);
            const json j{{"K_o", {rd.K_o.lo, rd.K_o.hi}},
                         {"degenerate", rd.degenerate},
                         {"reachable", true}};
            emit_json(localize_o.out_dir, "localize.json", j);
            print_verdict(j);
            return kExitOk;
        }

        if (*traffic) {
            const json scenario = json::parse(invdes::io::read_text_file(scenario_path));
            return run_traffic_scenario(scenario, traffic_input, traffic_out, traffic_dx);
        }

        if (*batch) {
            const json jobs = json::parse(invdes::io::read_text_file(jobs_path));
            const auto& list = jobs.at("scenarios");
            std::vector<int> results(list.size(), kExitOk);
            std::vector<std::thread> pool;
            std::atomic<std::size_t> next{0};
            const int workers = std::max(1, std::min<int>(threads, static_cast<int>(list.size())));
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&]() {
                    for (std::size_t k = next.fetch_add(1); k < list.size();
                         k = next.fetch_add(1)) {
                        const json& job = list[k];
                        try {
                            results[k] = run_traffic_scenario(
                                job, job.at("input").get<std::string>(),
                                job.at("out_dir").get<std::string>(),
                                job.value("grid_dx", 0.0));
                        } catch (const std::exception&) {
                            results[k] = kExitError;
                        }
                    }
                });
            }
            for (auto& th : pool) th.join();
            const int worst = *std::max_element(results.begin(), results.end());
            std::cout << "batch finished: " << list.size() << " scenarios, exit "
                      << worst << "\n";
            return worst;
        }
    } catch (const invdes::NotReachableError& e) {
        const json j{{"reachable", false},
                     {"worst_pair", {e.xi, e.xj}},
                     {"ratio", e.ratio},
                     {"bound", e.bound}};
        std::cout << j.dump(2) << "\n";
        return kExitInfeasible;
    } catch (const invdes::ConstraintInfeasibleError& e) {
        std::cout << json{{"feasible", false}, {"reason", e.what()}}.dump(2) << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
