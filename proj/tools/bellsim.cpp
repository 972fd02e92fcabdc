// SPDX-License-Identifier: Apache-2.0
//
// bellsim: simulate and verify local hidden-variable models for two-outcome
// random games, and extremize the CHSH functional against the generalized
// bound 4|E(pi/4)|.
//
// Subcommands: validate, sweep, simulate, bound, chsh, harness.
// Exit codes: 0 success, 1 runtime/validation failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "bellsim/angle.hpp"
#include "bellsim/bell_game.hpp"
#include "bellsim/chsh.hpp"
#include "bellsim/format.hpp"
#include "bellsim/harness.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace bellsim;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

double sig12(double v) { return round_sig(v, 12); }

void emit(const json& j) { std::cout << j.dump() << "\n"; }

/// Flat JSON config file mirroring flag names with '-' -> '_'.
/// Precedence: flags > file > defaults, implemented by seeding each CLI
/// option's default from the file before parsing.
json load_config(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) {
            path = argv[i + 1];
        } else if (a.rfind("--config=", 0) == 0) {
            path = a.substr(9);
        }
    }
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw CLI::ValidationError("--config", "bad JSON in '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw CLI::ValidationError("--config", "config must be a JSON object");
    return j;
}

void seed_default(CLI::Option* opt, const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) return;
    const json& v = cfg.at(key);
    opt->default_val(v.is_string() ? v.get<std::string>() : v.dump());
}

struct CommonArgs {
    std::string family = "cosine";
    double theta = 0.0;
    bool degrees = false;
    std::uint64_t rounds = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    int grid_n = 64;
    double refine_tol = 1e-10;
    int points = 629;
    std::string out = "-";
    // harness
    std::string role = "referee";
    std::string listen = "127.0.0.1:0";
    std::string connect = "127.0.0.1:0";
    int accept_timeout_ms = 10000;
    std::string config;  // consumed by load_config; here so CLI11 accepts it

    double theta_radians() const { return degrees ? theta * kPi / 180.0 : theta; }
};

std::pair<std::string, int> split_hostport(const std::string& s) {
    const auto pos = s.rfind(':');
    if (pos == std::string::npos) {
        throw CLI::ValidationError("address", "expected host:port, got '" + s + "'");
    }
    const std::string host = s.substr(0, pos);
    int port = 0;
    try {
        port = std::stoi(s.substr(pos + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("address", "bad port in '" + s + "'");
    }
    if (port < 0 || port > 65535) throw CLI::ValidationError("address", "port out of range");
    return {host.empty() ? std::string("127.0.0.1") : host, port};
}

json summary_json(const SimulationSummary& s) {
    json j;
    j["rounds"] = s.rounds;
    j["seed"] = s.seed;
    j["theta"] = sig12(s.theta);
    j["counts"] = {{"pp", s.n_pp}, {"pm", s.n_pm}, {"mp", s.n_mp}, {"mm", s.n_mm}};
    j["correlation"] = sig12(s.correlation);
    return j;
}

int cmd_validate(const CommonArgs& args) {
    const auto family = make_family(args.family);
    const auto report = validate(family, args.grid_n);
    json j;
    j["family"] = family.spec();
    j["grid_n"] = args.grid_n;
    j["passed"] = report.passed;
    json viols = json::array();
    for (const auto& v : report.violations) {
        viols.push_back(
            {{"constraint", v.constraint}, {"witness", sig12(v.witness)}, {"magnitude", sig12(v.magnitude)}});
    }
    j["violations"] = viols;
    emit(j);
    return report.passed ? kExitOk : kExitFailure;
}

int cmd_sweep(const CommonArgs& args, bool with_rounds) {
    const auto family = make_family(args.family);
    if (args.points < 1) throw CLI::ValidationError("--points", "must be >= 1");

    std::vector<double> thetas(args.points);
    for (int i = 0; i < args.points; ++i) {
        thetas[i] = args.points == 1 ? -kPi : -kPi + kTwoPi * i / (args.points - 1);
    }

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (args.out != "-") {
        file.open(args.out);
        if (!file) throw std::runtime_error("cannot open output file '" + args.out + "'");
        out = &file;
    }

    if (with_rounds) {
        const auto points = reconstruct_correlation(family, thetas, args.rounds, args.seed, args.workers);
        write_sweep_csv(*out, points);
    } else {
        *out << "theta,closed_form\n";
        for (double t : thetas) {
            *out << format_sig(t, 12) << ',' << format_sig(evaluate(family, t), 12) << '\n';
        }
    }
    return kExitOk;
}

int cmd_simulate(const CommonArgs& args) {
    const auto ctx = ModelContext::make(make_family(args.family), args.theta_radians());
    const auto summary = simulate(ctx, args.rounds, args.seed, args.workers);
    emit(summary_json(summary));
    return kExitOk;
}

int cmd_bound(const CommonArgs& args) {
    const auto family = make_family(args.family);
    json j;
    j["bound"] = sig12(generalized_bound(family));
    emit(j);
    return kExitOk;
}

int cmd_chsh(const CommonArgs& args) {
    const auto family = make_family(args.family);
    const auto result = optimize_chsh(family, args.grid_n, args.refine_tol);
    json j;
    j["family"] = family.spec();
    j["bound"] = sig12(result.bound);
    j["max_value"] = sig12(std::fabs(result.value));
    j["argmax"] = {{"theta1", sig12(result.query.theta1)},
                   {"theta2", sig12(result.query.theta2)},
                   {"delta", sig12(result.query.delta)}};
    j["stationarity_residual"] = is_infinite(result.stationarity_residual)
                                     ? json("inf")
                                     : json(sig12(result.stationarity_residual));
    j["grid_n"] = args.grid_n;
    j["refine_tol"] = args.refine_tol;
    emit(j);
    return kExitOk;
}

int cmd_harness(const CommonArgs& args) {
    SessionConfig cfg;
    cfg.role = args.role;
    cfg.family_spec = args.family;
    cfg.theta = args.theta_radians();
    cfg.rounds = args.rounds;
    cfg.seed = args.seed;
    cfg.accept_timeout_ms = args.accept_timeout_ms;

    if (args.role == "referee") {
        std::tie(cfg.listen_host, cfg.listen_port) = split_hostport(args.listen);
        const bool announce = cfg.listen_port == 0;
        cfg.on_listening = [announce](const std::string& host, int port) {
            if (!announce) return;
            json j;
            j["listening"] = {{"host", host}, {"port", port}};
            emit(j);
            std::cout.flush();
        };
        const auto result = referee_run(cfg);
        if (result.aborted) {
            json j;
            j["error"] = result.error;
            j["aborted"] = true;
            j["completed_rounds"] = result.completed_rounds;
            j["partial_summary"] = summary_json(result.summary);
            emit(j);
            return kExitFailure;
        }
        emit(summary_json(result.summary));
        return kExitOk;
    }
    if (args.role == "detector-a" || args.role == "detector-b") {
        std::tie(cfg.connect_host, cfg.connect_port) = split_hostport(args.connect);
        const auto result = detector_run(cfg);
        json j;
        j["role"] = args.role;
        j["rounds_served"] = result.rounds_served;
        if (result.status != 0) j["error"] = result.error;
        emit(j);
        return result.status == 0 ? kExitOk : kExitFailure;
    }
    throw CLI::ValidationError("--role", "must be referee, detector-a or detector-b");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bell-game hidden-variable model simulator and CHSH bound verifier"};
    app.require_subcommand(1);

    CommonArgs args;
    json cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    const auto add_common = [&](CLI::App* sub, std::initializer_list<const char*> names) {
        sub->add_option("--config", args.config, "JSON config file (flags override it)");
        for (const char* n : names) {
            const std::string name = n;
            CLI::Option* opt = nullptr;
            if (name == "family") {
                opt = sub->add_option("--family", args.family, "correlation family: cosine | power:<p>");
            } else if (name == "theta") {
                opt = sub->add_option("--theta", args.theta, "relative detector angle (radians)");
                seed_default(sub->add_flag("--degrees", args.degrees, "interpret --theta in degrees"),
                             cfg, "degrees");
            } else if (name == "rounds") {
                opt = sub->add_option("--rounds", args.rounds, "number of game rounds");
            } else if (name == "seed") {
                opt = sub->add_option("--seed", args.seed, "64-bit RNG seed");
            } else if (name == "workers") {
                opt = sub->add_option("--workers", args.workers, "worker threads")
                          ->check(CLI::PositiveNumber);
            } else if (name == "grid-n") {
                opt = sub->add_option("--grid-n", args.grid_n, "lattice points per axis");
            } else if (name == "refine-tol") {
                opt = sub->add_option("--refine-tol", args.refine_tol, "refinement window tolerance");
            } else if (name == "points") {
                opt = sub->add_option("--points", args.points, "sweep grid size");
            } else if (name == "out") {
                opt = sub->add_option("--out", args.out, "output path ('-' = stdout)");
            } else if (name == "role") {
                opt = sub->add_option("--role", args.role, "referee | detector-a | detector-b");
            } else if (name == "listen") {
                opt = sub->add_option("--listen", args.listen, "referee listen address host:port");
            } else if (name == "connect") {
                opt = sub->add_option("--connect", args.connect, "referee address host:port");
            } else if (name == "accept-timeout-ms") {
                opt = sub->add_option("--accept-timeout-ms", args.accept_timeout_ms,
                                      "referee accept timeout");
            }
            if (opt) {
                std::string key = name;
                for (auto& ch : key) {
                    if (ch == '-') ch = '_';
                }
                seed_default(opt, cfg, key);
            }
        }
    };

    auto* validate_cmd = app.add_subcommand("validate", "check family membership in the admissible class");
    args.grid_n = 10001;
    add_common(validate_cmd, {"family", "grid-n"});

    auto* sweep_cmd = app.add_subcommand("sweep", "tabulate E(theta) over [-pi, pi] as CSV");
    add_common(sweep_cmd, {"family", "points", "out", "rounds", "seed", "workers"});
    bool sweep_empirical = false;
    sweep_cmd->add_flag("--empirical", sweep_empirical,
                        "add a Monte Carlo column (uses --rounds/--seed)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo rounds at one relative angle");
    add_common(simulate_cmd, {"family", "theta", "rounds", "seed", "workers"});

    auto* bound_cmd = app.add_subcommand("bound", "print the generalized bound 4|E(pi/4)|");
    add_common(bound_cmd, {"family"});

    auto* chsh_cmd = app.add_subcommand("chsh", "extremize the CHSH functional numerically");
    add_common(chsh_cmd, {"family", "grid-n", "refine-tol"});

    auto* harness_cmd = app.add_subcommand("harness", "distributed referee/detector session");
    add_common(harness_cmd, {"role", "listen", "connect", "family", "theta", "rounds", "seed",
                             "accept-timeout-ms"});

    // validate's grid default differs from chsh's; restore after wiring.
    if (!cfg.contains("grid_n")) {
        validate_cmd->get_option("--grid-n")->default_val("10001");
        chsh_cmd->get_option("--grid-n")->default_val("64");
    }
    args.grid_n = 64;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(validate_cmd)) return cmd_validate(args);
        if (app.got_subcommand(sweep_cmd)) {
            const bool with_rounds = sweep_empirical || sweep_cmd->count("--rounds") > 0 ||
                                     cfg.contains("rounds");
            return cmd_sweep(args, with_rounds);
        }
        if (app.got_subcommand(simulate_cmd)) return cmd_simulate(args);
        if (app.got_subcommand(bound_cmd)) return cmd_bound(args);
        if (app.got_subcommand(chsh_cmd)) return cmd_chsh(args);
        if (app.got_subcommand(harness_cmd)) return cmd_harness(args);
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        // family-spec and flag-domain failures are usage errors
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        json j;
        j["error"] = e.what();
        emit(j);
        return kExitFailure;
    }
    return kExitUsage;
}
