#include "qgame/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qgame/reproduce.hpp"
#include "qgame/serialization.hpp"

namespace qgame {

namespace {

struct CommandName {
    Command command;
    const char* name;
    const char* help;
};

constexpr CommandName kCommands[] = {
    {Command::verify, "verify", "Check a catalog strategy against the game"},
    {Command::simulate, "simulate", "Monte Carlo rounds of a catalog strategy"},
    {Command::invariants, "invariants", "List Bargmann invariants of the strategy's message states"},
    {Command::embed, "embed", "Factor the overlap table into states and test the Bloch geometry"},
    {Command::bloch_export, "bloch-export", "Bloch coordinates of the qubit message states"},
    {Command::optimize, "optimize", "Multi-restart local search over a strategy class"},
    {Command::infeasibility, "infeasibility", "Exact classical-bit feasibility analysis"},
    {Command::reproduce, "reproduce", "Run every headline check and report pass/fail"},
};

const std::vector<std::string> kSearchClasses{"qubit", "rebit", "rebit-pure", "classical-bit"};

std::string resolve_strategy(const std::string& raw, SignBranch branch, RebitVariant variant) {
    std::string id = raw;
    if (id == "qubit" || id == "dilated") id += sign_of(branch) > 0 ? "+" : "-";
    if (id == "rebit") id = "rebit-" + std::string(to_string(variant));
    if (!is_catalog_id(id)) {
        std::string known;
        for (const auto& c : catalog_ids()) known += " " + c;
        throw UsageError("unknown strategy id '" + raw + "'; known:" + known);
    }
    return id;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json config_to_json(const RunConfig& c) {
    return Json{{"command", std::string(to_string(c.command))},
                {"strategy", c.strategy_id},
                {"spec", c.spec_path ? Json(c.spec_path->string()) : Json(nullptr)},
                {"seed", c.seed},
                {"rounds", c.rounds},
                {"order", c.order},
                {"restarts", c.restarts},
                {"branch", std::string(to_string(c.branch))},
                {"variant", std::string(to_string(c.variant))},
                {"format", c.output_format == OutputFormat::json ? "json" : "csv"},
                {"out", c.output_path ? Json(c.output_path->string()) : Json(nullptr)},
                {"class", c.search_class},
                {"verbose", c.verbose}};
}

GameSpec resolve_spec(const RunConfig& c) {
    return c.spec_path ? load_game_spec(*c.spec_path) : GameSpec::default_instance();
}

Parameterization search_parameterization(const std::string& name) {
    if (name == "qubit") return qubit_parameterization();
    if (name == "rebit") return rebit_parameterization(true);
    if (name == "rebit-pure") return rebit_parameterization(false);
    return classical_bit_parameterization();
}

Json states_to_json(std::span<const PureState> states) {
    Json out = Json::array();
    for (const auto& s : states) out.push_back(to_json(s));
    return out;
}

Json bloch_to_json(std::span<const PureState> states) {
    Json out = Json::array();
    for (std::size_t i = 0; i < states.size(); ++i) {
        const BlochVector b = bloch_vector(states[i]);
        out.push_back(Json{{"label", i}, {"x", b.x}, {"y", b.y}, {"z", b.z}});
    }
    return out;
}

std::string channel_csv(const RealizedChannel& channel, const std::vector<std::vector<std::uint64_t>>& counts) {
    std::ostringstream os;
    os << "input,output,count,frequency\n";
    char buf[64];
    for (Eigen::Index x = 0; x < channel.table.rows(); ++x)
        for (Eigen::Index y = 0; y < channel.table.cols(); ++y) {
            std::snprintf(buf, sizeof buf, "%.17g", channel.table(x, y));
            os << x << ',' << y << ',' << counts[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] << ','
               << buf << '\n';
        }
    return os.str();
}

struct Outcome {
    Json result;
    std::optional<std::string> csv;
    int exit_code = 0;
};

Outcome run_verify(const RunConfig& c) {
    const GameSpec spec = resolve_spec(c);
    const Strategy s = catalog_strategy(c.strategy_id);
    Json result = to_json(verify_strategy(spec, s));
    result["forbidden_rate"] = vector_to_json(forbidden_event_rate(spec, s));
    result["witness"] = to_json(imaginarity_witness(s.encoder, c.order));
    return {result, std::nullopt, 0};
}

Outcome run_simulate(const RunConfig& c) {
    const Strategy s = catalog_strategy(c.strategy_id);
    const SimulationResult sim = simulate_rounds(s, c.rounds, c.seed);
    Outcome o{to_json(sim), std::nullopt, 0};
    o.result["exact"] = matrix_to_json(realized_distribution(s).table);
    if (c.output_format == OutputFormat::csv) o.csv = channel_csv(sim.empirical, sim.counts);
    return o;
}

Outcome run_invariants(const RunConfig& c) {
    const Strategy s = catalog_strategy(c.strategy_id);
    Json list = Json::array();
    for (const auto& inv : enumerate_invariants(s.encoder, c.order, false)) list.push_back(to_json(inv));
    return {Json{{"order", c.order}, {"count", list.size()}, {"invariants", list}}, std::nullopt, 0};
}

Outcome run_embed(const RunConfig& c) {
    const GramMatrix table = overlap_table(c.branch);
    const auto factored = states_from_gram(table);
    const double err = (gram_matrix(factored).entries - table.entries).cwiseAbs().maxCoeff();
    const auto qubit = qubit_states(c.branch);
    Json result{{"overlap_table", matrix_to_json(table.entries)},
                {"rank", factored.empty() ? 0 : factored.front().dim()},
                {"factored_states", states_to_json(factored)},
                {"reconstruction_error", err},
                {"qubit_states", states_to_json(qubit)},
                {"bloch", bloch_to_json(qubit)},
                {"great_circle", to_json(great_circle_test(qubit))}};
    return {result, std::nullopt, 0};
}

Outcome run_bloch_export(const RunConfig& c) {
    const auto states = qubit_states(c.branch);
    Outcome o{Json{{"vectors", bloch_to_json(states)}}, std::nullopt, 0};
    if (c.output_format == OutputFormat::csv) {
        std::ostringstream os;
        write_bloch_csv(os, states);
        o.csv = os.str();
    }
    return o;
}

Outcome run_optimize(const RunConfig& c) {
    const GameSpec spec = resolve_spec(c);
    const Parameterization p = search_parameterization(c.search_class);
    OptimizerConfig oc;
    oc.restarts = c.restarts;
    oc.seed = c.seed;
    oc.record_traces = c.verbose;
    const OptimizationResult r = minimize(p, spec, oc);
    Json result{{"class", c.search_class},
                {"parameterization", p.name},
                {"optimizer", to_json(oc)},
                {"search", to_json(r, c.verbose)}};
    const VerifyReport best = verify_strategy(spec, p.decode(r.best_params));
    result["best_strategy"] = Json{{"d", best.d}, {"cost", best.cost}, {"min_purity", best.min_purity}};
    if (c.search_class == "rebit" || c.search_class == "rebit-pure") result["reference_d"] = 1.0 / 12;
    return {result, std::nullopt, 0};
}

Outcome run_infeasibility(const RunConfig& c) {
    const GameSpec spec = resolve_spec(c);
    Json result = to_json(classical_bit_exact_infeasibility(spec));
    OptimizerConfig oc;
    oc.restarts = c.restarts;
    oc.seed = c.seed;
    const OptimizationResult r = minimize(classical_bit_parameterization(), spec, oc);
    result["randomized_search"] = Json{{"restarts", c.restarts}, {"best_d", r.best_d}};
    return {result, std::nullopt, 0};
}

Outcome run_reproduce(const RunConfig& c, std::ostream& err) {
    const ReproductionReport report = reproduce_all(c.seed);
    for (const auto& item : report.criteria)
        err << (item.passed ? "[PASS] " : "[FAIL] ") << item.id << ' ' << item.name << '\n';
    return {to_json(report), std::nullopt, report.all_passed() ? 0 : 1};
}

}  // namespace

std::string_view to_string(Command command) {
    for (const auto& c : kCommands)
        if (c.command == command) return c.name;
    return "unknown";
}

std::optional<RunConfig> parse_run_config(const std::vector<std::string>& args, std::ostream& help_out) {
    CLI::App app{"Strategies, invariants and searches for the four-input communication game", kToolName};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);

    std::string strategy, branch = "plus", variant = "original", format = "json", spec, out, search_class = "qubit";
    RunConfig c;
    app.add_option("--strategy", strategy, "Catalog id; 'qubit'/'dilated' use --branch, 'rebit' uses --variant");
    app.add_option("--spec", spec, "GameSpec JSON file (default: built-in instance)");
    app.add_option("--seed", c.seed, "Random seed");
    app.add_option("--rounds", c.rounds, "Rounds per input for simulate");
    app.add_option("--order", c.order, "Invariant order");
    app.add_option("--restarts", c.restarts, "Optimizer restarts");
    app.add_option("--branch", branch, "plus or minus");
    app.add_option("--variant", variant, "original or symmetrized");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out, "Write the report here instead of stdout");
    app.add_flag("--no-timestamp", "Omit the timestamp field");
    app.add_option("--class", search_class, "Search class for optimize")->check(CLI::IsMember(kSearchClasses));
    app.add_flag("--verbose", c.verbose, "Include per-restart parameters and traces");

    std::vector<CLI::App*> subs;
    for (const auto& cmd : kCommands) subs.push_back(app.add_subcommand(cmd.name, cmd.help));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        help_out << app.help();
        return std::nullopt;
    } catch (const CLI::CallForAllHelp&) {
        help_out << app.help("", CLI::AppFormatMode::All);
        return std::nullopt;
    } catch (const CLI::CallForVersion&) {
        help_out << kToolVersion << '\n';
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) c.command = kCommands[i].command;

    try {
        c.branch = branch_from_string(branch);
        c.variant = variant_from_string(variant);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    c.timestamp = app.count("--no-timestamp") == 0;
    c.output_format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    if (!spec.empty()) c.spec_path = spec;
    if (!out.empty()) c.output_path = out;
    c.search_class = search_class;

    if (c.command == Command::bloch_export && !strategy.empty()) {
        if (strategy != "qubit+" && strategy != "qubit-" && strategy != "qubit")
            throw UsageError("bloch-export supports qubit strategies only");
        if (strategy != "qubit") c.branch = strategy == "qubit+" ? SignBranch::plus : SignBranch::minus;
    }
    c.strategy_id = resolve_strategy(strategy.empty() ? "qubit" : strategy, c.branch, c.variant);

    if (c.rounds == 0) throw UsageError("--rounds must be positive");
    if (c.restarts == 0) throw UsageError("--restarts must be positive");
    if (c.order == 0) throw UsageError("--order must be positive");
    if (c.output_format == OutputFormat::csv && c.command != Command::simulate && c.command != Command::bloch_export)
        throw UsageError("--format csv is only available for simulate and bloch-export");
    return c;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    if (config.output_path) {
        file.open(*config.output_path, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot write to " << config.output_path->string() << '\n';
            return 1;
        }
    }
    std::ostream& sink = config.output_path ? static_cast<std::ostream&>(file) : out;

    Outcome outcome;
    try {
        switch (config.command) {
            case Command::verify: outcome = run_verify(config); break;
            case Command::simulate: outcome = run_simulate(config); break;
            case Command::invariants: outcome = run_invariants(config); break;
            case Command::embed: outcome = run_embed(config); break;
            case Command::bloch_export: outcome = run_bloch_export(config); break;
            case Command::optimize: outcome = run_optimize(config); break;
            case Command::infeasibility: outcome = run_infeasibility(config); break;
            case Command::reproduce: outcome = run_reproduce(config, err); break;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    if (outcome.csv) {
        sink << *outcome.csv;
    } else {
        Json report{{"tool", kToolName}, {"version", kToolVersion}, {"config", config_to_json(config)}};
        if (config.timestamp) report["timestamp"] = utc_timestamp();
        report["result"] = std::move(outcome.result);
        sink << report.dump(2) << '\n';
    }
    sink.flush();
    if (!sink) {
        err << "error: failed writing output\n";
        return 1;
    }
    return outcome.exit_code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::optional<RunConfig> config;
    try {
        config = parse_run_config(args, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }
    if (!config) return 0;
    return dispatch(*config, out, err);
}

}  // namespace qgame
