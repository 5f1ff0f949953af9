#include "qbc/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "qbc/experiments.hpp"
#include "qbc/report_io.hpp"
#include "qbc/steering.hpp"

namespace qbc {

namespace {

struct SubcommandState {
    CLI::App* app = nullptr;
    Experiment experiment;
    ExperimentConfig config;
    std::string format = "csv";
    std::string config_path;
};

// Defaults for fields the user left unset come from the JSON config file;
// explicit flags win.
void apply_config_file(SubcommandState& state, bool workers_given,
                       int& workers) {
    if (state.config_path.empty()) return;
    std::ifstream in(state.config_path);
    if (!in)
        throw CLI::ValidationError("--config",
                                   "cannot open " + state.config_path);
    nlohmann::json j;
    in >> j;

    auto unset = [&](const char* flag) {
        return state.app->count(flag) == 0;
    };
    if (j.contains("n") && unset("--n")) state.config.n = j["n"].get<int>();
    if (j.contains("trials") && unset("--trials"))
        state.config.trials = j["trials"].get<long>();
    if (j.contains("seed") && unset("--seed"))
        state.config.master_seed = j["seed"].get<std::uint64_t>();
    if (j.contains("rounds") && unset("--rounds"))
        state.config.rounds = j["rounds"].get<int>();
    if (j.contains("r_weight") && unset("--r-weight"))
        state.config.r_weight = j["r_weight"].get<int>();
    if (j.contains("workers") && !workers_given)
        workers = j["workers"].get<int>();
    if (j.contains("out") && unset("--out"))
        state.config.out_path = j["out"].get<std::string>();
    if (j.contains("format") && unset("--format"))
        state.format = j["format"].get<std::string>();
    if (j.contains("alice") && unset("--alice"))
        state.config.alice_id = j["alice"].get<std::string>();
    if (j.contains("bob") && unset("--bob"))
        state.config.bob_id = j["bob"].get<std::string>();
}

void check_strategy_ids(const SubcommandState& state) {
    const auto& alice = state.config.alice_id;
    const auto& bob = state.config.bob_id;
    auto fail = [](const std::string& msg) {
        throw CLI::ValidationError("strategy", msg);
    };
    switch (state.experiment) {
        case Experiment::Honest:
            if (!alice.empty() && alice != "honest_alice")
                fail("honest runs honest_alice");
            if (!bob.empty() && bob != "honest_bob")
                fail("honest runs honest_bob");
            break;
        case Experiment::Bind:
            if (!alice.empty() && alice != "flip_alice")
                fail("bind runs flip_alice");
            if (!bob.empty() && bob != "honest_bob")
                fail("bind runs honest_bob");
            break;
        case Experiment::Conceal:
            if (!alice.empty() && alice != "honest_alice")
                fail("conceal runs honest_alice");
            if (!bob.empty() && bob != "guess_bob")
                fail("conceal runs guess_bob");
            break;
        case Experiment::Mlc:
            if (!alice.empty() && alice != "mlc_alice")
                fail("mlc runs mlc_alice");
            if (!bob.empty() && bob != "epr_bob") fail("mlc runs epr_bob");
            break;
        case Experiment::NoSignaling:
            if (!alice.empty() || !bob.empty())
                fail("nosig takes no strategy overrides");
            break;
    }
}

void add_subcommand(CLI::App& app, SubcommandState& state,
                    const std::string& name, const std::string& help) {
    state.experiment = experiment_from_name(name);
    state.config.experiment = state.experiment;
    if (name == "conceal") state.config.n = 6;
    if (name == "mlc") state.config.n = 3;
    if (name == "nosig") {
        state.config.n = 6;
        state.config.trials = 1000;
    }

    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();  // lets the global --workers follow the subcommand
    sub->add_option("--n", state.config.n, "problem size");
    sub->add_option("--trials", state.config.trials, "Monte Carlo trials");
    sub->add_option("--seed", state.config.master_seed, "master seed");
    sub->add_option("--out", state.config.out_path,
                    "report path (stdout when omitted)");
    sub->add_option("--format", state.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--alice", state.config.alice_id, "committer strategy id");
    sub->add_option("--bob", state.config.bob_id, "acceptor strategy id");
    sub->add_option("--config", state.config_path,
                    "JSON config file (flags override it)");
    if (name == "bind")
        sub->add_option("--rounds", state.config.rounds,
                        "rounds per trial (s)");
    if (name == "conceal")
        sub->add_option("--r-weight", state.config.r_weight,
                        "Hamming weight of the public string");
    state.app = sub;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{
        "Simulator for a reverse-communication quantum bit-commitment "
        "protocol: honest runs, binding and concealment attacks, the "
        "entangled-acceptor steering attack, and a no-signaling check."};
    app.require_subcommand(1);
    int workers = 1;
    app.add_option("--workers", workers, "worker threads")->capture_default_str();

    SubcommandState honest, bind, conceal, mlc, nosig;
    add_subcommand(app, honest, "honest", "honest committer vs honest acceptor");
    add_subcommand(app, bind, "bind", "flip-cheating committer (binding)");
    add_subcommand(app, conceal, "conceal",
                   "guessing acceptor before unveiling (concealment)");
    add_subcommand(app, mlc, "mlc",
                   "entangled acceptor, deferred commitment via steering");
    add_subcommand(app, nosig, "nosig",
                   "local-measurement invariance of the remote state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    SubcommandState* chosen = nullptr;
    for (SubcommandState* state : {&honest, &bind, &conceal, &mlc, &nosig})
        if (state->app->parsed()) chosen = state;
    if (chosen == nullptr) return 2;

    try {
        apply_config_file(*chosen, app.count("--workers") > 0, workers);
        check_strategy_ids(*chosen);
        chosen->config.workers = workers;
        if (chosen->format != "csv" && chosen->format != "json")
            throw CLI::ValidationError("--format", "must be csv or json");
        chosen->config.format = chosen->format == "json" ? ReportFormat::Json
                                                         : ReportFormat::Csv;
        chosen->config.validate();
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "bad config: %s\n", e.what());
        return 2;
    }

    try {
        const ExperimentReport report = run_experiment(chosen->config);
        write_report(report, chosen->config.out_path, chosen->config.format);
        if (!chosen->config.out_path.empty())
            std::fprintf(stderr, "%s: estimate %.6g (stderr %.3g) -> %s\n",
                         experiment_name(chosen->config.experiment).c_str(),
                         report.estimate, report.standard_error,
                         chosen->config.out_path.c_str());
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "bad config: %s\n", e.what());
        return 2;
    } catch (const SteeringInfeasibleError& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "invariant violation: %s\n", e.what());
        return 1;
    }
}

}  // namespace qbc
