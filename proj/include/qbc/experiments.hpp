#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace qbc {

enum class Experiment { Honest, Bind, Conceal, Mlc, NoSignaling };
enum class ReportFormat { Csv, Json };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct ExperimentConfig {
    Experiment experiment = Experiment::Honest;
    int n = 8;
    long trials = 10000;
    int rounds = 1;    // s, bind only
    int r_weight = 1;  // k, conceal only
    std::uint64_t master_seed = 1;
    int workers = 1;
    std::string out_path;  // empty = stdout
    ReportFormat format = ReportFormat::Csv;
    std::string alice_id;  // optional strategy overrides
    std::string bob_id;

    // Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

struct ExperimentReport {
    ExperimentConfig config;
    double estimate = 0.0;
    double standard_error = 0.0;
    std::optional<double> exact_value;
    long abort_count = 0;
    double wall_time = 0.0;        // seconds, measured
    bool oracle_agrees = true;     // |estimate - exact| <= 3 stderr
};

struct TrialOutcome {
    double value = 0.0;
    long aborts = 0;
    int opened[2] = {-1, -1};  // mlc only: outcome per opened bit
};

// One trial of the configured experiment under its derived seed; exposed
// so a flagged trial can be replayed in isolation.
TrialOutcome run_single_trial(const ExperimentConfig& config,
                              long trial_index);

// Runs all trials (across `workers` threads, trial order independent),
// merges outcomes by trial index, attaches the exact enumeration value
// where one exists and flags (on stderr, and in the report) when the
// estimate strays beyond three standard errors from it. Statistical
// invariant violations inside an experiment (e.g. steering outcome
// frequencies off their analytic values) throw std::runtime_error with
// the offending trial seed when one is known.
ExperimentReport run_experiment(const ExperimentConfig& config);

// --- Exact enumeration oracles (no sampling) --------------------------------

// Bind: probability that a flipped unveiling is accepted, conditioned on a
// flip having been possible; exactly 1/2. Conceal: accuracy of the
// maximum-a-posteriori guess from the acceptor's pre-unveiling view, for a
// weight-k public string. Both enumerate every basis string and every
// mismatched-basis outcome with exact Born weights; n <= 6.
double enumerate_oracle(Experiment experiment, int n, int k = 0);

// Closed form (1 + 2^-k) / 2 for the per-bit-agreement parity guess.
double conceal_closed_form(int k);

// Exact probability that the committer's and acceptor's pre-exclusion
// parities agree for a weight-k public string; equals the closed form.
double enumerate_parity_agreement(int n, int k);

// Exact probability, over all bases and outcomes at n = 4, that flipping
// an announced outcome at a position measured in a mismatched basis is
// accepted (should be 1: such a flip is undetectable).
double enumerate_mismatched_flip_accept(int n);

}  // namespace qbc
