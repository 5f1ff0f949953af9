#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>

#include "qbc/protocol.hpp"
#include "qbc/steering.hpp"

namespace qbc {

// --- Honest parties ---------------------------------------------------------

// Measures in random bases, encodes the committed bit through the parity
// exclusion, unveils truthfully. Commits to `fixed_bit` when given, else
// to a fresh coin per round.
class HonestCommitter : public Committer {
  public:
    explicit HonestCommitter(std::optional<int> fixed_bit = std::nullopt)
        : fixed_bit_(fixed_bit) {}

    CommitOutcome commit(const ProtocolParams& params, StateVector joint,
                         int first_qubit, Rng& rng) override;
    UnveilOutcome unveil(const ProtocolParams& params, Rng& rng) override;

    const AliceRecord& record() const { return record_; }

  private:
    std::optional<int> fixed_bit_;
    AliceRecord record_;
};

class HonestAcceptor : public Acceptor {
  public:
    PreparedMessage prepare(const ProtocolParams& params, Rng& rng) override;
    Verdict verify(const ProtocolParams& params,
                   const EvidenceAnnouncement& evidence,
                   const UnveilAnnouncement& unveil) override;

    const BobSecret& secret() const { return secret_; }

  private:
    BobSecret secret_;
};

// --- Binding attack: flip cheat ---------------------------------------------

// Dishonest unveiling of target_b != record.committed_bit: announce the
// honest bases and outcomes with one eligible position (not excluded,
// outcome 1, r set) flipped to 0, which flips the excluded parity. No
// eligible position means the cheat failed.
Committer::UnveilOutcome flip_cheat_unveil(const AliceRecord& record,
                                           const Bits& r, int target_b,
                                           Rng& rng);

// Commits honestly to the parity it measured (so the commit phase never
// needs the parity-flipping branch and a flippable 1 survives whenever one
// exists), then unveils the opposite bit via flip_cheat_unveil.
class FlipCommitter : public Committer {
  public:
    CommitOutcome commit(const ProtocolParams& params, StateVector joint,
                         int first_qubit, Rng& rng) override;
    UnveilOutcome unveil(const ProtocolParams& params, Rng& rng) override;

    const AliceRecord& record() const { return record_; }

  private:
    AliceRecord record_;
};

// --- Concealment attack: guessing acceptor ----------------------------------

struct BobView {
    BobSecret secret;
    Bits r;
    int x = 0;
};

enum class GuessMode { ParityProxy, ExactPosterior };

// The acceptor's best guess of the committed bit from his pre-unveiling
// view. ParityProxy returns the excluded parity of his own preparation
// string. ExactPosterior returns the maximum-a-posteriori bit, computed by
// exhaustive enumeration over the committer's bases and mismatched-basis
// outcomes (all-accepting code, n <= 10; larger n throws
// std::invalid_argument).
int guess_commitment(const BobView& view, GuessMode mode);

// Posterior weights (unnormalized across b) used by ExactPosterior;
// exposed for the enumeration oracle tests.
std::array<double, 2> posterior_weights(const BobView& view);

// --- Entangled acceptor and the steering attack -----------------------------

// n EPR pairs; the acceptor's halves are the leading n qubits, the
// committer's halves (playing the channel photons) the trailing n.
StateVector epr_pairs_state(int n);

// Joint state of the 2(n-1) qubits that remain after one pair is excluded:
// sum_j |j>|j> / 2^{(n-1)/2}, committer block leading, acceptor block
// trailing. It is the same state for every excluded position.
StateVector epr_remaining_state(int n);

// Sends EPR halves instead of a separable preparation; has no classical
// secret, so run_round verification is not available for it.
class EPRAcceptor : public Acceptor {
  public:
    PreparedMessage prepare(const ProtocolParams& params, Rng& rng) override;
    Verdict verify(const ProtocolParams& params,
                   const EvidenceAnnouncement& evidence,
                   const UnveilAnnouncement& unveil) override;
};

// Everything the deferring committer needs to open either bit from the one
// held state: the purifying state with ancilla attached, both target
// ensembles, and the steering basis realizing each of them.
struct MLCPlan {
    int n = 3;
    StateVector pair_state = StateVector(2);  // the entangling EPR pair
    int ancilla_qubits = 1;                   // dim 2^{n-2}
    int local_qubits = 3;     // ancilla + committer block, dim N
    std::size_t ensemble_dimension = 8;  // N = 2^{n-1} * 2^{n-2}
    std::array<Ensemble, 2> targets;
    StateVector held = StateVector(1);  // ancilla (x) remaining pairs
    std::array<SteeringBasis, 2> bases;
};

// Uniform ensemble of all length-`qubits` product strings prepared in one
// basis; the default steering targets for bits 0 (+) and 1 (x).
Ensemble product_basis_ensemble(int qubits, Basis basis);

// Validates that both target mixtures equal the acceptor-side reduced
// state of the held pairs (within 1e-9, else SteeringInfeasibleError),
// attaches the ancilla and precomputes both steering bases.
MLCPlan mlc_build_plan(int n, Ensemble target_for_0, Ensemble target_for_1);

struct MLCOpening {
    int outcome;                  // ensemble member index j
    StateVector acceptor_state;   // the acceptor's register after collapse
    double fidelity_to_target;
    double probability;
};

// Opens the held state as commitment `chosen_b`: measures the local
// (ancilla + committer) factor in the matching steering basis and returns
// the acceptor-side collapse.
MLCOpening mlc_open(const MLCPlan& plan, const StateVector& held,
                    int chosen_b, Rng& rng);

// --- Strategy registry -------------------------------------------------------

// Known identifiers: honest_alice, flip_alice, honest_bob (run_round
// capable) and mlc_alice, epr_bob, guess_bob (drivable only by their
// dedicated experiments). Unknown ids throw std::invalid_argument;
// run_round-incapable ids throw when instantiated through these factories.
std::unique_ptr<Committer> make_committer(const std::string& id);
std::unique_ptr<Acceptor> make_acceptor(const std::string& id);

}  // namespace qbc
