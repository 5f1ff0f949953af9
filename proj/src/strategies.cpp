#include "qbc/strategies.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qbc {

// --- Honest parties ---------------------------------------------------------

Committer::CommitOutcome HonestCommitter::commit(const ProtocolParams& params,
                                                 StateVector joint,
                                                 int first_qubit, Rng& rng) {
    record_ = AliceRecord{};
    record_.committed_bit = fixed_bit_ ? *fixed_bit_ : rng.coin();
    record_.bases = random_bases(params.n, rng);
    record_.outcomes = measure_in_bases(joint, first_qubit, record_.bases, rng);

    auto choice = alice_choose_exclusion(record_.outcomes, params.r,
                                         record_.committed_bit, params.code,
                                         rng);
    if (!choice.x) return {std::nullopt, choice.abort_reason};
    record_.excluded = *choice.x;
    return {EvidenceAnnouncement{record_.excluded}, ""};
}

Committer::UnveilOutcome HonestCommitter::unveil(const ProtocolParams&,
                                                 Rng&) {
    return {UnveilAnnouncement{record_.committed_bit, record_.outcomes,
                               record_.bases},
            ""};
}

PreparedMessage HonestAcceptor::prepare(const ProtocolParams& params,
                                        Rng& rng) {
    auto [secret, state] = bob_prepare(params, rng);
    secret_ = secret;
    return PreparedMessage{std::move(state), 0, std::move(secret),
                           "separable preparation"};
}

Verdict HonestAcceptor::verify(const ProtocolParams& params,
                               const EvidenceAnnouncement& evidence,
                               const UnveilAnnouncement& unveil) {
    return bob_verify(secret_, evidence, unveil, params.r, params.code);
}

// --- Flip cheat ---------------------------------------------------------------

Committer::UnveilOutcome flip_cheat_unveil(const AliceRecord& record,
                                           const Bits& r, int target_b,
                                           Rng& rng) {
    if (target_b == record.committed_bit)
        throw std::invalid_argument(
            "flip_cheat_unveil: target equals the committed bit");
    std::vector<int> flippable;
    for (std::size_t i = 0; i < record.outcomes.size(); ++i)
        if (static_cast<int>(i) != record.excluded && record.outcomes[i] == 1 &&
            r[i] == 1)
            flippable.push_back(static_cast<int>(i));
    if (flippable.empty()) return {std::nullopt, "no flippable position"};

    Bits claimed = record.outcomes;
    claimed[flippable[rng.uniform_int(
        static_cast<std::uint32_t>(flippable.size()))]] = 0;
    return {UnveilAnnouncement{target_b, std::move(claimed), record.bases},
            ""};
}

Committer::CommitOutcome FlipCommitter::commit(const ProtocolParams& params,
                                               StateVector joint,
                                               int first_qubit, Rng& rng) {
    record_ = AliceRecord{};
    record_.bases = random_bases(params.n, rng);
    record_.outcomes = measure_in_bases(joint, first_qubit, record_.bases, rng);
    // Commit to the parity that was actually measured; the later flip is
    // what switches the bit.
    record_.committed_bit = parity(params.r, record_.outcomes);

    auto choice = alice_choose_exclusion(record_.outcomes, params.r,
                                         record_.committed_bit, params.code,
                                         rng);
    if (!choice.x) return {std::nullopt, choice.abort_reason};
    record_.excluded = *choice.x;
    return {EvidenceAnnouncement{record_.excluded}, ""};
}

Committer::UnveilOutcome FlipCommitter::unveil(const ProtocolParams& params,
                                               Rng& rng) {
    return flip_cheat_unveil(record_, params.r, 1 - record_.committed_bit,
                             rng);
}

// --- Guessing acceptor --------------------------------------------------------

namespace {

// Enumerates the committer's process conditioned on the acceptor's
// preparation string: every matched/mismatched basis pattern and every
// outcome assignment at mismatched positions, with exact Born weights.
// `fn(outcomes, weight)` accumulates.
template <typename Fn>
void for_each_outcome(const Bits& preparation, Fn&& fn) {
    const int n = static_cast<int>(preparation.size());
    const double pattern_weight = std::pow(0.5, n);
    Bits outcomes(n);
    for (std::uint32_t pattern = 0; pattern < (1u << n); ++pattern) {
        int mismatched = 0;
        for (int i = 0; i < n; ++i)
            if (pattern & (1u << i)) ++mismatched;
        const double weight = pattern_weight * std::pow(0.5, mismatched);
        for (std::uint32_t free_bits = 0; free_bits < (1u << mismatched);
             ++free_bits) {
            int slot = 0;
            for (int i = 0; i < n; ++i) {
                if (pattern & (1u << i))
                    outcomes[i] = (free_bits >> slot++) & 1;
                else
                    outcomes[i] = preparation[i];
            }
            fn(outcomes, weight);
        }
    }
}

// P(x announced | b, preparation) accumulated over the process, plus the
// total non-aborting mass, for one preparation string.
struct ExclusionLaw {
    std::vector<double> x_mass;  // size n
    double feasible_mass = 0.0;
};

ExclusionLaw exclusion_law(const Bits& preparation, const Bits& r, int b) {
    ExclusionLaw law;
    law.x_mass.assign(preparation.size(), 0.0);
    const Code all = Code::all_strings();
    for_each_outcome(preparation, [&](const Bits& outcomes, double weight) {
        const auto candidates = exclusion_candidates(outcomes, r, b, all);
        if (candidates.empty()) return;
        law.feasible_mass += weight;
        const double share = weight / static_cast<double>(candidates.size());
        for (int x : candidates) law.x_mass[x] += share;
    });
    return law;
}

// Average over preparation strings of the non-aborting mass; a discarded
// round is re-run with a fresh preparation, so the posterior normalizes by
// this marginal. Memoized: it depends only on (n, sorted r).
double average_feasible_mass(const Bits& r, int b) {
    static std::mutex mutex;
    static std::map<std::pair<Bits, int>, double> memo;
    Bits key = r;
    std::sort(key.begin(), key.end());
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = memo.find({key, b});
        if (it != memo.end()) return it->second;
    }

    const int n = static_cast<int>(r.size());
    double total = 0.0;
    const double prep_weight = std::pow(0.5, n);
    for (std::uint32_t prep = 0; prep < (1u << n); ++prep) {
        Bits preparation = index_to_bits(prep, n);
        total += prep_weight * exclusion_law(preparation, key, b).feasible_mass;
    }

    std::lock_guard<std::mutex> lock(mutex);
    memo.emplace(std::make_pair(std::move(key), b), total);
    return total;
}

}  // namespace

std::array<double, 2> posterior_weights(const BobView& view) {
    const int n = static_cast<int>(view.secret.bits.size());
    if (n > 10)
        throw std::invalid_argument(
            "posterior_weights: exact enumeration capped at n = 10");
    std::array<double, 2> weights{};
    for (int b = 0; b < 2; ++b) {
        const ExclusionLaw law = exclusion_law(view.secret.bits, view.r, b);
        const double normalizer = average_feasible_mass(view.r, b);
        weights[b] = normalizer > 0.0 ? law.x_mass[view.x] / normalizer : 0.0;
    }
    return weights;
}

int guess_commitment(const BobView& view, GuessMode mode) {
    if (view.x < 0 || view.x >= static_cast<int>(view.secret.bits.size()))
        throw std::invalid_argument("guess_commitment: bad exclusion index");
    if (mode == GuessMode::ParityProxy)
        return parity(exclude(view.r, view.x),
                      exclude(view.secret.bits, view.x));
    const auto weights = posterior_weights(view);
    return weights[1] > weights[0] ? 1 : 0;
}

// --- Entangled acceptor and the steering attack -------------------------------

StateVector epr_pairs_state(int n) {
    if (n < 1 || 2 * n > StateVector::kMaxQubits)
        throw std::invalid_argument("epr_pairs_state: size limit exceeded");
    const std::size_t half = std::size_t{1} << n;
    std::vector<Cplx> amps(half * half, Cplx(0.0, 0.0));
    const double amp = std::pow(0.5, 0.5 * n);
    for (std::size_t j = 0; j < half; ++j) amps[(j << n) | j] = amp;
    return StateVector(2 * n, std::move(amps));
}

StateVector epr_remaining_state(int n) {
    if (n < 2 || 2 * (n - 1) > StateVector::kMaxQubits)
        throw std::invalid_argument("epr_remaining_state: size limit exceeded");
    return epr_pairs_state(n - 1);
}

PreparedMessage EPRAcceptor::prepare(const ProtocolParams& params, Rng&) {
    return PreparedMessage{epr_pairs_state(params.n), params.n, std::nullopt,
                           "EPR halves"};
}

Verdict EPRAcceptor::verify(const ProtocolParams&,
                            const EvidenceAnnouncement&,
                            const UnveilAnnouncement&) {
    return {VerdictKind::Abort,
            "entangled acceptor has no preparation string to verify against"};
}

Ensemble product_basis_ensemble(int qubits, Basis basis) {
    Ensemble ensemble;
    const std::size_t count = std::size_t{1} << qubits;
    const double p = 1.0 / static_cast<double>(count);
    for (std::size_t word = 0; word < count; ++word) {
        const Bits bits = index_to_bits(word, qubits);
        StateVector state = prepare_bb84(bits[0], basis);
        for (int i = 1; i < qubits; ++i)
            state = tensor(state, prepare_bb84(bits[i], basis));
        ensemble.members.push_back({p, std::move(state)});
    }
    return ensemble;
}

MLCPlan mlc_build_plan(int n, Ensemble target_for_0, Ensemble target_for_1) {
    if (n < 2) throw std::invalid_argument("mlc_build_plan: n must be >= 2");
    const int block = n - 1;    // committer/acceptor block qubits
    const int ancilla = n - 2;  // pads the local factor up to dimension N
    if (ancilla + 2 * block > StateVector::kMaxQubits)
        throw std::invalid_argument("mlc_build_plan: size limit exceeded");

    MLCPlan plan;
    plan.n = n;
    plan.pair_state = epr_pairs_state(1);
    plan.ancilla_qubits = ancilla;
    plan.local_qubits = ancilla + block;
    plan.ensemble_dimension = std::size_t{1} << (2 * n - 3);
    plan.targets = {std::move(target_for_0), std::move(target_for_1)};

    const StateVector pairs = epr_remaining_state(n);
    const DensityMatrix acceptor_side =
        reduced_remote(pairs, 1 << block);
    for (const auto& target : plan.targets) {
        target.validate();
        const double gap = trace_distance(target.mixture(), acceptor_side);
        if (gap > 1e-9)
            throw SteeringInfeasibleError(
                "mlc_build_plan: target mixture differs from the held "
                "reduced state by trace distance " +
                std::to_string(gap));
    }

    plan.held = ancilla > 0 ? tensor(StateVector(ancilla), pairs) : pairs;
    plan.bases = {steering_basis(plan.held, plan.local_qubits, plan.targets[0]),
                  steering_basis(plan.held, plan.local_qubits, plan.targets[1])};
    return plan;
}

MLCOpening mlc_open(const MLCPlan& plan, const StateVector& held,
                    int chosen_b, Rng& rng) {
    if (chosen_b != 0 && chosen_b != 1)
        throw std::invalid_argument("mlc_open: bit must be 0 or 1");
    const auto collapse = measure_in_basis(held, plan.local_qubits,
                                           plan.bases[chosen_b],
                                           rng.uniform());
    const auto& target = plan.targets[chosen_b];
    double fid = 0.0;
    if (collapse.outcome < static_cast<int>(target.members.size()))
        fid = fidelity(target.members[collapse.outcome].state,
                       collapse.remote_state);
    return MLCOpening{collapse.outcome, collapse.remote_state, fid,
                      collapse.probability};
}

// --- Strategy registry ---------------------------------------------------------

std::unique_ptr<Committer> make_committer(const std::string& id) {
    if (id == "honest_alice") return std::make_unique<HonestCommitter>();
    if (id == "flip_alice") return std::make_unique<FlipCommitter>();
    if (id == "mlc_alice")
        throw std::invalid_argument(
            "mlc_alice defers its measurement and is driven by the mlc "
            "experiment, not by run_round");
    throw std::invalid_argument("unknown committer id: " + id);
}

std::unique_ptr<Acceptor> make_acceptor(const std::string& id) {
    if (id == "honest_bob") return std::make_unique<HonestAcceptor>();
    if (id == "epr_bob") return std::make_unique<EPRAcceptor>();
    if (id == "guess_bob")
        throw std::invalid_argument(
            "guess_bob guesses before unveiling and is driven by the "
            "conceal experiment, not by run_round");
    throw std::invalid_argument("unknown acceptor id: " + id);
}

}  // namespace qbc
