#include "qbc/protocol.hpp"

#include <stdexcept>

namespace qbc {

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::Accept: return "accept";
        case VerdictKind::RejectParity: return "reject_parity";
        case VerdictKind::RejectConsistency: return "reject_consistency";
        case VerdictKind::Abort: return "abort";
    }
    throw std::logic_error("to_string: bad verdict kind");
}

std::pair<BobSecret, StateVector> bob_prepare(const ProtocolParams& params,
                                              Rng& rng) {
    if (params.n < 2 || params.n > StateVector::kMaxQubits)
        throw std::invalid_argument("bob_prepare: photon count out of range");
    BobSecret secret;
    secret.bits = params.code.sample_preparation(params.n, rng);
    secret.bases = random_bases(params.n, rng);

    StateVector state = prepare_bb84(secret.bits[0], secret.bases[0]);
    for (int i = 1; i < params.n; ++i)
        state = tensor(state, prepare_bb84(secret.bits[i], secret.bases[i]));
    return {std::move(secret), std::move(state)};
}

Bits measure_in_bases(StateVector& state, int first_qubit,
                      const BasisString& bases, Rng& rng) {
    if (first_qubit < 0 ||
        first_qubit + static_cast<int>(bases.size()) > state.num_qubits())
        throw std::invalid_argument("measure_in_bases: bad qubit range");
    Bits outcomes(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        auto result = measure_qubit(state, first_qubit + static_cast<int>(i),
                                    bases[i], rng.uniform());
        outcomes[i] = static_cast<std::uint8_t>(result.outcome);
        state = std::move(result.post_state);
    }
    return outcomes;
}

std::vector<int> exclusion_candidates(const Bits& outcomes, const Bits& r,
                                      int b, const Code& code) {
    if (outcomes.size() != r.size())
        throw std::invalid_argument("exclusion_candidates: length mismatch");
    const int n = static_cast<int>(outcomes.size());
    const bool check_passed = parity(r, outcomes) == b;
    std::vector<int> candidates;
    for (int x = 0; x < n; ++x) {
        // Removing a 0 preserves the excluded parity; removing a 1 flips
        // it only where r is set.
        const bool eligible = check_passed ? outcomes[x] == 0
                                           : (outcomes[x] == 1 && r[x] == 1);
        if (eligible && code.contains(exclude(outcomes, x)))
            candidates.push_back(x);
    }
    return candidates;
}

ExclusionChoice alice_choose_exclusion(const Bits& outcomes, const Bits& r,
                                       int b, const Code& code, Rng& rng) {
    // Distinguish an empty parity-rule set from one emptied by the code.
    const auto rule_set =
        exclusion_candidates(outcomes, r, b, Code::all_strings());
    if (rule_set.empty()) return {std::nullopt, "no valid exclusion"};

    const auto candidates = exclusion_candidates(outcomes, r, b, code);
    if (candidates.empty()) return {std::nullopt, "code-infeasible"};
    const auto pick = rng.uniform_int(static_cast<std::uint32_t>(candidates.size()));
    return {candidates[pick], ""};
}

Verdict bob_verify(const BobSecret& secret,
                   const EvidenceAnnouncement& evidence,
                   const UnveilAnnouncement& unveil, const Bits& r,
                   const Code& code) {
    const int n = static_cast<int>(secret.bits.size());
    if (evidence.x < 0 || evidence.x >= n ||
        static_cast<int>(unveil.claimed_outcomes.size()) != n ||
        static_cast<int>(unveil.bases.size()) != n ||
        static_cast<int>(r.size()) != n)
        throw std::invalid_argument("bob_verify: malformed announcements");

    for (int i = 0; i < n; ++i) {
        if (i == evidence.x) continue;
        if (secret.bases[i] == unveil.bases[i] &&
            unveil.claimed_outcomes[i] != secret.bits[i])
            return {VerdictKind::RejectConsistency, ""};
    }

    const Bits claimed = exclude(unveil.claimed_outcomes, evidence.x);
    if (parity(exclude(r, evidence.x), claimed) != unveil.bit ||
        !code.contains(claimed))
        return {VerdictKind::RejectParity, ""};

    return {VerdictKind::Accept, ""};
}

Transcript run_round(Committer& committer, Acceptor& acceptor,
                     const ProtocolParams& params, std::uint64_t round_seed) {
    Rng rng(round_seed);
    Transcript transcript;
    transcript.params = params;
    transcript.round_seed = round_seed;

    PreparedMessage message = acceptor.prepare(params, rng);
    transcript.bob_secret = message.secret;
    transcript.message_description = message.description;

    auto commit = committer.commit(params, std::move(message.joint),
                                   message.hidden_qubits, rng);
    if (!commit.evidence) {
        transcript.verdict = {VerdictKind::Abort, commit.abort_reason};
        return transcript;
    }
    transcript.evidence = *commit.evidence;

    // Holding phase: no-op.

    auto unveil = committer.unveil(params, rng);
    if (!unveil.unveil) {
        transcript.verdict = {VerdictKind::Abort, unveil.abort_reason};
        return transcript;
    }
    transcript.unveil = *unveil.unveil;

    transcript.verdict =
        acceptor.verify(params, *transcript.evidence, *transcript.unveil);
    return transcript;
}

}  // namespace qbc
