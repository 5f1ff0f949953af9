#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbc/bits.hpp"
#include "qbc/code.hpp"
#include "qbc/state_vector.hpp"

namespace qbc {

// Public parameters of one commitment round.
struct ProtocolParams {
    int n = 8;                     // photon count
    Code code = Code::all_strings();
    Bits r;                        // public random n-bit string
    int rounds = 1;                // s, for multi-round binding runs
    std::uint64_t master_seed = 0;
};

// The acceptor's preparation record: outcome string and bases of the
// separable state he sent.
struct BobSecret {
    Bits bits;           // n-bit preparation string (in the code)
    BasisString bases;   // n preparation bases
};

// The committer's private record of a completed commit phase.
struct AliceRecord {
    BasisString bases;   // measurement bases
    Bits outcomes;       // measured outcome string
    int committed_bit = 0;
    int excluded = 0;    // announced exclusion position x
};

struct EvidenceAnnouncement {
    int x = 0;
};

struct UnveilAnnouncement {
    int bit = 0;
    Bits claimed_outcomes;  // announced outcome string (n bits)
    BasisString bases;      // announced measurement bases
};

enum class VerdictKind { Accept, RejectParity, RejectConsistency, Abort };

struct Verdict {
    VerdictKind kind = VerdictKind::Accept;
    std::string reason;  // non-empty only for Abort
};

std::string to_string(VerdictKind kind);

// Full record of one protocol round. A commit-phase abort leaves
// `evidence` (and everything after it) empty.
struct Transcript {
    ProtocolParams params;
    std::optional<BobSecret> bob_secret;
    std::string message_description;
    std::optional<EvidenceAnnouncement> evidence;
    std::optional<UnveilAnnouncement> unveil;
    Verdict verdict;
    std::uint64_t round_seed = 0;
};

// --- Commitment-phase primitives -----------------------------------------

// Draws the preparation string/bases and builds the separable message
// state |bits[0]>_bases[0] (x) ... (x) |bits[n-1]>_bases[n-1].
std::pair<BobSecret, StateVector> bob_prepare(const ProtocolParams& params,
                                              Rng& rng);

// Measures qubits [first_qubit, first_qubit + bases.size()) sequentially,
// collapsing `state` in place; returns the outcome string.
Bits measure_in_bases(StateVector& state, int first_qubit,
                      const BasisString& bases, Rng& rng);

// Exclusion positions that make the excluded string's parity equal b and
// keep it inside the code: outcome-0 positions when the pre-exclusion
// parity already equals b, else outcome-1 positions where r is 1 (a one
// at an r-zero position cannot flip the check).
std::vector<int> exclusion_candidates(const Bits& outcomes, const Bits& r,
                                      int b, const Code& code);

struct ExclusionChoice {
    std::optional<int> x;
    std::string abort_reason;  // "no valid exclusion" / "code-infeasible"
};

ExclusionChoice alice_choose_exclusion(const Bits& outcomes, const Bits& r,
                                       int b, const Code& code, Rng& rng);

// --- Unveiling-phase verification -----------------------------------------

// Accept iff every non-excluded position with matching preparation and
// announced measurement bases agrees with the preparation string, and the
// excluded claimed string has parity b and lies in the code. Consistency
// is checked first, so a transcript failing both yields RejectConsistency.
Verdict bob_verify(const BobSecret& secret,
                   const EvidenceAnnouncement& evidence,
                   const UnveilAnnouncement& unveil, const Bits& r,
                   const Code& code);

// --- Party strategy contracts ---------------------------------------------

struct PreparedMessage {
    StateVector joint;          // [hidden qubits][channel qubits]
    int hidden_qubits = 0;      // leading qubits the acceptor retains
    std::optional<BobSecret> secret;
    std::string description;
};

class Committer {
  public:
    struct CommitOutcome {
        std::optional<EvidenceAnnouncement> evidence;
        std::string abort_reason;
    };
    struct UnveilOutcome {
        std::optional<UnveilAnnouncement> unveil;
        std::string abort_reason;
    };

    virtual ~Committer() = default;

    // Phase 1(e)-1(g): receive the channel qubits (starting at
    // `first_qubit` of `joint`) and produce the exclusion announcement.
    virtual CommitOutcome commit(const ProtocolParams& params,
                                 StateVector joint, int first_qubit,
                                 Rng& rng) = 0;

    // Phase 2(a).
    virtual UnveilOutcome unveil(const ProtocolParams& params, Rng& rng) = 0;
};

class Acceptor {
  public:
    virtual ~Acceptor() = default;

    // Phases 1(c)-1(d).
    virtual PreparedMessage prepare(const ProtocolParams& params,
                                    Rng& rng) = 0;

    // Phases 2(b)-2(c).
    virtual Verdict verify(const ProtocolParams& params,
                           const EvidenceAnnouncement& evidence,
                           const UnveilAnnouncement& unveil) = 0;
};

// Executes one full round (commit, no-op holding phase, unveil, verify).
// Pure function of (strategies, params, round_seed); strategy aborts are
// recorded in the verdict, with commit-phase aborts leaving the evidence
// (and later fields) unset.
Transcript run_round(Committer& committer, Acceptor& acceptor,
                     const ProtocolParams& params, std::uint64_t round_seed);

}  // namespace qbc
