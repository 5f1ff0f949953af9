#include <cmath>
#include <stdexcept>

#include "qbc/experiments.hpp"
#include "qbc/protocol.hpp"
#include "qbc/strategies.hpp"

namespace qbc {

namespace {

constexpr int kOracleCap = 6;

void check_oracle_size(int n) {
    if (n < 2 || n > kOracleCap)
        throw std::invalid_argument(
            "enumerate_oracle: exhaustive enumeration capped at n = 6");
}

// Visits every (preparation, matched/mismatched pattern, mismatched
// outcome assignment) with its exact Born weight. The measured string
// equals the preparation at matched positions and the free assignment at
// mismatched ones; bases themselves integrate out.
template <typename Fn>
void for_each_round(int n, Fn&& fn) {
    const double base_weight = std::pow(0.5, 2 * n);
    Bits outcomes(n);
    for (std::uint32_t prep = 0; prep < (1u << n); ++prep) {
        const Bits preparation = index_to_bits(prep, n);
        for (std::uint32_t pattern = 0; pattern < (1u << n); ++pattern) {
            int mismatched = 0;
            for (int i = 0; i < n; ++i)
                if (pattern & (1u << i)) ++mismatched;
            const double weight = base_weight * std::pow(0.5, mismatched);
            for (std::uint32_t free_bits = 0; free_bits < (1u << mismatched);
                 ++free_bits) {
                int slot = 0;
                for (int i = 0; i < n; ++i) {
                    if (pattern & (1u << i))
                        outcomes[i] = (free_bits >> slot++) & 1;
                    else
                        outcomes[i] = preparation[i];
                }
                fn(preparation, pattern, outcomes, weight);
            }
        }
    }
}

// Acceptance probability of the flip cheat, conditioned on a flip having
// been possible. The cheating committer under the all-ones public string
// commits to the parity it measured, excludes an outcome-0 position, and
// flips one surviving 1; the flip passes exactly when that position was
// measured in a basis mismatching the preparation.
double bind_oracle(int n) {
    double accepted = 0.0;
    double flipped = 0.0;
    for_each_round(n, [&](const Bits&, std::uint32_t pattern,
                          const Bits& outcomes, double weight) {
        int ones = 0, zeros = 0, mismatched_ones = 0;
        for (int i = 0; i < n; ++i) {
            if (outcomes[i]) {
                ++ones;
                if (pattern & (1u << i)) ++mismatched_ones;
            } else {
                ++zeros;
            }
        }
        if (zeros == 0 || ones == 0) return;  // commit abort / failed cheat
        flipped += weight;
        accepted += weight * static_cast<double>(mismatched_ones) /
                    static_cast<double>(ones);
    });
    return accepted / flipped;
}

// Exact accuracy of the maximum-a-posteriori guess from the acceptor's
// view (preparation string, public string, exclusion index), for the
// canonical weight-k public string. Positions are exchangeable, so one
// representative r covers all weight-k draws.
double conceal_oracle(int n, int k) {
    if (k < 0 || k > n)
        throw std::invalid_argument("enumerate_oracle: bad r weight");
    Bits r(n, 0);
    for (int i = 0; i < k; ++i) r[i] = 1;

    double accuracy = 0.0;
    const double prep_weight = std::pow(0.5, n);
    for (std::uint32_t prep = 0; prep < (1u << n); ++prep) {
        BobView view;
        view.secret.bits = index_to_bits(prep, n);
        view.secret.bases = BasisString(n, Basis::Rectilinear);
        view.r = r;
        for (int x = 0; x < n; ++x) {
            view.x = x;
            const auto weights = posterior_weights(view);
            accuracy += prep_weight * 0.5 * std::max(weights[0], weights[1]);
        }
    }
    return accuracy;
}

}  // namespace

double enumerate_oracle(Experiment experiment, int n, int k) {
    check_oracle_size(n);
    switch (experiment) {
        case Experiment::Bind: return bind_oracle(n);
        case Experiment::Conceal: return conceal_oracle(n, k);
        default:
            throw std::invalid_argument(
                "enumerate_oracle: only bind and conceal have enumeration "
                "oracles");
    }
}

double conceal_closed_form(int k) {
    return 0.5 * (1.0 + std::pow(0.5, k));
}

double enumerate_parity_agreement(int n, int k) {
    check_oracle_size(n);
    if (k < 0 || k > n)
        throw std::invalid_argument("enumerate_parity_agreement: bad weight");
    Bits r(n, 0);
    for (int i = 0; i < k; ++i) r[i] = 1;

    double agree = 0.0;
    for_each_round(n, [&](const Bits& preparation, std::uint32_t,
                          const Bits& outcomes, double weight) {
        if (parity(r, outcomes) == parity(r, preparation)) agree += weight;
    });
    return agree;
}

double enumerate_mismatched_flip_accept(int n) {
    check_oracle_size(n);
    const Bits r(n, 1);
    const Code code = Code::all_strings();

    double accepted = 0.0;
    double total = 0.0;
    for (std::uint32_t eta_word = 0; eta_word < (1u << n); ++eta_word) {
        BobSecret secret;
        secret.bases.resize(n);
        for (int i = 0; i < n; ++i)
            secret.bases[i] = (eta_word >> i) & 1 ? Basis::Diagonal
                                                  : Basis::Rectilinear;
        for (std::uint32_t theta_word = 0; theta_word < (1u << n);
             ++theta_word) {
            BasisString theta(n);
            for (int i = 0; i < n; ++i)
                theta[i] = (theta_word >> i) & 1 ? Basis::Diagonal
                                                 : Basis::Rectilinear;
            for (std::uint32_t prep = 0; prep < (1u << n); ++prep) {
                secret.bits = index_to_bits(prep, n);
                // All outcome strings consistent with matched bases.
                for (std::uint32_t word = 0; word < (1u << n); ++word) {
                    const Bits outcomes = index_to_bits(word, n);
                    bool consistent = true;
                    for (int i = 0; i < n; ++i)
                        if (theta[i] == secret.bases[i] &&
                            outcomes[i] != secret.bits[i])
                            consistent = false;
                    if (!consistent) continue;

                    const int b = parity(r, outcomes);
                    for (int x : exclusion_candidates(outcomes, r, b, code)) {
                        for (int i = 0; i < n; ++i) {
                            if (i == x || outcomes[i] != 1 ||
                                theta[i] == secret.bases[i])
                                continue;
                            Bits claimed = outcomes;
                            claimed[i] = 0;
                            UnveilAnnouncement unveil{
                                parity(exclude(r, x), exclude(claimed, x)),
                                claimed, theta};
                            total += 1.0;
                            if (bob_verify(secret, EvidenceAnnouncement{x},
                                           unveil, r, code)
                                    .kind == VerdictKind::Accept)
                                accepted += 1.0;
                        }
                    }
                }
            }
        }
    }
    return total > 0.0 ? accepted / total : 0.0;
}

}  // namespace qbc
