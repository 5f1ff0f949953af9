#include <doctest.h>

#include <cmath>

#include "qbc/density_matrix.hpp"
#include "qbc/experiments.hpp"
#include "qbc/strategies.hpp"

using namespace qbc;

TEST_CASE("flip cheat flips exactly one eligible announced outcome") {
    AliceRecord record;
    record.bases = bases_from_string("+x+x");
    record.outcomes = bits_from_string("1011");
    record.committed_bit = 1;
    record.excluded = 3;
    const Bits r = bits_from_string("1101");

    Rng rng(17);
    for (int i = 0; i < 30; ++i) {
        const auto out = flip_cheat_unveil(record, r, 0, rng);
        REQUIRE(out.unveil);
        CHECK(out.unveil->bit == 0);
        CHECK(out.unveil->bases == record.bases);
        int flips = 0, flipped_at = -1;
        for (int p = 0; p < 4; ++p)
            if (out.unveil->claimed_outcomes[p] != record.outcomes[p]) {
                ++flips;
                flipped_at = p;
            }
        CHECK(flips == 1);
        CHECK(flipped_at != record.excluded);
        CHECK(record.outcomes[flipped_at] == 1);
        CHECK(r[flipped_at] == 1);
        CHECK(out.unveil->claimed_outcomes[flipped_at] == 0);
    }

    CHECK_THROWS_AS(flip_cheat_unveil(record, r, record.committed_bit, rng),
                    std::invalid_argument);

    // No outcome-1 position with r set (besides the excluded one) is a
    // failed cheat, not an exception.
    AliceRecord stuck = record;
    stuck.outcomes = bits_from_string("0010");
    stuck.excluded = 2;
    const auto failed = flip_cheat_unveil(stuck, r, 0, rng);
    CHECK(!failed.unveil);
    CHECK(failed.abort_reason == "no flippable position");
}

TEST_CASE("flip cheats at mismatched positions always pass (exhaustive)") {
    CHECK(enumerate_mismatched_flip_accept(4) == 1.0);
}

TEST_CASE("flip cheat detection rate is one half") {
    // Statistical check at n = 8 (the exhaustive n = 4 value lives in the
    // enumeration oracle tests).
    ProtocolParams params;
    params.n = 8;
    params.r = Bits(8, 1);
    int accepted = 0, completed = 0;
    for (int round = 0; round < 4000; ++round) {
        FlipCommitter alice;
        HonestAcceptor bob;
        const Transcript t =
            run_round(alice, bob, params, derive_seed(660, round));
        if (t.verdict.kind == VerdictKind::Abort && !t.evidence) continue;
        ++completed;
        accepted += t.verdict.kind == VerdictKind::Accept;
    }
    const double freq = static_cast<double>(accepted) / completed;
    CHECK(std::abs(freq - 0.5) < 3.0 * std::sqrt(0.25 / completed) + 0.01);
}

TEST_CASE("guessing from an all-zero public string is trivially right") {
    // With r = 0...0 only b = 0 is encodable, and the posterior knows it.
    ProtocolParams params;
    params.n = 6;
    params.r = Bits(6, 0);
    for (int round = 0; round < 50; ++round) {
        HonestCommitter alice{0};
        HonestAcceptor bob;
        const Transcript t =
            run_round(alice, bob, params, derive_seed(12, round));
        if (!t.evidence) continue;
        const BobView view{*t.bob_secret, params.r, t.evidence->x};
        CHECK(guess_commitment(view, GuessMode::ExactPosterior) == 0);
        CHECK(guess_commitment(view, GuessMode::ParityProxy) == 0);
    }

    // A committer set on b = 1 can never pass the parity check.
    Rng rng(3);
    const auto choice = alice_choose_exclusion(
        random_bits(6, rng), params.r, 1, params.code, rng);
    CHECK(!choice.x);
}

TEST_CASE("parity proxy matches the excluded preparation parity") {
    BobView view;
    view.secret.bits = bits_from_string("101101");
    view.secret.bases = bases_from_string("+xx++x");
    view.r = bits_from_string("110000");
    view.x = 3;
    CHECK(guess_commitment(view, GuessMode::ParityProxy) ==
          parity(exclude(view.r, 3), exclude(view.secret.bits, 3)));
}

TEST_CASE("exact posterior is capped at n = 10") {
    BobView view;
    view.secret.bits = Bits(11, 0);
    view.secret.bases = BasisString(11, Basis::Rectilinear);
    view.r = Bits(11, 1);
    view.x = 0;
    CHECK_THROWS_AS(guess_commitment(view, GuessMode::ExactPosterior),
                    std::invalid_argument);
}

TEST_CASE("EPR halves look maximally mixed one by one") {
    const StateVector pairs = epr_pairs_state(3);
    CHECK(pairs.num_qubits() == 6);
    for (int q = 0; q < 6; ++q) {
        const auto reduced = partial_trace(pairs, {q});
        CHECK(std::abs(reduced.entries(0, 0) - 0.5) < 1e-12);
        CHECK(std::abs(reduced.entries(1, 1) - 0.5) < 1e-12);
        CHECK(std::abs(reduced.entries(0, 1)) < 1e-12);
    }
}

TEST_CASE("excluding any pair leaves the diagonal pair sum") {
    // Trace out one pair of the 3-pair state and compare with the direct
    // 2-pair construction: the remaining state is the same whichever pair
    // is dropped.
    const int n = 3;
    const StateVector pairs = epr_pairs_state(n);
    const auto expected = pure_density(epr_remaining_state(n));
    for (int x = 0; x < n; ++x) {
        std::vector<int> keep;
        for (int q = 0; q < 2 * n; ++q)
            if (q != x && q != n + x) keep.push_back(q);
        const auto remaining = partial_trace(pairs, keep);
        CHECK((remaining.entries - expected.entries).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("an entangled preparation has no definite outcome string") {
    // Measuring the committer half in + and the acceptor twin in + agree,
    // but two fresh preparations disagree half the time: there is no fixed
    // preparation string behind the halves.
    Rng rng(414);
    int twin_agree = 0, fresh_agree = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
        StateVector pair = epr_pairs_state(1);
        const auto acceptor_half =
            measure_qubit(pair, 0, Basis::Rectilinear, rng.uniform());
        const auto committer_half = measure_qubit(
            acceptor_half.post_state, 1, Basis::Rectilinear, rng.uniform());
        twin_agree += acceptor_half.outcome == committer_half.outcome;

        StateVector other = epr_pairs_state(1);
        const auto fresh =
            measure_qubit(other, 1, Basis::Rectilinear, rng.uniform());
        fresh_agree += acceptor_half.outcome == fresh.outcome;
    }
    CHECK(twin_agree == trials);
    CHECK(std::abs(fresh_agree / static_cast<double>(trials) - 0.5) <
          3.0 * std::sqrt(0.25 / trials));
}

TEST_CASE("EPR acceptor exposes the halves and no secret") {
    ProtocolParams params;
    params.n = 3;
    Rng rng(9);
    EPRAcceptor bob;
    const PreparedMessage message = bob.prepare(params, rng);
    CHECK(message.hidden_qubits == 3);
    CHECK(message.joint.num_qubits() == 6);
    CHECK(!message.secret);
    CHECK(bob.verify(params, EvidenceAnnouncement{0},
                     UnveilAnnouncement{0, Bits(3, 0),
                                        BasisString(3, Basis::Rectilinear)})
              .kind == VerdictKind::Abort);
}

TEST_CASE("plan dimensions follow the ancilla augmentation") {
    const auto plan3 = mlc_build_plan(
        3, product_basis_ensemble(2, Basis::Rectilinear),
        product_basis_ensemble(2, Basis::Diagonal));
    CHECK(plan3.ensemble_dimension == 8);
    CHECK(plan3.ancilla_qubits == 1);
    CHECK(plan3.local_qubits == 3);
    CHECK(plan3.held.num_qubits() == 5);

    const auto plan4 = mlc_build_plan(
        4, product_basis_ensemble(3, Basis::Rectilinear),
        product_basis_ensemble(3, Basis::Diagonal));
    CHECK(plan4.ensemble_dimension == 32);
    CHECK(plan4.ancilla_qubits == 2);
    const std::size_t ancilla_dim = std::size_t{1} << plan4.ancilla_qubits;
    CHECK(ancilla_dim == plan4.ensemble_dimension / (std::size_t{1} << 3));
}

TEST_CASE("plans reject ensembles that do not match the held state") {
    Ensemble biased;
    biased.members = {{0.75, prepare_bb84(0, Basis::Rectilinear)},
                      {0.25, prepare_bb84(1, Basis::Rectilinear)}};
    CHECK_THROWS_AS(mlc_build_plan(2, biased,
                                   product_basis_ensemble(1, Basis::Diagonal)),
                    SteeringInfeasibleError);
}

TEST_CASE("both bits open from one held state with unit fidelity") {
    const auto plan = mlc_build_plan(
        3, product_basis_ensemble(2, Basis::Rectilinear),
        product_basis_ensemble(2, Basis::Diagonal));

    // The acceptor's reduced state is one and the same before either
    // opening: the commitment is decided only by the later measurement.
    const auto acceptor_before =
        reduced_remote(plan.held, 1 << plan.local_qubits);
    CHECK(trace_distance(acceptor_before, acceptor_before) < 1e-15);
    const auto probs0 =
        outcome_probabilities(plan.held, plan.local_qubits, plan.bases[0]);
    const auto probs1 =
        outcome_probabilities(plan.held, plan.local_qubits, plan.bases[1]);

    // Averaged over outcomes, neither measurement moves the remote state.
    for (int b = 0; b < 2; ++b) {
        const auto& probs = b == 0 ? probs0 : probs1;
        Eigen::MatrixXcd averaged = Eigen::MatrixXcd::Zero(4, 4);
        double below = 0.0;
        for (std::size_t j = 0; j < probs.size(); ++j) {
            if (probs[j] > 1e-12) {
                const auto collapse = measure_in_basis(
                    plan.held, plan.local_qubits, plan.bases[b],
                    below + 0.5 * probs[j]);
                averaged += probs[j] *
                            pure_density(collapse.remote_state).entries;
            }
            below += probs[j];
        }
        CHECK(trace_distance(DensityMatrix{averaged}, acceptor_before) <
              1e-10);
    }

    Rng rng(31415);
    std::array<std::array<int, 8>, 2> counts{};
    const int trials = 2000;
    for (int i = 0; i < trials; ++i) {
        for (int b = 0; b < 2; ++b) {
            const auto opening = mlc_open(plan, plan.held, b, rng);
            CHECK(opening.fidelity_to_target >= 1.0 - 1e-9);
            REQUIRE(opening.outcome < 8);
            ++counts[b][opening.outcome];
        }
    }
    for (int b = 0; b < 2; ++b) {
        for (int j = 0; j < 8; ++j) {
            const double expected = j < 4 ? 0.25 : 0.0;
            const double freq =
                counts[b][j] / static_cast<double>(trials);
            CHECK(std::abs(freq - expected) <
                  3.0 * std::sqrt(0.25 * 0.75 / trials) + 1e-12);
        }
    }
}
