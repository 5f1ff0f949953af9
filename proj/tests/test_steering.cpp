#include <doctest.h>

#include <cmath>

#include "qbc/steering.hpp"

using namespace qbc;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector bell_pair() {
    return StateVector(2, {kInvSqrt2, 0.0, 0.0, kInvSqrt2});
}

// Purification with the ensemble members written along computational local
// directions: global = sum_j sqrt(p_j) |j>_local (x) |psi_j>_remote.
StateVector purification_of(const Ensemble& ensemble, int local_qubits) {
    const int remote_qubits = ensemble.state_qubits();
    const std::size_t local_dim = std::size_t{1} << local_qubits;
    const std::size_t remote_dim = std::size_t{1} << remote_qubits;
    REQUIRE(ensemble.members.size() <= local_dim);
    std::vector<Cplx> amps(local_dim * remote_dim, Cplx(0.0, 0.0));
    for (std::size_t j = 0; j < ensemble.members.size(); ++j) {
        const double root = std::sqrt(ensemble.members[j].probability);
        for (std::size_t b = 0; b < remote_dim; ++b)
            amps[j * remote_dim + b] = root * ensemble.members[j].state[b];
    }
    StateVector state(local_qubits + remote_qubits, std::move(amps));
    state.normalize();
    return state;
}

Ensemble random_ensemble(int remote_qubits, int members, Rng& rng) {
    Ensemble ensemble;
    std::vector<double> weights(members);
    double total = 0.0;
    for (auto& w : weights) {
        w = rng.uniform() + 1e-3;
        total += w;
    }
    for (int j = 0; j < members; ++j)
        ensemble.members.push_back(
            {weights[j] / total, random_state(remote_qubits, rng)});
    return ensemble;
}
}  // namespace

TEST_CASE("steering a Bell pair onto the diagonal ensemble") {
    // In the diagonal basis the pair reads (|++> + |-->)/sqrt(2), so the
    // steering directions must be |+> and |-> up to phase.
    Ensemble target;
    target.members = {{0.5, prepare_bb84(0, Basis::Diagonal)},
                      {0.5, prepare_bb84(1, Basis::Diagonal)}};
    const auto basis = steering_basis(bell_pair(), 1, target);
    CHECK(basis.dimension() == 2);
    CHECK(basis.max_orthonormality_error() < 1e-9);

    for (int j = 0; j < 2; ++j) {
        Cplx overlap(0.0, 0.0);
        for (int a = 0; a < 2; ++a)
            overlap += std::conj(target.members[j].state[a]) *
                       basis.vectors(a, j);
        CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-9));
    }

    const auto probs = outcome_probabilities(bell_pair(), 1, basis);
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(probs[1] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("steering a Bell pair onto its Schmidt ensemble") {
    Ensemble target;
    target.members = {{0.5, prepare_bb84(0, Basis::Rectilinear)},
                      {0.5, prepare_bb84(1, Basis::Rectilinear)}};
    const auto basis = steering_basis(bell_pair(), 1, target);
    for (int j = 0; j < 2; ++j) {
        Cplx overlap(0.0, 0.0);
        for (int a = 0; a < 2; ++a)
            overlap += std::conj(target.members[j].state[a]) *
                       basis.vectors(a, j);
        CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("steering handles complex relative phases") {
    const StateVector global(2, {kInvSqrt2, 0.0, 0.0, Cplx(0.0, kInvSqrt2)});
    Ensemble target;
    target.members = {
        {0.5, StateVector(1, {kInvSqrt2, Cplx(0.0, kInvSqrt2)})},
        {0.5, StateVector(1, {kInvSqrt2, Cplx(0.0, -kInvSqrt2)})}};
    const auto basis = steering_basis(global, 1, target);
    const auto m0 = measure_in_basis(global, 1, basis, 0.25);
    CHECK(fidelity(m0.remote_state, target.members[m0.outcome].state) >
          1.0 - 1e-9);
}

TEST_CASE("measuring a Bell pair in a direct basis steers the twin") {
    const SteeringBasis computational{Eigen::MatrixXcd::Identity(2, 2)};
    const auto m0 = measure_in_basis(bell_pair(), 1, computational, 0.2);
    CHECK(m0.outcome == 0);
    CHECK(m0.probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fidelity(m0.remote_state, prepare_bb84(0, Basis::Rectilinear)) >
          1.0 - 1e-12);

    Eigen::MatrixXcd diag(2, 2);
    diag << kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2;
    const auto mplus =
        measure_in_basis(bell_pair(), 1, SteeringBasis{diag}, 0.2);
    CHECK(mplus.outcome == 0);
    CHECK(fidelity(mplus.remote_state, prepare_bb84(0, Basis::Diagonal)) >
          1.0 - 1e-12);
    CHECK(std::abs(mplus.post_state.norm() - 1.0) < 1e-12);

    double total = 0.0;
    for (double p : outcome_probabilities(bell_pair(), 1, computational))
        total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("steering reproduces random ensembles with up to 8 members") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int remote_qubits = 1 + rng.uniform_int(3);  // dim up to 8
        const int members = 1 + static_cast<int>(rng.uniform_int(8));
        const int local_qubits = 3;  // dim 8 >= members
        const Ensemble target = random_ensemble(remote_qubits, members, rng);
        const StateVector global = purification_of(target, local_qubits);

        const auto basis = steering_basis(global, local_qubits, target);
        CHECK(basis.max_orthonormality_error() < 1e-9);

        const auto probs = outcome_probabilities(global, local_qubits, basis);
        double total = 0.0;
        for (std::size_t j = 0; j < probs.size(); ++j) {
            total += probs[j];
            if (j < target.members.size()) {
                CHECK(std::abs(probs[j] - target.members[j].probability) <
                      1e-9);
            } else {
                // Null padding: surplus directions never fire.
                CHECK(probs[j] < 1e-9);
            }
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

        const auto collapse =
            measure_in_basis(global, local_qubits, basis, rng.uniform());
        CHECK(fidelity(collapse.remote_state,
                       target.members[collapse.outcome].state) > 1.0 - 1e-9);
    }
}

TEST_CASE("zero-probability members ride along silently") {
    Ensemble target;
    target.members = {{0.5, prepare_bb84(0, Basis::Diagonal)},
                      {0.0, prepare_bb84(0, Basis::Rectilinear)},
                      {0.5, prepare_bb84(1, Basis::Diagonal)}};
    const StateVector global = purification_of(target, 2);
    const auto basis = steering_basis(global, 2, target);
    const auto probs = outcome_probabilities(global, 2, basis);
    CHECK(probs[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(probs[1] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(probs[2] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(basis.max_orthonormality_error() < 1e-9);
}

TEST_CASE("steering requires the mixture to match the reduced state") {
    Ensemble wrong;
    wrong.members = {{0.7, prepare_bb84(0, Basis::Rectilinear)},
                     {0.3, prepare_bb84(1, Basis::Rectilinear)}};
    CHECK_THROWS_AS(steering_basis(bell_pair(), 1, wrong),
                    SteeringInfeasibleError);

    // A separable message has a pure remote factor; no nontrivial mixture
    // can be steered out of it.
    const auto separable = tensor(prepare_bb84(0, Basis::Rectilinear),
                                  prepare_bb84(0, Basis::Rectilinear));
    Ensemble mixed;
    mixed.members = {{0.5, prepare_bb84(0, Basis::Rectilinear)},
                     {0.5, prepare_bb84(1, Basis::Rectilinear)}};
    CHECK_THROWS_AS(steering_basis(separable, 1, mixed),
                    SteeringInfeasibleError);
}

TEST_CASE("steering rejects ensembles larger than the local factor") {
    Rng rng(5);
    Ensemble big;
    for (int j = 0; j < 3; ++j)
        big.members.push_back({1.0 / 3.0, random_state(1, rng)});
    CHECK_THROWS_AS(steering_basis(bell_pair(), 1, big),
                    SteeringInfeasibleError);
}

TEST_CASE("ensemble validation") {
    Ensemble bad;
    bad.members = {{0.6, prepare_bb84(0, Basis::Rectilinear)},
                   {0.6, prepare_bb84(1, Basis::Rectilinear)}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    Ensemble empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
}

TEST_CASE("local measurements do not move the remote reduced state") {
    Rng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int local = 1 + rng.uniform_int(3);
        const int remote = 1 + rng.uniform_int(3);
        const StateVector state = random_state(local + remote, rng);

        const auto local_dim = Eigen::Index{1} << local;
        Eigen::MatrixXcd raw(local_dim, local_dim);
        for (Eigen::Index i = 0; i < local_dim; ++i)
            for (Eigen::Index j = 0; j < local_dim; ++j)
                raw(i, j) = Cplx(rng.gaussian(), rng.gaussian());
        const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
        const SteeringBasis basis{qr.householderQ()};

        const auto probs = outcome_probabilities(state, local, basis);
        Eigen::MatrixXcd averaged = Eigen::MatrixXcd::Zero(
            Eigen::Index{1} << remote, Eigen::Index{1} << remote);
        double below = 0.0;
        for (Eigen::Index j = 0; j < local_dim; ++j) {
            const double p = probs[static_cast<std::size_t>(j)];
            if (p > 1e-14) {
                const auto collapse =
                    measure_in_basis(state, local, basis, below + 0.5 * p);
                CHECK(collapse.outcome == j);
                averaged +=
                    p * pure_density(collapse.remote_state).entries;
            }
            below += p;
        }
        worst = std::max(worst,
                         trace_distance(DensityMatrix{averaged},
                                        reduced_remote(state, local_dim)));
    }
    CHECK(worst < 1e-9);
}
