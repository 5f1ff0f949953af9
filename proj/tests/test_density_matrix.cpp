#include <doctest.h>

#include <cmath>

#include "qbc/density_matrix.hpp"

using namespace qbc;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

StateVector bell_pair() {
    return StateVector(2, {kInvSqrt2, 0.0, 0.0, kInvSqrt2});
}

// Closed-form eigenvalues of a 2x2 Hermitian matrix; kept independent of
// the Eigen-backed implementation as the oracle for small cases.
std::pair<double, double> eigenvalues_2x2(const Eigen::MatrixXcd& h) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double off = std::abs(h(0, 1));
    const double mean = 0.5 * (a + d);
    const double radius = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
    return {mean - radius, mean + radius};
}
}  // namespace

TEST_CASE("partial trace of a product state is the kept factor") {
    const auto state = tensor(prepare_bb84(0, Basis::Rectilinear),
                              prepare_bb84(1, Basis::Rectilinear));
    const auto reduced = partial_trace(state, {1});
    CHECK(std::abs(reduced.entries(0, 0)) < 1e-12);
    CHECK(std::abs(reduced.entries(1, 1) - 1.0) < 1e-12);
    reduced.validate();
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
    const auto reduced = partial_trace(bell_pair(), {1});
    CHECK(std::abs(reduced.entries(0, 0) - 0.5) < 1e-12);
    CHECK(std::abs(reduced.entries(1, 1) - 0.5) < 1e-12);
    CHECK(std::abs(reduced.entries(0, 1)) < 1e-12);
    CHECK(purity(reduced) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("partial trace validates its keep set") {
    const auto state = bell_pair();
    CHECK_THROWS_AS(partial_trace(state, {2}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(state, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(state, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(state, {}), std::invalid_argument);
}

TEST_CASE("reduced states are sound on random inputs") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const int n = 2 + rng.uniform_int(5);  // up to 6 qubits
        const auto state = random_state(n, rng);
        std::vector<int> keep;
        for (int q = 0; q < n; ++q)
            if (rng.coin()) keep.push_back(q);
        if (keep.empty() || static_cast<int>(keep.size()) == n) continue;
        const auto reduced = partial_trace(state, keep);
        CHECK(reduced.hermiticity_error() < 1e-10);
        CHECK(reduced.trace_error() < 1e-10);
        CHECK(reduced.min_eigenvalue() > -1e-10);
    }
}

TEST_CASE("mixed-state partial trace agrees with the pure-state one") {
    Rng rng(19);
    for (int i = 0; i < 25; ++i) {
        const auto state = random_state(3, rng);
        const auto direct = partial_trace(state, {0, 2});
        const auto via_density =
            partial_trace(pure_density(state), {2, 2, 2}, {0, 2});
        CHECK((direct.entries - via_density.entries).cwiseAbs().maxCoeff() <
              1e-10);
    }
}

TEST_CASE("trace distance of orthogonal pure states is one") {
    const auto zero = pure_density(prepare_bb84(0, Basis::Rectilinear));
    const auto one = pure_density(prepare_bb84(1, Basis::Rectilinear));
    CHECK(trace_distance(zero, one) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace_distance(zero, zero) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("trace distance of |0> and |+> matches the 2x2 eigen oracle") {
    const auto zero = pure_density(prepare_bb84(0, Basis::Rectilinear));
    const auto plus = pure_density(prepare_bb84(0, Basis::Diagonal));

    const auto [lo, hi] = eigenvalues_2x2(zero.entries - plus.entries);
    const double oracle = 0.5 * (std::abs(lo) + std::abs(hi));
    CHECK(oracle == doctest::Approx(kInvSqrt2).epsilon(1e-12));
    CHECK(trace_distance(zero, plus) ==
          doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("trace distance rejects mismatched dimensions") {
    const auto small = pure_density(prepare_bb84(0, Basis::Rectilinear));
    const auto big = pure_density(bell_pair());
    CHECK_THROWS_AS(trace_distance(small, big), std::invalid_argument);
}

TEST_CASE("trace distance is a metric on random triples") {
    Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + rng.uniform_int(3);
        const auto a = partial_trace(random_state(n + 1, rng), [&] {
            std::vector<int> keep;
            for (int q = 0; q < n; ++q) keep.push_back(q);
            return keep;
        }());
        const auto b = partial_trace(random_state(n + 1, rng), [&] {
            std::vector<int> keep;
            for (int q = 0; q < n; ++q) keep.push_back(q);
            return keep;
        }());
        const auto c = partial_trace(random_state(n + 1, rng), [&] {
            std::vector<int> keep;
            for (int q = 0; q < n; ++q) keep.push_back(q);
            return keep;
        }());

        const double ab = trace_distance(a, b);
        const double ba = trace_distance(b, a);
        const double ac = trace_distance(a, c);
        const double cb = trace_distance(c, b);
        CHECK(std::abs(ab - ba) < 1e-10);
        CHECK(ab <= ac + cb + 1e-9);
        CHECK(ab >= -1e-12);
        CHECK(ab <= 1.0 + 1e-12);
        CHECK(trace_distance(a, a) < 1e-10);
    }
}

TEST_CASE("validate rejects broken density matrices") {
    DensityMatrix bad{Eigen::MatrixXcd::Identity(2, 2)};
    CHECK_THROWS_AS(bad.validate(), std::runtime_error);  // trace 2
    DensityMatrix skew{(Eigen::MatrixXcd(2, 2) << Cplx(0.5, 0.0),
                        Cplx(0.1, 0.2), Cplx(0.3, 0.1), Cplx(0.5, 0.0))
                           .finished()};
    CHECK_THROWS_AS(skew.validate(), std::runtime_error);
}
