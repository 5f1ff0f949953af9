#include "qbc/state_vector.hpp"

#include <cmath>
#include <stdexcept>

namespace qbc {

namespace {
constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kZeroBranch = 1e-12;
}  // namespace

std::string to_string(const BasisString& bases) {
    std::string out;
    out.reserve(bases.size());
    for (Basis b : bases) out.push_back(basis_char(b));
    return out;
}

BasisString bases_from_string(std::string_view text) {
    BasisString out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '+')
            out.push_back(Basis::Rectilinear);
        else if (c == 'x' || c == 'X')
            out.push_back(Basis::Diagonal);
        else
            throw std::invalid_argument("bases_from_string: expected + or x");
    }
    return out;
}

BasisString random_bases(int n, Rng& rng) {
    BasisString out(n);
    for (auto& b : out)
        b = rng.coin() ? Basis::Diagonal : Basis::Rectilinear;
    return out;
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("StateVector: qubit count out of range");
    amplitudes_.assign(std::size_t{1} << num_qubits, Cplx(0.0, 0.0));
    amplitudes_[0] = Cplx(1.0, 0.0);
}

StateVector::StateVector(int num_qubits, std::vector<Cplx> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw std::invalid_argument("StateVector: qubit count out of range");
    if (amplitudes_.size() != (std::size_t{1} << num_qubits))
        throw std::invalid_argument("StateVector: amplitude count mismatch");
}

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) sum += std::norm(a);
    return std::sqrt(sum);
}

void StateVector::normalize() {
    const double n = norm();
    if (n < kZeroBranch)
        throw std::logic_error("StateVector: normalizing a zero vector");
    for (auto& a : amplitudes_) a /= n;
}

void StateVector::check_normalized(double tol) const {
    const double n = norm();
    if (std::abs(n * n - 1.0) > tol)
        throw std::runtime_error("StateVector: norm invariant violated");
}

StateVector prepare_bb84(int bit, Basis basis) {
    std::vector<Cplx> amps(2, Cplx(0.0, 0.0));
    if (basis == Basis::Rectilinear) {
        amps[bit ? 1 : 0] = 1.0;
    } else {
        amps[0] = kSqrt1_2;
        amps[1] = bit ? -kSqrt1_2 : kSqrt1_2;
    }
    return StateVector(1, std::move(amps));
}

StateVector tensor(const StateVector& a, const StateVector& b) {
    const int n = a.num_qubits() + b.num_qubits();
    if (n > StateVector::kMaxQubits)
        throw std::invalid_argument("tensor: product exceeds the size cap");
    std::vector<Cplx> amps(std::size_t{1} << n);
    const std::size_t db = b.dimension();
    for (std::size_t i = 0; i < a.dimension(); ++i)
        for (std::size_t j = 0; j < db; ++j)
            amps[i * db + j] = a[i] * b[j];
    return StateVector(n, std::move(amps));
}

Cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension())
        throw std::invalid_argument("inner_product: dimension mismatch");
    Cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.dimension(); ++i)
        acc += std::conj(a[i]) * b[i];
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

namespace {

// Amplitude pair of `state` at the two values of `qubit`, all other index
// bits equal; visits every such pair exactly once.
template <typename Fn>
void for_each_pair(int num_qubits, int qubit, Fn&& fn) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    const std::size_t bit = std::size_t{1} << (num_qubits - 1 - qubit);
    for (std::size_t base = 0; base < dim; ++base)
        if (!(base & bit)) fn(base, base | bit);
}

}  // namespace

double outcome_probability(const StateVector& state, int qubit, Basis basis,
                           int outcome) {
    if (qubit < 0 || qubit >= state.num_qubits())
        throw std::invalid_argument("outcome_probability: bad qubit index");
    double p = 0.0;
    if (basis == Basis::Rectilinear) {
        for_each_pair(state.num_qubits(), qubit, [&](std::size_t i0, std::size_t i1) {
            p += std::norm(state[outcome ? i1 : i0]);
        });
    } else {
        const double sign = outcome ? -1.0 : 1.0;
        for_each_pair(state.num_qubits(), qubit, [&](std::size_t i0, std::size_t i1) {
            p += std::norm((state[i0] + sign * state[i1]) * kSqrt1_2);
        });
    }
    return p;
}

QubitMeasurement measure_qubit(const StateVector& state, int qubit,
                               Basis basis, double randomness) {
    if (qubit < 0 || qubit >= state.num_qubits())
        throw std::invalid_argument("measure_qubit: bad qubit index");

    const double p0 = outcome_probability(state, qubit, basis, 0);
    const int outcome = randomness < p0 ? 0 : 1;
    const double p = outcome ? outcome_probability(state, qubit, basis, 1) : p0;
    if (p < kZeroBranch)
        throw std::logic_error(
            "measure_qubit: zero-probability branch selected");

    std::vector<Cplx> amps(state.amplitudes());
    if (basis == Basis::Rectilinear) {
        for_each_pair(state.num_qubits(), qubit, [&](std::size_t i0, std::size_t i1) {
            amps[outcome ? i0 : i1] = Cplx(0.0, 0.0);
        });
    } else {
        // Collapse onto |+> or |->: both slots carry the projected
        // coefficient, with the sign pattern of the eigenstate.
        const double sign = outcome ? -1.0 : 1.0;
        for_each_pair(state.num_qubits(), qubit, [&](std::size_t i0, std::size_t i1) {
            const Cplx c = (amps[i0] + sign * amps[i1]) * 0.5;
            amps[i0] = c;
            amps[i1] = sign * c;
        });
    }
    StateVector post(state.num_qubits(), std::move(amps));
    post.normalize();
    return QubitMeasurement{outcome, std::move(post), p};
}

StateVector random_state(int num_qubits, Rng& rng) {
    StateVector state(num_qubits);
    for (std::size_t i = 0; i < state.dimension(); ++i)
        state[i] = Cplx(rng.gaussian(), rng.gaussian());
    state.normalize();
    return state;
}

}  // namespace qbc
