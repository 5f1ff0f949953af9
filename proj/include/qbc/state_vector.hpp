#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qbc/rng.hpp"

namespace qbc {

using Cplx = std::complex<double>;

// Photon preparation/measurement basis: rectilinear (+) or diagonal (x).
enum class Basis : std::uint8_t { Rectilinear = 0, Diagonal = 1 };

using BasisString = std::vector<Basis>;

inline char basis_char(Basis b) { return b == Basis::Rectilinear ? '+' : 'x'; }

std::string to_string(const BasisString& bases);
BasisString bases_from_string(std::string_view text);
BasisString random_bases(int n, Rng& rng);

// Pure state of `num_qubits` qubits as a dense amplitude vector.
// Indexing is big-endian: qubit 0 owns the most significant bit of the
// amplitude index.
class StateVector {
  public:
    static constexpr int kMaxQubits = 12;

    // |0...0>
    explicit StateVector(int num_qubits);
    StateVector(int num_qubits, std::vector<Cplx> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }

    Cplx& operator[](std::size_t i) { return amplitudes_[i]; }
    const Cplx& operator[](std::size_t i) const { return amplitudes_[i]; }
    const std::vector<Cplx>& amplitudes() const { return amplitudes_; }

    double norm() const;
    void normalize();
    // Throws std::runtime_error when the norm strays from 1 beyond tol.
    void check_normalized(double tol = 1e-10) const;

  private:
    int num_qubits_;
    std::vector<Cplx> amplitudes_;
};

// One of the four BB84 photon preparations.
StateVector prepare_bb84(int bit, Basis basis);

// Kronecker product; `a` supplies the high-order qubits.
StateVector tensor(const StateVector& a, const StateVector& b);

Cplx inner_product(const StateVector& a, const StateVector& b);  // <a|b>
double fidelity(const StateVector& a, const StateVector& b);     // |<a|b>|^2

struct QubitMeasurement {
    int outcome;
    StateVector post_state;
    double probability;  // Born probability of the realized outcome
};

// Projective measurement of one qubit in the given basis. `randomness` is
// a uniform [0,1) draw supplied by the caller; outcome 0 is returned when
// it falls below the outcome-0 Born probability. Selecting a branch of
// numerically zero norm (< 1e-12 probability) throws std::logic_error.
QubitMeasurement measure_qubit(const StateVector& state, int qubit,
                               Basis basis, double randomness);

double outcome_probability(const StateVector& state, int qubit, Basis basis,
                           int outcome);

// Haar-ish random pure state (normalized complex Gaussian amplitudes).
StateVector random_state(int num_qubits, Rng& rng);

}  // namespace qbc
