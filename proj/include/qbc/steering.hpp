#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qbc/density_matrix.hpp"
#include "qbc/state_vector.hpp"

namespace qbc {

struct EnsembleMember {
    double probability;
    StateVector state;
};

// Convex decomposition of a density matrix into pure states.
struct Ensemble {
    std::vector<EnsembleMember> members;

    int state_qubits() const;
    std::size_t state_dimension() const;
    DensityMatrix mixture() const;
    // Probabilities in [0,1] summing to 1, equal-dimension members.
    void validate(double tol = 1e-10) const;
};

// Raised when the requested remote ensemble is not compatible with the
// held bipartite state (mixture differs from the reduced state beyond
// tolerance, or the local factor is too small for the measurement).
class SteeringInfeasibleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Orthonormal measurement basis of the local factor. Column j is |g_j>.
// Outcomes j < m are mapped onto ensemble member j; columns beyond the
// ensemble size complete the basis and carry outcome probability zero.
struct SteeringBasis {
    Eigen::MatrixXcd vectors;

    int dimension() const { return static_cast<int>(vectors.rows()); }
    double max_orthonormality_error() const;
};

// Builds the local measurement basis that remotely prepares `target` on
// the trailing factor of `global` (leading factor = first `local_qubits`
// qubits). The construction Schmidt-decomposes the global state, solves
// for the mixing coefficients of each subnormalized target member in the
// remote Schmidt basis, completes the resulting isometry to a unitary,
// and maps it back onto the local factor; surplus directions are filled
// with an orthonormal complement. The returned basis is self-verified:
// outcome probabilities must reproduce the target weights and collapsed
// remote states must reach fidelity 1 - 1e-9, else
// SteeringInfeasibleError is thrown.
SteeringBasis steering_basis(const StateVector& global, int local_qubits,
                             const Ensemble& target);

// Born probabilities of all basis outcomes on the local factor.
std::vector<double> outcome_probabilities(const StateVector& state,
                                          int local_qubits,
                                          const SteeringBasis& basis);

struct SteeredCollapse {
    int outcome;
    StateVector post_state;    // |g_j> (x) remote, renormalized
    StateVector remote_state;  // trailing factor after collapse
    double probability;
};

// Projective measurement of the local factor in a steering basis;
// `randomness` is a caller-supplied uniform [0,1) draw.
SteeredCollapse measure_in_basis(const StateVector& state, int local_qubits,
                                 const SteeringBasis& basis,
                                 double randomness);

}  // namespace qbc
