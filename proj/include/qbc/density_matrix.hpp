#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qbc/state_vector.hpp"

namespace qbc {

// Hermitian, trace-one, positive semidefinite operator.
struct DensityMatrix {
    Eigen::MatrixXcd entries;

    int dimension() const { return static_cast<int>(entries.rows()); }

    double hermiticity_error() const;
    double trace_error() const;      // |tr - 1|
    double min_eigenvalue() const;

    // Throws std::runtime_error when Hermiticity/trace hold worse than
    // `tol` or an eigenvalue drops below -tol.
    void validate(double tol = 1e-10) const;
};

DensityMatrix pure_density(const StateVector& state);

// Reduced state on the kept qubits of a pure state. `keep_qubits` must be
// strictly increasing and within range.
DensityMatrix partial_trace(const StateVector& state,
                            const std::vector<int>& keep_qubits);

// General mixed-state partial trace over a tensor factorization with the
// given per-factor dimensions; keeps the listed factors (ascending).
DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& factor_dims,
                            const std::vector<int>& keep_factors);

// Reduced state of the trailing factor of a bipartite pure state whose
// leading factor has dimension `local_dim`.
DensityMatrix reduced_remote(const StateVector& state, int local_dim);

// (1/2) * sum |eigenvalues(rho - sigma)|, in [0, 1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

double purity(const DensityMatrix& rho);  // tr(rho^2)

}  // namespace qbc
