#include "qbc/steering.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace qbc {

namespace {

constexpr double kRankCutoff = 1e-12;
constexpr double kMixtureTol = 1e-9;
constexpr double kFidelityTol = 1e-9;

Eigen::VectorXcd to_eigen(const StateVector& state) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(state.dimension()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = state[i];
    return v;
}

StateVector from_eigen(int num_qubits, const Eigen::VectorXcd& v) {
    std::vector<Cplx> amps(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) amps[i] = v(i);
    return StateVector(num_qubits, std::move(amps));
}

// Coefficient matrix M with M(a, b) = amplitude of |a>_local |b>_remote.
Eigen::MatrixXcd coefficient_matrix(const StateVector& state,
                                    Eigen::Index local_dim) {
    const auto dim = static_cast<Eigen::Index>(state.dimension());
    const Eigen::Index remote_dim = dim / local_dim;
    Eigen::MatrixXcd m(local_dim, remote_dim);
    for (Eigen::Index a = 0; a < local_dim; ++a)
        for (Eigen::Index b = 0; b < remote_dim; ++b)
            m(a, b) = state[static_cast<std::size_t>(a * remote_dim + b)];
    return m;
}

// Appends orthonormal columns to `basis` (whose first `filled` columns are
// already orthonormal) until it is square, via modified Gram-Schmidt with
// one re-orthogonalization pass over unit-vector candidates.
void complete_orthonormal(Eigen::MatrixXcd& basis, Eigen::Index filled) {
    const Eigen::Index dim = basis.rows();
    Eigen::Index next = filled;
    for (Eigen::Index cand = 0; cand < dim && next < dim; ++cand) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Unit(dim, cand);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index k = 0; k < next; ++k)
                v -= basis.col(k) * (basis.col(k).adjoint() * v)(0);
        const double norm = v.norm();
        if (norm > 1e-6) basis.col(next++) = v / norm;
    }
    if (next != dim)
        throw std::logic_error("complete_orthonormal: completion failed");
}

void check_local_split(const StateVector& state, int local_qubits) {
    if (local_qubits < 1 || local_qubits >= state.num_qubits())
        throw std::invalid_argument("steering: bad local factor");
}

}  // namespace

int Ensemble::state_qubits() const {
    if (members.empty()) throw std::invalid_argument("Ensemble: empty");
    return members.front().state.num_qubits();
}

std::size_t Ensemble::state_dimension() const {
    return std::size_t{1} << state_qubits();
}

DensityMatrix Ensemble::mixture() const {
    const auto dim = static_cast<Eigen::Index>(state_dimension());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& member : members) {
        const Eigen::VectorXcd v = to_eigen(member.state);
        rho.noalias() += member.probability * (v * v.adjoint());
    }
    return DensityMatrix{std::move(rho)};
}

void Ensemble::validate(double tol) const {
    if (members.empty()) throw std::invalid_argument("Ensemble: empty");
    double total = 0.0;
    for (const auto& member : members) {
        if (member.probability < -tol || member.probability > 1.0 + tol)
            throw std::invalid_argument("Ensemble: probability out of range");
        if (member.state.dimension() != state_dimension())
            throw std::invalid_argument("Ensemble: mixed dimensions");
        total += member.probability;
    }
    if (std::abs(total - 1.0) > tol)
        throw std::invalid_argument("Ensemble: probabilities do not sum to 1");
    mixture().validate(1e-8);
}

double SteeringBasis::max_orthonormality_error() const {
    const Eigen::MatrixXcd gram = vectors.adjoint() * vectors;
    return (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols()))
        .cwiseAbs()
        .maxCoeff();
}

SteeringBasis steering_basis(const StateVector& global, int local_qubits,
                             const Ensemble& target) {
    check_local_split(global, local_qubits);
    target.validate();

    const auto local_dim = Eigen::Index{1} << local_qubits;
    const int remote_qubits = global.num_qubits() - local_qubits;
    if (target.state_qubits() != remote_qubits)
        throw std::invalid_argument(
            "steering_basis: target dimension does not match the remote "
            "factor");

    // The ensemble must decompose the remote reduced state.
    const DensityMatrix remote = reduced_remote(global, local_dim);
    const double mismatch = trace_distance(target.mixture(), remote);
    if (mismatch > kMixtureTol)
        throw SteeringInfeasibleError(
            "steering infeasible: target mixture differs from the reduced "
            "state by trace distance " +
            std::to_string(mismatch));

    const auto m = static_cast<Eigen::Index>(target.members.size());
    if (m > local_dim)
        throw SteeringInfeasibleError(
            "steering infeasible: more ensemble members than local "
            "dimensions");

    const Eigen::MatrixXcd coeff = coefficient_matrix(global, local_dim);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sing = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sing.size() && sing(rank) > kRankCutoff) ++rank;
    if (rank > m)
        throw SteeringInfeasibleError(
            "steering infeasible: fewer ensemble members than the Schmidt "
            "rank");

    // Mixing coefficients: row j expresses the subnormalized member
    // sqrt(p_j)|psi_j> over the remote Schmidt vectors, divided by the
    // Schmidt coefficients. Columns are orthonormal; rows become
    // orthonormal once the matrix is completed to a unitary.
    Eigen::MatrixXcd mixing = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Eigen::VectorXcd member =
            std::sqrt(std::max(target.members[j].probability, 0.0)) *
            to_eigen(target.members[j].state);
        for (Eigen::Index k = 0; k < rank; ++k)
            mixing(j, k) = (svd.matrixV().col(k).transpose() * member)(0) /
                           sing(k);
    }
    complete_orthonormal(mixing, rank);

    // Local directions: Schmidt vectors first, then an orthonormal
    // complement for the null-padded measurement directions.
    Eigen::MatrixXcd local_dirs(local_dim, local_dim);
    local_dirs.leftCols(rank) = svd.matrixU().leftCols(rank);
    complete_orthonormal(local_dirs, rank);

    Eigen::MatrixXcd basis(local_dim, local_dim);
    basis.leftCols(m) = local_dirs.leftCols(m) * mixing.adjoint();
    complete_orthonormal(basis, m);

    SteeringBasis result{std::move(basis)};

    // Self-check the contract: outcome j must fire with the target weight
    // and leave the remote factor in the target state.
    for (Eigen::Index j = 0; j < m; ++j) {
        const double p = target.members[j].probability;
        const Eigen::VectorXcd collapsed =
            (result.vectors.col(j).adjoint() * coeff).transpose();
        const double q = collapsed.squaredNorm();
        if (std::abs(q - p) > kMixtureTol)
            throw SteeringInfeasibleError(
                "steering infeasible: outcome probability " +
                std::to_string(q) + " does not reproduce the target weight " +
                std::to_string(p));
        if (p > kRankCutoff) {
            const Eigen::VectorXcd targ = to_eigen(target.members[j].state);
            const double fid =
                std::norm((targ.adjoint() * collapsed)(0)) / q;
            if (fid < 1.0 - kFidelityTol)
                throw SteeringInfeasibleError(
                    "steering infeasible: collapsed state fidelity " +
                    std::to_string(fid));
        }
    }
    return result;
}

std::vector<double> outcome_probabilities(const StateVector& state,
                                          int local_qubits,
                                          const SteeringBasis& basis) {
    check_local_split(state, local_qubits);
    const auto local_dim = Eigen::Index{1} << local_qubits;
    if (basis.dimension() != local_dim)
        throw std::invalid_argument(
            "outcome_probabilities: basis does not span the local factor");
    const Eigen::MatrixXcd coeff = coefficient_matrix(state, local_dim);
    std::vector<double> probs(static_cast<std::size_t>(local_dim));
    for (Eigen::Index j = 0; j < local_dim; ++j)
        probs[static_cast<std::size_t>(j)] =
            (basis.vectors.col(j).adjoint() * coeff).squaredNorm();
    return probs;
}

SteeredCollapse measure_in_basis(const StateVector& state, int local_qubits,
                                 const SteeringBasis& basis,
                                 double randomness) {
    const std::vector<double> probs =
        outcome_probabilities(state, local_qubits, basis);

    int outcome = -1;
    double cumulative = 0.0;
    for (std::size_t j = 0; j < probs.size(); ++j) {
        cumulative += probs[j];
        if (randomness < cumulative) {
            outcome = static_cast<int>(j);
            break;
        }
    }
    if (outcome < 0) {
        // Rounding pushed the cumulative sum below the draw; take the last
        // outcome that can actually fire.
        for (std::size_t j = probs.size(); j-- > 0;)
            if (probs[j] > 1e-12) {
                outcome = static_cast<int>(j);
                break;
            }
    }
    if (outcome < 0 || probs[static_cast<std::size_t>(outcome)] < 1e-12)
        throw std::logic_error(
            "measure_in_basis: zero-probability branch selected");

    const auto local_dim = Eigen::Index{1} << local_qubits;
    const Eigen::MatrixXcd coeff = coefficient_matrix(state, local_dim);
    Eigen::VectorXcd remote =
        (basis.vectors.col(outcome).adjoint() * coeff).transpose();
    remote /= remote.norm();

    const int remote_qubits = state.num_qubits() - local_qubits;
    StateVector remote_state = from_eigen(remote_qubits, remote);

    // Post state |g_j> (x) remote.
    std::vector<Cplx> joint(state.dimension());
    const auto remote_dim = static_cast<Eigen::Index>(remote.size());
    for (Eigen::Index a = 0; a < local_dim; ++a)
        for (Eigen::Index b = 0; b < remote_dim; ++b)
            joint[static_cast<std::size_t>(a * remote_dim + b)] =
                basis.vectors(a, outcome) * remote(b);

    return SteeredCollapse{outcome,
                           StateVector(state.num_qubits(), std::move(joint)),
                           std::move(remote_state),
                           probs[static_cast<std::size_t>(outcome)]};
}

}  // namespace qbc
