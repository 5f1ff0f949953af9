#include "qbc/density_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qbc {

double DensityMatrix::hermiticity_error() const {
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::trace_error() const {
    return std::abs(entries.trace() - Cplx(1.0, 0.0));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        Eigen::MatrixXcd((entries + entries.adjoint()) * 0.5),
        Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::validate(double tol) const {
    if (entries.rows() != entries.cols() || entries.rows() < 1)
        throw std::runtime_error("DensityMatrix: not square");
    if (hermiticity_error() > tol)
        throw std::runtime_error("DensityMatrix: not Hermitian");
    if (trace_error() > tol)
        throw std::runtime_error("DensityMatrix: trace is not one");
    if (min_eigenvalue() < -tol)
        throw std::runtime_error("DensityMatrix: negative eigenvalue");
}

DensityMatrix pure_density(const StateVector& state) {
    const auto dim = static_cast<Eigen::Index>(state.dimension());
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = state[i];
    return DensityMatrix{v * v.adjoint()};
}

DensityMatrix partial_trace(const StateVector& state,
                            const std::vector<int>& keep_qubits) {
    const int n = state.num_qubits();
    std::vector<bool> kept(n, false);
    for (std::size_t i = 0; i < keep_qubits.size(); ++i) {
        const int q = keep_qubits[i];
        if (q < 0 || q >= n || kept[q] ||
            (i > 0 && keep_qubits[i] <= keep_qubits[i - 1]))
            throw std::invalid_argument(
                "partial_trace: keep set must be strictly increasing and in "
                "range");
        kept[q] = true;
    }
    if (keep_qubits.empty() || keep_qubits.size() == static_cast<std::size_t>(n))
        throw std::invalid_argument("partial_trace: nothing to trace out");

    const int nk = static_cast<int>(keep_qubits.size());
    const int nt = n - nk;
    const std::size_t dk = std::size_t{1} << nk;
    const std::size_t dt = std::size_t{1} << nt;

    // Masks to scatter (kept, traced) sub-indices back into a full index,
    // preserving big-endian qubit order within each group.
    std::vector<std::size_t> keep_bit(nk), trace_bit(nt);
    {
        int ik = 0, it = 0;
        for (int q = 0; q < n; ++q) {
            const std::size_t bit = std::size_t{1} << (n - 1 - q);
            if (kept[q])
                keep_bit[ik++] = bit;
            else
                trace_bit[it++] = bit;
        }
    }
    auto scatter = [](const std::vector<std::size_t>& bits, std::size_t sub) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (sub & (std::size_t{1} << (bits.size() - 1 - i))) idx |= bits[i];
        return idx;
    };

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dk, dk);
    Eigen::VectorXcd column(static_cast<Eigen::Index>(dk));
    for (std::size_t t = 0; t < dt; ++t) {
        const std::size_t tpart = scatter(trace_bit, t);
        for (std::size_t a = 0; a < dk; ++a)
            column(static_cast<Eigen::Index>(a)) =
                state[scatter(keep_bit, a) | tpart];
        rho.noalias() += column * column.adjoint();
    }
    return DensityMatrix{std::move(rho)};
}

DensityMatrix partial_trace(const DensityMatrix& rho,
                            const std::vector<int>& factor_dims,
                            const std::vector<int>& keep_factors) {
    std::size_t total = 1;
    for (int d : factor_dims) {
        if (d < 1) throw std::invalid_argument("partial_trace: bad factor");
        total *= static_cast<std::size_t>(d);
    }
    if (total != static_cast<std::size_t>(rho.dimension()))
        throw std::invalid_argument(
            "partial_trace: factorization does not match the dimension");

    const int nf = static_cast<int>(factor_dims.size());
    std::vector<bool> kept(nf, false);
    std::size_t dk = 1, dt = 1;
    for (std::size_t i = 0; i < keep_factors.size(); ++i) {
        const int f = keep_factors[i];
        if (f < 0 || f >= nf || kept[f] ||
            (i > 0 && keep_factors[i] <= keep_factors[i - 1]))
            throw std::invalid_argument("partial_trace: bad keep set");
        kept[f] = true;
        dk *= factor_dims[f];
    }
    for (int f = 0; f < nf; ++f)
        if (!kept[f]) dt *= factor_dims[f];
    if (dk == 1 || dt == 1)
        throw std::invalid_argument("partial_trace: nothing to trace out");

    // Strides of each factor in the row-major mixed-radix index.
    std::vector<std::size_t> stride(nf, 1);
    for (int f = nf - 2; f >= 0; --f)
        stride[f] = stride[f + 1] * factor_dims[f + 1];

    auto expand = [&](std::size_t sub, bool keep_group) {
        std::size_t idx = 0;
        for (int f = nf - 1; f >= 0; --f) {
            if (kept[f] != keep_group) continue;
            idx += (sub % factor_dims[f]) * stride[f];
            sub /= factor_dims[f];
        }
        return idx;
    };

    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (std::size_t t = 0; t < dt; ++t) {
        const std::size_t tpart = expand(t, false);
        for (std::size_t a = 0; a < dk; ++a) {
            const std::size_t row = expand(a, true) + tpart;
            for (std::size_t b = 0; b < dk; ++b)
                out(a, b) += rho.entries(row, expand(b, true) + tpart);
        }
    }
    return DensityMatrix{std::move(out)};
}

DensityMatrix reduced_remote(const StateVector& state, int local_dim) {
    const std::size_t dim = state.dimension();
    if (local_dim < 1 || dim % static_cast<std::size_t>(local_dim) != 0)
        throw std::invalid_argument("reduced_remote: bad local dimension");
    const std::size_t remote_dim = dim / static_cast<std::size_t>(local_dim);
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(remote_dim, remote_dim);
    Eigen::VectorXcd row(static_cast<Eigen::Index>(remote_dim));
    for (std::size_t a = 0; a < static_cast<std::size_t>(local_dim); ++a) {
        for (std::size_t b = 0; b < remote_dim; ++b)
            row(static_cast<Eigen::Index>(b)) = state[a * remote_dim + b];
        rho.noalias() += row * row.adjoint();
    }
    return DensityMatrix{std::move(rho)};
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dimension() != sigma.dimension())
        throw std::invalid_argument("trace_distance: dimension mismatch");
    Eigen::MatrixXcd diff = rho.entries - sigma.entries;
    diff = (diff + diff.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double purity(const DensityMatrix& rho) {
    return (rho.entries * rho.entries).trace().real();
}

}  // namespace qbc
