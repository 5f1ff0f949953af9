#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbc/density_matrix.hpp"
#include "qbc/experiments.hpp"
#include "qbc/protocol.hpp"
#include "qbc/report_io.hpp"
#include "qbc/steering.hpp"
#include "qbc/strategies.hpp"
#include "qbc/transcript_json.hpp"

namespace py = pybind11;
using namespace qbc;

namespace {

Basis basis_from_char(const std::string& text) {
    if (text == "+") return Basis::Rectilinear;
    if (text == "x" || text == "X") return Basis::Diagonal;
    throw std::invalid_argument("basis must be '+' or 'x'");
}

std::vector<std::vector<Cplx>> matrix_rows(const Eigen::MatrixXcd& m) {
    std::vector<std::vector<Cplx>> rows(m.rows());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        rows[i].resize(m.cols());
        for (Eigen::Index j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    }
    return rows;
}

Ensemble ensemble_from_pairs(
    const std::vector<std::pair<double, StateVector>>& members) {
    Ensemble ensemble;
    for (const auto& [p, state] : members)
        ensemble.members.push_back({p, state});
    return ensemble;
}

ExperimentConfig config_from_kwargs(const std::string& experiment, int n,
                                    long trials, int rounds, int r_weight,
                                    std::uint64_t seed, int workers) {
    ExperimentConfig config;
    config.experiment = experiment_from_name(experiment);
    config.n = n;
    config.trials = trials;
    config.rounds = rounds;
    config.r_weight = r_weight;
    config.master_seed = seed;
    config.workers = workers;
    return config;
}

py::dict report_to_dict(const ExperimentReport& report) {
    py::dict d;
    d["experiment"] = experiment_name(report.config.experiment);
    d["n"] = report.config.n;
    d["trials"] = report.config.trials;
    d["rounds"] = report.config.rounds;
    d["r_weight"] = report.config.r_weight;
    d["seed"] = report.config.master_seed;
    d["workers"] = report.config.workers;
    d["estimate"] = report.estimate;
    d["stderr"] = report.standard_error;
    d["exact"] = report.exact_value
                     ? py::object(py::float_(*report.exact_value))
                     : py::object(py::none());
    d["aborts"] = report.abort_count;
    d["oracle_agrees"] = report.oracle_agrees;
    d["wall_time"] = report.wall_time;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() =
        "Reverse-communication quantum bit-commitment simulator: state "
        "vectors, steering, the protocol state machine and the experiment "
        "harness.";

    py::register_exception<SteeringInfeasibleError>(m, "SteeringInfeasible");

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform", &Rng::uniform)
        .def("coin", &Rng::coin);

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<int>(), py::arg("num_qubits"))
        .def(py::init<int, std::vector<Cplx>>(), py::arg("num_qubits"),
             py::arg("amplitudes"))
        .def_property_readonly("num_qubits", &StateVector::num_qubits)
        .def_property_readonly(
            "amplitudes",
            [](const StateVector& s) { return s.amplitudes(); })
        .def("norm", &StateVector::norm)
        .def("__len__", &StateVector::dimension);

    m.def(
        "prepare_bb84",
        [](int bit, const std::string& basis) {
            return prepare_bb84(bit, basis_from_char(basis));
        },
        py::arg("bit"), py::arg("basis"));
    m.def("tensor", &tensor);
    m.def("fidelity", &fidelity);
    m.def(
        "measure_qubit",
        [](const StateVector& state, int qubit, const std::string& basis,
           double randomness) {
            const auto result =
                measure_qubit(state, qubit, basis_from_char(basis), randomness);
            return py::make_tuple(result.outcome, result.post_state,
                                  result.probability);
        },
        py::arg("state"), py::arg("qubit"), py::arg("basis"),
        py::arg("randomness"));
    m.def(
        "random_state",
        [](int num_qubits, std::uint64_t seed) {
            Rng rng(seed);
            return random_state(num_qubits, rng);
        },
        py::arg("num_qubits"), py::arg("seed"));

    m.def(
        "partial_trace",
        [](const StateVector& state, const std::vector<int>& keep) {
            return matrix_rows(partial_trace(state, keep).entries);
        },
        py::arg("state"), py::arg("keep_qubits"),
        "Reduced density matrix on the kept qubits, as nested lists.");
    m.def("trace_distance", [](const std::vector<std::vector<Cplx>>& a,
                               const std::vector<std::vector<Cplx>>& b) {
        auto to_matrix = [](const std::vector<std::vector<Cplx>>& rows) {
            const Eigen::Index dim = rows.size();
            Eigen::MatrixXcd m(dim, dim);
            for (Eigen::Index i = 0; i < dim; ++i) {
                if (static_cast<Eigen::Index>(rows[i].size()) != dim)
                    throw std::invalid_argument("matrix is not square");
                for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = rows[i][j];
            }
            return DensityMatrix{std::move(m)};
        };
        return trace_distance(to_matrix(a), to_matrix(b));
    });

    py::class_<SteeringBasis>(m, "SteeringBasis")
        .def_property_readonly("dimension", &SteeringBasis::dimension)
        .def_property_readonly("vectors", [](const SteeringBasis& basis) {
            return matrix_rows(basis.vectors);
        });

    m.def(
        "steering_basis",
        [](const StateVector& global, int local_qubits,
           const std::vector<std::pair<double, StateVector>>& target) {
            return steering_basis(global, local_qubits,
                                  ensemble_from_pairs(target));
        },
        py::arg("global_state"), py::arg("local_qubits"), py::arg("target"));
    m.def(
        "measure_in_basis",
        [](const StateVector& state, int local_qubits,
           const SteeringBasis& basis, double randomness) {
            const auto collapse =
                measure_in_basis(state, local_qubits, basis, randomness);
            return py::make_tuple(collapse.outcome, collapse.remote_state,
                                  collapse.probability);
        },
        py::arg("state"), py::arg("local_qubits"), py::arg("basis"),
        py::arg("randomness"));
    m.def("outcome_probabilities",
          [](const StateVector& state, int local_qubits,
             const SteeringBasis& basis) {
              return outcome_probabilities(state, local_qubits, basis);
          });

    m.def("parity", [](const std::string& r, const std::string& s) {
        return parity(bits_from_string(r), bits_from_string(s));
    });
    m.def("exclude", [](const std::string& s, int x) {
        return to_string(exclude(bits_from_string(s), x));
    });

    m.def(
        "run_round",
        [](const std::string& alice, const std::string& bob, int n,
           const std::string& r, std::uint64_t round_seed) {
            ProtocolParams params;
            params.n = n;
            params.r = bits_from_string(r);
            auto committer = make_committer(alice);
            auto acceptor = make_acceptor(bob);
            const Transcript t =
                run_round(*committer, *acceptor, params, round_seed);
            return transcript_to_json(t);
        },
        py::arg("alice"), py::arg("bob"), py::arg("n"), py::arg("r"),
        py::arg("round_seed"),
        "One protocol round; returns the transcript as a JSON string.");

    m.def(
        "run_experiment",
        [](const std::string& experiment, int n, long trials, int rounds,
           int r_weight, std::uint64_t seed, int workers) {
            return report_to_dict(run_experiment(config_from_kwargs(
                experiment, n, trials, rounds, r_weight, seed, workers)));
        },
        py::arg("experiment"), py::arg("n") = 8, py::arg("trials") = 1000,
        py::arg("rounds") = 1, py::arg("r_weight") = 1, py::arg("seed") = 1,
        py::arg("workers") = 1);

    m.def(
        "enumerate_oracle",
        [](const std::string& experiment, int n, int k) {
            return enumerate_oracle(experiment_from_name(experiment), n, k);
        },
        py::arg("experiment"), py::arg("n"), py::arg("k") = 0);
    m.def("conceal_closed_form", &conceal_closed_form, py::arg("k"));

    m.def("epr_pairs_state", &epr_pairs_state, py::arg("n"));
    m.def(
        "mlc_open_statistics",
        [](int n, int chosen_b, long trials, std::uint64_t seed) {
            const auto plan = mlc_build_plan(
                n, product_basis_ensemble(n - 1, Basis::Rectilinear),
                product_basis_ensemble(n - 1, Basis::Diagonal));
            Rng rng(seed);
            std::vector<long> counts(plan.ensemble_dimension, 0);
            double min_fidelity = 1.0;
            for (long i = 0; i < trials; ++i) {
                const auto opening = mlc_open(plan, plan.held, chosen_b, rng);
                ++counts[opening.outcome];
                min_fidelity =
                    std::min(min_fidelity, opening.fidelity_to_target);
            }
            return py::make_tuple(counts, min_fidelity);
        },
        py::arg("n"), py::arg("chosen_b"), py::arg("trials"), py::arg("seed"),
        "Outcome histogram and worst fidelity of repeated openings.");
}
