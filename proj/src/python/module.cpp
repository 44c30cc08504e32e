#include "spinrecon/cli.hpp"
#include "spinrecon/coherent_assistant.hpp"
#include "spinrecon/errors.hpp"
#include "spinrecon/measurement.hpp"
#include "spinrecon/oracle.hpp"
#include "spinrecon/spin_assistant.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace spinrecon;

namespace {

BlochVector to_bloch(const Eigen::Vector3d& v) { return BlochVector::from_vector(v); }

py::dict reconstruction_dict(const measure::ReconstructionReport& r) {
  py::dict d;
  d["estimate"] = r.estimate.as_vector();
  d["covariance"] = r.covariance;
  d["condition_number"] = r.condition_number;
  d["residual"] = r.residual;
  d["determinant"] = r.determinant;
  d["physical"] = r.physical;
  return d;
}

py::dict distribution_dict(const JointDistribution& dist) {
  std::vector<std::pair<int, int>> outcomes;
  for (const auto& o : dist.outcomes) outcomes.emplace_back(o.i, o.k);
  py::dict d;
  d["outcomes"] = outcomes;
  d["probabilities"] = dist.probabilities;
  d["truncation_deficit"] = dist.truncation_deficit;
  return d;
}

JointDistribution distribution_from(const std::vector<std::pair<int, int>>& outcomes,
                                    const std::vector<double>& probabilities) {
  JointDistribution dist;
  for (const auto& [i, k] : outcomes) dist.outcomes.push_back({i, k});
  dist.probabilities = probabilities;
  return dist;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spin-1/2 state reconstruction with a spin or coherent-light assistant";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NotHermitian>(m, "NotHermitian", base.ptr());
  py::register_exception<UnphysicalState>(m, "UnphysicalState", base.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<IllConditioned>(m, "IllConditioned", base.ptr());
  py::register_exception<ConstraintViolation>(m, "ConstraintViolation", base.ptr());

  // quantum core
  m.def("pauli", [](const std::string& axis) {
    if (axis == "x") return pauli(Axis::x);
    if (axis == "y") return pauli(Axis::y);
    if (axis == "z") return pauli(Axis::z);
    throw InvalidArgument("axis must be x, y or z");
  });
  m.def("tensor_product", &tensor_product);
  m.def("hermitian_expm", &hermitian_expm, py::arg("hamiltonian"), py::arg("t"));
  m.def("bloch_to_density", [](const Eigen::Vector3d& v) { return bloch_to_density(to_bloch(v)).matrix(); });
  m.def("density_to_bloch", [](const Matrix& rho) { return density_to_bloch(DensityMatrix(rho)).as_vector(); });
  m.def("coherent_state", [](Complex alpha, int n_max) {
    const CoherentState c = coherent_state(alpha, FockSpace(n_max));
    return py::make_tuple(c.amplitudes, c.norm_deficit);
  }, py::arg("alpha"), py::arg("n_max") = jc::kDefaultNmax);

  // spin assistant
  py::class_<spin::SpinScheme>(m, "SpinScheme")
      .def_readonly("hamiltonian", &spin::SpinScheme::hamiltonian)
      .def_readonly("tau", &spin::SpinScheme::tau)
      .def_readonly("determinant", &spin::SpinScheme::determinant)
      .def_property_readonly("u", [](const spin::SpinScheme& s) { return s.coefficients.u; })
      .def_property_readonly("v", [](const spin::SpinScheme& s) { return s.coefficients.v; });
  m.def("optimal_scheme", &spin::optimal_scheme);
  m.def("rotated_optimal_scheme", &spin::rotated_optimal_scheme);
  m.def("build_scheme", [](const Matrix& h, double tau, const Matrix& assistant, const Matrix& basis) {
    return spin::build_scheme(h, tau, DensityMatrix(assistant), basis);
  }, py::arg("hamiltonian"), py::arg("tau"), py::arg("assistant"), py::arg("basis") = identity(2));
  m.def("optimal_determinant", &spin::optimal_determinant);
  m.def("forward_probabilities", [](const spin::SpinScheme& s, const Eigen::Vector3d& rho) {
    return spin::forward_probabilities(s, to_bloch(rho));
  });
  m.def("reconstruct_bloch", [](const spin::SpinScheme& s, const spin::Probabilities& p, double floor) {
    const auto r = spin::reconstruct_bloch(s, p, floor);
    return py::make_tuple(r.rho.as_vector(), r.residual);
  }, py::arg("scheme"), py::arg("probabilities"), py::arg("det_floor") = kDefaultDeterminantFloor);

  // coherent assistant
  py::class_<jc::JCParams>(m, "JCParams")
      .def(py::init([](double gamma, double omega, Complex alpha, std::optional<int> n_max) {
             return jc::JCParams::make(gamma, omega, alpha, n_max);
           }),
           py::arg("gamma") = 0.1, py::arg("omega") = 0.1, py::arg("alpha") = Complex(1.0, 0.0),
           py::arg("n_max") = py::none())
      .def_readonly("gamma", &jc::JCParams::gamma)
      .def_readonly("omega", &jc::JCParams::omega)
      .def_readonly("alpha", &jc::JCParams::alpha)
      .def_readonly("n_max", &jc::JCParams::n_max)
      .def("poisson_tail", &jc::JCParams::poisson_tail);
  m.def("analytic_M", [](double t, const jc::JCParams& p) {
    const auto s = jc::analytic_M(t, p);
    return py::make_tuple(s.M(), s.b(), s.determinant);
  });
  m.def("triple_sum_determinant", &jc::triple_sum_determinant);
  m.def("determinant_series", [](const jc::JCParams& p, const std::vector<double>& times) {
    return jc::determinant_series(p, times);
  });
  m.def("expectations_analytic", [](double t, const jc::JCParams& p, const Eigen::Vector3d& rho0) {
    return jc::expectations_analytic(t, p, to_bloch(rho0)).as_vector();
  });
  m.def("reconstruct_initial", [](const Eigen::Vector3d& y, double t, const jc::JCParams& p, double floor) {
    const auto r = jc::reconstruct_initial(jc::ExpectationTriple::from_vector(y), jc::analytic_M(t, p), floor);
    return py::make_tuple(r.rho.as_vector(), r.condition_number);
  }, py::arg("y"), py::arg("t"), py::arg("params"), py::arg("det_floor") = kDefaultDeterminantFloor);
  m.def("triplet_rank", [](double t, const jc::JCParams& p, const std::string& which) {
    if (which != "x" && which != "z") throw InvalidArgument("triplet must be x or z");
    return jc::singular_triplet_check(t, p, which == "x" ? jc::Triplet::sigma_x : jc::Triplet::sigma_z).rank;
  }, py::arg("t"), py::arg("params"), py::arg("triplet") = "x");

  // oracle
  m.def("oracle_expectations", [](double t, const jc::JCParams& p, const Eigen::Vector3d& rho0) {
    return oracle::oracle_expectations(t, p, to_bloch(rho0)).as_vector();
  });
  m.def("joint_distribution", [](double t, const jc::JCParams& p, const Eigen::Vector3d& rho0) {
    return distribution_dict(oracle::JCOracle(p).joint_distribution(t, to_bloch(rho0)));
  });
  m.def("spin_joint_distribution", [](const spin::SpinScheme& s, const Eigen::Vector3d& rho) {
    return distribution_dict(oracle::spin_joint_distribution(s, to_bloch(rho)));
  });

  // measurement
  m.attr("RNG_ALGORITHM") = measure::kRngAlgorithm;
  m.def("sample", [](const std::vector<std::pair<int, int>>& outcomes, const std::vector<double>& p,
                     std::uint64_t shots, std::uint64_t seed) {
    const auto rec = measure::sample(distribution_from(outcomes, p), shots, seed);
    std::map<std::pair<int, int>, std::uint64_t> counts;
    for (const auto& [o, c] : rec.counts) counts[{o.i, o.k}] = c;
    return counts;
  }, py::arg("outcomes"), py::arg("probabilities"), py::arg("shots"), py::arg("seed"));
  m.def("reconstruct_coherent", [](const std::map<std::pair<int, int>, std::uint64_t>& counts, double t,
                                   const jc::JCParams& p, double floor) {
    measure::ShotRecord rec;
    for (const auto& [o, c] : counts) {
      rec.counts[{o.first, o.second}] = c;
      rec.shots += c;
    }
    return reconstruction_dict(measure::reconstruct_from_shots(rec, jc::analytic_M(t, p), floor));
  }, py::arg("counts"), py::arg("t"), py::arg("params"), py::arg("det_floor") = kDefaultDeterminantFloor);

  // command line
  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::vector<const char*> argv{"spinrecon"};
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
