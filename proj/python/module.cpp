#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fbsim/commands.hpp"
#include "fbsim/expr.hpp"
#include "fbsim/oracle.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace fbsim;

PYBIND11_MODULE(feedbacksim, m) {
  m.doc() = "effective open-system generators from measurement-plus-feedback channels";

  py::register_exception<NotCompletelyPositive>(m, "NotCompletelyPositiveError");
  py::register_exception<PassiveBudgetError>(m, "PassiveBudgetErrorException");
  py::register_exception<NumericError>(m, "NumericErrorException");

  py::enum_<SubsystemKind>(m, "SubsystemKind")
      .value("qubit", SubsystemKind::Qubit)
      .value("fock", SubsystemKind::Fock);

  py::class_<Subsystem>(m, "Subsystem")
      .def(py::init<std::string, SubsystemKind, int>(), "label"_a, "kind"_a, "dim"_a)
      .def_readonly("label", &Subsystem::label)
      .def_readonly("kind", &Subsystem::kind)
      .def_readonly("dim", &Subsystem::dim);

  py::class_<SpaceSignature>(m, "Space")
      .def(py::init<std::vector<Subsystem>>(), "subsystems"_a)
      .def_static("single_fock", &SpaceSignature::single_fock, "label"_a, "dim"_a)
      .def_static("two_fock", &SpaceSignature::two_fock, "dim"_a)
      .def_property_readonly("total_dim", &SpaceSignature::total_dim)
      .def("__repr__", &SpaceSignature::describe);

  py::class_<OperatorMatrix>(m, "Operator")
      .def(py::init<SpaceSignature, Matrix>(), "space"_a, "matrix"_a)
      .def_readonly("space", &OperatorMatrix::space)
      .def_property_readonly("matrix",
                             [](const OperatorMatrix& o) { return o.mat; })
      .def("is_hermitian", &OperatorMatrix::is_hermitian)
      .def("adjoint", &OperatorMatrix::adjoint);

  m.def("build_generator",
        py::overload_cast<const SpaceSignature&, const std::string&, const std::string&>(
            &build_generator),
        "space"_a, "label"_a, "generator"_a);
  m.def(
      "evaluate_expr",
      [](const std::string& text, const SpaceSignature& space) {
        return evaluate_expr(text, space);
      },
      "text"_a, "space"_a);
  m.def("commutator", &commutator);
  m.def("anticommutator", &anticommutator);

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<SpaceSignature, Matrix>(), "space"_a, "matrix"_a)
      .def_readonly("space", &DensityMatrix::space)
      .def_property_readonly("matrix",
                             [](const DensityMatrix& r) { return r.mat; })
      .def("validate", &DensityMatrix::validate)
      .def("truncation_metric", &DensityMatrix::truncation_metric);

  m.def("vacuum_state", &vacuum_state);
  m.def("fock_state", &fock_state, "space"_a, "occupations"_a);
  m.def("coherent_product_state", &coherent_product_state, "space"_a, "alphas"_a);
  m.def("thermal_product_state", &thermal_product_state, "space"_a, "nbar"_a);
  m.def("expectation", &expectation, "rho"_a, "op"_a);

  py::class_<Dissipator>(m, "Dissipator")
      .def(py::init<double, OperatorMatrix>(), "rate"_a, "jump"_a)
      .def_readonly("rate", &Dissipator::rate)
      .def_readonly("jump", &Dissipator::jump);

  py::class_<LindbladSpec>(m, "LindbladSpec")
      .def(py::init<SpaceSignature, OperatorMatrix, std::vector<Dissipator>>(),
           "space"_a, "hamiltonian"_a, "dissipators"_a)
      .def_static("zero", &LindbladSpec::zero)
      .def_property_readonly("space", &LindbladSpec::space)
      .def_property_readonly("hamiltonian", &LindbladSpec::hamiltonian)
      .def_property_readonly("dissipators", &LindbladSpec::dissipators);

  m.def("apply_generator", &apply_generator, "spec"_a, "rho"_a);
  m.def("superoperator_matrix", &superoperator_matrix);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("times", &Trajectory::times)
      .def_readonly("names", &Trajectory::names)
      .def_readonly("columns", &Trajectory::columns)
      .def_readonly("truncation_metric", &Trajectory::truncation_metric)
      .def("column", &Trajectory::column);

  m.def(
      "evolve",
      [](const LindbladSpec& spec, const DensityMatrix& rho0, double t_final, double dt,
         const std::vector<std::pair<std::string, OperatorMatrix>>& observables,
         int stride, bool refine) {
        EvolveOptions opts;
        for (const auto& [name, op] : observables) opts.observables.push_back({name, op});
        opts.stride = stride;
        opts.refine = refine;
        return evolve(spec, rho0, t_final, dt, opts);
      },
      "spec"_a, "rho0"_a, "t_final"_a, "dt"_a, "observables"_a = py::list(),
      "stride"_a = 1, "refine"_a = true);

  py::class_<SteadyStateResult>(m, "SteadyStateResult")
      .def_readonly("rho", &SteadyStateResult::rho)
      .def_readonly("residual_norm", &SteadyStateResult::residual_norm)
      .def_readonly("multiplicity", &SteadyStateResult::multiplicity)
      .def_readonly("truncation_metric", &SteadyStateResult::truncation_metric);

  m.def(
      "steady_state",
      [](const LindbladSpec& spec, std::optional<DensityMatrix> guess,
         double residual_tol) {
        SteadyStateOptions opts;
        opts.guess = std::move(guess);
        opts.residual_tol = residual_tol;
        return steady_state(spec, opts);
      },
      "spec"_a, "guess"_a = py::none(), "residual_tol"_a = 1e-10);

  py::enum_<FeedbackChannel::Mode>(m, "ChannelMode")
      .value("probe", FeedbackChannel::Mode::Probe)
      .value("passive", FeedbackChannel::Mode::Passive);

  py::class_<FeedbackChannel>(m, "FeedbackChannel")
      .def(py::init<OperatorMatrix, double, OperatorMatrix, double,
                    FeedbackChannel::Mode>(),
           "X"_a, "meas_rate"_a, "Y"_a, "gain"_a,
           "mode"_a = FeedbackChannel::Mode::Probe)
      .def_readonly("X", &FeedbackChannel::X)
      .def_readonly("Y", &FeedbackChannel::Y)
      .def_readonly("meas_rate", &FeedbackChannel::meas_rate)
      .def_readonly("gain", &FeedbackChannel::gain)
      .def_readonly("mode", &FeedbackChannel::mode);

  py::class_<GeneratorDelta>(m, "GeneratorDelta")
      .def_readonly("hamiltonian_term", &GeneratorDelta::hamiltonian_term)
      .def_readonly("dissipator_terms", &GeneratorDelta::dissipator_terms)
      .def("superop", &GeneratorDelta::superop)
      .def("apply", &GeneratorDelta::apply, "rho"_a);

  py::enum_<DeltaForm>(m, "DeltaForm")
      .value("compact", DeltaForm::Compact)
      .value("expanded", DeltaForm::Expanded);

  m.def("channel_generator", &channel_generator, "channel"_a,
        "form"_a = DeltaForm::Compact);
  m.def("compose_feedback", &compose_feedback, "base"_a, "channels"_a);
  m.def(
      "certify_budget",
      [](const LindbladSpec& base, const FeedbackChannel& ch) {
        BudgetReport rep = certify_budget(base, ch);
        return py::make_tuple(rep.ok, rep.text);
      },
      "base"_a, "channel"_a);
  m.def("squeeze_feedback", &squeeze_feedback, "kappa"_a, "fock_dim"_a);
  m.def("qnd_cross_channels", &qnd_cross_channels, "x_a"_a, "x_b"_a, "gamma"_a);
  m.def(
      "discrete_map_oracle",
      [](const FeedbackChannel& ch, const DensityMatrix& rho, double dt) {
        return discrete_map_oracle(ch, rho, dt);
      },
      "channel"_a, "rho"_a, "dt"_a);

  py::class_<BilinearDephasingProblem>(m, "BilinearDephasingProblem")
      .def(py::init<double, double, double>(), "g"_a, "gamma_a"_a, "gamma_b"_a)
      .def_readonly("g", &BilinearDephasingProblem::g)
      .def_readonly("gamma_a", &BilinearDephasingProblem::gamma_a)
      .def_readonly("gamma_b", &BilinearDephasingProblem::gamma_b);

  py::class_<FeedbackWitness>(m, "FeedbackWitness")
      .def_readonly("meas_rate_a", &FeedbackWitness::meas_rate_a)
      .def_readonly("meas_rate_b", &FeedbackWitness::meas_rate_b)
      .def_readonly("gain_a_to_b", &FeedbackWitness::gain_a_to_b)
      .def_readonly("gain_b_to_a", &FeedbackWitness::gain_b_to_a)
      .def("channels", &FeedbackWitness::channels, "x_a"_a, "x_b"_a);

  py::class_<BilinearVerdict>(m, "BilinearVerdict")
      .def_readonly("separable", &BilinearVerdict::separable)
      .def_readonly("witness", &BilinearVerdict::witness);

  m.def("bilinear_verdict", &bilinear_verdict, "problem"_a);
  m.def("multiterm_sufficient", &multiterm_sufficient, "terms"_a,
        "total_gamma_a"_a = py::none(), "total_gamma_b"_a = py::none());

  py::class_<SqueezingProblem>(m, "SqueezingProblem")
      .def(py::init<double, double, double>(), "g12"_a, "gamma_minus"_a,
           "gamma_plus"_a);

  py::class_<SqueezingVerdict>(m, "SqueezingVerdict")
      .def_readonly("separable_constructible", &SqueezingVerdict::separable_constructible)
      .def_readonly("v_ss", &SqueezingVerdict::v_ss)
      .def_readonly("entangled_steady", &SqueezingVerdict::entangled_steady);

  m.def("squeezing_verdict", &squeezing_verdict, "problem"_a);
  m.def("duan_witness", &duan_witness, "rho"_a);
  m.def("noisy_squeezing_spec", &noisy_squeezing_spec, "problem"_a, "fock_dim"_a);
  m.def("moment_steady_value", &moment_steady_value, "problem"_a);

  m.attr("__version__") = "0.1.0";
}
