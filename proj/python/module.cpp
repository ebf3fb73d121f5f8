#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symvmf/bench.hpp"
#include "symvmf/ebsdmap.hpp"
#include "symvmf/errors.hpp"
#include "symvmf/ginv.hpp"
#include "symvmf/io.hpp"

namespace py = pybind11;
using namespace symvmf;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Group-invariant von Mises-Fisher estimation on S3";

  py::register_exception<Error>(m, "SymvmfError");

  py::class_<UnitQuaternion>(m, "UnitQuaternion")
      .def(py::init<double, double, double, double>(), py::arg("q1"),
           py::arg("q2"), py::arg("q3"), py::arg("q4"))
      .def_readonly("q1", &UnitQuaternion::q1)
      .def_readonly("q2", &UnitQuaternion::q2)
      .def_readonly("q3", &UnitQuaternion::q3)
      .def_readonly("q4", &UnitQuaternion::q4)
      .def("dot", &UnitQuaternion::dot)
      .def("as_tuple",
           [](const UnitQuaternion& q) {
             return py::make_tuple(q.q1, q.q2, q.q3, q.q4);
           })
      .def("__repr__", [](const UnitQuaternion& q) {
        return "UnitQuaternion(" + std::to_string(q.q1) + ", " +
               std::to_string(q.q2) + ", " + std::to_string(q.q3) + ", " +
               std::to_string(q.q4) + ")";
      });

  py::class_<EulerAngles>(m, "EulerAngles")
      .def(py::init([](double a, double b, double g) {
             return EulerAngles{a, b, g};
           }),
           py::arg("alpha"), py::arg("beta"), py::arg("gamma"))
      .def_readonly("alpha", &EulerAngles::alpha)
      .def_readonly("beta", &EulerAngles::beta)
      .def_readonly("gamma", &EulerAngles::gamma);

  py::class_<RodriguesVector>(m, "RodriguesVector")
      .def(py::init([](double d1, double d2, double d3) {
             return RodriguesVector{d1, d2, d3};
           }),
           py::arg("d1"), py::arg("d2"), py::arg("d3"))
      .def_readonly("d1", &RodriguesVector::d1)
      .def_readonly("d2", &RodriguesVector::d2)
      .def_readonly("d3", &RodriguesVector::d3);

  m.def("euler_to_quat", &euler_to_quat);
  m.def("quat_to_euler", &quat_to_euler);
  m.def("rodrigues_to_quat", &rodrigues_to_quat);
  m.def("quat_to_rodrigues", &quat_to_rodrigues);
  m.def("quat_compose", &quat_compose);
  m.def("quat_inverse", &quat_inverse);
  m.def("rotation_angle_between", &rotation_angle_between);

  py::class_<SymmetryGroup>(m, "SymmetryGroup")
      .def_property_readonly("name", &SymmetryGroup::name)
      .def_property_readonly("order", &SymmetryGroup::order)
      .def_property_readonly("antipodal_extended", &SymmetryGroup::antipodal_extended)
      .def_property_readonly("sign_closed", &SymmetryGroup::sign_closed)
      .def("element", &SymmetryGroup::element)
      .def("elements", &SymmetryGroup::elements);

  m.def("builtin_group", &builtin_group, py::arg("name"),
        py::arg("antipodal") = false);
  m.def("load_group", &load_group);
  m.def("antipodal_extension", &antipodal_extension);
  m.def("sign_closure", &sign_closure);
  m.def("apply", &apply);
  m.def("in_fundamental_zone_cubic", &in_fundamental_zone_cubic);
  m.def("in_fundamental_zone_general", &in_fundamental_zone_general);
  m.def(
      "map_to_fz",
      [](const UnitQuaternion& q, const SymmetryGroup& grp) {
        const FzMapping f = map_to_fz(q, grp);
        return py::make_tuple(f.q, f.element_index);
      },
      py::arg("q"), py::arg("group"));
  m.def("disorientation", &disorientation);

  py::class_<VmfParams>(m, "VmfParams")
      .def(py::init([](const UnitQuaternion& mu, double kappa) {
             return VmfParams{mu, kappa, false};
           }),
           py::arg("mu"), py::arg("kappa"))
      .def_readonly("mu", &VmfParams::mu)
      .def_readonly("kappa", &VmfParams::kappa)
      .def_readonly("kappa_saturated", &VmfParams::kappa_saturated);

  m.def("log_norm_const", &log_norm_const);
  m.def("log_density", &log_density);
  m.def("bessel_ratio_A", &bessel_ratio_A);
  m.def("bessel_ratio_A_inv",
        [](double r) { return bessel_ratio_A_inv(r).kappa; });
  m.def("ml_estimate", &ml_estimate);
  m.def("sample", &sample, py::arg("params"), py::arg("n"), py::arg("seed"));

  py::class_<GInvariantVmf>(m, "GInvariantVmf")
      .def(py::init([](const SymmetryGroup& g, const VmfParams& p) {
             return GInvariantVmf{g, p};
           }),
           py::arg("group"), py::arg("params"))
      .def_readonly("group", &GInvariantVmf::group)
      .def_readonly("params", &GInvariantVmf::params);

  py::enum_<EmInit>(m, "EmInit")
      .value("FzMl", EmInit::FzMl)
      .value("RandomRestarts", EmInit::RandomRestarts);

  py::class_<EmConfig>(m, "EmConfig")
      .def(py::init<>())
      .def_readwrite("tolerance", &EmConfig::tolerance)
      .def_readwrite("max_iterations", &EmConfig::max_iterations)
      .def_readwrite("init", &EmConfig::init)
      .def_readwrite("restarts", &EmConfig::restarts)
      .def_readwrite("seed", &EmConfig::seed);

  py::class_<EmResult>(m, "EmResult")
      .def_readonly("params", &EmResult::params)
      .def_readonly("params_raw", &EmResult::params_raw)
      .def_readonly("log_likelihood_trace", &EmResult::log_likelihood_trace)
      .def_readonly("iterations", &EmResult::iterations)
      .def_readonly("converged", &EmResult::converged);

  m.def("log_density_ginv", &log_density_ginv);
  m.def("sample_ginv", &sample_ginv, py::arg("model"), py::arg("n"),
        py::arg("seed"));
  m.def("em_fit", &em_fit, py::arg("samples"), py::arg("group"),
        py::arg("config") = EmConfig{});
  m.def("modified_ml_fit", &modified_ml_fit);
  m.def("kde_ginv", &kde_ginv, py::arg("samples"), py::arg("group"),
        py::arg("smoothing_kappa"), py::arg("x"));

  m.def("load_quaternion_csv", &load_quaternion_csv);
  m.def("save_quaternion_csv", &save_quaternion_csv);

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("kappa_min", &SweepConfig::kappa_min)
      .def_readwrite("kappa_max", &SweepConfig::kappa_max)
      .def_readwrite("steps", &SweepConfig::steps)
      .def_readwrite("n", &SweepConfig::n)
      .def_readwrite("trials", &SweepConfig::trials)
      .def_readwrite("group", &SweepConfig::group)
      .def_readwrite("seed", &SweepConfig::seed)
      .def_readwrite("threads", &SweepConfig::threads);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("kappa_o", &SweepRow::kappa_o)
      .def_property_readonly(
          "estimator", [](const SweepRow& r) { return estimator_name(r.estimator); })
      .def_readonly("inner_raw", &SweepRow::inner_raw)
      .def_readonly("inner_sym", &SweepRow::inner_sym)
      .def_readonly("kappa_hat_mean", &SweepRow::kappa_hat_mean)
      .def_readonly("kappa_bias", &SweepRow::kappa_bias)
      .def_readonly("se_inner", &SweepRow::se_inner)
      .def_readonly("se_kappa", &SweepRow::se_kappa);

  m.def("run_sweep", &run_sweep, py::call_guard<py::gil_scoped_release>());
  m.def("emit_report", &emit_report);

  py::class_<OrientationMap>(m, "OrientationMap")
      .def_readonly("width", &OrientationMap::width)
      .def_readonly("height", &OrientationMap::height)
      .def_readonly("labels", &OrientationMap::labels)
      .def("pixel", &OrientationMap::at, py::arg("x"), py::arg("y"));

  py::class_<GrainRecord>(m, "GrainRecord")
      .def_readonly("id", &GrainRecord::id)
      .def_readonly("pixel_count", &GrainRecord::pixel_count)
      .def_readonly("mean", &GrainRecord::mean)
      .def_readonly("kappa", &GrainRecord::kappa)
      .def_readonly("kappa_saturated", &GrainRecord::kappa_saturated)
      .def_readonly("iterations", &GrainRecord::iterations)
      .def_readonly("converged", &GrainRecord::converged)
      .def_readonly("mean_disorientation", &GrainRecord::mean_disorientation)
      .def_readonly("fit_failed", &GrainRecord::fit_failed);

  m.def("load_map", &load_map);
  m.def("save_map", &save_map);
  m.def("segment_grains", &segment_grains, py::arg("map"), py::arg("group"),
        py::arg("threshold"), py::arg("min_size"));
  m.def("index_grains", &index_grains, py::arg("map"), py::arg("group"),
        py::arg("config") = EmConfig{}, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("emit_outputs", &emit_outputs);

  py::class_<SynthMap>(m, "SynthMap")
      .def_readonly("map", &SynthMap::map)
      .def_readonly("true_means", &SynthMap::true_means)
      .def_readonly("true_labels", &SynthMap::true_labels);

  m.def("synth_map", &synth_map, py::arg("grains"), py::arg("width"),
        py::arg("height"), py::arg("kappa"), py::arg("group"), py::arg("seed"));
}
