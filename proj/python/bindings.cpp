#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bucketree/cli.hpp"
#include "bucketree/enumerate.hpp"
#include "bucketree/error.hpp"
#include "bucketree/evolve.hpp"
#include "bucketree/rng.hpp"
#include "bucketree/stats.hpp"
#include "bucketree/urn.hpp"
#include "bucketree/verify.hpp"

namespace py = pybind11;
using namespace bucketree;

// Rational <-> fractions.Fraction (ints are accepted on input).
namespace pybind11::detail {

template <>
struct type_caster<Rational> {
  PYBIND11_TYPE_CASTER(Rational, const_name("fractions.Fraction"));

  bool load(handle src, bool) {
    if (!src || src.is_none()) return false;
    if (PyBool_Check(src.ptr())) return false;
    if (!py::hasattr(src, "numerator") || !py::hasattr(src, "denominator")) return false;
    if (!PyLong_Check(src.ptr()) && !py::isinstance(src, py::module_::import("fractions").attr("Fraction"))) {
      return false;
    }
    const std::string num = py::str(src.attr("numerator"));
    const std::string den = py::str(src.attr("denominator"));
    value = Rational(Integer(num), Integer(den));
    value.canonicalize();
    return true;
  }

  static handle cast(const Rational& r, return_value_policy, handle) {
    auto as_int = [](const Integer& z) {
      return py::reinterpret_steal<py::object>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
    };
    const Integer num = r.get_num();
    const Integer den = r.get_den();
    return py::module_::import("fractions").attr("Fraction")(as_int(num), as_int(den)).release();
  }
};

}  // namespace pybind11::detail

namespace {

std::map<std::string, Rational> probabilities(const TreeDistribution& d) { return d.probabilities; }

py::dict urn_dict(const UrnState& u) {
  py::dict d;
  d["white"] = u.white;
  d["black"] = u.black;
  d["sigma"] = u.sigma;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bucket increasing trees: exact enumeration, sampling, checks and urn limit laws.";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
  py::register_exception<DecodeError>(m, "DecodeError", PyExc_ValueError);

  py::class_<FamilySpec>(m, "FamilySpec")
      .def_static("bucket_recursive", &FamilySpec::bucket_recursive, py::arg("b"))
      .def_static("bd_ary", &FamilySpec::bd_ary, py::arg("b"), py::arg("d"))
      .def_static("b_alpha_port", &FamilySpec::b_alpha_port, py::arg("b"), py::arg("alpha"))
      .def_property_readonly("bucket_size", &FamilySpec::bucket_size)
      .def_property_readonly("parameter", &FamilySpec::parameter)
      .def_property_readonly("sigma", &FamilySpec::sigma)
      .def_property_readonly("kappa", &FamilySpec::kappa)
      .def_property_readonly("affine_c1", &FamilySpec::affine_c1)
      .def_property_readonly("affine_c2", &FamilySpec::affine_c2)
      .def("connectivity", &FamilySpec::connectivity, py::arg("n"))
      .def("__eq__", [](const FamilySpec& a, const FamilySpec& b) { return a == b; })
      .def("__repr__", &FamilySpec::describe);

  py::class_<WeightModel>(m, "WeightModel")
      .def_property_readonly("bucket_size", &WeightModel::bucket_size)
      .def_property_readonly("psi", &WeightModel::psi)
      .def("phi_at", &WeightModel::phi_at, py::arg("k"))
      .def("psi_at", &WeightModel::psi_at, py::arg("k"))
      .def("scaled", &WeightModel::scaled, py::arg("a"), py::arg("s"))
      .def("__repr__", &WeightModel::describe);

  m.def("weights_of", &weights_of, py::arg("spec"));
  m.def("parse_weights", &cli::parse_weights, py::arg("psi"), py::arg("phi"),
        py::arg("b") = std::nullopt);

  m.def("enumerate_shapes",
        [](int b, int n) {
          std::vector<std::string> out;
          for (const auto& s : enumerate_shapes(b, n)) out.push_back(canonical_encode(s));
          return out;
        },
        py::arg("b"), py::arg("n"));
  m.def("total_weights",
        [](const WeightModel& w, int n_max) { return total_weights(w, n_max); },
        py::arg("model"), py::arg("n_max"));
  m.def("closed_form_Tn", &closed_form_Tn, py::arg("spec"), py::arg("n"));
  m.def("tree_json",
        [](const std::string& encoding) { return to_json(canonical_decode(encoding)).dump(); },
        py::arg("encoding"));

  m.def("sample_trees",
        [](const FamilySpec& spec, int n, int count, std::uint64_t seed) {
          CounterRng rng(seed);
          std::vector<std::string> out;
          for (int i = 0; i < count; ++i) out.push_back(canonical_encode(sample_tree(spec, n, rng)));
          return out;
        },
        py::arg("spec"), py::arg("n"), py::arg("count") = 1, py::arg("seed") = kDefaultSeed);
  m.def("exact_distribution",
        [](const FamilySpec& spec, int n) { return probabilities(exact_distribution(spec, n)); },
        py::arg("spec"), py::arg("n"));

  py::class_<BalanceReport>(m, "BalanceReport")
      .def_readonly("n", &BalanceReport::n)
      .def_readonly("constant", &BalanceReport::constant)
      .def_readonly("passed", &BalanceReport::pass);
  py::class_<AffineRatioReport>(m, "AffineRatioReport")
      .def_readonly("c1", &AffineRatioReport::c1)
      .def_readonly("c2", &AffineRatioReport::c2)
      .def_readonly("first_failing_n", &AffineRatioReport::first_failing_n)
      .def_readonly("totals", &AffineRatioReport::totals)
      .def_readonly("passed", &AffineRatioReport::pass);
  py::class_<LawComparison>(m, "LawComparison")
      .def_readonly("shapes_compared", &LawComparison::shapes_compared)
      .def_readonly("first_mismatch", &LawComparison::first_mismatch)
      .def_readonly("passed", &LawComparison::pass);
  py::class_<Classification>(m, "Classification")
      .def_readonly("grown", &Classification::grown)
      .def_readonly("family", &Classification::family)
      .def_readonly("a", &Classification::a)
      .def_readonly("s", &Classification::s)
      .def_readonly("reason", &Classification::reason);
  py::class_<DistributionCheck>(m, "DistributionCheck")
      .def_readonly("trees_compared", &DistributionCheck::trees_compared)
      .def_readonly("message", &DistributionCheck::message)
      .def_readonly("passed", &DistributionCheck::pass);
  py::class_<OdeReport>(m, "OdeReport")
      .def_readonly("checked", &OdeReport::checked)
      .def_readonly("message", &OdeReport::message)
      .def_readonly("passed", &OdeReport::pass);

  m.def("check_balance", [](const WeightModel& w, int n) { return check_balance(w, n); },
        py::arg("model"), py::arg("n"));
  m.def("check_affine_ratio",
        [](const WeightModel& w, int n_max) { return check_affine_ratio(w, n_max); },
        py::arg("model"), py::arg("n_max"));
  m.def("check_scaling",
        [](const WeightModel& w, const Rational& a, const Rational& s, int n) {
          return check_scaling(w, a, s, n);
        },
        py::arg("model"), py::arg("a"), py::arg("s"), py::arg("n"));
  m.def("classify_family", &classify_family, py::arg("model"), py::arg("n_probe") = 12);
  m.def("check_ode_recurrence",
        [](const WeightModel& w, int n) { return check_ode_recurrence(w, n); }, py::arg("model"),
        py::arg("n"));
  m.def("check_distribution_equivalence",
        [](const FamilySpec& spec, int n) { return check_distribution_equivalence(spec, n); },
        py::arg("spec"), py::arg("n"));
  m.def("check_preservation",
        [](const FamilySpec& spec, int n) { return check_preservation(spec, n); },
        py::arg("spec"), py::arg("n"));

  m.def("urn_from", [](const FamilySpec& spec, int j, int K) { return urn_dict(urn_from(spec, j, K)); },
        py::arg("spec"), py::arg("j"), py::arg("K"));
  m.def("urn_distribution_exact",
        [](const Rational& white, const Rational& black, const Rational& sigma, int draws) {
          return urn_distribution_exact(UrnState{white, black, sigma}, draws);
        },
        py::arg("white"), py::arg("black"), py::arg("sigma"), py::arg("draws"));
  m.def("urn_moment_exact",
        [](const Rational& white, const Rational& black, const Rational& sigma, int draws, int s) {
          return urn_moment_exact(UrnState{white, black, sigma}, draws, s);
        },
        py::arg("white"), py::arg("black"), py::arg("sigma"), py::arg("draws"), py::arg("s"));
  m.def("descendants_law_from_trees",
        [](const FamilySpec& spec, int n, int j) { return descendants_law_from_trees(spec, n, j); },
        py::arg("spec"), py::arg("n"), py::arg("j"));
  m.def("descendants_law_from_urn",
        [](const FamilySpec& spec, int n, int j) { return descendants_law_from_urn(spec, n, j); },
        py::arg("spec"), py::arg("n"), py::arg("j"));

  m.def("beta_moment", &beta_moment, py::arg("a"), py::arg("b"), py::arg("s"));
  m.def("sampler_gof",
        [](const FamilySpec& spec, int n, std::uint64_t samples, std::uint64_t seed, double level) {
          const GofReport r = sampler_gof(spec, n, samples, seed, level);
          py::dict d;
          d["statistic"] = r.statistic;
          d["degrees_of_freedom"] = r.degrees_of_freedom;
          d["p_value"] = r.p_value;
          d["passed"] = r.pass;
          return d;
        },
        py::arg("spec"), py::arg("n"), py::arg("samples"), py::arg("seed") = kDefaultSeed,
        py::arg("level") = 0.01);

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out, err;
          int code = 0;
          {
            py::gil_scoped_release release;
            code = cli::run(args, out, err);
          }
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
