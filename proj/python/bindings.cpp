#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "causalnm/measures.hpp"

namespace py = pybind11;
using namespace causalnm;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) throw std::invalid_argument("expected a square 2-d array");
  const auto n = static_cast<std::size_t>(a.shape(0));
  return {n, std::vector<cplx>(a.data(), a.data() + n * n)};
}

CArray to_array(const ComplexMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.dim());
  CArray out({n, n});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::dict curve_dict(const Curve& c) {
  std::vector<double> t(c.grid.size());
  std::vector<bool> ok(c.flags.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = c.grid.at(i);
    ok[i] = c.flags[i] == PointFlag::ok;
  }
  py::dict d;
  d["t"] = to_array(t);
  d["values"] = to_array(c.values);
  d["ok"] = ok;
  return d;
}

}  // namespace

PYBIND11_MODULE(_causalnm, m) {
  m.doc() = "Pseudo-density-matrix causality measures for qubit channels";

  py::class_<KrausChannel>(m, "KrausChannel")
      .def(py::init([](const std::vector<CArray>& kraus, double tol) {
             std::vector<ComplexMatrix> ops;
             for (const auto& k : kraus) ops.push_back(to_matrix(k));
             return KrausChannel(std::move(ops), tol);
           }),
           py::arg("kraus"), py::arg("tol") = kCptpTol)
      .def_static("identity", &KrausChannel::identity, py::arg("dim") = 2)
      .def_property_readonly("dim", &KrausChannel::dim)
      .def_property_readonly("kraus",
                             [](const KrausChannel& ch) {
                               std::vector<CArray> out;
                               for (const auto& k : ch.kraus()) out.push_back(to_array(k));
                               return out;
                             })
      .def("__call__", [](const KrausChannel& ch, const CArray& x) { return to_array(ch.map(to_matrix(x))); })
      .def("choi", [](const KrausChannel& ch) { return to_array(choi(ch)); })
      .def("choi_standard", [](const KrausChannel& ch) { return to_array(choi_standard(ch)); })
      .def("transfer_matrix", [](const KrausChannel& ch) { return to_array(transfer_matrix(ch)); });

  m.def("compose", &compose, py::arg("outer"), py::arg("inner"));
  m.def("amplitude_damping", &amplitude_damping, py::arg("r"));
  m.def("generalized_amplitude_damping", &generalized_amplitude_damping, py::arg("p"), py::arg("lam"));

  py::class_<QubitState>(m, "QubitState")
      .def(py::init([](const CArray& rho) { return QubitState(to_matrix(rho)); }), py::arg("rho"))
      .def_static("pure", &QubitState::pure, py::arg("theta"), py::arg("phi") = 0.0)
      .def_static("maximally_mixed", &QubitState::maximally_mixed)
      .def_static("orthogonal_partner", &QubitState::orthogonal_partner, py::arg("theta"), py::arg("phi") = 0.0)
      .def_property_readonly("matrix", [](const QubitState& s) { return to_array(s.matrix()); });

  py::class_<PseudoDensityMatrix>(m, "PseudoDensityMatrix")
      .def_property_readonly("matrix", [](const PseudoDensityMatrix& p) { return to_array(p.matrix()); })
      .def_property_readonly("events", &PseudoDensityMatrix::events)
      .def_property_readonly("eigenvalues",
                             [](const PseudoDensityMatrix& p) { return to_array(p.spectrum().eigenvalues); })
      .def("marginal", [](const PseudoDensityMatrix& p, std::size_t event) { return to_array(p.marginal(event)); });

  m.def("pdm_two_point", &pdm_two_point, py::arg("rho"), py::arg("channel"));
  m.def("pdm_from_correlators", &pdm_from_correlators, py::arg("rho"), py::arg("channel"));
  m.def(
      "pdm_k_point", [](const QubitState& rho, const std::vector<KrausChannel>& chain) { return pdm_k_point(rho, chain); },
      py::arg("rho"), py::arg("chain"));
  m.def("f_cm", &f_cm, py::arg("pdm"));
  m.def("causality_F", &causality_F, py::arg("pdm"));
  m.def("is_causal", &is_causal, py::arg("pdm"), py::arg("tol") = kCausalTol);
  m.def("choi_negativity", &choi_negativity, py::arg("channel"));

  py::class_<ADParams>(m, "ADParams")
      .def(py::init([](double gamma0, double b) {
             ADParams p{gamma0, b};
             p.validate();
             return p;
           }),
           py::arg("gamma0"), py::arg("b"))
      .def_readonly("gamma0", &ADParams::gamma0)
      .def_readonly("b", &ADParams::b)
      .def("non_markovian", &ADParams::non_markovian);
  m.def("decoherence_G", &decoherence_G, py::arg("params"), py::arg("t"));
  m.def("damping_r", &damping_r, py::arg("params"), py::arg("t"));
  m.def("decay_rate", &decay_rate_ad, py::arg("params"), py::arg("t"), py::arg("tol_sing") = kSingularTol);

  py::class_<ChannelFamily>(m, "ChannelFamily").def("at", &ChannelFamily::at, py::arg("t"));
  m.def("ad_family", &ad_family, py::arg("params"));
  m.def(
      "gad_family",
      [](double omega) {
        GADParams p{omega};
        p.validate();
        return gad_family(p);
      },
      py::arg("omega"));
  m.def(
      "unitary_family", [](const CArray& h) { return unitary_family(to_matrix(h)); }, py::arg("hamiltonian"));
  m.def("intermediate_map_witness", &intermediate_map_witness, py::arg("family"), py::arg("t"), py::arg("tau"),
        py::arg("max_condition") = kMaxCondition);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<double, double, double>(), py::arg("t0"), py::arg("t_max"), py::arg("dt"))
      .def_property_readonly("size", &TimeGrid::size)
      .def_property_readonly("dt", &TimeGrid::dt);

  m.def(
      "f_curve",
      [](const ChannelFamily& family, const QubitState& rho, const TimeGrid& grid) {
        return curve_dict(f_curve(family, rho, grid));
      },
      py::arg("family"), py::arg("rho"), py::arg("grid"));
  m.def(
      "trace_distance_curve",
      [](const ChannelFamily& family, const QubitState& a, const QubitState& b, const TimeGrid& grid) {
        return curve_dict(trace_distance_curve(family, a, b, grid));
      },
      py::arg("family"), py::arg("rho1"), py::arg("rho2"), py::arg("grid"));
  m.def(
      "nm_measure",
      [](const ChannelFamily& family, const TimeGrid& grid, std::size_t n_theta, std::size_t n_phi,
         std::size_t threads) {
        MeasureOptions options;
        options.states = {n_theta, n_phi};
        options.threads = threads;
        MeasureReport r;
        {
          py::gil_scoped_release release;
          r = nm_measure(family, grid, options);
        }
        py::dict d;
        d["M"] = r.M;
        d["C"] = r.C;
        d["variant_M"] = r.variant_M;
        d["argmax"] = r.argmax ? py::object(py::make_tuple(r.argmax->theta, r.argmax->phi)) : py::none();
        d["hcla"] = r.hcla ? py::object(py::float_(*r.hcla)) : py::none();
        d["blp"] = r.blp;
        return d;
      },
      py::arg("family"), py::arg("grid"), py::arg("n_theta") = 24, py::arg("n_phi") = 12, py::arg("threads") = 0);
  m.def(
      "hcla_measure", [](const ADParams& p, const TimeGrid& grid) { return hcla_measure(p, grid).value; },
      py::arg("params"), py::arg("grid"));
}
