#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "topoloc/assembly2d.hpp"
#include "topoloc/chain.hpp"
#include "topoloc/cleantheory.hpp"
#include "topoloc/experiment.hpp"
#include "topoloc/freefermion.hpp"
#include "topoloc/localization.hpp"
#include "topoloc/observables.hpp"
#include "topoloc/oracle.hpp"

namespace py = pybind11;
using namespace topoloc;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Free-fermion quench dynamics of (disordered) transverse-field Ising rings";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ChainSpec>(m, "ChainSpec")
      .def(py::init([](std::vector<double> couplings, std::vector<double> fields) {
             ChainSpec s{std::move(couplings), std::move(fields)};
             s.validate();
             return s;
           }),
           py::arg("couplings"), py::arg("fields"))
      .def_static("uniform", &ChainSpec::uniform, py::arg("n_sites"), py::arg("coupling"),
                  py::arg("field"))
      .def("with_field", &ChainSpec::with_field, py::arg("field"))
      .def_readonly("couplings", &ChainSpec::couplings)
      .def_readonly("fields", &ChainSpec::fields)
      .def_property_readonly("n_sites", &ChainSpec::n_sites)
      .def("__eq__", [](const ChainSpec& a, const ChainSpec& b) { return a == b; })
      .def("__repr__", [](const ChainSpec& s) {
        return "<ChainSpec n_sites=" + std::to_string(s.n_sites()) + ">";
      });

  py::class_<DisorderModel>(m, "DisorderModel")
      .def(py::init([](double epsilon, double base_field, std::size_t n_sites, std::uint64_t seed) {
             DisorderModel d{epsilon, base_field, n_sites, seed};
             d.validate();
             return d;
           }),
           py::arg("epsilon"), py::arg("base_field"), py::arg("n_sites"), py::arg("master_seed") = 0)
      .def_readonly("epsilon", &DisorderModel::epsilon)
      .def_readonly("base_field", &DisorderModel::base_field)
      .def_readonly("n_sites", &DisorderModel::n_sites)
      .def_readonly("master_seed", &DisorderModel::master_seed);

  m.def("sample_chain", &sample_chain, py::arg("model"), py::arg("realization"));

  py::class_<BogoliubovBasis>(m, "BogoliubovBasis")
      .def_readonly("phi", &BogoliubovBasis::phi)
      .def_readonly("psi", &BogoliubovBasis::psi)
      .def_readonly("omega", &BogoliubovBasis::omega)
      .def_readonly("zero_modes", &BogoliubovBasis::zero_modes)
      .def_property_readonly("ground_energy", &BogoliubovBasis::ground_energy);

  m.def("diagonalize", py::overload_cast<const ChainSpec&>(&diagonalize), py::arg("spec"));

  py::class_<QuenchPropagator>(m, "QuenchPropagator")
      .def_readonly("t", &QuenchPropagator::t)
      .def_readonly("phi_tilde", &QuenchPropagator::phi_tilde)
      .def_readonly("psi_tilde", &QuenchPropagator::psi_tilde)
      .def_readonly("first_row", &QuenchPropagator::first_row);

  py::class_<QuenchDynamics>(m, "QuenchDynamics")
      .def(py::init([](const ChainSpec& initial, const ChainSpec& final_chain) {
             return QuenchDynamics(diagonalize(initial), diagonalize(final_chain));
           }),
           py::arg("initial"), py::arg("final"))
      .def("at", py::overload_cast<double>(&QuenchDynamics::at, py::const_), py::arg("t"))
      .def("at", py::overload_cast<double, std::size_t, std::size_t>(&QuenchDynamics::at, py::const_),
           py::arg("t"), py::arg("first_site"), py::arg("count"))
      .def_property_readonly("n_sites", &QuenchDynamics::n_sites);

  m.def(
      "correlation_xx",
      [](const QuenchPropagator& p, std::size_t j, std::size_t l) {
        return correlation_xx(p, j, l).magnitude;
      },
      py::arg("propagator"), py::arg("j"), py::arg("l"), "|<mu^x_j mu^x_l>| for j < l");
  m.def(
      "entanglement_entropy",
      [](const QuenchPropagator& p, std::size_t first, std::size_t length) {
        return entanglement_entropy(p, first, length).bits;
      },
      py::arg("propagator"), py::arg("first"), py::arg("length"), "Block entropy in bits");
  m.def(
      "majorana_spectrum",
      [](const QuenchPropagator& p, std::size_t first, std::size_t length) {
        return entanglement_entropy(p, first, length).nu;
      },
      py::arg("propagator"), py::arg("first"), py::arg("length"));
  m.def("binary_entropy", &binary_entropy, py::arg("x"));

  m.def(
      "wilson_loop_log", [](const std::vector<double>& rows) { return wilson_loop(rows).log_value; },
      py::arg("row_correlations"));
  m.def(
      "assemble_entropy",
      [](const std::vector<double>& rows, const std::string& sector) {
        if (sector != "x" && sector != "z") throw py::value_error("sector must be 'x' or 'z'");
        const auto r = assemble_entropy(
            rows, sector == "x" ? TopologicalSector::XSector : TopologicalSector::ZSector);
        return py::make_tuple(r.total_bits, r.gamma_topo);
      },
      py::arg("row_entropies"), py::arg("sector") = "z", "Returns (total_bits, gamma_topo)");

  py::class_<CleanQuenchSpec>(m, "CleanQuenchSpec")
      .def(py::init([](double h0, double h, std::optional<std::size_t> n) {
             CleanQuenchSpec s{h0, h, n};
             s.validate();
             return s;
           }),
           py::arg("h0"), py::arg("h"), py::arg("n_sites") = py::none())
      .def_readonly("h0", &CleanQuenchSpec::h0)
      .def_readonly("h", &CleanQuenchSpec::h)
      .def_readonly("n_sites", &CleanQuenchSpec::n_sites);

  m.def("dispersion", &dispersion, py::arg("h"), py::arg("p"));
  m.def("group_velocity", &group_velocity, py::arg("h"), py::arg("p"));
  m.def(
      "max_group_velocity", [](double h) { return max_group_velocity(h).velocity; }, py::arg("h"));
  m.def("occupation", &occupation, py::arg("h0"), py::arg("h"), py::arg("p"));
  m.def("semiclassical_entropy", &semiclassical_entropy, py::arg("spec"), py::arg("d"),
        py::arg("t"));
  m.def("semiclassical_correlation", &semiclassical_correlation, py::arg("spec"), py::arg("d"),
        py::arg("t"));
  m.def(
      "gge",
      [](const CleanQuenchSpec& spec) {
        const auto g = gge(spec);
        py::dict d;
        d["inverse_xi_eff"] = g.inverse_xi_eff;
        d["xi_eff"] = g.xi_eff;
        d["entropy_density"] = g.entropy_density;
        d["entropy_total"] = g.entropy_total;
        return d;
      },
      py::arg("spec"));
  m.def("gge_block_entropy", &gge_block_entropy, py::arg("spec"), py::arg("d"));
  m.def("revival_period", &revival_period, py::arg("n_sites"), py::arg("h"));

  m.def("build_m", [](const ChainSpec& spec) { return build_m(spec).m; }, py::arg("spec"));
  m.def(
      "sup_norm_profile",
      [](const DisorderModel& model, const std::vector<std::size_t>& distances, double t_max,
         std::size_t realizations, std::size_t bulk_positions, unsigned threads) {
        ProbeSettings s;
        s.t_max = t_max;
        s.distances = distances;
        s.realizations = realizations;
        s.bulk_positions = bulk_positions;
        s.threads = threads;
        py::gil_scoped_release release;
        const auto profile = sup_norm_profile(model, s);
        std::vector<double> means;
        std::vector<double> errors;
        for (const auto& p : profile.samples) {
          means.push_back(p.mean);
          errors.push_back(p.std_error);
        }
        return std::make_pair(means, errors);
      },
      py::arg("model"), py::arg("distances"), py::arg("t_max") = 500.0,
      py::arg("realizations") = 1, py::arg("bulk_positions") = 4, py::arg("threads") = 1,
      "Returns (means, standard errors) per distance");

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("c_fit", &DecayFit::c_fit)
      .def_readonly("eta_fit", &DecayFit::eta_fit)
      .def_readonly("zeta_fit", &DecayFit::zeta_fit)
      .def_readonly("residual", &DecayFit::residual)
      .def_readonly("exp_c", &DecayFit::exp_c)
      .def_readonly("exp_eta", &DecayFit::exp_eta)
      .def_readonly("exp_eta_stderr", &DecayFit::exp_eta_stderr)
      .def_readonly("exp_residual", &DecayFit::exp_residual)
      .def_readonly("power_alpha", &DecayFit::power_alpha)
      .def_readonly("power_residual", &DecayFit::power_residual)
      .def_property_readonly("exponential_rejected", &DecayFit::exponential_rejected);
  m.def(
      "fit_decay",
      [](const std::vector<double>& d, const std::vector<double>& v) {
        if (d.size() != v.size()) throw py::value_error("distances and values differ in length");
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < d.size(); ++i) pairs.emplace_back(d[i], v[i]);
        return fit_decay(std::span<const std::pair<double, double>>(pairs));
      },
      py::arg("distances"), py::arg("values"));

  m.def(
      "dense_ground_energy", [](const ChainSpec& spec) { return dense_ground_state(spec).energy; },
      py::arg("spec"), "Even-parity ground energy by exact diagonalization");
  m.def(
      "compare_with_oracle",
      [](const ChainSpec& initial, const ChainSpec& final_chain, const std::vector<double>& times) {
        const auto c = compare_with_oracle(initial, final_chain, times);
        return py::make_tuple(c.max_correlation_deviation, c.max_entropy_deviation);
      },
      py::arg("initial"), py::arg("final"), py::arg("times"),
      "Returns (max correlation deviation, max entropy deviation in bits)");

  m.def(
      "run_experiment",
      [](const std::string& config_text, const std::vector<std::string>& overrides,
         unsigned threads) {
        std::istringstream in(config_text);
        ExperimentConfig config = parse_config(in);
        for (const auto& o : overrides) apply_override(config, o);
        config.threads = threads;
        std::ostringstream log;
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_experiment(config, log);
        }
        py::dict out;
        out["tables"] = r.tables;
        out["manifest"] = r.manifest;
        out["passed"] = r.passed;
        return out;
      },
      py::arg("config_text"), py::arg("overrides") = std::vector<std::string>{},
      py::arg("threads") = 1, "Run an experiment from config text; returns output paths");

  m.attr("__version__") = TOPOLOC_PY_VERSION;
}
