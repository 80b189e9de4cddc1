#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hcec/benchgen.hpp"
#include "hcec/eps.hpp"
#include "hcec/report.hpp"
#include "hcec/sat.hpp"
#include "hcec/selector.hpp"
#include "hcec/sweeper.hpp"

namespace py = pybind11;
using namespace hcec;

namespace {

EngineMode parse_engine(const std::string& name) {
  if (name == "hybrid") return EngineMode::kHybrid;
  if (name == "sat") return EngineMode::kSatOnly;
  if (name == "eps") return EngineMode::kEpsOnly;
  throw std::invalid_argument("engine must be hybrid, sat or eps, not '" + name + "'");
}

Cone output_cone(const Aig& miter) {
  const Aig reduced = or_reduce_outputs(miter);
  return extract_cone(reduced, reduced.output(0));
}

}  // namespace

PYBIND11_MODULE(_hybridcec, m) {
  m.doc() = "Hybrid SAT / exhaustive-simulation equivalence checking for AIGs";

  py::register_exception<NetlistError>(m, "NetlistError", PyExc_ValueError);
  py::register_exception<AigerError>(m, "AigerError", PyExc_ValueError);
  py::register_exception<bench::GenError>(m, "GenError", PyExc_ValueError);
  py::register_exception<sat::DimacsError>(m, "DimacsError", PyExc_ValueError);

  py::class_<Aig>(m, "Aig")
      .def_property_readonly("num_pis", &Aig::num_pis)
      .def_property_readonly("num_outputs", &Aig::num_outputs)
      .def_property_readonly("num_ands", &Aig::num_ands)
      .def("evaluate",
           [](const Aig& aig, const std::vector<uint8_t>& inputs) {
             if (inputs.size() != aig.num_pis()) throw std::invalid_argument("one value per PI expected");
             const auto out = evaluate(aig, inputs);
             return std::vector<int>(out.begin(), out.end());
           })
      .def("to_aiger", [](const Aig& aig) { return write_aiger(aig); })
      .def("__repr__", [](const Aig& aig) {
        return "<Aig pis=" + std::to_string(aig.num_pis()) + " ands=" + std::to_string(aig.num_ands()) +
               " outputs=" + std::to_string(aig.num_outputs()) + ">";
      });

  m.def("parse_aiger", [](const std::string& text) { return parse_aiger(text); }, py::arg("text"));
  m.def("read_aiger", &read_aiger_file, py::arg("path"));
  m.def("write_aiger", &write_aiger_file, py::arg("aig"), py::arg("path"));
  m.def("build_miter", &build_miter, py::arg("a"), py::arg("b"));

  m.def(
      "generate",
      [](const std::string& family, unsigned width, unsigned copies, unsigned rewrite, bool corrupt, uint64_t seed) {
        bench::GenSpec spec;
        spec.family = bench::parse_family(family);
        spec.width = width;
        spec.copies = copies;
        spec.rewrite_steps = rewrite;
        spec.corrupt = corrupt;
        spec.seed = seed;
        return bench::generate(spec);
      },
      py::arg("family"), py::arg("width"), py::arg("copies") = 1, py::arg("rewrite") = 0, py::arg("corrupt") = false,
      py::arg("seed") = 1);

  m.def(
      "oracle_check",
      [](const Aig& miter, unsigned max_pis) -> py::tuple {
        const auto r = bench::oracle_check(miter, max_pis);
        return py::make_tuple(r.equivalent, r.equivalent ? py::object(py::none()) : py::cast(r.counterexample));
      },
      py::arg("miter"), py::arg("max_pis") = 24);

  m.def(
      "check",
      [](const Aig& miter, const std::string& engine, double rho, uint64_t sim_patterns, uint64_t seed,
         unsigned threads, bool isd, double timeout, bool per_output) {
        SweepConfig cfg;
        cfg.engine = parse_engine(engine);
        cfg.rho = rho;
        cfg.sim_patterns = sim_patterns;
        cfg.seed = seed;
        cfg.threads = threads;
        cfg.isd_enabled = isd;
        cfg.timeout_seconds = timeout;
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = per_output ? sweep_per_output(miter, cfg) : sweep(miter, cfg);
        }
        return stats_to_json(r).dump();
      },
      py::arg("miter"), py::arg("engine") = "hybrid", py::arg("rho") = 0.15, py::arg("sim_patterns") = 1 << 20,
      py::arg("seed") = 1, py::arg("threads") = 1, py::arg("isd") = true, py::arg("timeout") = 0.0,
      py::arg("per_output") = false);

  m.def(
      "eps_check",
      [](const Aig& miter, unsigned bits_limit, unsigned workers) -> py::tuple {
        eps::EpsConfig cfg;
        cfg.bits_limit = bits_limit;
        cfg.workers = workers;
        const Cone cone = output_cone(miter);
        eps::EpsVerdict v;
        {
          py::gil_scoped_release release;
          v = eps::eps_check_parallel(cone, cfg);
        }
        switch (v.kind) {
          case eps::EpsVerdict::Kind::kEquivalent:
            return py::make_tuple("equivalent", py::none());
          case eps::EpsVerdict::Kind::kCounterexample: {
            Assignment full(miter.num_pis(), 0);
            for (std::size_t i = 0; i < v.assignment.size(); ++i) full[cone.pi_map[i] - 1] = v.assignment[i];
            return py::make_tuple("counterexample", py::cast(full));
          }
          case eps::EpsVerdict::Kind::kResourceOut:
            break;
        }
        return py::make_tuple("resource_out", py::cast(v.reason));
      },
      py::arg("miter"), py::arg("bits_limit") = 20, py::arg("workers") = 1);

  m.def(
      "solve_dimacs",
      [](const std::string& text, uint64_t max_conflicts, unsigned workers) -> py::tuple {
        const sat::Cnf cnf = sat::parse_dimacs(text);
        const sat::SatBudget budget{max_conflicts, 0.0};
        sat::SatVerdict v;
        {
          py::gil_scoped_release release;
          v = workers > 1 ? sat::solve_parallel(cnf, workers, budget) : sat::solve(cnf, budget);
        }
        switch (v.kind) {
          case sat::SatVerdict::Kind::kUnsat:
            return py::make_tuple("unsat", py::none());
          case sat::SatVerdict::Kind::kModel: {
            std::vector<int> lits;
            for (uint32_t x = 1; x <= cnf.num_vars; ++x) lits.push_back(v.model[x] ? int(x) : -int(x));
            return py::make_tuple("sat", py::cast(lits));
          }
          case sat::SatVerdict::Kind::kBudget:
            break;
        }
        return py::make_tuple("unknown", py::none());
      },
      py::arg("text"), py::arg("max_conflicts") = 1000000, py::arg("workers") = 1);

  m.def(
      "score_xor", [](const std::vector<std::size_t>& blocks, uint32_t n_pis) { return score_xor(blocks, n_pis); },
      py::arg("block_sizes"), py::arg("n_pis"));

  m.def(
      "theta_sequence",
      [](unsigned n) {
        std::vector<std::string> out;
        for (const auto& t : eps::theta_sequence(n)) out.push_back(t.str());
        return out;
      },
      py::arg("n"));
}
