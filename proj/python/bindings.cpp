#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "raes/analysis.hpp"
#include "raes/codec/encoding.hpp"
#include "raes/error.hpp"
#include "raes/experiment.hpp"
#include "raes/graph.hpp"
#include "raes/io.hpp"
#include "raes/protocol.hpp"
#include "raes/spectral.hpp"

namespace py = pybind11;
using namespace raes;

namespace {

// One execution together with the inputs that produced it.
struct Run {
  RaesParams params;
  RandomTape tape;
  RunOutcome outcome;
  std::optional<std::uint64_t> seed;
};

RaesParams make_params(std::uint32_t d, const std::string& c, std::uint32_t max_rounds) {
  RaesParams p{d, Rational::parse(c), max_rounds};
  p.validate();
  return p;
}

py::bytes to_py_bytes(const std::vector<std::uint8_t>& v) {
  return py::bytes(reinterpret_cast<const char*>(v.data()), v.size());
}

std::vector<std::uint8_t> from_py_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

py::dict expansion_dict(const analysis::ExpansionReport& r) {
  py::dict d;
  d["method"] = analysis::to_string(r.method);
  d["epsilon_star"] = r.epsilon_star;
  d["cut"] = r.cut;
  d["volume"] = r.volume;
  d["witness"] = r.witness;
  d["disconnected"] = r.disconnected;
  d["upper_bound"] = r.upper_bound;
  return d;
}

py::dict cost_dict(const codec::CostReport& r) {
  py::dict d;
  d["stream_bits"] = r.stream_bits;
  d["raw_total"] = r.raw_total;
  d["fractional_total"] = r.fractional_total;
  d["eps"] = r.eps;
  d["savings"] = r.savings;
  d["savings_by_components"] = r.savings_by_components;
  d["all_within_budget"] = r.all_within_budget();
  py::dict sections;
  for (const auto& s : r.sections) {
    py::dict e;
    e["actual_bits"] = s.actual_bits;
    e["fractional"] = s.fractional;
    e["slack"] = s.slack;
    sections[py::str(s.name)] = e;
  }
  d["sections"] = sections;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "RAES protocol: simulation, analysis and compressed encoding";

  auto base = py::register_exception<Error>(m, "RaesError");
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base);
  py::register_exception<GenerationFailure>(m, "GenerationFailure", base);
  py::register_exception<SizeLimitError>(m, "SizeLimitError", base);
  py::register_exception<PreconditionError>(m, "PreconditionError", base);
  py::register_exception<DecodeError>(m, "DecodeError", base);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base);

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("n", &Graph::n)
      .def_property_readonly("delta", &Graph::delta)
      .def_property_readonly("alpha", &Graph::alpha)
      .def("neighbors", [](const Graph& g, NodeId v) {
        if (v >= g.n()) throw py::index_error("node out of range");
        const auto nb = g.neighbors(v);
        return std::vector<NodeId>(nb.begin(), nb.end());
      })
      .def("edges", &Graph::edges)
      .def("has_edge", &Graph::has_edge)
      .def("connected", &Graph::connected)
      .def("to_json", [](const Graph& g) { return io::graph_to_json(g); })
      .def_static("from_json", &io::graph_from_json)
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) {
        return "<Graph n=" + std::to_string(g.n()) + " delta=" + std::to_string(g.delta()) + ">";
      });

  m.def("complete", &gen_complete, py::arg("n"));
  m.def("complete_bipartite", &gen_complete_bipartite, py::arg("m"));
  m.def("random_regular", &gen_random_regular, py::arg("n"), py::arg("delta"), py::arg("seed") = 0);
  m.def(
      "circulant",
      [](std::uint32_t n, const std::vector<std::uint32_t>& offsets) {
        return gen_circulant(n, close_offsets(n, offsets));
      },
      py::arg("n"), py::arg("offsets"), "Circulant graph; offsets are closed under negation first.");

  m.def(
      "second_eigenvalue",
      [](const Graph& g) {
        const auto r = second_eigenvalue(g);
        py::dict d;
        d["lambda2"] = r.lambda2;
        d["lambda2_plus"] = r.lambda2_plus;
        d["iterations"] = r.iterations;
        d["residual"] = r.residual;
        return d;
      },
      py::arg("graph"));

  py::class_<RandomTape>(m, "Tape")
      .def_property_readonly("n", &RandomTape::n)
      .def_property_readonly("delta", &RandomTape::delta)
      .def_property_readonly("d", &RandomTape::d)
      .def_property_readonly("max_rounds", &RandomTape::max_rounds)
      .def_property_readonly("draws", &RandomTape::draws)
      .def("row", [](const RandomTape& t, NodeId v) {
        if (v >= t.n()) throw py::index_error("node out of range");
        const auto r = t.row(v);
        return std::vector<std::uint32_t>(r.begin(), r.end());
      })
      .def("to_json", &io::tape_to_json)
      .def_static("from_json", &io::tape_from_json)
      .def("to_bytes", [](const RandomTape& t) { return to_py_bytes(io::tape_to_binary(t)); })
      .def_static("from_bytes",
                  [](const py::bytes& b) { return io::tape_from_binary(from_py_bytes(b)); })
      .def("__eq__", [](const RandomTape& a, const RandomTape& b) { return a == b; });

  m.def(
      "fresh_tape",
      [](const Graph& g, std::uint32_t d, const std::string& c, std::uint32_t max_rounds,
         std::uint64_t seed) { return fresh_tape(g, make_params(d, c, max_rounds), seed); },
      py::arg("graph"), py::arg("d"), py::arg("c"), py::arg("max_rounds"), py::arg("seed"));

  py::class_<Run>(m, "Run")
      .def_property_readonly("terminated", [](const Run& r) { return r.outcome.terminated(); })
      .def_property_readonly("rounds_used", [](const Run& r) { return r.outcome.stats.rounds_used; })
      .def_property_readonly("total_requests",
                             [](const Run& r) { return r.outcome.stats.total_requests; })
      .def_property_readonly("total_messages",
                             [](const Run& r) { return r.outcome.stats.total_messages; })
      .def_property_readonly("unsettled_per_round",
                             [](const Run& r) { return r.outcome.stats.unsettled_per_round; })
      .def_property_readonly("tape", [](const Run& r) { return r.tape; })
      .def_property_readonly("seed", [](const Run& r) { return r.seed; })
      .def("links",
           [](const Run& r) {
             std::vector<std::tuple<NodeId, NodeId, std::uint32_t>> out;
             for (const auto& l : r.outcome.h.links()) out.emplace_back(l.from, l.to, l.round);
             return out;
           },
           "Links of H as (requester, acceptor, round).")
      .def("degrees",
           [](const Run& r) {
             std::vector<std::uint32_t> deg(r.outcome.h.n());
             for (NodeId v = 0; v < r.outcome.h.n(); ++v) deg[v] = r.outcome.h.degree(v);
             return deg;
           })
      .def("trace_json", [](const Run& r) { return io::trace_to_json(r.outcome.trace, r.seed); })
      .def("subgraph_text", [](const Run& r) { return io::subgraph_to_text(r.outcome.h); });

  m.def(
      "run",
      [](const Graph& g, std::uint32_t d, const std::string& c, std::uint32_t max_rounds,
         std::uint64_t seed, std::optional<RandomTape> tape) {
        Run r;
        r.params = make_params(d, c, max_rounds);
        if (tape) {
          r.tape = std::move(*tape);
        } else {
          r.tape = fresh_tape(g, r.params, seed);
          r.seed = seed;
        }
        r.outcome = run_raes(g, r.params, r.tape);
        return r;
      },
      py::arg("graph"), py::arg("d"), py::arg("c"), py::arg("max_rounds") = 64, py::arg("seed") = 0,
      py::arg("tape") = py::none(),
      "Runs RAES(G, d, c) on a fresh tape from `seed`, or on the given tape.");

  m.def(
      "expansion",
      [](const Run& r, const std::string& mode, std::uint64_t trials, std::uint64_t seed, bool simple) {
        const auto parsed = analysis::parse_expansion_mode(mode);
        const auto& h = r.outcome.h;
        switch (parsed) {
          case analysis::ExpansionMode::Exact: {
            analysis::ExpansionOptions opts;
            opts.simple = simple;
            return expansion_dict(analysis::exact_expansion(h, opts));
          }
          case analysis::ExpansionMode::Sampled:
            return expansion_dict(analysis::sampled_expansion(h, trials, seed, simple));
          case analysis::ExpansionMode::Spectral:
            return expansion_dict(analysis::spectral_expansion_lower_bound(h, simple));
          case analysis::ExpansionMode::None:
            break;
        }
        throw InvalidParameter("expansion mode must be exact, sampled or spectral");
      },
      py::arg("run"), py::arg("mode") = "exact", py::arg("trials") = 2000, py::arg("seed") = 0,
      py::arg("simple") = false);

  m.def(
      "encode",
      [](const Graph& g, const Run& r, const std::vector<NodeId>& s) {
        const auto lambda = second_eigenvalue(g).lambda2_plus;
        const auto [enc, cost] =
            codec::encode_execution(g, r.params, r.tape, r.outcome.trace, s, lambda);
        return py::make_tuple(to_py_bytes(codec::to_bytes(enc)), cost_dict(cost));
      },
      py::arg("graph"), py::arg("run"), py::arg("s"),
      "Compressed encoding of a terminated run with respect to the set S; returns (bytes, cost).");

  m.def(
      "decode",
      [](const Graph& g, const py::bytes& data) {
        const auto dec = codec::decode_execution(g, codec::from_bytes(from_py_bytes(data)));
        return py::make_tuple(dec.tape, dec.s_set);
      },
      py::arg("graph"), py::arg("data"), "Inverse of encode; returns (tape, S).");

  m.def("termination_round_bound", &analysis::termination_round_bound, py::arg("n"), py::arg("alpha"),
        py::arg("c"), py::arg("beta") = 3.0);
}
