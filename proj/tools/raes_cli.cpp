// raes: generate graphs, run the protocol, analyze outputs, encode executions
// and run batch experiments. Exit codes: 0 ok, 1 usage or validation,
// 2 protocol did not terminate, 3 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "raes/analysis.hpp"
#include "raes/codec/encoding.hpp"
#include "raes/error.hpp"
#include "raes/experiment.hpp"
#include "raes/graph.hpp"
#include "raes/io.hpp"
#include "raes/protocol.hpp"
#include "raes/spectral.hpp"

namespace {

using json = nlohmann::json;
using namespace raes;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotTerminated = 2;
constexpr int kExitInternal = 3;

// JSON config files. Nested objects address subcommands, so
// {"run": {"graph": "g.json", "d": 1}} fills the options of `raes run`.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return to_json(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    collect(items, j, "", {});
    return items;
  }

 private:
  static json to_json(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames()[0];
      if (opt->get_type_size() == 0) {
        if (opt->count() > 0) j[name] = true;
      } else if (opt->count() == 1) {
        j[name] = typed(opt->results().at(0));
      } else if (opt->count() > 1) {
        json list = json::array();
        for (const auto& r : opt->results()) list.push_back(typed(r));
        j[name] = list;
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = typed(opt->get_default_str());
      }
    }
    for (const CLI::App* sub : app->get_subcommands()) j[sub->get_name()] = to_json(sub, default_also);
    return j;
  }

  // Numbers are written as JSON numbers, everything else as strings.
  static json typed(const std::string& text) {
    const json parsed = json::parse(text, nullptr, false);
    return !parsed.is_discarded() && parsed.is_number() ? parsed : json(text);
  }

  static void collect(std::vector<CLI::ConfigItem>& out, const json& j, const std::string& name,
                      std::vector<std::string> parents) {
    if (j.is_object()) {
      if (!name.empty()) {
        parents.push_back(name);
        // An empty section still selects the subcommand.
        out.push_back({parents, "++", {}});
      }
      for (auto it = j.begin(); it != j.end(); ++it) collect(out, *it, it.key(), parents);
      if (!name.empty()) out.push_back({parents, "--", {}});
      return;
    }
    CLI::ConfigItem item;
    item.parents = parents;
    item.name = name;
    if (j.is_array()) {
      for (const auto& x : j) item.inputs.push_back(scalar(x));
    } else {
      item.inputs.push_back(scalar(j));
    }
    out.push_back(std::move(item));
  }

  static std::string scalar(const json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_boolean()) return x.get<bool>() ? "true" : "false";
    return x.dump();
  }
};

unsigned env_thread_cap() {
  const char* env = std::getenv("RAES_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    const long v = std::stol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  } catch (const std::exception&) {
  }
  throw InvalidParameter(std::string("RAES_THREADS must be a positive integer, got '") + env + "'");
}

unsigned effective_threads(unsigned requested) {
  unsigned threads = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const unsigned cap = env_thread_cap(); cap != 0) threads = std::min(threads, cap);
  return threads;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_text(path, text);
  }
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << x;
  return os.str();
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

SpectralResult spectrum_of(const Graph& g) {
  try {
    return second_eigenvalue(g);
  } catch (const ConvergenceError& e) {
    std::cerr << "warning: " << e.what() << "; using the best estimate\n";
    return e.best();
  }
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family = "complete";
  std::uint32_t n = 0;
  std::uint32_t delta = 0;
  std::vector<std::uint32_t> offsets;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_generate(const GenerateArgs& a) {
  analysis::GraphSpec spec;
  spec.family = analysis::parse_family(a.family);
  spec.n = a.n;
  spec.delta = a.delta;
  spec.offsets = close_offsets(a.n, a.offsets);
  const Graph g = analysis::make_graph(spec, a.seed);
  emit(a.output, io::graph_to_json(g));
  std::cerr << analysis::to_string(spec.family) << ": n=" << g.n() << " delta=" << g.delta()
            << " edges=" << g.edge_count() << '\n';
  return kExitOk;
}

// --------------------------------------------------------------------- run

struct RunArgs {
  std::string graph;
  std::uint32_t d = 1;
  std::string c = "4";
  std::uint32_t max_rounds = 64;
  std::uint64_t seed = 0;
  std::string tape;
  std::string trace_out;
  std::string h_out;
  std::string stats_out;
  std::string tape_out;
};

// The first `rounds` rounds of a longer tape.
RandomTape truncate_tape(const RandomTape& tape, std::uint32_t rounds) {
  const std::uint32_t per = tape.d() * rounds;
  std::vector<std::uint32_t> draws;
  draws.reserve(static_cast<std::size_t>(tape.n()) * per);
  for (NodeId v = 0; v < tape.n(); ++v) {
    const auto row = tape.row(v);
    draws.insert(draws.end(), row.begin(), row.begin() + per);
  }
  return RandomTape(tape.n(), tape.delta(), tape.d(), rounds, std::move(draws));
}

int cmd_run(const RunArgs& a, const CLI::App& sub) {
  const Graph g = io::graph_from_json(io::read_text(a.graph));
  RaesParams params{a.d, Rational::parse(a.c), a.max_rounds};
  RandomTape tape;
  std::optional<std::uint64_t> seed;
  if (!a.tape.empty()) {
    tape = io::read_tape(a.tape);
    if (sub.count("--d") == 0) params.d = tape.d();
    if (sub.count("--max-rounds") == 0) params.max_rounds = tape.max_rounds();
    if (params.d != tape.d()) {
      throw InvalidParameter("--d " + std::to_string(params.d) + " does not match the tape (d=" +
                             std::to_string(tape.d()) + ")");
    }
    if (params.max_rounds > tape.max_rounds()) {
      throw InvalidParameter("--max-rounds exceeds the tape length (T=" +
                             std::to_string(tape.max_rounds()) + ")");
    }
    if (params.max_rounds < tape.max_rounds()) tape = truncate_tape(tape, params.max_rounds);
  } else {
    params.validate();
    tape = fresh_tape(g, params, a.seed);
    seed = a.seed;
  }
  const RunOutcome out = run_raes(g, params, tape);
  if (!a.trace_out.empty()) io::write_text(a.trace_out, io::trace_to_json(out.trace, seed));
  if (!a.h_out.empty()) io::write_text(a.h_out, io::subgraph_to_text(out.h));
  if (!a.tape_out.empty()) io::write_tape(a.tape_out, tape);
  emit(a.stats_out, io::stats_to_json(out, seed));
  if (!out.terminated()) {
    std::cerr << "not terminated after " << params.max_rounds << " rounds, "
              << unsettled_after(out.trace, out.trace.rounds_recorded()) << " links unsettled\n";
    return kExitNotTerminated;
  }
  return kExitOk;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeArgs {
  std::string graph;
  std::string subgraph;
  std::string trace;
  std::string mode = "spectral";
  std::vector<NodeId> set;
  std::uint64_t trials = 2000;
  std::uint64_t seed = 0;
  std::uint32_t limit = 24;
  bool simple = false;
};

json expansion_json(const analysis::ExpansionReport& r) {
  json j = {{"method", analysis::to_string(r.method)},
            {"epsilon_star", r.epsilon_star},
            {"quantity", r.quantity},
            {"disconnected", r.disconnected},
            {"upper_bound", r.upper_bound}};
  if (r.method == analysis::ExpansionMethod::SpectralLowerBound) {
    j["lambda2_normalized_laplacian"] = r.lambda2;
  } else {
    j["cut"] = r.cut;
    j["volume"] = r.volume;
    j["witness"] = r.witness;
  }
  return j;
}

int cmd_analyze(const AnalyzeArgs& a) {
  if (a.graph.empty() && a.subgraph.empty()) {
    throw InvalidParameter("analyze needs --graph, --subgraph or both");
  }
  json report = json::object();
  std::optional<Graph> g;
  if (!a.graph.empty()) {
    g = io::graph_from_json(io::read_text(a.graph));
    const auto sp = spectrum_of(*g);
    report["graph"] = {{"n", g->n()},
                       {"delta", g->delta()},
                       {"alpha", g->alpha()},
                       {"lambda2", sp.lambda2},
                       {"lambda2_plus", sp.lambda2_plus},
                       {"iterations", sp.iterations},
                       {"residual", sp.residual}};
  }

  // Expansion is measured on H when given, otherwise on G.
  analysis::MultiAdjacency adj;
  if (!a.subgraph.empty()) {
    const auto h = io::subgraph_from_text(io::read_text(a.subgraph));
    if (g && g->n() != h.n()) throw InvalidParameter("graph and subgraph disagree on n");
    adj = h.adjacency(a.simple);
  } else {
    adj.resize(g->n());
    for (NodeId v = 0; v < g->n(); ++v) {
      const auto nb = g->neighbors(v);
      adj[v].assign(nb.begin(), nb.end());
    }
  }
  const auto mode = analysis::parse_expansion_mode(a.mode);
  analysis::ExpansionReport exp;
  switch (mode) {
    case analysis::ExpansionMode::Exact: {
      analysis::ExpansionOptions opts;
      opts.exhaustive_limit = a.limit;
      exp = analysis::exact_expansion(adj, opts);
      break;
    }
    case analysis::ExpansionMode::Sampled:
      exp = analysis::sampled_expansion(adj, a.trials, a.seed);
      break;
    case analysis::ExpansionMode::Spectral:
      exp = analysis::spectral_expansion_lower_bound(adj);
      break;
    case analysis::ExpansionMode::None:
      break;
  }
  if (mode != analysis::ExpansionMode::None) report["expansion"] = expansion_json(exp);

  if (!a.set.empty()) {
    if (!g || a.trace.empty()) throw InvalidParameter("--set needs --graph and --trace");
    const auto tf = io::trace_from_json(io::read_text(a.trace), &*g);
    const auto s = analysis::normalize_proper_subset(g->n(), a.set);
    const auto h = subgraph_of(tf.trace);
    const auto cf = analysis::cut_fractions(*g, h, s);
    const auto cls = analysis::classify_nodes(*g, tf.trace, s);
    json rounds = json::array();
    for (std::uint32_t t = 1; t <= cls.rounds.size(); ++t) {
      rounds.push_back({{"round", t},
                        {"semi_saturated", cls.rounds[t - 1].semi_saturated.size()},
                        {"critical", cls.rounds[t - 1].critical.size()}});
    }
    report["set"] = {{"s", s},
                     {"delta_v", cf.delta_v},
                     {"eps_v", cf.eps_v},
                     {"delta_mean", cf.delta_mean},
                     {"eps_mean", cf.eps_mean},
                     {"rss", cls.rss},
                     {"rounds", rounds},
                     {"saturation_bounds_hold",
                      analysis::saturation_bounds_hold(cls, g->n(), tf.trace.params.c)}};
  }
  std::cout << report.dump(2) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------- codec

struct CodecArgs {
  std::string graph;
  std::string trace;
  std::string tape;
  std::string input;
  std::string output;
  std::string trace_out;
  std::vector<NodeId> set;
};

struct Loaded {
  Graph g;
  io::TraceFile tf;
  RandomTape tape;
  std::string tape_source;
};

// Tape priority: --tape, then the seed recorded in the trace, then the
// consumed prefix rebuilt from the trace itself.
Loaded load_execution(const CodecArgs& a) {
  Loaded l{io::graph_from_json(io::read_text(a.graph)), {}, {}, {}};
  l.tf = io::trace_from_json(io::read_text(a.trace), &l.g);
  if (!a.tape.empty()) {
    l.tape = io::read_tape(a.tape);
    l.tape_source = a.tape;
  } else if (l.tf.seed) {
    l.tape = fresh_tape(l.g, l.tf.trace.params, *l.tf.seed);
    l.tape_source = "seed " + std::to_string(*l.tf.seed);
  } else {
    l.tape = tape_of(l.g, l.tf.trace);
    l.tape_source = "trace";
  }
  return l;
}

json cost_json(const codec::CostReport& r) {
  json sections = json::array();
  for (const auto& s : r.sections) {
    sections.push_back({{"name", s.name},
                        {"actual_bits", s.actual_bits},
                        {"fractional", s.fractional},
                        {"slack", s.slack},
                        {"within_budget", s.within_budget()}});
  }
  return {{"n", r.n},
          {"delta", r.delta},
          {"d", r.d},
          {"cd", r.capacity},
          {"T", r.max_rounds},
          {"s", r.s},
          {"eps", r.eps},
          {"delta_mean", r.delta_mean},
          {"cost_S", r.cost_S},
          {"cost_A", r.cost_A},
          {"cost_cut", r.cost_cut},
          {"cost_dest_acc", r.cost_dest_acc},
          {"cost_C", r.cost_C},
          {"cost_dest_rej", r.cost_dest_rej},
          {"cost_upper", r.cost_upper},
          {"unused", r.unused},
          {"raw_total", r.raw_total},
          {"fractional_total", r.fractional_total},
          {"stream_bits", r.stream_bits},
          {"sections", sections},
          {"all_within_budget", r.all_within_budget()},
          {"savings", number_or_null(r.savings)},
          {"savings_by_components", number_or_null(r.savings_by_components)},
          {"lambda2_plus", r.lambda2_plus},
          {"hypotheses",
           {{"degree", r.degree_hypothesis},
            {"capacity", r.capacity_hypothesis},
            {"spectral", r.spectral_hypothesis}}}};
}

void require_set(const CodecArgs& a) {
  if (a.set.empty()) throw InvalidParameter("--set is required");
}

int cmd_codec_encode(const CodecArgs& a) {
  require_set(a);
  if (a.output.empty()) throw InvalidParameter("--output is required");
  const auto l = load_execution(a);
  const auto lambda = spectrum_of(l.g).lambda2_plus;
  const auto [enc, cost] =
      codec::encode_execution(l.g, l.tf.trace.params, l.tape, l.tf.trace, a.set, lambda);
  const auto bytes = codec::to_bytes(enc);
  io::write_bytes(a.output, bytes);
  std::cerr << "encoded " << cost.stream_bits << " bits (" << bytes.size() << " bytes), raw "
            << fmt(cost.raw_total) << " bits, tape from " << l.tape_source << '\n';
  return kExitOk;
}

int cmd_codec_decode(const CodecArgs& a) {
  if (a.input.empty()) throw InvalidParameter("--input is required");
  const Graph g = io::graph_from_json(io::read_text(a.graph));
  const auto enc = codec::from_bytes(io::read_bytes(a.input));
  const auto dec = codec::decode_execution(g, enc);
  if (!a.output.empty()) io::write_tape(a.output, dec.tape);
  if (!a.trace_out.empty()) io::write_text(a.trace_out, io::trace_to_json(dec.trace));
  std::cerr << "decoded n=" << enc.header.n << " s=" << enc.header.s << " rounds="
            << *dec.trace.terminated_at << '\n';
  if (a.output.empty()) std::cout << io::tape_to_json(dec.tape);
  return kExitOk;
}

int cmd_codec_verify(const CodecArgs& a) {
  require_set(a);
  const auto l = load_execution(a);
  const auto lambda = spectrum_of(l.g).lambda2_plus;
  const auto [enc, cost] =
      codec::encode_execution(l.g, l.tf.trace.params, l.tape, l.tf.trace, a.set, lambda);
  const auto dec = codec::decode_execution(l.g, codec::from_bytes(codec::to_bytes(enc)));
  if (!(dec.tape == l.tape) || !(dec.trace == l.tf.trace)) {
    std::cout << "ROUNDTRIP FAILED\n";
    return kExitInternal;
  }
  std::cout << "ROUNDTRIP OK\n"
            << "tape: " << l.tape_source << '\n'
            << "stream bits: " << cost.stream_bits << " (raw " << fmt(cost.raw_total) << ")\n"
            << "sections within budget: " << (cost.all_within_budget() ? "yes" : "no") << '\n'
            << "eps: " << fmt(cost.eps) << '\n'
            << "savings: " << fmt(cost.savings) << '\n'
            << "savings by components: " << fmt(cost.savings_by_components) << '\n';
  return kExitOk;
}

int cmd_codec_cost(const CodecArgs& a) {
  require_set(a);
  const auto l = load_execution(a);
  const auto lambda = spectrum_of(l.g).lambda2_plus;
  const auto s = analysis::normalize_proper_subset(l.g.n(), a.set);
  const auto cost = codec::cost_report(l.g, l.tf.trace, s, lambda);
  emit(a.output, cost_json(cost).dump(2) + "\n");
  return kExitOk;
}

// -------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::string family = "complete";
  std::vector<std::uint32_t> sizes;
  std::uint32_t delta = 0;
  std::vector<std::uint32_t> offsets;
  std::uint32_t d = 4;
  std::string c = "4";
  std::uint32_t max_rounds = 64;
  std::uint32_t trials = 100;
  std::uint64_t seed = 0;
  std::string expansion;
  std::uint64_t sampled_trials = 2000;
  unsigned threads = 0;
  std::string output;
  std::string summary;
  std::string json_out;
};

int cmd_experiment(const ExperimentArgs& a, const std::string& kind) {
  if (a.sizes.empty()) throw InvalidParameter("--n needs at least one size");
  analysis::ExperimentConfig cfg;
  cfg.family = analysis::parse_family(a.family);
  cfg.sizes = a.sizes;
  cfg.delta = a.delta;
  cfg.offsets = a.offsets;
  cfg.d = a.d;
  cfg.c = Rational::parse(a.c);
  cfg.max_rounds = a.max_rounds;
  cfg.trials = a.trials;
  cfg.seed0 = a.seed;
  cfg.sampled_trials = a.sampled_trials;
  cfg.threads = effective_threads(a.threads);
  const std::string mode = a.expansion.empty() ? (kind == "expansion" ? "exact" : "none") : a.expansion;
  cfg.expansion = analysis::parse_expansion_mode(mode);
  if (kind == "expansion" && cfg.expansion == analysis::ExpansionMode::None) {
    throw InvalidParameter("experiment expansion needs an expansion mode other than none");
  }

  const auto table = analysis::run_experiment(cfg);
  if (!a.json_out.empty()) io::write_text(a.json_out, table.to_json());
  if (kind == "expansion") {
    // The per-seed distribution is the result; the summary is secondary.
    emit(a.output, table.to_csv());
    if (!a.summary.empty()) io::write_text(a.summary, table.summary_csv());
  } else {
    if (!a.output.empty()) io::write_text(a.output, table.to_csv());
    emit(a.summary, table.summary_csv());
  }
  std::uint32_t errors = 0;
  for (const auto& s : table.summaries) errors += s.errors;
  if (errors > 0) std::cerr << errors << " trial(s) recorded an error\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RAES: build bounded-degree expanders from dense regular graphs"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "Read options from a JSON file")->configurable(false);
  std::string write_config;
  app.add_option("--write-config", write_config, "Write the effective options as JSON and exit")
      ->configurable(false);
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a regular graph as JSON");
  generate->add_option("--family", gen.family, "complete, bipartite, regular or circulant")
      ->capture_default_str();
  generate->add_option("--n", gen.n, "Number of nodes (bipartite: total, 2m)")->required();
  generate->add_option("--delta", gen.delta, "Degree of a random regular graph");
  generate->add_option("--offsets", gen.offsets, "Circulant offsets, closed under negation")
      ->delimiter(',');
  generate->add_option("--seed", gen.seed, "Seed of the random regular graph")->capture_default_str();
  generate->add_option("-o,--output", gen.output, "Output path (default stdout)");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run the protocol on a graph");
  run_cmd->add_option("-g,--graph", run.graph, "Graph JSON")->required();
  run_cmd->add_option("--d", run.d, "Requests per node")->capture_default_str();
  run_cmd->add_option("--c", run.c, "Capacity factor (integer, p/q or decimal)")->capture_default_str();
  run_cmd->add_option("-T,--max-rounds", run.max_rounds, "Round budget")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Tape seed")->capture_default_str();
  run_cmd->add_option("--tape", run.tape, "Replay this tape (JSON or binary) instead of a seed");
  run_cmd->add_option("--trace", run.trace_out, "Write the trace JSON here");
  run_cmd->add_option("--subgraph", run.h_out, "Write the edge list of H here");
  run_cmd->add_option("--stats", run.stats_out, "Write the stats JSON here (default stdout)");
  run_cmd->add_option("--tape-out", run.tape_out, "Write the tape used (.bin for binary)");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Spectrum, expansion and cut statistics");
  analyze->add_option("-g,--graph", an.graph, "Graph JSON");
  analyze->add_option("--subgraph", an.subgraph, "Edge list of H; expansion is measured on it");
  analyze->add_option("--trace", an.trace, "Trace JSON, for --set");
  analyze->add_option("--mode", an.mode, "Expansion: exact, sampled, spectral or none")
      ->capture_default_str();
  analyze->add_option("--set", an.set, "Node set S for cut fractions and classification")
      ->delimiter(',');
  analyze->add_option("--trials", an.trials, "Random subsets for sampled mode")->capture_default_str();
  analyze->add_option("--seed", an.seed, "Seed for sampled mode")->capture_default_str();
  analyze->add_option("--limit", an.limit, "Largest n for exact mode")->capture_default_str();
  analyze->add_flag("--simple", an.simple, "Collapse parallel edges of H");

  CodecArgs cd;
  auto* codec_cmd = app.add_subcommand("codec", "Compressed encoding of an execution");
  codec_cmd->require_subcommand(1);
  auto add_exec = [&cd](CLI::App* sub) {
    sub->add_option("-g,--graph", cd.graph, "Graph JSON")->required();
    sub->add_option("--trace", cd.trace, "Trace JSON")->required();
    sub->add_option("--tape", cd.tape, "Tape (default: the trace's seed, else the trace)");
    sub->add_option("--set", cd.set, "Node set S")->delimiter(',');
  };
  auto* enc_cmd = codec_cmd->add_subcommand("encode", "Encode an execution");
  add_exec(enc_cmd);
  enc_cmd->add_option("-o,--output", cd.output, "Encoding file");
  auto* dec_cmd = codec_cmd->add_subcommand("decode", "Decode an encoding back to its tape");
  dec_cmd->add_option("-g,--graph", cd.graph, "Graph JSON")->required();
  dec_cmd->add_option("-i,--input", cd.input, "Encoding file");
  dec_cmd->add_option("-o,--output", cd.output, "Tape output (.bin for binary, default stdout)");
  dec_cmd->add_option("--trace-out", cd.trace_out, "Write the replayed trace here");
  auto* ver_cmd = codec_cmd->add_subcommand("verify", "Encode, decode and compare");
  add_exec(ver_cmd);
  auto* cost_cmd = codec_cmd->add_subcommand("cost", "Cost ledger of an encoding as JSON");
  add_exec(cost_cmd);
  cost_cmd->add_option("-o,--output", cd.output, "Output path (default stdout)");

  ExperimentArgs ex;
  auto* exp_cmd = app.add_subcommand("experiment", "Batch trials over seeds and sizes");
  exp_cmd->require_subcommand(1);
  std::vector<std::pair<CLI::App*, std::string>> kinds;
  for (const std::string kind : {"termination", "workload", "expansion"}) {
    auto* sub = exp_cmd->add_subcommand(kind, kind == "termination" ? "Rounds to terminate"
                                              : kind == "workload"  ? "Total link requests"
                                                                    : "Expansion of H");
    sub->add_option("--family", ex.family, "complete, bipartite, regular or circulant")
        ->capture_default_str();
    sub->add_option("--n", ex.sizes, "Comma-separated sizes")->delimiter(',')->required();
    sub->add_option("--delta", ex.delta, "Degree for random regular graphs");
    sub->add_option("--offsets", ex.offsets, "Circulant offsets")->delimiter(',');
    sub->add_option("--d", ex.d, "Requests per node")->capture_default_str();
    sub->add_option("--c", ex.c, "Capacity factor")->capture_default_str();
    sub->add_option("-T,--max-rounds", ex.max_rounds, "Round budget")->capture_default_str();
    sub->add_option("--trials", ex.trials, "Seeds per size")->capture_default_str();
    sub->add_option("--seed", ex.seed, "First seed")->capture_default_str();
    sub->add_option("--expansion", ex.expansion, "none, exact, sampled or spectral");
    sub->add_option("--sampled-trials", ex.sampled_trials, "Random subsets for sampled mode")
        ->capture_default_str();
    sub->add_option("--threads", ex.threads, "Worker threads (default all, capped by RAES_THREADS)");
    sub->add_option("-o,--output", ex.output, "Per-trial CSV");
    sub->add_option("--summary", ex.summary, "Per-size summary CSV");
    sub->add_option("--json", ex.json_out, "Per-trial and summary JSON");
    kinds.emplace_back(sub, kind);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (!write_config.empty()) {
    io::write_text(write_config, app.config_to_str(true, false));
    return kExitOk;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*run_cmd) return cmd_run(run, *run_cmd);
    if (*analyze) return cmd_analyze(an);
    if (*enc_cmd) return cmd_codec_encode(cd);
    if (*dec_cmd) return cmd_codec_decode(cd);
    if (*ver_cmd) return cmd_codec_verify(cd);
    if (*cost_cmd) return cmd_codec_cost(cd);
    for (const auto& [sub, kind] : kinds) {
      if (*sub) return cmd_experiment(ex, kind);
    }
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const DecodeError& e) {
    std::cerr << "decode error in " << e.section() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
