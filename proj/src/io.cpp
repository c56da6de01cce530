#include "raes/io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "raes/codec/bitstream.hpp"
#include "raes/error.hpp"

namespace raes::io {

using nlohmann::json;

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParameter(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

const json& field(const json& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InvalidParameter(std::string(what) + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

std::uint64_t as_uint(const json& value, const std::string& where, std::uint64_t max = UINT32_MAX) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
    throw InvalidParameter(where + ": expected a non-negative integer");
  }
  const auto x = value.get<std::uint64_t>();
  if (x > max) throw InvalidParameter(where + ": value " + std::to_string(x) + " too large");
  return x;
}

std::uint32_t u32(const json& obj, const char* key, const char* what) {
  return static_cast<std::uint32_t>(as_uint(field(obj, key, what), std::string(what) + "." + key));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(x >> shift));
}

}  // namespace

std::string graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return json{{"n", g.n()}, {"delta", g.delta()}, {"edges", edges}}.dump() + "\n";
}

Graph graph_from_json(const std::string& text) {
  const char* what = "graph file";
  const json j = parse(text, what);
  const auto n = u32(j, "n", what);
  const auto delta = u32(j, "delta", what);
  const auto& edges_json = field(j, "edges", what);
  if (!edges_json.is_array()) throw InvalidParameter("graph file: 'edges' must be an array");
  std::vector<Edge> edges;
  edges.reserve(edges_json.size());
  for (std::size_t i = 0; i < edges_json.size(); ++i) {
    const auto& e = edges_json[i];
    const std::string where = "graph file: edges[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 2) throw InvalidParameter(where + " must be a pair");
    const auto u = static_cast<NodeId>(as_uint(e[0], where));
    const auto v = static_cast<NodeId>(as_uint(e[1], where));
    if (u >= v) throw InvalidParameter(where + " must satisfy u < v");
    if (!edges.empty() && Edge{u, v} <= edges.back()) {
      throw InvalidParameter(where + " breaks the sorted order (or repeats an edge)");
    }
    edges.emplace_back(u, v);
  }
  Graph g = Graph::from_edges(n, edges);
  if (g.delta() != delta) {
    throw InvalidParameter("graph file: declared delta " + std::to_string(delta) +
                           " but the edges give " + std::to_string(g.delta()));
  }
  return g;
}

std::string tape_to_json(const RandomTape& tape) {
  json rows = json::array();
  for (NodeId v = 0; v < tape.n(); ++v) {
    const auto row = tape.row(v);
    rows.push_back(json(std::vector<std::uint32_t>(row.begin(), row.end())));
  }
  return json{{"n", tape.n()}, {"delta", tape.delta()}, {"d", tape.d()}, {"T", tape.max_rounds()},
              {"draws", rows}}
             .dump() +
         "\n";
}

RandomTape tape_from_json(const std::string& text) {
  const char* what = "tape file";
  const json j = parse(text, what);
  const auto n = u32(j, "n", what);
  const auto delta = u32(j, "delta", what);
  const auto d = u32(j, "d", what);
  const auto T = u32(j, "T", what);
  const auto& rows = field(j, "draws", what);
  if (!rows.is_array() || rows.size() != n) {
    throw InvalidParameter("tape file: 'draws' must hold one row per node");
  }
  std::vector<std::uint32_t> draws;
  for (std::size_t v = 0; v < rows.size(); ++v) {
    const std::string where = "tape file: draws[" + std::to_string(v) + "]";
    if (!rows[v].is_array() || rows[v].size() != static_cast<std::size_t>(d) * T) {
      throw InvalidParameter(where + " must hold d*T draws");
    }
    for (const auto& x : rows[v]) draws.push_back(static_cast<std::uint32_t>(as_uint(x, where)));
  }
  return RandomTape(n, delta, d, T, std::move(draws));
}

std::vector<std::uint8_t> tape_to_binary(const RandomTape& tape) {
  std::vector<std::uint8_t> out;
  for (auto x : {tape.n(), tape.d(), tape.max_rounds(), tape.delta()}) put_u32(out, x);
  codec::BitWriter w;
  const unsigned width = codec::index_width(tape.delta());
  for (auto x : tape.draws()) w.write(x, width);
  const auto body = w.take();
  out.insert(out.end(), body.bytes.begin(), body.bytes.end());
  return out;
}

RandomTape tape_from_binary(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw InvalidParameter("tape file: binary header truncated");
  std::uint32_t header[4];
  for (int k = 0; k < 4; ++k) {
    header[k] = 0;
    for (int b = 0; b < 4; ++b) header[k] = (header[k] << 8) | bytes[4 * k + b];
  }
  const auto [n, d, T, delta] = std::tuple{header[0], header[1], header[2], header[3]};
  if (delta == 0) throw InvalidParameter("tape file: Delta must be positive");
  const unsigned width = codec::index_width(delta);
  const std::uint64_t count = static_cast<std::uint64_t>(n) * d * T;
  const std::uint64_t body_bytes = (count * width + 7) / 8;
  if (bytes.size() - 16 != body_bytes) {
    throw InvalidParameter("tape file: expected " + std::to_string(body_bytes) +
                           " payload bytes, found " + std::to_string(bytes.size() - 16));
  }
  codec::BitStream body;
  body.bytes.assign(bytes.begin() + 16, bytes.end());
  body.bit_length = body.bytes.size() * 8;
  codec::BitReader r(body);
  std::vector<std::uint32_t> draws(count);
  for (auto& x : draws) x = static_cast<std::uint32_t>(r.read(width, "tape"));
  while (r.remaining() > 0) {
    if (r.read_bit("tape")) throw InvalidParameter("tape file: nonzero padding bits");
  }
  return RandomTape(n, delta, d, T, std::move(draws));
}

std::string trace_to_json(const ExecutionTrace& trace, std::optional<std::uint64_t> seed) {
  json params = {{"n", trace.n},
                 {"d", trace.params.d},
                 {"c", trace.params.c.str()},
                 {"cd", trace.params.capacity()},
                 {"T", trace.params.max_rounds}};
  if (seed) params["seed"] = *seed;
  json rounds = json::array();
  for (const auto& round : trace.rounds) {
    json reqs = json::array();
    for (const auto& r : round.requests) {
      reqs.push_back({{"from", r.from}, {"to", r.to}, {"accepted", r.accepted}});
    }
    rounds.push_back(std::move(reqs));
  }
  json j = {{"params", params},
            {"rounds", rounds},
            {"terminated_at", trace.terminated_at ? json(*trace.terminated_at) : json()}};
  return j.dump() + "\n";
}

TraceFile trace_from_json(const std::string& text, const Graph* g) {
  const char* what = "trace file";
  const json j = parse(text, what);
  const auto& p = field(j, "params", what);
  const auto n = u32(p, "n", "trace file: params");
  const auto& c_json = field(p, "c", "trace file: params");
  RaesParams params;
  params.d = u32(p, "d", "trace file: params");
  params.max_rounds = u32(p, "T", "trace file: params");
  if (c_json.is_string()) {
    params.c = Rational::parse(c_json.get<std::string>());
  } else if (c_json.is_number_integer()) {
    params.c = Rational::make(c_json.get<std::int64_t>(), 1);
  } else {
    throw InvalidParameter("trace file: params.c must be a string like \"3/2\" or an integer");
  }
  params.validate();
  if (p.contains("cd") && u32(p, "cd", "trace file: params") != params.capacity()) {
    throw InvalidParameter("trace file: params.cd disagrees with c*d");
  }
  if (g && g->n() != n) throw InvalidParameter("trace file: n does not match the graph");

  TraceFile out;
  if (p.contains("seed")) out.seed = as_uint(p.at("seed"), "trace file: params.seed", UINT64_MAX);

  const auto& rounds_json = field(j, "rounds", what);
  if (!rounds_json.is_array()) throw InvalidParameter("trace file: 'rounds' must be an array");
  std::vector<std::vector<Request>> rounds;
  for (std::size_t t = 0; t < rounds_json.size(); ++t) {
    const auto& rj = rounds_json[t];
    if (!rj.is_array()) throw InvalidParameter("trace file: each round must be an array");
    std::vector<Request> reqs;
    for (std::size_t i = 0; i < rj.size(); ++i) {
      const std::string where = "trace file: rounds[" + std::to_string(t) + "][" + std::to_string(i) + "]";
      const auto& acc = field(rj[i], "accepted", where.c_str());
      if (!acc.is_boolean()) throw InvalidParameter(where + ".accepted must be a boolean");
      Request r{u32(rj[i], "from", where.c_str()), u32(rj[i], "to", where.c_str()), acc.get<bool>()};
      if (r.from >= n || r.to >= n) throw InvalidParameter(where + ": node out of range");
      if (g && !g->has_edge(r.from, r.to)) throw InvalidParameter(where + ": not an edge of the graph");
      reqs.push_back(r);
    }
    rounds.push_back(std::move(reqs));
  }
  const auto& term = field(j, "terminated_at", what);
  std::optional<std::uint32_t> terminated_at;
  if (!term.is_null()) terminated_at = static_cast<std::uint32_t>(as_uint(term, "trace file: terminated_at"));
  out.trace = rebuild_trace(n, params, std::move(rounds), terminated_at);
  return out;
}

std::string subgraph_to_text(const SubgraphH& h) {
  std::ostringstream os;
  os << "n " << h.n() << " links " << h.links().size() << '\n';
  for (const auto& l : h.links()) os << l.from << ' ' << l.to << ' ' << l.round << '\n';
  return os.str();
}

SubgraphH subgraph_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tag_n, tag_links;
  std::uint64_t n = 0, m = 0;
  if (!(is >> tag_n >> n >> tag_links >> m) || tag_n != "n" || tag_links != "links" || n > UINT32_MAX) {
    throw InvalidParameter("edge list: expected header 'n <n> links <m>'");
  }
  std::vector<Link> links;
  for (std::uint64_t i = 0; i < m; ++i) {
    std::uint64_t from = 0, to = 0, round = 0;
    if (!(is >> from >> to >> round)) {
      throw InvalidParameter("edge list: link " + std::to_string(i) + " missing or malformed");
    }
    if (from >= n || to >= n || round > UINT32_MAX) {
      throw InvalidParameter("edge list: link " + std::to_string(i) + " out of range");
    }
    links.push_back({static_cast<NodeId>(from), static_cast<NodeId>(to), static_cast<std::uint32_t>(round)});
  }
  std::string extra;
  if (is >> extra) throw InvalidParameter("edge list: trailing content after " + std::to_string(m) + " links");
  return SubgraphH(static_cast<std::uint32_t>(n), std::move(links));
}

std::string stats_to_json(const RunOutcome& outcome, std::optional<std::uint64_t> seed) {
  const auto& s = outcome.stats;
  json j = {{"terminated", outcome.terminated()},
            {"rounds_used", s.rounds_used},
            {"total_requests", s.total_requests},
            {"total_messages", s.total_messages},
            {"unsettled_per_round", s.unsettled_per_round},
            {"n", outcome.trace.n},
            {"d", outcome.trace.params.d},
            {"c", outcome.trace.params.c.str()},
            {"T", outcome.trace.params.max_rounds}};
  if (seed) j["seed"] = *seed;
  return j.dump(2) + "\n";
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidParameter("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
  const auto text = read_text(path);
  return {text.begin(), text.end()};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidParameter("cannot write '" + path.string() + "'");
  out << text;
}

void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  write_text(path, std::string(bytes.begin(), bytes.end()));
}

RandomTape read_tape(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  std::size_t i = 0;
  while (i < bytes.size() && std::isspace(bytes[i])) ++i;
  if (i < bytes.size() && bytes[i] == '{') return tape_from_json(std::string(bytes.begin(), bytes.end()));
  return tape_from_binary(bytes);
}

void write_tape(const std::filesystem::path& path, const RandomTape& tape) {
  if (path.extension() == ".bin") {
    write_bytes(path, tape_to_binary(tape));
  } else {
    write_text(path, tape_to_json(tape));
  }
}

}  // namespace raes::io
