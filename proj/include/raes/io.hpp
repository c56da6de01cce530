#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raes/graph.hpp"
#include "raes/protocol.hpp"

namespace raes::io {

// Every writer is deterministic, so write -> read -> write is byte-identical.
// Readers validate and throw InvalidParameter with the offending field.

/// {"n": int, "delta": int, "edges": [[u, v], ...]}, u < v, sorted.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);

/// {"n", "delta", "d", "T", "draws": [[row of node 0], ...]}.
std::string tape_to_json(const RandomTape& tape);
RandomTape tape_from_json(const std::string& text);

/// Four 32-bit big-endian words (n, d, T, Delta), then the draws row-major in
/// ceil(log2 Delta)-bit fields, most significant bit first, zero padded to a byte.
std::vector<std::uint8_t> tape_to_binary(const RandomTape& tape);
RandomTape tape_from_binary(std::span<const std::uint8_t> bytes);

struct TraceFile {
  ExecutionTrace trace;
  std::optional<std::uint64_t> seed;  // seed of fresh_tape, when known
};

/// {"params": {"n", "d", "c", "cd", "T", "seed"?},
///  "rounds": [[{"from", "to", "accepted"}, ...], ...], "terminated_at": int|null}
std::string trace_to_json(const ExecutionTrace& trace, std::optional<std::uint64_t> seed = {});
/// With a graph, also checks that every request goes to a neighbor.
TraceFile trace_from_json(const std::string& text, const Graph* g = nullptr);

/// "n <n> links <m>" then one "from to round" line per link.
std::string subgraph_to_text(const SubgraphH& h);
SubgraphH subgraph_from_text(const std::string& text);

std::string stats_to_json(const RunOutcome& outcome, std::optional<std::uint64_t> seed = {});

std::string read_text(const std::filesystem::path& path);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Binary when the file does not start with '{'.
RandomTape read_tape(const std::filesystem::path& path);
/// Binary for a ".bin" extension, JSON otherwise.
void write_tape(const std::filesystem::path& path, const RandomTape& tape);

}  // namespace raes::io
