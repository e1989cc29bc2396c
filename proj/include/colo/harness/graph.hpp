#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "colo/core/prg.hpp"
#include "colo/localagg/padding.hpp"

namespace colo {

// Undirected simple graph on nodes [0, nodes). Edges are sorted (u < v)
// pairs without duplicates.
struct Graph {
  std::size_t nodes = 0;
  EdgeList edges;
  // Loader diagnostics.
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;

  std::vector<std::vector<std::uint32_t>> adjacency() const;
  std::vector<std::size_t> degrees() const;
  double mean_degree() const;
  std::size_t max_degree() const;
};

// Sorts and deduplicates, counting duplicates and dropping self-loops.
Graph make_graph(std::size_t nodes, EdgeList edges);

// SNAP edge list: "u v" per line, '#' comments. Node ids are mapped to
// [0, n) in increasing id order. Throws kParse with the line number on a
// malformed line, kIo when the file cannot be read.
Graph parse_snap(std::string_view text);
Graph load_snap(const std::string& path);

// Random graph with mean degree close to mean_degree and no node above
// max_degree: uniform random pairs are added while both ends have room.
// Throws kConfig when the request is infeasible.
Graph gen_graph(std::size_t n, double mean_degree, std::size_t max_degree, Prg& prg);

// Induced subgraph on the first max_nodes nodes reached by BFS from a
// random start (restarting in other components as needed), relabelled.
Graph subsample(const Graph& g, std::size_t max_nodes, Prg& prg);

// d-regular circulant graph; d odd needs n even. Throws kConfig otherwise.
Graph circulant(std::size_t n, std::size_t d);

// Degree-preserving rewiring by seeded double-edge swaps.
Graph rewire(const Graph& g, std::size_t swaps, Prg& prg);

}  // namespace colo
