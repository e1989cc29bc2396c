#include "colo/harness/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "colo/core/error.hpp"

namespace colo {
namespace {

std::pair<std::uint32_t, std::uint32_t> ordered(std::uint32_t a, std::uint32_t b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::vector<std::vector<std::uint32_t>> Graph::adjacency() const {
  std::vector<std::vector<std::uint32_t>> adj(nodes);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

std::vector<std::size_t> Graph::degrees() const {
  std::vector<std::size_t> deg(nodes, 0);
  for (auto [u, v] : edges) {
    ++deg[u];
    ++deg[v];
  }
  return deg;
}

double Graph::mean_degree() const {
  return nodes == 0 ? 0.0 : 2.0 * static_cast<double>(edges.size()) / static_cast<double>(nodes);
}

std::size_t Graph::max_degree() const {
  auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

Graph make_graph(std::size_t nodes, EdgeList edges) {
  Graph g;
  g.nodes = nodes;
  EdgeList clean;
  clean.reserve(edges.size());
  for (auto [u, v] : edges) {
    require(u < nodes && v < nodes, ErrorCode::kInvalidArgument, "edge endpoint out of range");
    if (u == v) {
      ++g.self_loops;
      continue;
    }
    clean.push_back(ordered(u, v));
  }
  std::sort(clean.begin(), clean.end());
  auto last = std::unique(clean.begin(), clean.end());
  g.duplicate_edges = static_cast<std::size_t>(clean.end() - last);
  clean.erase(last, clean.end());
  g.edges = std::move(clean);
  return g;
}

Graph parse_snap(std::string_view text) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || line[first] == '#' || line[first] == '%') continue;
    std::uint64_t ids[2];
    const char* p = line.data() + first;
    const char* stop = line.data() + line.size();
    for (int k = 0; k < 2; ++k) {
      while (p < stop && (*p == ' ' || *p == '\t')) ++p;
      auto [q, ec] = std::from_chars(p, stop, ids[k]);
      if (ec != std::errc()) {
        fail(ErrorCode::kParse, "edge list line " + std::to_string(line_no) +
                                    ": expected two non-negative node ids");
      }
      p = q;
    }
    while (p < stop && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p != stop) {
      fail(ErrorCode::kParse,
           "edge list line " + std::to_string(line_no) + ": unexpected trailing text");
    }
    raw.emplace_back(ids[0], ids[1]);
  }
  std::vector<std::uint64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [a, b] : raw) {
    ids.push_back(a);
    ids.push_back(b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto index = [&](std::uint64_t id) {
    return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };
  EdgeList edges;
  edges.reserve(raw.size());
  for (auto [a, b] : raw) edges.emplace_back(index(a), index(b));
  return make_graph(ids.size(), std::move(edges));
}

Graph load_snap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open graph " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_snap(ss.str());
}

Graph gen_graph(std::size_t n, double mean_degree, std::size_t max_degree, Prg& prg) {
  require(n >= 1, ErrorCode::kConfig, "graph needs at least one node");
  require(mean_degree >= 0.0, ErrorCode::kConfig, "mean degree must be non-negative");
  require(mean_degree <= static_cast<double>(std::min(max_degree, n - 1)),
          ErrorCode::kConfig, "mean degree exceeds what the degree cap and size allow");
  const auto target = static_cast<std::size_t>(mean_degree * static_cast<double>(n) / 2.0 + 0.5);
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::vector<std::size_t> deg(n, 0);
  std::size_t attempts = 0;
  const std::size_t budget = 50 * target + 100;
  while (edges.size() < target && attempts++ < budget) {
    auto u = static_cast<std::uint32_t>(prg.uniform(n));
    auto v = static_cast<std::uint32_t>(prg.uniform(n));
    if (u == v || deg[u] >= max_degree || deg[v] >= max_degree) continue;
    if (edges.insert(ordered(u, v)).second) {
      ++deg[u];
      ++deg[v];
    }
  }
  return make_graph(n, EdgeList(edges.begin(), edges.end()));
}

Graph subsample(const Graph& g, std::size_t max_nodes, Prg& prg) {
  if (g.nodes <= max_nodes) return g;
  auto adj = g.adjacency();
  std::vector<std::int64_t> label(g.nodes, -1);
  std::vector<std::uint32_t> order(g.nodes);
  for (std::uint32_t i = 0; i < g.nodes; ++i) order[i] = i;
  shuffle(order, prg);
  std::size_t taken = 0;
  for (std::uint32_t start : order) {
    if (taken == max_nodes) break;
    if (label[start] >= 0) continue;
    std::deque<std::uint32_t> queue = {start};
    label[start] = static_cast<std::int64_t>(taken++);
    while (!queue.empty() && taken < max_nodes) {
      std::uint32_t u = queue.front();
      queue.pop_front();
      for (std::uint32_t v : adj[u]) {
        if (taken == max_nodes) break;
        if (label[v] >= 0) continue;
        label[v] = static_cast<std::int64_t>(taken++);
        queue.push_back(v);
      }
    }
  }
  EdgeList edges;
  for (auto [u, v] : g.edges) {
    if (label[u] >= 0 && label[v] >= 0) {
      edges.emplace_back(static_cast<std::uint32_t>(label[u]), static_cast<std::uint32_t>(label[v]));
    }
  }
  return make_graph(taken, std::move(edges));
}

Graph circulant(std::size_t n, std::size_t d) {
  require(d < n, ErrorCode::kConfig, "circulant degree must be below the node count");
  require(d % 2 == 0 || n % 2 == 0, ErrorCode::kConfig, "odd degree needs an even node count");
  EdgeList edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t k = 1; k <= d / 2; ++k) {
      edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>((u + k) % n));
    }
    if (d % 2 == 1 && u < n / 2) {
      edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(u + n / 2));
    }
  }
  return make_graph(n, std::move(edges));
}

Graph rewire(const Graph& g, std::size_t swaps, Prg& prg) {
  if (g.edges.size() < 2) return g;
  EdgeList edges = g.edges;
  std::set<std::pair<std::uint32_t, std::uint32_t>> present(edges.begin(), edges.end());
  std::size_t done = 0;
  std::size_t attempts = 0;
  while (done < swaps && attempts++ < 100 * swaps + 100) {
    std::size_t i = prg.uniform(edges.size());
    std::size_t j = prg.uniform(edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    if (prg.uniform(2) == 1) std::swap(c, d);
    // (a,b),(c,d) -> (a,d),(c,b)
    if (a == d || c == b) continue;
    auto e1 = ordered(a, d);
    auto e2 = ordered(c, b);
    if (e1 == e2 || present.count(e1) || present.count(e2)) continue;
    present.erase(edges[i]);
    present.erase(edges[j]);
    present.insert(e1);
    present.insert(e2);
    edges[i] = e1;
    edges[j] = e2;
    ++done;
  }
  return make_graph(g.nodes, std::move(edges));
}

}  // namespace colo
