#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace spl::graph {

using Vertex = std::uint32_t;

/// Plain directed graph over vertices 0..n-1. Successor lists are kept sorted
/// and free of duplicates so every traversal below is deterministic.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : succ_(n) {}

  std::size_t size() const { return succ_.size(); }

  void add_edge(Vertex u, Vertex v) {
    auto& s = succ_[u];
    auto it = std::lower_bound(s.begin(), s.end(), v);
    if (it == s.end() || *it != v) s.insert(it, v);
  }

  bool has_edge(Vertex u, Vertex v) const {
    const auto& s = succ_[u];
    return std::binary_search(s.begin(), s.end(), v);
  }

  const std::vector<Vertex>& successors(Vertex u) const { return succ_[u]; }

  std::size_t edge_count() const {
    std::size_t m = 0;
    for (const auto& s : succ_) m += s.size();
    return m;
  }

 private:
  std::vector<std::vector<Vertex>> succ_;
};

/// Every simple directed cycle with at most `max_len` vertices. Each cycle is
/// reported once, rotated so that its smallest vertex comes first. Self-loops
/// are reported as length-1 cycles when `max_len >= 1`.
///
/// Bounded depth-first search rooted at each vertex s over vertices > s; the
/// length bound makes Johnson-style blocking unnecessary for the sizes used
/// here.
inline std::vector<std::vector<Vertex>> simple_cycles(const Digraph& g, std::size_t max_len) {
  std::vector<std::vector<Vertex>> out;
  if (max_len == 0) return out;
  const std::size_t n = g.size();
  std::vector<char> on_path(n, 0);
  std::vector<Vertex> path;
  // explicit stack of (vertex, next successor position)
  std::vector<std::pair<Vertex, std::size_t>> stack;

  for (Vertex s = 0; s < n; ++s) {
    path.assign(1, s);
    on_path[s] = 1;
    stack.assign(1, {s, 0});
    while (!stack.empty()) {
      auto& [u, pos] = stack.back();
      const auto& succ = g.successors(u);
      if (pos < succ.size()) {
        Vertex w = succ[pos++];
        if (w == s) {
          out.push_back(path);
        } else if (w > s && !on_path[w] && path.size() < max_len) {
          on_path[w] = 1;
          path.push_back(w);
          stack.emplace_back(w, 0);
        }
      } else {
        on_path[u] = 0;
        path.pop_back();
        stack.pop_back();
      }
    }
  }
  return out;
}

struct SccResult {
  /// Components in reverse topological order of the condensation (sinks
  /// first), each sorted ascending.
  std::vector<std::vector<Vertex>> components;
  std::vector<std::size_t> component_of;
};

/// Tarjan's algorithm, iterative.
inline SccResult strongly_connected_components(const Digraph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<Vertex> tstack;
  std::vector<std::pair<Vertex, std::size_t>> call;
  SccResult r;
  r.component_of.assign(n, 0);
  std::size_t next = 0;

  for (Vertex root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next++;
    tstack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto& succ = g.successors(v);
      if (pos < succ.size()) {
        Vertex w = succ[pos++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next++;
          tstack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<Vertex> comp;
        Vertex w;
        do {
          w = tstack.back();
          tstack.pop_back();
          on_stack[w] = 0;
          r.component_of[w] = r.components.size();
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        r.components.push_back(std::move(comp));
      }
      Vertex done = v;
      call.pop_back();
      if (!call.empty()) {
        Vertex parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return r;
}

/// True when the component contains a cycle (two or more vertices, or a
/// self-loop).
inline bool component_is_cyclic(const Digraph& g, const std::vector<Vertex>& comp) {
  if (comp.size() > 1) return true;
  return !comp.empty() && g.has_edge(comp[0], comp[0]);
}

}  // namespace spl::graph
