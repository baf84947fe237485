#ifndef THURSTON_TESTS_HELPERS_HPP
#define THURSTON_TESTS_HELPERS_HPP

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "thurston/sft.hpp"

namespace testutil {

using thurston::Cycle;
using thurston::Edge;
using thurston::EdgePotential;
using thurston::RoofFunction;
using thurston::SubshiftGraph;

inline std::vector<std::string> numbered_states(int n) {
  std::vector<std::string> s;
  for (int i = 0; i < n; ++i) s.push_back("s" + std::to_string(i));
  return s;
}

// Full shift on n symbols: all n^2 edges.
inline SubshiftGraph full_shift(int n) {
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) es.push_back({i, j});
  return SubshiftGraph(numbered_states(n), es);
}

// States {1,2}, edges 1->1, 1->2, 2->1.
inline SubshiftGraph golden_mean() {
  return SubshiftGraph({"1", "2"}, {{0, 0}, {0, 1}, {1, 0}});
}

inline SubshiftGraph cycle_graph(int n) {
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) es.push_back({i, (i + 1) % n});
  return SubshiftGraph(numbered_states(n), es);
}

// Random strongly connected graph: a Hamiltonian cycle through a random
// permutation plus extra random edges.
inline SubshiftGraph random_graph(std::mt19937_64& rng, int n,
                                  double extra_edge_prob = 0.4) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::set<std::pair<int, int>> chosen;
  for (int i = 0; i < n; ++i)
    chosen.insert({perm[i], perm[(i + 1) % n]});
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (coin(rng) < extra_edge_prob) chosen.insert({i, j});
  std::vector<Edge> es;
  for (auto& [a, b] : chosen) es.push_back({a, b});
  return SubshiftGraph(numbered_states(n), es);
}

inline EdgePotential random_potential(std::mt19937_64& rng,
                                      const SubshiftGraph& g, double lo = -1.0,
                                      double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(g.num_edges());
  for (double& x : v) x = dist(rng);
  return EdgePotential(v);
}

inline RoofFunction random_roof(std::mt19937_64& rng, const SubshiftGraph& g,
                                double lo = 0.5, double hi = 2.5) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(g.num_edges());
  for (double& x : v) x = dist(rng);
  return RoofFunction(v);
}

inline std::vector<double> random_state_potential(std::mt19937_64& rng,
                                                  const SubshiftGraph& g,
                                                  double amp = 1.0) {
  std::uniform_real_distribution<double> dist(-amp, amp);
  std::vector<double> u(g.num_states());
  for (double& x : u) x = dist(rng);
  return u;
}

// All simple directed cycles (no repeated vertex), one per rotation class:
// the DFS anchors each cycle at its smallest vertex.
inline std::vector<Cycle> simple_cycles(const SubshiftGraph& g) {
  std::vector<Cycle> cycles;
  std::vector<int> path_edges;
  std::vector<char> on_path(g.num_states(), 0);
  auto dfs = [&](auto&& self, int start, int v) -> void {
    for (int e : g.out_edges(v)) {
      int w = g.edge(e).to;
      if (w == start) {
        path_edges.push_back(e);
        cycles.push_back(Cycle{path_edges});
        path_edges.pop_back();
      } else if (w > start && !on_path[w]) {
        on_path[w] = 1;
        path_edges.push_back(e);
        self(self, start, w);
        path_edges.pop_back();
        on_path[w] = 0;
      }
    }
  };
  for (int s = 0; s < g.num_states(); ++s) {
    on_path.assign(g.num_states(), 0);
    on_path[s] = 1;
    dfs(dfs, s, s);
  }
  return cycles;
}

}  // namespace testutil

#endif
