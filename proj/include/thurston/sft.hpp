#ifndef THURSTON_SFT_HPP
#define THURSTON_SFT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thurston/errors.hpp"

namespace thurston {

struct Edge {
  int from = 0;
  int to = 0;
};

// A subshift of finite type, stored as its defining directed graph.
// Construction validates: no duplicate edges, no state without both an
// outgoing and an incoming edge, and strong connectivity.
class SubshiftGraph {
 public:
  SubshiftGraph(std::vector<std::string> states, std::vector<Edge> edges);

  static SubshiftGraph from_named_edges(
      std::vector<std::string> states,
      const std::vector<std::pair<std::string, std::string>>& edges);

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& state_name(int s) const { return states_[s]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<int>& out_edges(int state) const { return out_[state]; }
  const std::vector<int>& in_edges(int state) const { return in_[state]; }
  int state_index(const std::string& name) const;
  // -1 when the pair is not an edge.
  int edge_between(int from, int to) const;
  bool same_graph(const SubshiftGraph& other) const {
    return states_ == other.states_ && edge_pairs_ == other.edge_pairs_;
  }

 private:
  std::vector<std::string> states_;
  std::vector<Edge> edges_;
  std::vector<std::pair<int, int>> edge_pairs_;
  std::vector<std::vector<int>> out_, in_;
};

inline SubshiftGraph build_subshift(std::vector<std::string> states,
                                    std::vector<Edge> edges) {
  return SubshiftGraph(std::move(states), std::move(edges));
}

// Locally constant potential: one finite real value per edge.
struct EdgePotential {
  std::vector<double> values;

  EdgePotential() = default;
  explicit EdgePotential(std::vector<double> v);

  int size() const { return static_cast<int>(values.size()); }
  double operator[](int e) const { return values[e]; }
  double& operator[](int e) { return values[e]; }
};

EdgePotential constant_potential(const SubshiftGraph& g, double c);
// f(i->j) = u(j) - u(i); cycle sums of such a potential all vanish.
EdgePotential coboundary_potential(const SubshiftGraph& g,
                                   const std::vector<double>& u);
EdgePotential add(const EdgePotential& a, const EdgePotential& b);
EdgePotential scale(const EdgePotential& f, double c);

// Strictly positive potential: time spent per edge of the suspension flow.
struct RoofFunction {
  EdgePotential values;

  RoofFunction() = default;
  explicit RoofFunction(EdgePotential pot);
  explicit RoofFunction(std::vector<double> v)
      : RoofFunction(EdgePotential(std::move(v))) {}

  int size() const { return values.size(); }
  double operator[](int e) const { return values[e]; }
  double min_value() const;
};

// Shift-invariant Markov measure: stationary state weights plus one
// transition probability per edge. edge_frequencies = weight * prob.
struct MarkovMeasure {
  std::vector<double> state_weights;
  std::vector<double> edge_probs;
  std::vector<double> edge_frequencies;
};

// Checks normalization and stationarity to 1e-12; throws invalid_argument.
void validate_measure(const SubshiftGraph& g, const MarkovMeasure& m);

// Closed path in the graph, stored as the edge index sequence.
struct Cycle {
  std::vector<int> edge_ids;

  int length() const { return static_cast<int>(edge_ids.size()); }
};

// Verifies the edges chain and close up; throws cycle_not_in_graph.
void validate_cycle(const SubshiftGraph& g, const Cycle& a);
// Lexicographically minimal rotation of the edge index sequence.
Cycle canonical_rotation(Cycle a);
double cycle_sum(const EdgePotential& f, const Cycle& a);
std::vector<int> cycle_states(const SubshiftGraph& g, const Cycle& a);

// log of the Perron eigenvalue of the adjacency matrix.
double topological_entropy(const SubshiftGraph& g);

// log spectral radius of the matrix with e^{f(edge)} on edges, 0 elsewhere.
double pressure(const SubshiftGraph& g, const EdgePotential& f);

// Ruelle-Perron-Frobenius measure built from the left/right Perron
// eigenvectors of the weighted matrix; attains the pressure supremum.
MarkovMeasure equilibrium_measure(const SubshiftGraph& g,
                                  const EdgePotential& f);

// dP(f + s*direction)/ds at s=0, i.e. the direction integrated against the
// equilibrium measure of f.
double pressure_derivative(const SubshiftGraph& g, const EdgePotential& f,
                           const EdgePotential& direction);

struct LivsicResult {
  // f(i->j) ~= constant + u(j) - u(i) when coboundary_up_to_constant holds.
  std::vector<double> state_potential;
  double constant = 0.0;
  bool coboundary_up_to_constant = false;
  double max_residual = 0.0;
  // A cycle whose mean differs from `constant`, present when the flag is
  // false.
  std::optional<Cycle> witness;
};

// Exact cohomology test for edge potentials: spanning-tree assignment plus
// verification of every non-tree edge. Total function, never throws.
LivsicResult livsic_reduce(const SubshiftGraph& g, const EdgePotential& f);

// All cycles of length <= max_edge_count, one representative per rotation
// class, ordered by (length, lexicographic edge sequence). Includes
// non-simple cycles.
std::vector<Cycle> enumerate_cycles(const SubshiftGraph& g, int max_edge_count,
                                    std::size_t budget = 1000000);

// Dirac mass of the periodic orbit: edge frequencies proportional to
// traversal counts.
MarkovMeasure cycle_measure(const SubshiftGraph& g, const Cycle& a);

// Integral of f: sum of edge frequency times edge value.
double integrate(const MarkovMeasure& m, const EdgePotential& f);

// Entropy of the Markov chain with these transition statistics,
// -sum freq(e) log prob(e). For an equilibrium measure this is the metric
// entropy; a cycle measure is not Markov and its orbit entropy is 0.
double markov_entropy(const MarkovMeasure& m);

}  // namespace thurston

#endif
