#include "thurston/sft.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace thurston {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Forward BFS over out- or in-edges; returns visited flags.
std::vector<char> reach(const SubshiftGraph& g, int start, bool forward) {
  std::vector<char> seen(g.num_states(), 0);
  std::deque<int> queue{start};
  seen[start] = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    const auto& es = forward ? g.out_edges(v) : g.in_edges(v);
    for (int e : es) {
      int w = forward ? g.edge(e).to : g.edge(e).from;
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

SubshiftGraph::SubshiftGraph(std::vector<std::string> states,
                             std::vector<Edge> edges)
    : states_(std::move(states)), edges_(std::move(edges)) {
  if (states_.empty() || edges_.empty())
    fail(errc::invalid_argument, "graph needs at least one state and edge");
  const int n = num_states();
  out_.resize(n);
  in_.resize(n);
  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.from < 0 || ed.from >= n || ed.to < 0 || ed.to >= n)
      fail(errc::invalid_argument, "edge endpoint out of range");
    if (!seen.insert({ed.from, ed.to}).second)
      fail(errc::duplicate_edge, "edge " + states_[ed.from] + "->" +
                                     states_[ed.to] + " appears twice");
    edge_pairs_.push_back({ed.from, ed.to});
    out_[ed.from].push_back(e);
    in_[ed.to].push_back(e);
  }
  for (int s = 0; s < n; ++s) {
    if (out_[s].empty() || in_[s].empty())
      fail(errc::dangling_state,
           "state " + states_[s] + " lacks an outgoing or incoming edge");
  }
  auto fwd = reach(*this, 0, true);
  auto bwd = reach(*this, 0, false);
  for (int s = 0; s < n; ++s) {
    if (!fwd[s])
      fail(errc::not_irreducible,
           "no path from " + states_[0] + " to " + states_[s]);
    if (!bwd[s])
      fail(errc::not_irreducible,
           "no path from " + states_[s] + " to " + states_[0]);
  }
}

SubshiftGraph SubshiftGraph::from_named_edges(
    std::vector<std::string> states,
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    index[states[i]] = i;
  std::vector<Edge> es;
  for (const auto& [a, b] : edges) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end())
      fail(errc::invalid_argument, "edge names unknown state " + a + "/" + b);
    es.push_back({ia->second, ib->second});
  }
  return SubshiftGraph(std::move(states), std::move(es));
}

int SubshiftGraph::state_index(const std::string& name) const {
  for (int i = 0; i < num_states(); ++i)
    if (states_[i] == name) return i;
  fail(errc::invalid_argument, "unknown state " + name);
}

int SubshiftGraph::edge_between(int from, int to) const {
  for (int e : out_[from])
    if (edges_[e].to == to) return e;
  return -1;
}

EdgePotential::EdgePotential(std::vector<double> v) : values(std::move(v)) {
  if (!all_finite(values))
    fail(errc::invalid_argument, "potential has non-finite entries");
}

EdgePotential constant_potential(const SubshiftGraph& g, double c) {
  return EdgePotential(std::vector<double>(g.num_edges(), c));
}

EdgePotential coboundary_potential(const SubshiftGraph& g,
                                   const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != g.num_states())
    fail(errc::graph_mismatch, "state potential size != number of states");
  std::vector<double> v(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    v[e] = u[g.edge(e).to] - u[g.edge(e).from];
  return EdgePotential(std::move(v));
}

EdgePotential add(const EdgePotential& a, const EdgePotential& b) {
  if (a.size() != b.size()) fail(errc::graph_mismatch, "potential sizes differ");
  std::vector<double> v(a.values);
  for (int i = 0; i < b.size(); ++i) v[i] += b.values[i];
  return EdgePotential(std::move(v));
}

EdgePotential scale(const EdgePotential& f, double c) {
  std::vector<double> v(f.values);
  for (double& x : v) x *= c;
  return EdgePotential(std::move(v));
}

RoofFunction::RoofFunction(EdgePotential pot) : values(std::move(pot)) {
  if (values.size() == 0) fail(errc::invalid_argument, "empty roof");
  if (min_value() <= 0.0)
    fail(errc::invalid_argument, "roof function must be strictly positive");
}

double RoofFunction::min_value() const {
  return *std::min_element(values.values.begin(), values.values.end());
}

void validate_measure(const SubshiftGraph& g, const MarkovMeasure& m) {
  const double tol = 1e-12;
  if (static_cast<int>(m.state_weights.size()) != g.num_states() ||
      static_cast<int>(m.edge_probs.size()) != g.num_edges() ||
      static_cast<int>(m.edge_frequencies.size()) != g.num_edges())
    fail(errc::graph_mismatch, "measure sized for a different graph");
  double total = 0.0;
  for (double w : m.state_weights) total += w;
  if (std::abs(total - 1.0) > tol)
    fail(errc::invalid_argument, "state weights do not sum to 1");
  for (int s = 0; s < g.num_states(); ++s) {
    double row = 0.0, outflow = 0.0;
    for (int e : g.out_edges(s)) {
      row += m.edge_probs[e];
      outflow += m.edge_frequencies[e];
    }
    if (std::abs(row - 1.0) > tol)
      fail(errc::invalid_argument,
           "outgoing probabilities of " + g.state_name(s) + " do not sum to 1");
    double inflow = 0.0;
    for (int e : g.in_edges(s)) inflow += m.edge_frequencies[e];
    if (std::abs(inflow - outflow) > tol)
      fail(errc::invalid_argument,
           "measure not stationary at " + g.state_name(s));
  }
}

void validate_cycle(const SubshiftGraph& g, const Cycle& a) {
  if (a.edge_ids.empty()) fail(errc::cycle_not_in_graph, "empty cycle");
  for (std::size_t i = 0; i < a.edge_ids.size(); ++i) {
    int e = a.edge_ids[i];
    if (e < 0 || e >= g.num_edges())
      fail(errc::cycle_not_in_graph, "edge index out of range");
    int next = a.edge_ids[(i + 1) % a.edge_ids.size()];
    if (g.edge(e).to != g.edge(next).from)
      fail(errc::cycle_not_in_graph, "edges do not chain into a closed path");
  }
}

Cycle canonical_rotation(Cycle a) {
  const auto& v = a.edge_ids;
  const std::size_t n = v.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      int lhs = v[(r + k) % n], rhs = v[(best + k) % n];
      if (lhs != rhs) {
        if (lhs < rhs) best = r;
        break;
      }
    }
  }
  std::vector<int> rot(n);
  for (std::size_t k = 0; k < n; ++k) rot[k] = v[(best + k) % n];
  a.edge_ids = std::move(rot);
  return a;
}

double cycle_sum(const EdgePotential& f, const Cycle& a) {
  double s = 0.0;
  for (int e : a.edge_ids) s += f[e];
  return s;
}

std::vector<int> cycle_states(const SubshiftGraph& g, const Cycle& a) {
  std::vector<int> st;
  st.reserve(a.edge_ids.size());
  for (int e : a.edge_ids) st.push_back(g.edge(e).from);
  return st;
}

namespace {

struct PerronData {
  double value = 0.0;            // Perron eigenvalue of the weighted matrix
  Eigen::VectorXd right, left;   // positive eigenvectors
};

Eigen::MatrixXd weighted_matrix(const SubshiftGraph& g,
                                const EdgePotential& f) {
  if (f.size() != g.num_edges())
    fail(errc::graph_mismatch, "potential sized for a different graph");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(g.num_states(), g.num_states());
  for (int e = 0; e < g.num_edges(); ++e)
    B(g.edge(e).from, g.edge(e).to) = std::exp(f[e]);
  return B;
}

// Power iteration on B + I (primitive for irreducible B), with a dense
// eigensolver fallback. Iteration budget 1e5, eigenvalue tolerance 1e-13.
PerronData perron(const SubshiftGraph& g, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(B.rows());
  const Eigen::MatrixXd S = B + Eigen::MatrixXd::Identity(n, n);
  auto iterate = [&](const Eigen::MatrixXd& M, Eigen::VectorXd& v) {
    double lambda = 0.0;
    v = Eigen::VectorXd::Constant(n, 1.0 / n);
    for (int it = 0; it < 100000; ++it) {
      Eigen::VectorXd w = M * v;
      double next = w.sum();  // v normalized to sum 1, w > 0
      w /= next;
      double delta = std::abs(next - lambda);
      lambda = next;
      v = w;
      if (delta <= 1e-13 * std::max(1.0, std::abs(lambda))) {
        double resid = (M * v - lambda * v).cwiseAbs().maxCoeff();
        if (resid <= 1e-12 * std::max(1.0, lambda) * v.cwiseAbs().maxCoeff())
          return lambda;
      }
    }
    return -1.0;  // not converged
  };
  PerronData out;
  Eigen::VectorXd r, l;
  double lr = iterate(S, r);
  double ll = iterate(S.transpose(), l);
  if (lr > 0.0 && ll > 0.0) {
    out.value = 0.5 * (lr + ll) - 1.0;
    out.right = r;
    out.left = l;
    return out;
  }
  // Dense fallback.
  Eigen::EigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    fail(errc::convergence_failure, "Perron solver did not converge");
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < n; ++i) {
    double m = std::abs(es.eigenvalues()(i));
    if (m > best) {
      best = m;
      arg = i;
    }
  }
  out.value = es.eigenvalues()(arg).real() - 1.0;
  out.right = es.eigenvectors().col(arg).cwiseAbs();
  Eigen::EigenSolver<Eigen::MatrixXd> est(S.transpose());
  if (est.info() != Eigen::Success)
    fail(errc::convergence_failure, "Perron solver did not converge");
  arg = 0;
  best = -1.0;
  for (int i = 0; i < n; ++i) {
    double m = std::abs(est.eigenvalues()(i));
    if (m > best) {
      best = m;
      arg = i;
    }
  }
  out.left = est.eigenvectors().col(arg).cwiseAbs();
  if (out.value <= 0.0)
    fail(errc::convergence_failure, "weighted matrix has no positive Perron root");
  return out;
}

}  // namespace

double topological_entropy(const SubshiftGraph& g) {
  return pressure(g, constant_potential(g, 0.0));
}

double pressure(const SubshiftGraph& g, const EdgePotential& f) {
  Eigen::MatrixXd B = weighted_matrix(g, f);
  return std::log(perron(g, B).value);
}

MarkovMeasure equilibrium_measure(const SubshiftGraph& g,
                                  const EdgePotential& f) {
  Eigen::MatrixXd B = weighted_matrix(g, f);
  PerronData p = perron(g, B);
  const int n = g.num_states();
  MarkovMeasure m;
  m.edge_probs.resize(g.num_edges());
  m.edge_frequencies.resize(g.num_edges());

  // Transition row i: B_ij v_j / (lambda v_i), row-normalized exactly so the
  // eigenvector residual cannot leak into the stochasticity invariant.
  std::vector<double> row_sum(n, 0.0);
  for (int e = 0; e < g.num_edges(); ++e) {
    int i = g.edge(e).from, j = g.edge(e).to;
    m.edge_probs[e] = B(i, j) * p.right(j) / (p.value * p.right(i));
    row_sum[i] += m.edge_probs[e];
  }
  for (int e = 0; e < g.num_edges(); ++e)
    m.edge_probs[e] /= row_sum[g.edge(e).from];

  // Scale so <left, right> = 1; state weights are the componentwise product,
  // polished to a stationary vector of the normalized chain. The lazy update
  // (pi + pi P)/2 also converges on periodic graphs.
  double pairing = p.left.dot(p.right);
  Eigen::VectorXd pi(n);
  for (int s = 0; s < n; ++s) pi(s) = p.left(s) * p.right(s) / pairing;
  pi /= pi.sum();
  for (int it = 0; it < 200 * n + 200; ++it) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < g.num_edges(); ++e)
      next(g.edge(e).to) += pi(g.edge(e).from) * m.edge_probs[e];
    double resid = (next - pi).cwiseAbs().maxCoeff();
    pi = 0.5 * (pi + next);
    pi /= pi.sum();
    if (resid <= 1e-15) break;
  }
  m.state_weights.assign(pi.data(), pi.data() + n);
  for (int e = 0; e < g.num_edges(); ++e)
    m.edge_frequencies[e] = m.state_weights[g.edge(e).from] * m.edge_probs[e];
  return m;
}

double pressure_derivative(const SubshiftGraph& g, const EdgePotential& f,
                           const EdgePotential& direction) {
  return integrate(equilibrium_measure(g, f), direction);
}

namespace {

// Directed BFS tree from `root`; parent_edge[v] = edge used to reach v.
std::vector<int> bfs_tree(const SubshiftGraph& g, int root) {
  std::vector<int> parent_edge(g.num_states(), -1);
  std::vector<char> seen(g.num_states(), 0);
  seen[root] = 1;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : g.out_edges(v)) {
      int w = g.edge(e).to;
      if (!seen[w]) {
        seen[w] = 1;
        parent_edge[w] = e;
        queue.push_back(w);
      }
    }
  }
  return parent_edge;
}

std::vector<int> tree_path_from_root(const SubshiftGraph& g,
                                     const std::vector<int>& parent_edge,
                                     int v) {
  std::vector<int> edges;
  while (parent_edge[v] != -1) {
    int e = parent_edge[v];
    edges.push_back(e);
    v = g.edge(e).from;
  }
  std::reverse(edges.begin(), edges.end());
  return edges;
}

// Any directed path from -> to, by BFS.
std::vector<int> directed_path(const SubshiftGraph& g, int from, int to) {
  if (from == to) return {};
  std::vector<int> parent_edge(g.num_states(), -1);
  std::vector<char> seen(g.num_states(), 0);
  seen[from] = 1;
  std::deque<int> queue{from};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : g.out_edges(v)) {
      int w = g.edge(e).to;
      if (!seen[w]) {
        seen[w] = 1;
        parent_edge[w] = e;
        if (w == to) {
          std::vector<int> edges;
          int x = to;
          while (x != from) {
            edges.push_back(parent_edge[x]);
            x = g.edge(parent_edge[x]).from;
          }
          std::reverse(edges.begin(), edges.end());
          return edges;
        }
        queue.push_back(w);
      }
    }
  }
  fail(errc::not_irreducible, "no directed path between states");
}

// First directed cycle met when following smallest out-edges from state 0.
Cycle first_cycle(const SubshiftGraph& g) {
  std::vector<int> visited_at(g.num_states(), -1);
  std::vector<int> walk;
  int v = 0;
  while (visited_at[v] == -1) {
    visited_at[v] = static_cast<int>(walk.size());
    int e = g.out_edges(v)[0];
    walk.push_back(e);
    v = g.edge(e).to;
  }
  Cycle c;
  c.edge_ids.assign(walk.begin() + visited_at[v], walk.end());
  return c;
}

// Splits a closed walk into directed cycles by popping loops off a stack.
std::vector<Cycle> decompose_closed_walk(const SubshiftGraph& g,
                                         const std::vector<int>& walk) {
  std::vector<Cycle> cycles;
  std::vector<int> stack_edges;
  std::vector<int> stack_states{g.edge(walk.front()).from};
  for (int e : walk) {
    stack_edges.push_back(e);
    int to = g.edge(e).to;
    auto it = std::find(stack_states.begin(), stack_states.end(), to);
    if (it != stack_states.end()) {
      std::size_t pos = static_cast<std::size_t>(it - stack_states.begin());
      Cycle c;
      c.edge_ids.assign(stack_edges.begin() + pos, stack_edges.end());
      cycles.push_back(std::move(c));
      stack_edges.resize(pos);
      stack_states.resize(pos + 1);
    } else {
      stack_states.push_back(to);
    }
  }
  return cycles;
}

}  // namespace

LivsicResult livsic_reduce(const SubshiftGraph& g, const EdgePotential& f) {
  if (f.size() != g.num_edges())
    fail(errc::graph_mismatch, "potential sized for a different graph");
  const double tol = 1e-10;
  LivsicResult res;

  Cycle base = first_cycle(g);
  res.constant = cycle_sum(f, base) / base.length();

  // u along a directed spanning tree; every non-tree edge is then a check.
  std::vector<int> parent_edge = bfs_tree(g, 0);
  std::vector<double> u(g.num_states(), 0.0);
  {
    // Assign in BFS order: parents precede children.
    std::vector<int> order;
    std::vector<char> placed(g.num_states(), 0);
    placed[0] = 1;
    order.push_back(0);
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (int e : g.out_edges(order[k])) {
        int w = g.edge(e).to;
        if (!placed[w] && parent_edge[w] == e) {
          u[w] = u[order[k]] + f[e] - res.constant;
          placed[w] = 1;
          order.push_back(w);
        }
      }
    }
  }
  res.state_potential = u;

  int worst_edge = -1;
  double worst = 0.0;
  for (int e = 0; e < g.num_edges(); ++e) {
    double r = std::abs(f[e] - res.constant - (u[g.edge(e).to] - u[g.edge(e).from]));
    if (r > worst) {
      worst = r;
      worst_edge = e;
    }
  }
  res.max_residual = worst;
  res.coboundary_up_to_constant = worst <= tol;
  if (res.coboundary_up_to_constant) return res;

  // Build two closed walks through the worst edge and through its target's
  // tree path; one of their constituent cycles must deviate from the mean.
  int i = g.edge(worst_edge).from, j = g.edge(worst_edge).to;
  std::vector<int> walk1 = tree_path_from_root(g, parent_edge, i);
  walk1.push_back(worst_edge);
  std::vector<int> back = directed_path(g, j, 0);
  walk1.insert(walk1.end(), back.begin(), back.end());
  std::vector<int> walk2 = tree_path_from_root(g, parent_edge, j);
  walk2.insert(walk2.end(), back.begin(), back.end());

  double best_dev = -1.0;
  for (const auto& walk : {walk1, walk2}) {
    if (walk.empty()) continue;
    for (Cycle& c : decompose_closed_walk(g, walk)) {
      double dev = std::abs(cycle_sum(f, c) / c.length() - res.constant);
      if (dev > best_dev) {
        best_dev = dev;
        res.witness = canonical_rotation(std::move(c));
      }
    }
  }
  return res;
}

std::vector<Cycle> enumerate_cycles(const SubshiftGraph& g, int max_edge_count,
                                    std::size_t budget) {
  if (max_edge_count < 1)
    fail(errc::invalid_argument, "cycle length bound must be >= 1");
  std::vector<Cycle> out;
  std::vector<int> path;

  // DFS over edge sequences of length exactly L, keeping sequences that are
  // their own minimal rotation. Pruning: no edge below the first one.
  auto extend = [&](auto&& self, int L, int vertex) -> void {
    int depth = static_cast<int>(path.size());
    if (depth == L) {
      if (g.edge(path.back()).to != g.edge(path.front()).from) return;
      Cycle c{path};
      Cycle canon = canonical_rotation(c);
      if (canon.edge_ids != c.edge_ids) return;
      if (out.size() >= budget)
        fail(errc::budget_exceeded,
             "cycle enumeration exceeded budget of " + std::to_string(budget));
      out.push_back(std::move(c));
      return;
    }
    for (int e : g.out_edges(vertex)) {
      if (depth > 0 && e < path.front()) continue;
      path.push_back(e);
      self(self, L, g.edge(e).to);
      path.pop_back();
    }
  };
  for (int L = 1; L <= max_edge_count; ++L) {
    for (int e = 0; e < g.num_edges(); ++e) {
      path.assign(1, e);
      extend(extend, L, g.edge(e).to);
    }
    path.clear();
  }
  return out;
}

MarkovMeasure cycle_measure(const SubshiftGraph& g, const Cycle& a) {
  validate_cycle(g, a);
  MarkovMeasure m;
  m.state_weights.assign(g.num_states(), 0.0);
  m.edge_frequencies.assign(g.num_edges(), 0.0);
  m.edge_probs.assign(g.num_edges(), 0.0);
  const double inv = 1.0 / a.length();
  for (int e : a.edge_ids) {
    m.edge_frequencies[e] += inv;
    m.state_weights[g.edge(e).from] += inv;
  }
  for (int s = 0; s < g.num_states(); ++s) {
    if (m.state_weights[s] > 0.0) {
      for (int e : g.out_edges(s))
        m.edge_probs[e] = m.edge_frequencies[e] / m.state_weights[s];
    } else {
      // Unvisited states carry no mass; keep a valid probability row.
      double uniform = 1.0 / g.out_edges(s).size();
      for (int e : g.out_edges(s)) m.edge_probs[e] = uniform;
    }
  }
  return m;
}

double integrate(const MarkovMeasure& m, const EdgePotential& f) {
  if (static_cast<int>(m.edge_frequencies.size()) != f.size())
    fail(errc::graph_mismatch, "measure and potential sized differently");
  double s = 0.0;
  for (int e = 0; e < f.size(); ++e) s += m.edge_frequencies[e] * f[e];
  return s;
}

double markov_entropy(const MarkovMeasure& m) {
  double h = 0.0;
  for (std::size_t e = 0; e < m.edge_frequencies.size(); ++e) {
    double freq = m.edge_frequencies[e];
    if (freq > 0.0) h -= freq * std::log(m.edge_probs[e]);
  }
  return h;
}

}  // namespace thurston
