#include "thurston/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace thurston {

namespace {

constexpr double kUnsetEntropy = -1.0;

EdgePotential negate_scaled_roof(const RoofFunction& roof, double h) {
  return scale(roof.values, -h);
}

// Brent root finder on a bracketing interval; stops when |f| <= ftol or the
// interval collapses.
template <typename F>
double brent_root(F&& f, double a, double b, double fa, double fb,
                  double ftol) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0)
    fail(errc::convergence_failure, "root is not bracketed");
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) +
                  1e-15;
    double xm = 0.5 * (c - b);
    if (std::abs(fb) <= ftol || std::abs(xm) <= tol1) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double s = fb / fa, p, q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                             std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = f(b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  fail(errc::convergence_failure, "root finder exhausted its iterations");
}

}  // namespace

SuspensionFlow::SuspensionFlow(SubshiftGraph base, RoofFunction roof)
    : base_(std::move(base)),
      roof_(std::move(roof)),
      entropy_cache_(std::make_shared<std::atomic<double>>(kUnsetEntropy)) {
  if (roof_.size() != base_.num_edges())
    fail(errc::graph_mismatch, "roof sized for a different graph");
}

double SuspensionFlow::cached_entropy_or(double fallback) const {
  double h = entropy_cache_->load();
  return h == kUnsetEntropy ? fallback : h;
}

void SuspensionFlow::cache_entropy(double h) const {
  double expected = kUnsetEntropy;
  entropy_cache_->compare_exchange_strong(expected, h);
}

SuspensionFlow scaled_flow(const SuspensionFlow& flow, double c) {
  return SuspensionFlow(flow.base(),
                        RoofFunction(scale(flow.roof().values, c)));
}

double flow_entropy(const SuspensionFlow& flow) {
  double cached = flow.cached_entropy_or(kUnsetEntropy);
  if (cached != kUnsetEntropy) return cached;

  const SubshiftGraph& g = flow.base();
  double h0 = topological_entropy(g);
  if (h0 <= 1e-13) {
    // Single-orbit base: the flow has entropy zero.
    flow.cache_entropy(0.0);
    return 0.0;
  }
  double hi = h0 / flow.roof().min_value();
  if (hi < 1e-12 || hi > 1e12)
    fail(errc::convergence_failure, "entropy bracket outside [1e-12, 1e12]");
  auto f = [&](double h) {
    return pressure(g, negate_scaled_roof(flow.roof(), h));
  };
  double flo = h0;     // P at h = 0
  double fhi = f(hi);  // <= 0 since P(-h r) <= P(0) - h min(r)
  double h = brent_root(f, 0.0, hi, flo, fhi, 1e-12);
  flow.cache_entropy(h);
  return h;
}

double period(const SuspensionFlow& flow, const Cycle& a) {
  validate_cycle(flow.base(), a);
  return cycle_sum(flow.roof().values, a);
}

double intersection(const MarkovMeasure& m, const SuspensionFlow& flow1,
                    const SuspensionFlow& flow2) {
  if (!flow1.base().same_graph(flow2.base()))
    fail(errc::graph_mismatch, "flows live over different bases");
  double denom = integrate(m, flow1.roof().values);
  return integrate(m, flow2.roof().values) / denom;
}

double renormalized_intersection(const MarkovMeasure& m,
                                 const SuspensionFlow& flow1,
                                 const SuspensionFlow& flow2) {
  return flow_entropy(flow2) / flow_entropy(flow1) *
         intersection(m, flow1, flow2);
}

MarkovMeasure bowen_margulis(const SuspensionFlow& flow) {
  double h = flow_entropy(flow);
  return equilibrium_measure(flow.base(), negate_scaled_roof(flow.roof(), h));
}

namespace {

double exact_ratio(const EdgePotential& num, const RoofFunction& den,
                   const Cycle& c) {
  return cycle_sum(num, c) / cycle_sum(den.values, c);
}

// Per-state evaluation of a policy (one out-edge per state): the gain r is
// the ratio of the policy cycle the state drains into, u the relative bias.
struct PolicyEval {
  std::vector<double> r, u;
  std::vector<Cycle> cycles;
};

PolicyEval evaluate_policy(const SubshiftGraph& g,
                           const std::vector<int>& policy,
                           const EdgePotential& num, const RoofFunction& den) {
  const int n = g.num_states();
  PolicyEval ev;
  ev.r.assign(n, 0.0);
  ev.u.assign(n, 0.0);
  std::vector<int> state(n, 0);  // 0 unseen, 1 on current walk, 2 done
  for (int s0 = 0; s0 < n; ++s0) {
    if (state[s0] != 0) continue;
    std::vector<int> walk;
    int v = s0;
    while (state[v] == 0) {
      state[v] = 1;
      walk.push_back(v);
      v = g.edge(policy[v]).to;
    }
    if (state[v] == 1) {
      auto it = std::find(walk.begin(), walk.end(), v);
      Cycle cyc;
      for (auto p = it; p != walk.end(); ++p) cyc.edge_ids.push_back(policy[*p]);
      double rc = exact_ratio(num, den, cyc);
      // Bias around the cycle: u(x) = w(x) + u(next); consistent at the
      // wrap-around because the cycle's w-sum vanishes at ratio rc.
      std::vector<int> nodes(it, walk.end());
      int k = static_cast<int>(nodes.size());
      ev.u[nodes[0]] = 0.0;
      for (int i = k - 1; i >= 1; --i) {
        int e = policy[nodes[i]];
        ev.u[nodes[i]] = num[e] - rc * den[e] + ev.u[nodes[(i + 1) % k]];
      }
      for (int node : nodes) {
        ev.r[node] = rc;
        state[node] = 2;
      }
      ev.cycles.push_back(std::move(cyc));
    }
    for (auto p = walk.rbegin(); p != walk.rend(); ++p) {
      if (state[*p] == 2) continue;
      int e = policy[*p];
      int succ = g.edge(e).to;
      ev.r[*p] = ev.r[succ];
      ev.u[*p] = num[e] - ev.r[*p] * den[e] + ev.u[succ];
      state[*p] = 2;
    }
  }
  return ev;
}

bool try_howard(const SubshiftGraph& g, const EdgePotential& num,
                const RoofFunction& den, MaxRatioResult& out) {
  const int n = g.num_states();
  std::vector<int> policy(n);
  for (int v = 0; v < n; ++v) {
    int best = g.out_edges(v)[0];
    for (int e : g.out_edges(v))
      if (num[e] / den[e] > num[best] / den[best]) best = e;
    policy[v] = best;
  }
  double scale_w = 1.0;
  for (int e = 0; e < g.num_edges(); ++e)
    scale_w = std::max({scale_w, std::abs(num[e]), den[e]});

  const int max_rounds = 200 * n + 1000;
  for (int round = 0; round < max_rounds; ++round) {
    PolicyEval ev = evaluate_policy(g, policy, num, den);
    double umax = 1.0;
    for (double x : ev.u) umax = std::max(umax, std::abs(x));
    const double eps_r = 1e-13 * scale_w;
    const double eps_u = 1e-12 * (umax + scale_w);
    bool changed = false;
    for (int v = 0; v < n; ++v) {
      for (int e : g.out_edges(v)) {
        if (e == policy[v]) continue;
        int x = g.edge(e).to;
        bool improves = false;
        if (ev.r[x] > ev.r[v] + eps_r) {
          improves = true;
        } else if (std::abs(ev.r[x] - ev.r[v]) <= eps_r) {
          double gain = num[e] - ev.r[v] * den[e] + ev.u[x];
          improves = gain > ev.u[v] + eps_u;
        }
        if (improves) {
          policy[v] = e;  // improving edge with the smallest index wins
          changed = true;
          break;
        }
      }
    }
    if (!changed) {
      const Cycle* best = nullptr;
      double best_ratio = -std::numeric_limits<double>::infinity();
      for (const Cycle& c : ev.cycles) {
        double rc = exact_ratio(num, den, c);
        if (rc > best_ratio) {
          best_ratio = rc;
          best = &c;
        }
      }
      out.value = best_ratio;
      out.cycle = canonical_rotation(*best);
      out.method = RatioMethod::howard;
      return true;
    }
  }
  return false;
}

// Positive-cycle detector for weights num - t*den.
std::optional<Cycle> positive_cycle(const SubshiftGraph& g,
                                    const EdgePotential& num,
                                    const RoofFunction& den, double t,
                                    double eps) {
  const int n = g.num_states();
  std::vector<double> dist(n, 0.0);
  std::vector<int> pred(n, -1);
  int last_updated = -1;
  for (int round = 0; round < n; ++round) {
    last_updated = -1;
    for (int e = 0; e < g.num_edges(); ++e) {
      double w = num[e] - t * den[e];
      int a = g.edge(e).from, b = g.edge(e).to;
      if (dist[a] + w > dist[b] + eps) {
        dist[b] = dist[a] + w;
        pred[b] = e;
        last_updated = b;
      }
    }
    if (last_updated == -1) return std::nullopt;
  }
  // Still relaxing after n rounds: walk predecessors onto the cycle.
  int v = last_updated;
  for (int i = 0; i < n; ++i) v = g.edge(pred[v]).from;
  std::vector<int> loop;
  int y = v;
  do {
    loop.push_back(pred[y]);
    y = g.edge(pred[y]).from;
  } while (y != v);
  std::reverse(loop.begin(), loop.end());
  return Cycle{loop};
}

}  // namespace

MaxRatioResult max_cycle_ratio_lawler(const SubshiftGraph& g,
                                      const EdgePotential& numerator,
                                      const RoofFunction& denominator) {
  if (numerator.size() != g.num_edges() || denominator.size() != g.num_edges())
    fail(errc::graph_mismatch, "weights sized for a different graph");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int e = 0; e < g.num_edges(); ++e) {
    double r = numerator[e] / denominator[e];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double span = std::max(1.0, std::abs(lo) + std::abs(hi));
  const double eps = 1e-15 * span;
  lo -= 1.0;
  std::optional<Cycle> best =
      positive_cycle(g, numerator, denominator, lo, eps);
  if (!best)
    fail(errc::convergence_failure, "no cycle found below the minimum ratio");
  double best_ratio = exact_ratio(numerator, denominator, *best);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * span; ++it) {
    double mid = 0.5 * (lo + hi);
    auto c = positive_cycle(g, numerator, denominator, mid, eps);
    if (c) {
      lo = mid;
      double rc = exact_ratio(numerator, denominator, *c);
      if (rc > best_ratio) {
        best_ratio = rc;
        best = std::move(c);
      }
    } else {
      hi = mid;
    }
  }
  MaxRatioResult out;
  out.value = best_ratio;
  out.cycle = canonical_rotation(*best);
  out.method = RatioMethod::lawler;
  return out;
}

MaxRatioResult max_cycle_ratio(const SubshiftGraph& g,
                               const EdgePotential& numerator,
                               const RoofFunction& denominator) {
  if (numerator.size() != g.num_edges() || denominator.size() != g.num_edges())
    fail(errc::graph_mismatch, "weights sized for a different graph");
  MaxRatioResult out;
  if (try_howard(g, numerator, denominator, out)) return out;
  return max_cycle_ratio_lawler(g, numerator, denominator);
}

DistanceReport dth_flow(const SuspensionFlow& flow1,
                        const SuspensionFlow& flow2) {
  if (!flow1.base().same_graph(flow2.base()))
    fail(errc::graph_mismatch, "flows live over different bases");
  DistanceReport rep;
  rep.entropy_from = flow_entropy(flow1);
  rep.entropy_to = flow_entropy(flow2);
  MaxRatioResult mcr =
      max_cycle_ratio(flow1.base(), flow2.roof().values, flow1.roof());
  rep.value = std::log(rep.entropy_to / rep.entropy_from) + std::log(mcr.value);
  rep.optimizing_cycle = std::move(mcr.cycle);
  rep.method = mcr.method;
  return rep;
}

ProjectiveCheck projectively_equivalent(const SuspensionFlow& flow1,
                                        const SuspensionFlow& flow2) {
  if (!flow1.base().same_graph(flow2.base()))
    fail(errc::graph_mismatch, "flows live over different bases");
  double h1 = flow_entropy(flow1), h2 = flow_entropy(flow2);
  EdgePotential diff =
      add(scale(flow2.roof().values, h2), scale(flow1.roof().values, -h1));
  LivsicResult liv = livsic_reduce(flow1.base(), diff);
  double scale_ref = 1.0;
  for (double x : flow1.roof().values.values)
    scale_ref = std::max(scale_ref, std::abs(h1 * x));
  ProjectiveCheck out;
  out.equivalent = liv.coboundary_up_to_constant &&
                   std::abs(liv.constant) <= 1e-8 * scale_ref;
  out.constant = h1 / h2;
  out.witness = liv.witness;
  return out;
}

FlowTangent make_tangent(const SuspensionFlow& flow, EdgePotential direction) {
  if (direction.size() != flow.base().num_edges())
    fail(errc::graph_mismatch, "direction sized for a different graph");
  FlowTangent t;
  t.tangency_residual = std::abs(integrate(bowen_margulis(flow), direction));
  t.direction = std::move(direction);
  return t;
}

FlowTangent project_to_tangent(const SuspensionFlow& flow,
                               EdgePotential direction) {
  if (direction.size() != flow.base().num_edges())
    fail(errc::graph_mismatch, "direction sized for a different graph");
  double mean = integrate(bowen_margulis(flow), direction);
  return make_tangent(flow,
                      add(direction, constant_potential(flow.base(), -mean)));
}

double finsler_norm_flow(const SuspensionFlow& flow,
                         const FlowTangent& tangent) {
  if (tangent.tangency_residual > 1e-6)
    fail(errc::not_tangent, "direction has Bowen-Margulis mean " +
                                std::to_string(tangent.tangency_residual));
  return max_cycle_ratio(flow.base(), tangent.direction, flow.roof()).value;
}

double pressure_norm_flow(const SuspensionFlow& flow,
                          const FlowTangent& tangent) {
  if (tangent.tangency_residual > 1e-6)
    fail(errc::not_tangent, "direction has Bowen-Margulis mean " +
                                std::to_string(tangent.tangency_residual));
  const SubshiftGraph& g = flow.base();
  EdgePotential neg_roof = scale(flow.roof().values, -1.0);
  auto P = [&](double s) {
    return pressure(g, add(neg_roof, scale(tangent.direction, s)));
  };
  double second = 0.0;
  for (double step : {1e-3, 1e-4}) {
    second = (-P(2 * step) + 16 * P(step) - 30 * P(0.0) + 16 * P(-step) -
              P(-2 * step)) /
             (12 * step * step);
    if (second >= -1e-7) break;
  }
  if (second < -1e-7)
    fail(errc::negative_curvature,
         "pressure stencil stayed negative after step refinement");
  double denom =
      integrate(equilibrium_measure(g, neg_roof), flow.roof().values);
  return std::sqrt(std::max(0.0, second) / denom);
}

}  // namespace thurston
