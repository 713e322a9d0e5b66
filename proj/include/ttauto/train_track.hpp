#pragma once

// Turn calculus, gates, train track test, transition matrices and Whitehead data.

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "graph_map.hpp"
#include "half_integer.hpp"

namespace ttauto {

inline TurnSet taken_turns_map(const GraphMap& g) {
  TurnSet out;
  for (const auto& p : g.edge_map) add_taken_turns(p, out);
  return out;
}

inline std::vector<bool> direction_image(const DirectionMap& D) {
  std::vector<bool> hit(D.size(), false);
  for (auto d : D) hit[d.code()] = true;
  return hit;
}

// Closure of tau(g) under Dg. Degenerate turns are kept, they only arise for non-tt maps.
inline TurnSet tau_infinity(const GraphMap& g) {
  auto D = direction_map(g);
  TurnSet out = taken_turns_map(g);
  std::deque<Turn> queue(out.begin(), out.end());
  while (!queue.empty()) {
    Turn t = queue.front();
    queue.pop_front();
    Turn u = map_turn(D, t);
    if (out.insert(u).second) queue.push_back(u);
  }
  return out;
}

struct GateStructure {
  // gates[v] lists the gates at vertex v, each a sorted list of directions.
  std::vector<std::vector<std::vector<Direction>>> gates;
  TurnSet illegal;
  std::vector<unsigned> direction_period;  // 0 for nonperiodic directions
  std::vector<unsigned> vertex_period;     // 0 for nonperiodic vertices
  unsigned rotationless_power = 1;

  bool periodic(Direction d) const { return direction_period.at(d.code()) != 0; }
  bool is_illegal(const Turn& t) const { return !t.degenerate() && illegal.count(t) != 0; }
  bool is_legal(const Turn& t) const { return !t.degenerate() && illegal.count(t) == 0; }

  std::vector<Direction> periodic_directions() const {
    std::vector<Direction> out;
    for (std::uint32_t c = 0; c < direction_period.size(); ++c) {
      if (direction_period[c]) out.push_back(Direction::from_code(c));
    }
    return out;
  }
  std::vector<Direction> nonperiodic_directions() const {
    std::vector<Direction> out;
    for (std::uint32_t c = 0; c < direction_period.size(); ++c) {
      if (!direction_period[c]) out.push_back(Direction::from_code(c));
    }
    return out;
  }
  std::size_t gate_count() const {
    std::size_t n = 0;
    for (const auto& gv : gates) n += gv.size();
    return n;
  }
};

// Gates of a direction map on graph g. Two directions share a gate iff their
// forward orbits meet, which happens within |directions| steps.
inline GateStructure gate_structure(const Graph& graph, const DirectionMap& D, const std::vector<VertexId>& vertex_map) {
  const std::size_t N = D.size();
  GateStructure gs;
  std::vector<Direction> key(N);
  for (std::uint32_t c = 0; c < N; ++c) {
    Direction d = Direction::from_code(c);
    for (std::size_t i = 0; i < N; ++i) d = D[d.code()];
    key[c] = d;
  }
  gs.direction_period.assign(N, 0);
  for (std::uint32_t c = 0; c < N; ++c) {
    Direction d = D[c];
    for (unsigned p = 1; p <= N; ++p, d = D[d.code()]) {
      if (d.code() == c) {
        gs.direction_period[c] = p;
        break;
      }
    }
  }
  const std::size_t V = graph.vertex_count();
  gs.vertex_period.assign(V, 0);
  for (VertexId v = 0; v < V; ++v) {
    VertexId w = vertex_map.at(v);
    for (unsigned p = 1; p <= V; ++p, w = vertex_map.at(w)) {
      if (w == v) {
        gs.vertex_period[v] = p;
        break;
      }
    }
  }
  unsigned long long R = 1;
  for (auto p : gs.direction_period) {
    if (p) R = std::lcm(R, static_cast<unsigned long long>(p));
  }
  for (auto p : gs.vertex_period) {
    if (p) R = std::lcm(R, static_cast<unsigned long long>(p));
  }
  gs.rotationless_power = static_cast<unsigned>(R);

  gs.gates.resize(V);
  for (VertexId v = 0; v < V; ++v) {
    std::map<Direction, std::vector<Direction>> by_key;
    for (auto d : graph.directions_at(v)) by_key[key[d.code()]].push_back(d);
    for (auto& [k, members] : by_key) {
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) gs.illegal.insert(Turn(members[i], members[j]));
      }
      gs.gates[v].push_back(members);
    }
    std::sort(gs.gates[v].begin(), gs.gates[v].end());
  }
  return gs;
}

inline GateStructure gates_and_illegal_turns(const GraphMap& g) {
  if (!g.is_self_map()) throw Error("gates: map is not a self-map");
  return gate_structure(g.domain, direction_map(g), g.vertex_map);
}

struct TrainTrackVerdict {
  bool train_track = false;
  std::optional<EdgeId> nontight_edge;  // an edge image that is not tight
  std::optional<Turn> witness;          // taken turn that degenerates
  unsigned power = 0;                   // least k with g^k not tight on edges
};

inline TrainTrackVerdict is_train_track(const GraphMap& g) {
  if (!g.is_self_map()) throw Error("is_train_track: map is not a self-map");
  TrainTrackVerdict v;
  for (EdgeId e = 0; e < g.edge_map.size(); ++e) {
    if (!is_tight(g.edge_map[e])) {
      v.nontight_edge = e;
      v.power = 1;
      return v;
    }
  }
  auto D = direction_map(g);
  std::map<Turn, unsigned> level;
  std::deque<Turn> queue;
  for (const auto& t : taken_turns_map(g)) {
    level[t] = 1;
    queue.push_back(t);
  }
  while (!queue.empty()) {
    Turn t = queue.front();
    queue.pop_front();
    Turn u = map_turn(D, t);
    if (level.count(u)) continue;
    level[u] = level[t] + 1;
    if (u.degenerate()) {
      v.witness = t;
      v.power = level[u];
      return v;
    }
    queue.push_back(u);
  }
  v.train_track = true;
  return v;
}

// ---- transition matrices ------------------------------------------------

using Matrix = std::vector<std::vector<std::int64_t>>;

inline Matrix transition_matrix(const GraphMap& g) {
  const std::size_t n = g.domain.edge_count();
  Matrix M(n, std::vector<std::int64_t>(g.codomain.edge_count(), 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (auto d : g.edge_map[i]) ++M[i][d.edge()];
  }
  return M;
}

inline Matrix transpose(const Matrix& M) {
  if (M.empty()) return M;
  Matrix T(M[0].size(), std::vector<std::int64_t>(M.size()));
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < M[i].size(); ++j) T[j][i] = M[i][j];
  }
  return T;
}

namespace detail {

using BoolMatrix = std::vector<std::vector<bool>>;

inline BoolMatrix support(const Matrix& M) {
  BoolMatrix B(M.size(), std::vector<bool>(M.size(), false));
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < M.size(); ++j) B[i][j] = M[i][j] > 0;
  }
  return B;
}

inline BoolMatrix bool_product(const BoolMatrix& A, const BoolMatrix& B) {
  const std::size_t n = A.size();
  BoolMatrix C(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!A[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (B[k][j]) C[i][j] = true;
      }
    }
  }
  return C;
}

// Tarjan's algorithm on an adjacency list; returns the component id of every node
// (components numbered in reverse topological order).
inline std::vector<int> tarjan_scc(const std::vector<std::vector<int>>& adj, int* count = nullptr) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0, ncomp = 0;
  // iterative to survive large automata
  struct Frame {
    int v;
    std::size_t next;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& fr = call.back();
      int v = fr.v;
      if (fr.next < adj[v].size()) {
        int w = adj[v][fr.next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        if (low[v] == index[v]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = ncomp;
          } while (w != v);
          ++ncomp;
        }
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
  if (count) *count = ncomp;
  return comp;
}

inline std::vector<std::vector<int>> adjacency(const Matrix& M) {
  std::vector<std::vector<int>> adj(M.size());
  for (std::size_t i = 0; i < M.size(); ++i) {
    for (std::size_t j = 0; j < M[i].size(); ++j) {
      if (M[i][j] > 0) adj[i].push_back(static_cast<int>(j));
    }
  }
  return adj;
}

}  // namespace detail

// Strong connectivity of the support digraph. The 1x1 zero matrix is not irreducible.
inline bool is_irreducible(const Matrix& M) {
  if (M.empty()) return false;
  if (M.size() == 1) return M[0][0] > 0;
  int count = 0;
  detail::tarjan_scc(detail::adjacency(M), &count);
  return count == 1;
}

// Primitivity: some power is strictly positive; powers up to (n-1)^2+1 suffice.
inline bool is_pf(const Matrix& M) {
  if (!is_irreducible(M)) return false;
  const std::size_t n = M.size();
  auto B = detail::support(M);
  auto P = B;
  const std::size_t bound = (n - 1) * (n - 1) + 1;
  for (std::size_t k = 1; k <= bound; ++k) {
    bool positive = true;
    for (const auto& row : P) {
      for (bool x : row) positive = positive && x;
    }
    if (positive) return true;
    P = detail::bool_product(P, B);
  }
  return false;
}

// Every edge image length grows without bound under iteration. A node has
// unbounded growth iff it reaches a strongly connected component carrying more
// than a single weight-1 cycle, or it reaches two distinct cyclic components in
// sequence.
inline bool is_expanding(const GraphMap& g) {
  auto M = transition_matrix(g);
  const std::size_t n = M.size();
  auto adj = detail::adjacency(M);
  int ncomp = 0;
  auto comp = detail::tarjan_scc(adj, &ncomp);
  std::vector<std::int64_t> weight(ncomp, 0), size(ncomp, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++size[comp[i]];
    for (std::size_t j = 0; j < n; ++j) {
      if (comp[i] == comp[j]) weight[comp[i]] += M[i][j];
    }
  }
  std::vector<bool> cyclic(ncomp), big(ncomp);
  for (int c = 0; c < ncomp; ++c) {
    cyclic[c] = weight[c] > 0;
    big[c] = weight[c] > size[c];
  }
  // Components are numbered in reverse topological order, so successors have smaller ids.
  std::vector<std::vector<int>> cadj(ncomp);
  for (std::size_t i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (comp[i] != comp[j]) cadj[comp[i]].push_back(comp[j]);
    }
  }
  std::vector<bool> unbounded(ncomp, false), reaches_cyclic(ncomp, false);
  for (int c = 0; c < ncomp; ++c) {
    bool below_cyclic = false, below_unbounded = false;
    for (int d : cadj[c]) {
      below_cyclic = below_cyclic || reaches_cyclic[d];
      below_unbounded = below_unbounded || unbounded[d];
    }
    reaches_cyclic[c] = cyclic[c] || below_cyclic;
    unbounded[c] = big[c] || below_unbounded || (cyclic[c] && below_cyclic);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!unbounded[comp[i]]) return false;
  }
  return n > 0;
}

struct PfData {
  double lambda = 0;
  std::vector<double> right;  // M v = lambda v
  std::vector<double> left;   // w M = lambda w
  double residual = 0;        // max-norm residual relative to lambda
  unsigned iterations = 0;
};

namespace detail {

inline std::pair<double, std::vector<double>> power_iteration(const Matrix& M, double tol, unsigned& iters, double& res) {
  const std::size_t n = M.size();
  std::vector<double> v(n, 1.0 / static_cast<double>(n)), w(n);
  double lambda = 0;
  for (iters = 1; iters <= 200000; ++iters) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(M[i][j]) * v[j];
      w[i] = s;
    }
    double sum = std::accumulate(w.begin(), w.end(), 0.0);
    lambda = sum;  // v sums to 1
    for (auto& x : w) x /= sum;
    res = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (std::size_t j = 0; j < n; ++j) s += static_cast<double>(M[i][j]) * w[j];
      res = std::max(res, std::fabs(s - lambda * w[i]));
    }
    res /= lambda;
    v.swap(w);
    if (res <= tol) break;
  }
  return {lambda, v};
}

}  // namespace detail

inline PfData pf_data(const Matrix& M, double tol = 1e-12) {
  if (!is_pf(M)) throw Error("pf_data: matrix is not Perron-Frobenius");
  PfData out;
  double res_left = 0;
  unsigned it_left = 0;
  auto [lambda, right] = detail::power_iteration(M, tol, out.iterations, out.residual);
  auto [lambda_t, left] = detail::power_iteration(transpose(M), tol, it_left, res_left);
  out.lambda = lambda;
  out.right = std::move(right);
  out.left = std::move(left);
  out.residual = std::max(out.residual, res_left);
  (void)lambda_t;
  return out;
}

// ---- Whitehead graphs and indices ---------------------------------------

struct SimpleGraph {
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> edges;

  std::size_t size() const { return labels.size(); }

  std::vector<std::vector<int>> components() const {
    const int n = static_cast<int>(labels.size());
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
      if (comp[s] != -1) continue;
      out.emplace_back();
      std::vector<int> stack{s};
      comp[s] = static_cast<int>(out.size()) - 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.back().push_back(v);
        for (int w : adj[v]) {
          if (comp[w] == -1) {
            comp[w] = comp[s];
            stack.push_back(w);
          }
        }
      }
      std::sort(out.back().begin(), out.back().end());
    }
    return out;
  }

  bool connected() const { return components().size() <= 1; }

  SimpleGraph induced(const std::vector<int>& keep) const {
    SimpleGraph out;
    std::vector<int> pos(labels.size(), -1);
    for (int v : keep) {
      pos[v] = static_cast<int>(out.labels.size());
      out.labels.push_back(labels[v]);
    }
    for (auto [a, b] : edges) {
      if (pos[a] >= 0 && pos[b] >= 0) out.edges.emplace_back(pos[a], pos[b]);
    }
    return out;
  }
};

struct LocalWhitehead {
  VertexId vertex = 0;
  std::vector<Direction> directions;
  TurnSet turns;

  SimpleGraph as_graph(const Graph& g) const {
    SimpleGraph s;
    std::map<Direction, int> pos;
    for (auto d : directions) {
      pos[d] = static_cast<int>(s.labels.size());
      s.labels.push_back(g.name(d));
    }
    for (const auto& t : turns) s.edges.emplace_back(pos.at(t.first), pos.at(t.second));
    return s;
  }
};

struct WhiteheadData {
  std::vector<LocalWhitehead> local;
  std::vector<LocalWhitehead> stable;
  SimpleGraph ideal;
};

// Whitehead graphs from a turn set and the periodic directions. Components of
// the stable graphs with fewer than 3 vertices are left out of the ideal graph.
inline WhiteheadData whitehead_data(const Graph& graph, const TurnSet& turns, const std::vector<bool>& periodic) {
  WhiteheadData wd;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    LocalWhitehead lw{v, graph.directions_at(v), {}};
    LocalWhitehead sw{v, {}, {}};
    for (auto d : lw.directions) {
      if (periodic[d.code()]) sw.directions.push_back(d);
    }
    for (const auto& t : turns) {
      if (t.degenerate() || graph.initial(t.first) != v) continue;
      lw.turns.insert(t);
      if (periodic[t.first.code()] && periodic[t.second.code()]) sw.turns.insert(t);
    }
    wd.local.push_back(lw);
    wd.stable.push_back(sw);
  }
  for (const auto& sw : wd.stable) {
    auto sg = sw.as_graph(graph);
    for (const auto& comp : sg.components()) {
      if (comp.size() < 3) continue;
      auto part = sg.induced(comp);
      int offset = static_cast<int>(wd.ideal.labels.size());
      for (auto& l : part.labels) wd.ideal.labels.push_back(l);
      for (auto [a, b] : part.edges) wd.ideal.edges.emplace_back(a + offset, b + offset);
    }
  }
  return wd;
}

inline WhiteheadData whitehead_data(const GraphMap& g) {
  auto gs = gates_and_illegal_turns(g);
  std::vector<bool> periodic(g.domain.direction_count());
  for (std::uint32_t c = 0; c < periodic.size(); ++c) periodic[c] = gs.direction_period[c] != 0;
  return whitehead_data(g.domain, tau_infinity(g), periodic);
}

inline std::vector<HalfInteger> index_list(const SimpleGraph& iw) {
  std::vector<HalfInteger> out;
  for (const auto& comp : iw.components()) out.push_back(HalfInteger::from_twice(2 - static_cast<int>(comp.size())));
  std::sort(out.begin(), out.end());
  return out;
}

inline HalfInteger index_sum(const SimpleGraph& iw) {
  HalfInteger s;
  for (auto h : index_list(iw)) s = s + h;
  return s;
}

inline HalfInteger index_deficit(const SimpleGraph& iw, int rank) { return index_sum(iw) + HalfInteger::from_int(rank - 1); }

inline int directional_surplus(const GateStructure& gs, std::size_t direction_count) {
  return static_cast<int>(direction_count) - static_cast<int>(gs.gate_count());
}

inline int directional_surplus(const GraphMap& g) {
  return directional_surplus(gates_and_illegal_turns(g), g.domain.direction_count());
}

inline std::vector<VertexId> principal_vertices(const Graph& graph, const GateStructure& gs) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (!gs.vertex_period[v]) continue;
    std::size_t periodic = 0;
    for (auto d : graph.directions_at(v)) periodic += gs.periodic(d) ? 1 : 0;
    if (periodic >= 3) out.push_back(v);
  }
  return out;
}

inline std::vector<VertexId> principal_vertices(const GraphMap& g) {
  return principal_vertices(g.domain, gates_and_illegal_turns(g));
}

inline bool is_fully_singular(const GraphMap& g) { return principal_vertices(g).size() == g.domain.vertex_count(); }

inline bool is_fully_preprincipal(const GraphMap& g) {
  auto gs = gates_and_illegal_turns(g);
  for (const auto& gv : gs.gates) {
    if (gv.size() < 3) return false;
  }
  return true;
}

// Articulation points by DFS low-links. Throws on disconnected input.
inline bool has_cut_vertex(const SimpleGraph& g) {
  const int n = static_cast<int>(g.size());
  if (!g.connected()) throw Error("has_cut_vertex: graph is not connected");
  if (n <= 2) return false;
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  bool found = false;
  std::function<void(int, int)> dfs = [&](int v, int parent) {
    disc[v] = low[v] = timer++;
    int children = 0;
    for (int w : adj[v]) {
      if (w == parent) continue;
      if (disc[w] != -1) {
        low[v] = std::min(low[v], disc[w]);
      } else {
        ++children;
        dfs(w, v);
        low[v] = std::min(low[v], low[w]);
        if (parent != -1 && low[w] >= disc[v]) found = true;
      }
    }
    if (parent == -1 && children > 1) found = true;
  };
  dfs(0, -1);
  return found;
}

}  // namespace ttauto
