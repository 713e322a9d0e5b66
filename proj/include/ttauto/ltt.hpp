#pragma once

// Lamination train track structures.
//
// Vertices are the directions of the carrier, colored red or purple. Each
// carrier edge e gives a black edge [e, reverse(e)]. Colored edges are turns;
// a colored edge is red iff it touches a red vertex.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pnp.hpp"

namespace ttauto {

struct LttStructure {
  Graph carrier;
  std::vector<bool> red;  // indexed by direction code
  TurnSet colored;
  HalfInteger index;

  int rank() const { return carrier.betti(); }
  bool is_red(Direction d) const { return red.at(d.code()); }
  bool is_red_edge(const Turn& t) const { return is_red(t.first) || is_red(t.second); }

  std::vector<Direction> red_vertices() const {
    std::vector<Direction> out;
    for (auto d : carrier.directions()) {
      if (is_red(d)) out.push_back(d);
    }
    return out;
  }
  std::size_t red_vertex_count() const { return red_vertices().size(); }

  TurnSet red_edges() const {
    TurnSet out;
    for (const auto& t : colored) {
      if (is_red_edge(t)) out.insert(t);
    }
    return out;
  }
  TurnSet purple_edges() const {
    TurnSet out;
    for (const auto& t : colored) {
      if (!is_red_edge(t)) out.insert(t);
    }
    return out;
  }

  // Colored edges at vertex v as a graph on the directions at v.
  SimpleGraph local_whitehead(VertexId v) const {
    LocalWhitehead lw{v, carrier.directions_at(v), {}};
    for (const auto& t : colored) {
      if (carrier.initial(t.first) == v) lw.turns.insert(t);
    }
    return lw.as_graph(carrier);
  }

  // Purple subgraph with components of fewer than 3 vertices left out.
  SimpleGraph ideal_whitehead() const {
    std::vector<bool> periodic(red.size());
    for (std::size_t i = 0; i < red.size(); ++i) periodic[i] = !red[i];
    return whitehead_data(carrier, colored, periodic).ideal;
  }

  friend bool operator==(const LttStructure& a, const LttStructure& b) {
    return a.carrier == b.carrier && a.red == b.red && a.colored == b.colored && a.index == b.index;
  }
};

// Structure read off a map without consulting the PNP search. Purple
// directions are the periodic ones and colored edges are tau_infinity(g).
inline LttStructure ltt_of_map_unchecked(const GraphMap& g) {
  auto gs = gates_and_illegal_turns(g);
  LttStructure out;
  out.carrier = g.domain;
  out.red.assign(g.domain.direction_count(), false);
  for (auto d : gs.nonperiodic_directions()) out.red[d.code()] = true;
  for (const auto& t : tau_infinity(g)) {
    if (t.degenerate()) throw Error("ltt_of_map: map is not a train track map");
    out.colored.insert(t);
  }
  out.index = index_sum(whitehead_data(g).ideal);
  return out;
}

inline LttStructure ltt_of_map(const GraphMap& g, const PnpVerdict& certificate) {
  if (certificate.kind != PnpKind::NoPNP) throw Error("ltt_of_map: a NoPNP certificate is required");
  return ltt_of_map_unchecked(g);
}

struct Violation {
  std::string axiom;
  std::string detail;
};

inline std::vector<Violation> validate(const LttStructure& G) {
  std::vector<Violation> out;
  const auto& C = G.carrier;
  const int r = G.rank();
  if (G.red.size() != C.direction_count()) {
    out.push_back({"ltt-i", "vertex coloring does not cover every direction exactly once"});
    return out;
  }
  int reds = static_cast<int>(G.red_vertex_count());
  if (reds != G.index.twice + 2 * r - 2) {
    out.push_back({"ltt-ii", std::to_string(reds) + " red vertices but 2(I+r-1) = " + std::to_string(G.index.twice + 2 * r - 2)});
  }
  if (reds > 0) {
    auto red_edges = G.red_edges();
    bool found = false;
    for (auto d : G.red_vertices()) {
      std::size_t k = 0;
      for (const auto& t : red_edges) k += t.contains(d) ? 1 : 0;
      found = found || k == 1;
    }
    if (!found) out.push_back({"ltt-iii", "no red vertex lies in exactly one red edge"});
  }
  std::vector<bool> touched(C.direction_count(), false);
  for (const auto& t : G.colored) {
    if (t.degenerate() || t.first.edge() >= C.edge_count() || t.second.edge() >= C.edge_count() ||
        C.initial(t.first) != C.initial(t.second)) {
      out.push_back({"ltt-v", "colored edge " + C.turn_string(t) + " does not join distinct directions at a vertex"});
      continue;
    }
    touched[t.first.code()] = touched[t.second.code()] = true;
  }
  for (auto d : C.directions()) {
    if (!touched[d.code()]) out.push_back({"ltt-v", "vertex " + C.name(d) + " lies in no colored edge"});
  }
  for (VertexId v = 0; v < C.vertex_count(); ++v) {
    if (!G.local_whitehead(v).connected()) out.push_back({"ltt-vi", "local Whitehead graph at vertex " + std::to_string(v) + " is disconnected"});
  }
  return out;
}

inline std::vector<Violation> validate_lone_axis(const LttStructure& G) {
  auto out = validate(G);
  auto reds = G.red_vertices();
  if (reds.size() != 1) out.push_back({"ltt-vii", std::to_string(reds.size()) + " red vertices"});
  if (G.index != HalfInteger::from_twice(3 - 2 * G.rank())) out.push_back({"ltt-viii", "index " + G.index.to_string() + " differs from 3/2-r"});
  auto iw = G.ideal_whitehead();
  auto comps = iw.components();
  for (const auto& comp : comps) {
    if (has_cut_vertex(iw.induced(comp))) out.push_back({"ltt-ix", "an ideal Whitehead graph component has a cut vertex"});
  }
  if (reds.size() == 1 && G.red_edges().size() != 1) out.push_back({"ltt-vii", "no unique red edge"});
  return out;
}

inline bool has_axiom(const std::vector<Violation>& vs, const std::string& axiom) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.axiom == axiom; });
}

// ---- actions ------------------------------------------------------------

inline LttStructure pff_action(const ProperFullFold& f, const LttStructure& G) {
  const Direction e1 = f.folded, e2 = f.target;
  if (!G.is_red(e1) && !G.is_red(e2)) throw Error("pff_action: neither fold direction is red");
  LttStructure out;
  out.carrier = fold_codomain(G.carrier, f);
  out.index = G.index;
  out.red = G.red;
  if (!G.is_red(e1)) out.red[e2.code()] = false;
  out.red[e1.code()] = true;
  auto D = step_direction_map(G.carrier.direction_count(), f);
  for (const auto& t : G.colored) {
    Turn u = map_turn(D, t);
    if (u.degenerate()) throw Error("pff_action: fold collapses the colored edge " + G.carrier.turn_string(t));
    out.colored.insert(u);
  }
  out.colored.insert(Turn(e2.reverse(), e1));
  return out;
}

inline LttStructure symmetry_action(const EdgePermutation& s, const LttStructure& G) {
  LttStructure out;
  out.carrier = permutation_codomain(G.carrier, s);
  out.index = G.index;
  out.red.assign(G.red.size(), false);
  for (auto d : G.carrier.directions()) out.red[s(d).code()] = G.is_red(d);
  for (const auto& t : G.colored) out.colored.insert(Turn(s(t.first), s(t.second)));
  return out;
}

inline LttStructure step_action(const Step& st, const LttStructure& G) {
  if (auto f = std::get_if<ProperFullFold>(&st)) return pff_action(*f, G);
  return symmetry_action(std::get<EdgePermutation>(st), G);
}

struct FriendlyCheck {
  bool ok = false;
  std::string reason;  // first failing condition
};

// Fold of E over E2 as a move of the structure.
inline FriendlyCheck tt_friendly_pff_check(const LttStructure& G, Direction E, Direction E2) {
  const auto& C = G.carrier;
  if (E.edge() >= C.edge_count() || E2.edge() >= C.edge_count() || E == E2) return {false, "tt-pff-iv: not two distinct directions"};
  // (i) same component of the colored subgraph
  {
    std::map<Direction, std::vector<Direction>> adj;
    for (const auto& t : G.colored) {
      adj[t.first].push_back(t.second);
      adj[t.second].push_back(t.first);
    }
    std::set<Direction> seen{E};
    std::vector<Direction> stack{E};
    while (!stack.empty()) {
      auto d = stack.back();
      stack.pop_back();
      for (auto x : adj[d]) {
        if (seen.insert(x).second) stack.push_back(x);
      }
    }
    if (!seen.count(E2)) return {false, "tt-pff-i: directions lie in different colored components"};
  }
  if (!G.is_red(E) && !G.is_red(E2)) return {false, "tt-pff-ii: neither direction is red"};
  if (G.colored.count(Turn(E2, E))) return {false, "tt-pff-iii: the directions are joined by a colored edge"};
  if (E2.reverse() == E) return {false, "tt-pff-iii: the directions are reverses of each other"};
  try {
    check_fold(C, ProperFullFold{E, E2});
  } catch (const Error& e) {
    return {false, std::string("tt-pff-iv: ") + e.what()};
  }
  return {true, ""};
}

// ---- birecurrence -------------------------------------------------------

// Directed traversals: node 2*i and 2*i+1 traverse edge i in its two directions.
struct SmoothDigraph {
  struct Traversal {
    Direction from, to;
    bool black;
    std::size_t edge;  // index into the edge list (black edges first)
  };
  std::vector<Traversal> nodes;
  std::vector<std::vector<int>> adj;
  std::size_t edge_count = 0;
};

inline SmoothDigraph smooth_digraph(const LttStructure& G) {
  SmoothDigraph sd;
  std::size_t idx = 0;
  for (EdgeId e = 0; e < G.carrier.edge_count(); ++e, ++idx) {
    Direction d(e, false);
    sd.nodes.push_back({d, d.reverse(), true, idx});
    sd.nodes.push_back({d.reverse(), d, true, idx});
  }
  for (const auto& t : G.colored) {
    sd.nodes.push_back({t.first, t.second, false, idx});
    sd.nodes.push_back({t.second, t.first, false, idx});
    ++idx;
  }
  sd.edge_count = idx;
  sd.adj.resize(sd.nodes.size());
  for (std::size_t i = 0; i < sd.nodes.size(); ++i) {
    for (std::size_t j = 0; j < sd.nodes.size(); ++j) {
      if (sd.nodes[i].black != sd.nodes[j].black && sd.nodes[i].to == sd.nodes[j].from && sd.nodes[i].edge != sd.nodes[j].edge) {
        sd.adj[i].push_back(static_cast<int>(j));
      }
    }
  }
  return sd;
}

// Index of a strongly connected component (with an internal edge) that
// contains a traversal of every edge, or -1.
inline int covering_component(const SmoothDigraph& sd, std::vector<int>& comp) {
  int count = 0;
  comp = detail::tarjan_scc(sd.adj, &count);
  for (int c = 0; c < count; ++c) {
    std::vector<bool> covered(sd.edge_count, false);
    bool internal = false;
    for (std::size_t i = 0; i < sd.nodes.size(); ++i) {
      if (comp[i] != c) continue;
      covered[sd.nodes[i].edge] = true;
      for (int j : sd.adj[i]) internal = internal || comp[j] == c;
    }
    if (internal && std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) return c;
  }
  return -1;
}

inline bool is_birecurrent(const LttStructure& G) {
  auto sd = smooth_digraph(G);
  std::vector<int> comp;
  return covering_component(sd, comp) >= 0;
}

struct WitnessLoop {
  std::vector<SmoothDigraph::Traversal> steps;  // alternating black / colored traversals, closed
  EdgePath black_projection;                    // closed path in the carrier
};

// Closed smooth walk through every colored edge, built from shortest paths
// inside a covering component.
inline std::optional<WitnessLoop> witness_loop(const LttStructure& G) {
  auto sd = smooth_digraph(G);
  std::vector<int> comp;
  int c = covering_component(sd, comp);
  if (c < 0) return std::nullopt;
  const int n = static_cast<int>(sd.nodes.size());
  // Shortest walk of length >= 1 from `from` to `to`, excluding `from`.
  auto bfs = [&](int from, int to) {
    std::vector<int> prev(n, -2), path;
    std::deque<int> q;
    for (int w : sd.adj[from]) {
      if (comp[w] == c && prev[w] == -2) {
        prev[w] = -1;
        q.push_back(w);
      }
    }
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      if (v == to) {
        for (int x = to; x != -1; x = prev[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (int w : sd.adj[v]) {
        if (comp[w] == c && prev[w] == -2) {
          prev[w] = v;
          q.push_back(w);
        }
      }
    }
    return path;
  };
  // start on a black traversal so the loop begins and ends with the same colors
  int start = -1;
  for (int i = 0; i < n; ++i) {
    if (comp[i] == c && sd.nodes[i].black) {
      start = i;
      break;
    }
  }
  if (start < 0) return std::nullopt;
  std::vector<int> walk{start};
  std::vector<bool> covered(sd.edge_count, false);
  covered[sd.nodes[start].edge] = true;
  for (std::size_t e = 0; e < sd.edge_count; ++e) {
    if (covered[e]) continue;
    int target = -1;
    for (int i = 0; i < n; ++i) {
      if (comp[i] == c && sd.nodes[i].edge == e) {
        target = i;
        break;
      }
    }
    auto seg = bfs(walk.back(), target);
    if (seg.empty()) return std::nullopt;
    for (int x : seg) {
      walk.push_back(x);
      covered[sd.nodes[x].edge] = true;
    }
  }
  auto back = bfs(walk.back(), start);
  if (back.empty()) return std::nullopt;
  walk.insert(walk.end(), back.begin(), back.end());
  walk.pop_back();  // the start node closes the loop
  WitnessLoop out;
  for (int x : walk) {
    out.steps.push_back(sd.nodes[x]);
    if (sd.nodes[x].black) out.black_projection.push_back(sd.nodes[x].from);
  }
  return out;
}

// Consecutive traversals alternate colors and concatenate, cyclically.
inline bool is_smooth_loop(const LttStructure& G, const WitnessLoop& w) {
  if (w.steps.empty()) return false;
  for (std::size_t i = 0; i < w.steps.size(); ++i) {
    const auto& a = w.steps[i];
    const auto& b = w.steps[(i + 1) % w.steps.size()];
    if (a.black == b.black || a.to != b.from) return false;
    if (a.black && a.to != a.from.reverse()) return false;
    if (!a.black && !G.colored.count(Turn(a.from, a.to))) return false;
  }
  return true;
}

// ---- canonical labeling -------------------------------------------------

inline std::string serialize(const LttStructure& G) {
  std::string s = std::to_string(G.carrier.vertex_count()) + "|";
  for (const auto& e : G.carrier.edges()) s += std::to_string(e.from) + ">" + std::to_string(e.to) + ",";
  s += "|";
  for (bool b : G.red) s += b ? 'R' : 'p';
  s += "|";
  for (const auto& t : G.colored) s += std::to_string(t.first.code()) + "-" + std::to_string(t.second.code()) + ",";
  s += "|" + G.index.to_string();
  return s;
}

struct CanonicalForm {
  LttStructure form;
  EdgePermutation relabel;                    // symmetry_action(relabel, input) == form
  std::string key;
  std::vector<EdgePermutation> automorphisms;  // of form, identity included
};

namespace detail {

// Relabeling-invariant signature of a direction.
inline std::tuple<bool, std::size_t, std::size_t, std::size_t> direction_signature(const LttStructure& G, Direction d) {
  std::size_t deg = 0, red_deg = 0;
  for (const auto& t : G.colored) {
    if (t.contains(d)) {
      ++deg;
      red_deg += G.is_red_edge(t) ? 1 : 0;
    }
  }
  return {G.is_red(d), deg, red_deg, G.carrier.valence(G.carrier.initial(d))};
}

}  // namespace detail

// Minimum serialization over all edge relabelings and flips that respect
// sorted per-edge signatures; vertices renumbered by first appearance.
inline CanonicalForm canonical_form(const LttStructure& G) {
  const auto& C = G.carrier;
  const std::size_t m = C.edge_count();
  using Sig = std::tuple<bool, std::size_t, std::size_t, std::size_t>;
  std::vector<std::pair<Sig, Sig>> esig(m);
  for (EdgeId e = 0; e < m; ++e) {
    Sig a = detail::direction_signature(G, Direction(e, false));
    Sig b = detail::direction_signature(G, Direction(e, true));
    esig[e] = {std::min(a, b), std::max(a, b)};
  }
  // Slots are filled in signature order; an edge may go to slot i only if its
  // signature is the i-th smallest.
  std::vector<std::pair<Sig, Sig>> sorted = esig;
  std::sort(sorted.begin(), sorted.end());

  CanonicalForm best;
  bool have = false;
  std::vector<EdgeId> order(m);
  std::vector<bool> used(m, false);
  std::vector<bool> flip(m, false);
  std::vector<CanonicalForm> ties;

  std::function<void(std::size_t)> place = [&](std::size_t slot) {
    if (slot == m) {
      // order[slot] = original edge, flip[slot] whether reversed
      EdgePermutation p;
      p.image.resize(m);
      for (std::size_t i = 0; i < m; ++i) p.image[order[i]] = Direction(static_cast<EdgeId>(i), flip[i]);
      // vertex renumbering by first appearance in the new edge list
      std::vector<VertexId> vmap(C.vertex_count(), static_cast<VertexId>(-1));
      VertexId next = 0;
      for (std::size_t i = 0; i < m; ++i) {
        Direction src(order[i], flip[i]);
        for (VertexId v : {C.initial(src), C.terminal(src)}) {
          if (vmap[v] == static_cast<VertexId>(-1)) vmap[v] = next++;
        }
      }
      for (auto& v : vmap) {
        if (v == static_cast<VertexId>(-1)) v = next++;
      }
      bool id = true;
      for (VertexId v = 0; v < vmap.size(); ++v) id = id && vmap[v] == v;
      if (!id) p.vertices = vmap;
      LttStructure img = symmetry_action(p, G);
      std::string key = serialize(img);
      if (!have || key < best.key) {
        best = CanonicalForm{img, p, key, {}};
        ties.clear();
        have = true;
      }
      if (key == best.key) ties.push_back(CanonicalForm{img, p, key, {}});
      return;
    }
    for (EdgeId e = 0; e < m; ++e) {
      if (used[e] || esig[e] != sorted[slot]) continue;
      used[e] = true;
      order[slot] = e;
      Sig a = detail::direction_signature(G, Direction(e, false));
      Sig b = detail::direction_signature(G, Direction(e, true));
      for (bool fl : {false, true}) {
        // the canonical orientation puts the smaller signature first
        Sig first = fl ? b : a;
        Sig second = fl ? a : b;
        if (first > second) continue;
        flip[slot] = fl;
        place(slot + 1);
      }
      used[e] = false;
    }
  };
  place(0);
  // Prefer the identity relabeling when the input is already canonical.
  for (const auto& t : ties) {
    if (t.relabel.is_identity()) {
      best.relabel = t.relabel;
      break;
    }
  }
  auto inv = best.relabel.inverse();
  std::set<std::string> seen;
  for (const auto& t : ties) {
    EdgePermutation a = t.relabel.after(inv);
    // normalize vertex part so identity compares equal
    bool id = true;
    for (VertexId v = 0; v < a.vertices.size(); ++v) id = id && a.vertices[v] == v;
    if (id) a.vertices.clear();
    std::string k;
    for (auto d : a.image) k += std::to_string(d.code()) + ",";
    for (auto v : a.vertices) k += "v" + std::to_string(v);
    if (seen.insert(k).second) best.automorphisms.push_back(a);
  }
  std::sort(best.automorphisms.begin(), best.automorphisms.end(), [](const EdgePermutation& x, const EdgePermutation& y) {
    return std::tie(x.image, x.vertices) < std::tie(y.image, y.vertices);
  });
  return best;
}

// ---- simple graph isomorphism -------------------------------------------

inline bool isomorphic(const SimpleGraph& a, const SimpleGraph& b) {
  const std::size_t n = a.size();
  if (n != b.size() || a.edges.size() != b.edges.size()) return false;
  std::vector<std::vector<bool>> A(n, std::vector<bool>(n)), B(n, std::vector<bool>(n));
  std::vector<int> da(n), db(n);
  for (auto [x, y] : a.edges) {
    if (!A[x][y]) ++da[x], ++da[y];
    A[x][y] = A[y][x] = true;
  }
  for (auto [x, y] : b.edges) {
    if (!B[x][y]) ++db[x], ++db[y];
    B[x][y] = B[y][x] = true;
  }
  auto sa = da, sb = db;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return false;
  std::vector<int> map(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || da[i] != db[j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) ok = A[i][k] == B[j][static_cast<std::size_t>(map[k])];
      if (!ok) continue;
      used[j] = true;
      map[i] = static_cast<int>(j);
      if (go(i + 1)) return true;
      used[j] = false;
    }
    map[i] = -1;
    return false;
  };
  return go(0);
}

}  // namespace ttauto
