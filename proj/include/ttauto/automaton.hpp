#pragma once

// Ltt automata: canonical ltt structures with a fixed ideal Whitehead graph,
// joined by tt-friendly proper full folds and symmetries.

#include <deque>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fic.hpp"
#include "ltt.hpp"

namespace ttauto {

enum class AutomatonVariant { LoneAxis, FullySingular };

inline std::string to_string(AutomatonVariant v) { return v == AutomatonVariant::LoneAxis ? "lone-axis" : "fully-singular"; }

struct IdealWhiteheadGraphSpec {
  SimpleGraph graph;
  int rank = 3;
  AutomatonVariant variant = AutomatonVariant::FullySingular;

  HalfInteger index() const { return index_sum(graph); }
  int red_vertex_count() const { return index().twice + 2 * rank - 2; }

  // Hard violations; the spec is rejected when nonempty.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    auto comps = graph.components();
    const int n = static_cast<int>(graph.size());
    for (const auto& c : comps) {
      if (c.size() < 3) out.push_back("a component has fewer than 3 vertices");
    }
    if (comps.empty()) out.push_back("empty graph");
    if (variant == AutomatonVariant::LoneAxis) {
      if (n != 2 * rank - 1) out.push_back("lone axis graph needs 2r-1 = " + std::to_string(2 * rank - 1) + " vertices, has " + std::to_string(n));
      for (const auto& c : comps) {
        if (c.size() >= 3 && has_cut_vertex(graph.induced(c))) out.push_back("a component has a cut vertex");
      }
    } else {
      if (static_cast<int>(comps.size()) > 2 * rank - 1) out.push_back("more than 2r-1 components");
      if (n > 6 * rank - 5) out.push_back("more than 6r-5 vertices");
    }
    int reds = red_vertex_count();
    if (reds < 0 || n + reds > 2 * (3 * rank - 3)) out.push_back("index does not fit the rank");
    return out;
  }

  std::vector<std::string> warnings() const {
    std::vector<std::string> out;
    if (variant == AutomatonVariant::FullySingular && static_cast<int>(graph.size()) < 2 * rank - 1) {
      out.push_back("fewer than 2r-1 vertices");
    }
    return out;
  }
};

// Vertex test shared by enumeration and closure.
inline bool admissible_vertex(const IdealWhiteheadGraphSpec& spec, const LttStructure& G) {
  if (G.rank() != spec.rank || G.index != spec.index()) return false;
  auto v = spec.variant == AutomatonVariant::LoneAxis ? validate_lone_axis(G) : validate(G);
  if (!v.empty()) return false;
  if (!isomorphic(G.ideal_whitehead(), spec.graph)) return false;
  return is_birecurrent(G);
}

struct AutomatonEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  Step move;                // in the coordinates of the source vertex
  EdgePermutation relabel;  // carries move . source onto the target vertex; identity for symmetries

  bool is_fold() const { return std::holds_alternative<ProperFullFold>(move); }
};

struct Automaton {
  IdealWhiteheadGraphSpec spec;
  std::vector<LttStructure> vertices;  // canonical forms
  std::map<std::string, std::size_t> by_key;
  std::vector<AutomatonEdge> edges;
  std::vector<std::vector<std::size_t>> out;  // edge ids per vertex

  std::vector<int> scc;  // component per vertex
  int scc_count = 0;
  std::vector<bool> scc_invariant_subgraph;  // flagged components
  std::size_t discarded_vertices = 0;

  std::optional<std::size_t> find(const LttStructure& G) const {
    auto it = by_key.find(canonical_form(G).key);
    if (it == by_key.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> find_edge(std::size_t source, const Step& move) const {
    for (auto id : out.at(source)) {
      if (edges[id].move == move) return id;
    }
    return std::nullopt;
  }

  std::size_t fold_edge_count() const {
    std::size_t n = 0;
    for (const auto& e : edges) n += e.is_fold() ? 1 : 0;
    return n;
  }
};

// ---- moves --------------------------------------------------------------

struct Move {
  Step move;
  EdgePermutation relabel;
  CanonicalForm target;
};

// All admissible moves out of a canonical vertex: tt-friendly folds whose image
// is admissible, and the nontrivial automorphisms as symmetries.
inline std::vector<Move> vertex_moves(const IdealWhiteheadGraphSpec& spec, const LttStructure& G) {
  std::vector<Move> out;
  const auto& C = G.carrier;
  for (auto E : C.directions()) {
    for (auto E2 : C.directions()) {
      if (!tt_friendly_pff_check(G, E, E2).ok) continue;
      ProperFullFold f{E, E2};
      LttStructure img;
      try {
        img = pff_action(f, G);
      } catch (const Error&) {
        continue;
      }
      if (!admissible_vertex(spec, img)) continue;
      auto cf = canonical_form(img);
      out.push_back({f, cf.relabel, cf});
    }
  }
  auto self = canonical_form(G);
  for (const auto& a : self.automorphisms) {
    if (a.is_identity()) continue;
    out.push_back({a, EdgePermutation::identity(C.edge_count()), self});
  }
  return out;
}

// ---- enumeration --------------------------------------------------------

// Every admissible structure on a rose of the spec's rank, up to relabeling.
inline std::vector<LttStructure> enumerate_vertices(const IdealWhiteheadGraphSpec& spec) {
  if (auto p = spec.problems(); !p.empty()) throw Error("infeasible spec: " + p.front());
  const Graph C = Graph::rose(static_cast<std::size_t>(spec.rank));
  const std::size_t nd = C.direction_count();
  const int reds = spec.red_vertex_count();
  std::vector<Turn> all_turns;
  for (std::uint32_t a = 0; a < nd; ++a) {
    for (std::uint32_t b = a + 1; b < nd; ++b) all_turns.emplace_back(Direction::from_code(a), Direction::from_code(b));
  }
  std::map<std::string, LttStructure> found;
  for (std::uint32_t mask = 0; mask < (1u << nd); ++mask) {
    if (std::popcount(mask) != reds) continue;
    std::vector<bool> red(nd);
    for (std::uint32_t c = 0; c < nd; ++c) red[c] = (mask >> c) & 1u;
    std::vector<Turn> purple_turns, red_turns;
    for (const auto& t : all_turns) (red[t.first.code()] || red[t.second.code()] ? red_turns : purple_turns).push_back(t);
    for (std::uint64_t pm = 0; pm < (1ull << purple_turns.size()); ++pm) {
      LttStructure G{C, red, {}, spec.index()};
      for (std::size_t i = 0; i < purple_turns.size(); ++i) {
        if ((pm >> i) & 1u) G.colored.insert(purple_turns[i]);
      }
      auto iw = G.ideal_whitehead();
      if (iw.size() != spec.graph.size() || !isomorphic(iw, spec.graph)) continue;
      for (std::uint64_t rm = 0; rm < (1ull << red_turns.size()); ++rm) {
        LttStructure H = G;
        for (std::size_t i = 0; i < red_turns.size(); ++i) {
          if ((rm >> i) & 1u) H.colored.insert(red_turns[i]);
        }
        if (!admissible_vertex(spec, H)) continue;
        auto cf = canonical_form(H);
        found.emplace(cf.key, cf.form);
      }
    }
  }
  std::vector<LttStructure> out;
  for (auto& [k, v] : found) out.push_back(v);
  return out;
}

// ---- construction -------------------------------------------------------

struct BuildOptions {
  bool exhaustive = false;       // seed with enumerate_vertices (roses only)
  bool keep_all = false;         // keep vertices outside nontrivial components
  std::size_t max_vertices = 200000;
};

namespace detail {

// Smallest loop-invariant edge set at v containing edge e, for every v and e
// of component c; true when one of them is proper.
inline bool has_invariant_subgraph(const Automaton& A, int c) {
  const std::size_t m = A.vertices.empty() ? 0 : A.vertices.front().carrier.edge_count();
  const std::uint64_t full = (m >= 64) ? ~0ull : ((1ull << m) - 1);
  auto step = [&](const AutomatonEdge& e, std::uint64_t H) {
    std::uint64_t out = 0;
    if (auto f = std::get_if<ProperFullFold>(&e.move)) {
      if ((H >> f->folded.edge()) & 1u) H |= 1ull << f->target.edge();
      for (EdgeId x = 0; x < m; ++x) {
        if ((H >> x) & 1u) out |= 1ull << e.relabel.image[x].edge();
      }
    } else {
      const auto& s = std::get<EdgePermutation>(e.move);
      for (EdgeId x = 0; x < m; ++x) {
        if ((H >> x) & 1u) out |= 1ull << s.image[x].edge();
      }
    }
    return out;
  };
  for (std::size_t v0 = 0; v0 < A.vertices.size(); ++v0) {
    if (A.scc[v0] != c) continue;
    for (EdgeId x = 0; x < m; ++x) {
      std::set<std::pair<std::size_t, std::uint64_t>> seen{{v0, 1ull << x}};
      std::deque<std::pair<std::size_t, std::uint64_t>> q{{v0, 1ull << x}};
      std::uint64_t at_v0 = 1ull << x;
      while (!q.empty()) {
        auto [v, H] = q.front();
        q.pop_front();
        for (auto id : A.out[v]) {
          const auto& e = A.edges[id];
          if (A.scc[e.target] != c) continue;
          auto H2 = step(e, H);
          if (e.target == v0) at_v0 |= H2;
          if (seen.insert({e.target, H2}).second) q.push_back({e.target, H2});
        }
      }
      if (at_v0 != full) return true;
    }
  }
  return false;
}

}  // namespace detail

inline void compute_components(Automaton& A) {
  std::vector<std::vector<int>> adj(A.vertices.size());
  for (const auto& e : A.edges) adj[e.source].push_back(static_cast<int>(e.target));
  A.scc = detail::tarjan_scc(adj, &A.scc_count);
  A.scc_invariant_subgraph.assign(A.scc_count, false);
  for (int c = 0; c < A.scc_count; ++c) A.scc_invariant_subgraph[c] = detail::has_invariant_subgraph(A, c);
}

// Closure of the seeds under admissible moves, then restriction to the
// components containing a fold edge.
inline Automaton build(const IdealWhiteheadGraphSpec& spec, const std::vector<LttStructure>& seeds, const BuildOptions& opt = {}) {
  if (auto p = spec.problems(); !p.empty()) throw Error("infeasible spec: " + p.front());
  Automaton A;
  A.spec = spec;
  std::deque<std::size_t> queue;
  auto add = [&](const CanonicalForm& cf) {
    auto [it, fresh] = A.by_key.emplace(cf.key, A.vertices.size());
    if (fresh) {
      if (A.vertices.size() >= opt.max_vertices) throw Error("build: vertex budget exhausted");
      A.vertices.push_back(cf.form);
      A.out.emplace_back();
      queue.push_back(it->second);
    }
    return it->second;
  };
  std::vector<LttStructure> start = seeds;
  if (opt.exhaustive) {
    auto all = enumerate_vertices(spec);
    start.insert(start.end(), all.begin(), all.end());
  }
  for (const auto& s : start) {
    if (!admissible_vertex(spec, s)) throw Error("build: a seed is not an admissible vertex");
    add(canonical_form(s));
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (auto& mv : vertex_moves(spec, A.vertices[v])) {
      std::size_t w = add(mv.target);
      A.out[v].push_back(A.edges.size());
      A.edges.push_back({v, w, mv.move, mv.relabel});
    }
  }
  compute_components(A);
  if (opt.keep_all) return A;

  // keep components with an internal fold edge
  std::vector<bool> keep_c(A.scc_count, false);
  for (const auto& e : A.edges) {
    if (e.is_fold() && A.scc[e.source] == A.scc[e.target]) keep_c[A.scc[e.source]] = true;
  }
  Automaton R;
  R.spec = spec;
  std::vector<std::size_t> pos(A.vertices.size(), static_cast<std::size_t>(-1));
  for (std::size_t v = 0; v < A.vertices.size(); ++v) {
    if (!keep_c[A.scc[v]]) continue;
    pos[v] = R.vertices.size();
    R.vertices.push_back(A.vertices[v]);
    R.by_key.emplace(canonical_form(A.vertices[v]).key, pos[v]);
    R.out.emplace_back();
  }
  for (const auto& e : A.edges) {
    if (pos[e.source] == static_cast<std::size_t>(-1) || A.scc[e.source] != A.scc[e.target]) continue;
    AutomatonEdge f = e;
    f.source = pos[e.source];
    f.target = pos[e.target];
    R.out[f.source].push_back(R.edges.size());
    R.edges.push_back(f);
  }
  R.discarded_vertices = A.vertices.size() - R.vertices.size();
  compute_components(R);
  return R;
}

// Seeds from a decomposition: the structures of all its rotations.
inline std::vector<LttStructure> chain_seeds(const PffDecomposition& d) {
  std::vector<LttStructure> out;
  for (std::size_t k = 0; k < std::max<std::size_t>(d.size(), 1); ++k) out.push_back(ltt_of_map_unchecked(d.rotate(k).compose()));
  return out;
}

// ---- loops and maps -----------------------------------------------------

struct Loop {
  std::size_t start = 0;
  std::vector<std::size_t> edges;
};

inline bool is_closed_loop(const Automaton& A, const Loop& loop) {
  std::size_t v = loop.start;
  for (auto id : loop.edges) {
    if (id >= A.edges.size() || A.edges[id].source != v) return false;
    v = A.edges[id].target;
  }
  return v == loop.start;
}

// Conjugate of g by the relabeling p: p o g o p^-1.
inline GraphMap relabel_map(const GraphMap& g, const EdgePermutation& p) {
  Graph C = permutation_codomain(g.domain, p);
  return compose(apply_permutation(g.domain, p), compose(g, apply_permutation(C, p.inverse())));
}

// Folds are carried back to the start vertex's labels; the accumulated
// relabeling becomes the terminal permutation.
inline PffDecomposition loop_to_decomposition(const Automaton& A, const Loop& loop) {
  if (!is_closed_loop(A, loop)) throw Error("loop_to_map: not a closed loop");
  const Graph base = A.vertices.at(loop.start).carrier;
  EdgePermutation P = EdgePermutation::identity(base.edge_count());  // actual -> canonical
  std::vector<Step> steps;
  for (auto id : loop.edges) {
    const auto& e = A.edges[id];
    if (auto f = std::get_if<ProperFullFold>(&e.move)) {
      steps.push_back(conjugate_step(*f, P.inverse()));
      P = e.relabel.after(P);
    } else {
      P = std::get<EdgePermutation>(e.move).after(P);
    }
  }
  if (!P.is_identity()) steps.push_back(P);
  return PffDecomposition(base, steps);
}

inline GraphMap loop_to_map(const Automaton& A, const Loop& loop) { return loop_to_decomposition(A, loop).compose(); }

// Loop through the canonical vertices of the structures of f_0, ..., f_n.
// The loop's map is c o g o c^-1, c the canonical relabeling of G(g).
struct LoopFromDecomposition {
  Loop loop;
  EdgePermutation conjugator;
};

namespace detail {

inline std::optional<LoopFromDecomposition> trace_loop(const Automaton& A, const PffDecomposition& d, std::size_t start, const EdgePermutation& c0) {
  LoopFromDecomposition out;
  out.loop.start = start;
  out.conjugator = c0;
  std::size_t v = start;
  EdgePermutation Q = c0;  // actual -> canonical
  for (const auto& s : d.steps()) {
    if (auto f = std::get_if<ProperFullFold>(&s)) {
      auto id = A.find_edge(v, conjugate_step(*f, Q));
      if (!id) return std::nullopt;
      out.loop.edges.push_back(*id);
      Q = A.edges[*id].relabel.after(Q);
      v = A.edges[*id].target;
    } else {
      Q = Q.after(std::get<EdgePermutation>(s).inverse());
    }
  }
  if (v != start) return std::nullopt;
  EdgePermutation alpha = c0.after(Q.inverse());
  bool id = true;
  for (VertexId x = 0; x < alpha.vertices.size(); ++x) id = id && alpha.vertices[x] == x;
  if (id) alpha.vertices.clear();
  if (!alpha.is_identity()) {
    auto e = A.find_edge(v, alpha);
    if (!e) return std::nullopt;
    out.loop.edges.push_back(*e);
  }
  return out;
}

}  // namespace detail

// Tries every relabeling of G(g) onto its canonical vertex and keeps the
// shortest loop, so a closing symmetry is added only when unavoidable.
inline LoopFromDecomposition decomposition_to_loop(const Automaton& A, const PffDecomposition& d) {
  LttStructure actual = ltt_of_map_unchecked(d.compose());
  auto c0 = canonical_form(actual);
  auto start = A.find(actual);
  if (!start) throw Error("decomposition_to_loop: the structure of g is not a vertex of the automaton");
  std::optional<LoopFromDecomposition> best;
  for (const auto& a : c0.automorphisms) {
    auto r = detail::trace_loop(A, d, *start, a.after(c0.relabel));
    if (r && (!best || r->loop.edges.size() < best->loop.edges.size())) best = r;
  }
  if (!best) throw Error("decomposition_to_loop: the chain does not trace a loop in the automaton");
  return *best;
}

// ---- certification ------------------------------------------------------

struct LoopCertificate {
  Verdict verdict = Verdict::Failed;
  std::string reason;
  std::optional<PffDecomposition> decomposition;
  std::optional<GraphMap> map;
  bool train_track = false;
  bool takes_colored_turns = false;  // (1)
  bool pnp_free = false;             // (2)
  bool pf = false;                   // (3)
  bool three_periodic = false;       // (4)
  bool purple_periodic = false;      // (5)
  bool iw_isomorphic = false;
  bool lone_axis = false;
  std::optional<FicReport> fic;
};

inline LoopCertificate certify_loop(const Automaton& A, const Loop& loop, const FicOptions& opt = {}) {
  LoopCertificate c;
  auto d = loop_to_decomposition(A, loop);
  c.decomposition = d;
  const GraphMap& g = d.compose();
  c.map = g;
  const LttStructure& G0 = A.vertices[loop.start];
  auto tt = is_train_track(g);
  c.train_track = tt.train_track;
  if (!c.train_track) {
    c.reason = "loop map is not a train track map";
    return c;
  }
  c.takes_colored_turns = tau_infinity(g) == G0.colored;
  auto gs = gates_and_illegal_turns(g);
  c.pf = is_pf(transition_matrix(g));
  c.three_periodic = true;
  for (VertexId v = 0; v < g.domain.vertex_count(); ++v) {
    std::size_t k = 0;
    for (auto x : g.domain.directions_at(v)) k += gs.periodic(x) ? 1 : 0;
    c.three_periodic = c.three_periodic && k >= 3;
  }
  c.purple_periodic = true;
  for (auto x : g.domain.directions()) c.purple_periodic = c.purple_periodic && gs.periodic(x) == !G0.is_red(x);
  c.iw_isomorphic = isomorphic(whitehead_data(g).ideal, A.spec.graph);
  if (!c.takes_colored_turns) c.reason = "(1) tau_infinity differs from the colored edges";
  else if (!c.pf) c.reason = "(3) transition matrix not Perron-Frobenius";
  else if (!c.three_periodic) c.reason = "(4) a vertex has fewer than 3 periodic directions";
  else if (!c.purple_periodic) c.reason = "(5) periodic directions differ from the purple vertices";
  if (!c.reason.empty()) return c;
  c.fic = fic_certify(d, opt);
  c.pnp_free = c.fic->pnp && c.fic->pnp->kind == PnpKind::NoPNP;
  c.verdict = c.fic->verdict;
  if (c.verdict != Verdict::Certified) {
    c.reason = "(2) " + c.fic->reason;
    return c;
  }
  if (!c.iw_isomorphic) {
    c.verdict = Verdict::Failed;
    c.reason = "ideal Whitehead graph differs from the spec";
    return c;
  }
  if (A.spec.variant == AutomatonVariant::LoneAxis) {
    c.lone_axis = c.fic->index == HalfInteger::from_twice(3 - 2 * A.spec.rank) && G0.red_vertex_count() == 1;
    if (!c.lone_axis) {
      c.verdict = Verdict::Failed;
      c.reason = "not lone axis";
    }
  }
  return c;
}

// ---- random loops -------------------------------------------------------

// Walk of `length` edges inside the start's component, closed by a shortest path.
inline Loop random_loop(const Automaton& A, std::size_t start, std::size_t length, std::mt19937_64& rng) {
  Loop loop{start, {}};
  std::size_t v = start;
  const int c = A.scc.at(start);
  auto inside = [&](std::size_t v) {
    std::vector<std::size_t> ids;
    for (auto id : A.out[v]) {
      if (A.scc[A.edges[id].target] == c) ids.push_back(id);
    }
    return ids;
  };
  for (std::size_t i = 0; i < length; ++i) {
    auto ids = inside(v);
    if (ids.empty()) break;
    auto id = ids[std::uniform_int_distribution<std::size_t>(0, ids.size() - 1)(rng)];
    loop.edges.push_back(id);
    v = A.edges[id].target;
  }
  if (v != start) {
    std::map<std::size_t, std::size_t> via;  // vertex -> edge used to reach it
    std::deque<std::size_t> q{v};
    via[v] = static_cast<std::size_t>(-1);
    while (!q.empty() && !via.count(start)) {
      auto x = q.front();
      q.pop_front();
      for (auto id : inside(x)) {
        auto y = A.edges[id].target;
        if (via.emplace(y, id).second) q.push_back(y);
      }
    }
    if (!via.count(start)) throw Error("random_loop: start is not in a strongly connected component");
    std::vector<std::size_t> back;
    for (std::size_t x = start; x != v; x = A.edges[via[x]].source) back.push_back(via[x]);
    loop.edges.insert(loop.edges.end(), back.rbegin(), back.rend());
  }
  return loop;
}

}  // namespace ttauto
