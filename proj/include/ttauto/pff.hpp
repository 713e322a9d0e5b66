#pragma once

// Proper full folds, edge permutations and pff decompositions.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "train_track.hpp"

namespace ttauto {

// Fold of the full edge `folded` over the full edge `target`: folded -> target folded.
struct ProperFullFold {
  Direction folded;
  Direction target;
  friend auto operator<=>(const ProperFullFold&, const ProperFullFold&) = default;
};

// Edge relabeling; image[e] is where the positive direction of e goes.
// vertices is empty for the identity vertex map.
struct EdgePermutation {
  std::vector<Direction> image;
  std::vector<VertexId> vertices;

  Direction operator()(Direction d) const {
    Direction x = image.at(d.edge());
    return d.reversed() ? x.reverse() : x;
  }
  VertexId vertex(VertexId v) const { return vertices.empty() ? v : vertices.at(v); }

  bool is_identity() const {
    for (EdgeId e = 0; e < image.size(); ++e) {
      if (image[e] != Direction(e, false)) return false;
    }
    for (VertexId v = 0; v < vertices.size(); ++v) {
      if (vertices[v] != v) return false;
    }
    return true;
  }

  static EdgePermutation identity(std::size_t edges) {
    EdgePermutation p;
    for (EdgeId e = 0; e < edges; ++e) p.image.push_back(Direction(e, false));
    return p;
  }

  EdgePermutation inverse() const {
    EdgePermutation p;
    p.image.resize(image.size());
    for (EdgeId e = 0; e < image.size(); ++e) {
      Direction x = image[e];
      p.image[x.edge()] = Direction(e, x.reversed());
    }
    if (!vertices.empty()) {
      p.vertices.resize(vertices.size());
      for (VertexId v = 0; v < vertices.size(); ++v) p.vertices[vertices[v]] = v;
    }
    return p;
  }

  // (this o other)
  EdgePermutation after(const EdgePermutation& other) const {
    EdgePermutation p;
    for (auto d : other.image) p.image.push_back((*this)(d));
    if (!vertices.empty() || !other.vertices.empty()) {
      std::size_t n = std::max(vertices.size(), other.vertices.size());
      for (VertexId v = 0; v < n; ++v) p.vertices.push_back(vertex(other.vertex(v)));
    }
    return p;
  }

  void validate(std::size_t edges) const {
    if (image.size() != edges) throw Error("permutation: wrong size");
    std::set<EdgeId> seen;
    for (auto d : image) {
      if (d.edge() >= edges || !seen.insert(d.edge()).second) throw Error("permutation: not a bijection on edges");
    }
  }

  friend bool operator==(const EdgePermutation& a, const EdgePermutation& b) {
    return a.image == b.image && a.vertices == b.vertices;
  }
};

using Step = std::variant<ProperFullFold, EdgePermutation>;

inline void check_fold(const Graph& g, const ProperFullFold& f) {
  if (f.folded.edge() >= g.edge_count() || f.target.edge() >= g.edge_count()) throw Error("fold: unknown direction");
  if (f.folded == f.target) throw Error("fold: folded and target directions coincide");
  if (f.folded == f.target.reverse()) throw Error("fold: cannot fold an edge over its own reversal");
  if (f.folded.edge() == f.target.edge()) throw Error("fold: cannot fold an edge over itself");
  if (g.initial(f.folded) != g.initial(f.target)) throw Error("fold: directions start at different vertices");
}

// The folded edge's initial end slides to the terminal vertex of the target.
inline Graph fold_codomain(const Graph& g, const ProperFullFold& f) {
  check_fold(g, f);
  auto edges = g.edges();
  auto& e = edges[f.folded.edge()];
  VertexId w = g.terminal(f.target);
  if (f.folded.reversed()) {
    e.to = w;
  } else {
    e.from = w;
  }
  return Graph(g.vertex_count(), edges, g.names());
}

inline Graph permutation_codomain(const Graph& g, const EdgePermutation& p) {
  p.validate(g.edge_count());
  std::vector<EdgeEnds> edges(g.edge_count());
  std::vector<std::string> names = g.names();
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    Direction x = p.image[e];
    VertexId a = p.vertex(g.ends(e).from), b = p.vertex(g.ends(e).to);
    edges[x.edge()] = x.reversed() ? EdgeEnds{b, a} : EdgeEnds{a, b};
  }
  return Graph(g.vertex_count(), edges, names);
}

inline Graph step_codomain(const Graph& g, const Step& s) {
  if (auto f = std::get_if<ProperFullFold>(&s)) return fold_codomain(g, *f);
  return permutation_codomain(g, std::get<EdgePermutation>(s));
}

inline GraphMap apply_fold(const Graph& g, const ProperFullFold& f) {
  Graph cod = fold_codomain(g, f);
  GraphMap m = GraphMap::identity(g);
  m.codomain = cod;
  EdgePath img{f.target, f.folded};
  m.edge_map[f.folded.edge()] = f.folded.reversed() ? reverse_path(img) : img;
  m.validate();
  return m;
}

inline GraphMap apply_permutation(const Graph& g, const EdgePermutation& p) {
  GraphMap m{g, permutation_codomain(g, p), {}, {}};
  for (VertexId v = 0; v < g.vertex_count(); ++v) m.vertex_map.push_back(p.vertex(v));
  for (EdgeId e = 0; e < g.edge_count(); ++e) m.edge_map.push_back({p.image[e]});
  m.validate();
  return m;
}

inline GraphMap step_map(const Graph& g, const Step& s) {
  if (auto f = std::get_if<ProperFullFold>(&s)) return apply_fold(g, *f);
  return apply_permutation(g, std::get<EdgePermutation>(s));
}

inline DirectionMap step_direction_map(std::size_t direction_count, const Step& s) {
  DirectionMap D = identity_direction_map(direction_count);
  if (auto f = std::get_if<ProperFullFold>(&s)) {
    D[f->folded.code()] = f->target;
  } else {
    const auto& p = std::get<EdgePermutation>(s);
    for (std::uint32_t c = 0; c < direction_count; ++c) D[c] = p(Direction::from_code(c));
  }
  return D;
}

// tau of a single step: the turn {reverse(target), folded} for a fold.
inline TurnSet step_taken_turns(const Step& s) {
  if (auto f = std::get_if<ProperFullFold>(&s)) return {Turn(f->target.reverse(), f->folded)};
  return {};
}

// Conjugate of a step by a permutation of the labels: sigma o step o sigma^-1.
inline Step conjugate_step(const Step& s, const EdgePermutation& sigma) {
  if (auto f = std::get_if<ProperFullFold>(&s)) return ProperFullFold{sigma(f->folded), sigma(f->target)};
  auto inv = sigma.inverse();
  return sigma.after(std::get<EdgePermutation>(s).after(inv));
}

class PffDecomposition {
 public:
  PffDecomposition() = default;
  PffDecomposition(Graph base, std::vector<Step> steps) : base_(std::move(base)), steps_(std::move(steps)) {
    carriers_.push_back(base_);
    for (const auto& s : steps_) carriers_.push_back(step_codomain(carriers_.back(), s));
    if (!(carriers_.back() == base_)) throw Error("decomposition: final carrier differs from the initial carrier");
  }

  const Graph& base() const { return base_; }
  const std::vector<Step>& steps() const { return steps_; }
  std::size_t size() const { return steps_.size(); }
  const Graph& carrier(std::size_t k) const { return carriers_.at(k); }
  std::size_t fold_count() const {
    std::size_t n = 0;
    for (const auto& s : steps_) n += std::holds_alternative<ProperFullFold>(s) ? 1 : 0;
    return n;
  }

  // Map of the k-th step (1-based), Gamma_{k-1} -> Gamma_k.
  GraphMap step(std::size_t k) const { return step_map(carriers_.at(k - 1), steps_.at(k - 1)); }

  // g_{j,i} = g_j o ... o g_i for 1 <= i <= j <= n; identity when j < i.
  GraphMap range(std::size_t j, std::size_t i) const {
    GraphMap out = GraphMap::identity(carriers_.at(i - 1));
    for (std::size_t k = i; k <= j; ++k) out = ttauto::compose(step(k), out);
    return out;
  }

  GraphMap prefix(std::size_t j) const { return range(j, 1); }

  GraphMap compose() const {
    if (!composed_) composed_ = range(steps_.size(), 1);
    return *composed_;
  }

  DirectionMap range_direction_map(std::size_t j, std::size_t i) const {
    DirectionMap D = identity_direction_map(base_.direction_count());
    for (std::size_t k = i; k <= j; ++k) D = ttauto::compose(step_direction_map(base_.direction_count(), steps_[k - 1]), D);
    return D;
  }

  DirectionMap direction_map() const { return range_direction_map(steps_.size(), 1); }

  // Decomposition of f_k = g_{k,1} o g_{n,k+1}, based at Gamma_k.
  PffDecomposition rotate(std::size_t k) const {
    if (steps_.empty() ? k != 0 : k >= steps_.size()) throw Error("rotate: index out of range");
    std::vector<Step> s(steps_.begin() + static_cast<std::ptrdiff_t>(k), steps_.end());
    s.insert(s.end(), steps_.begin(), steps_.begin() + static_cast<std::ptrdiff_t>(k));
    return PffDecomposition(carriers_.at(k), s);
  }

  friend bool operator==(const PffDecomposition& a, const PffDecomposition& b) {
    return a.base_ == b.base_ && a.steps_ == b.steps_;
  }

 private:
  Graph base_;
  std::vector<Step> steps_;
  std::vector<Graph> carriers_;
  mutable std::optional<GraphMap> composed_;
};

// T_k = Dg_k(T_{k-1}) U tau(g_k); equals tau of the raw composite.
inline std::vector<TurnSet> decomposition_taken_turns_by_stage(const PffDecomposition& d) {
  std::vector<TurnSet> out;
  TurnSet T;
  for (const auto& s : d.steps()) {
    T = map_turns(step_direction_map(d.base().direction_count(), s), T);
    for (const auto& t : step_taken_turns(s)) T.insert(t);
    out.push_back(T);
  }
  return out;
}

inline TurnSet decomposition_taken_turns(const PffDecomposition& d) {
  auto stages = decomposition_taken_turns_by_stage(d);
  return stages.empty() ? TurnSet{} : stages.back();
}

// Turns first identified by a fold along the periodically repeated chain.
inline TurnSet decomposition_illegal_turns(const PffDecomposition& d) {
  const std::size_t N = d.base().direction_count();
  const std::size_t n = d.size();
  TurnSet out;
  if (n == 0) return out;
  std::vector<DirectionMap> step_maps;
  for (const auto& s : d.steps()) step_maps.push_back(step_direction_map(N, s));
  std::set<std::pair<std::size_t, DirectionMap>> seen;
  DirectionMap D = identity_direction_map(N);
  for (std::size_t k = 0;; ++k) {
    std::size_t pos = k % n;
    if (!seen.insert({pos, D}).second) break;
    if (auto f = std::get_if<ProperFullFold>(&d.steps()[pos])) {
      std::vector<Direction> to_folded, to_target;
      for (std::uint32_t c = 0; c < N; ++c) {
        if (D[c] == f->folded) to_folded.push_back(Direction::from_code(c));
        if (D[c] == f->target) to_target.push_back(Direction::from_code(c));
      }
      for (auto a : to_folded) {
        for (auto b : to_target) out.insert(Turn(a, b));
      }
    }
    D = compose(step_maps[pos], D);
  }
  return out;
}

// Illegal turns of every rotation f_0 .. f_{n-1}.
inline std::vector<TurnSet> rotation_illegal_turns(const PffDecomposition& d) {
  std::vector<TurnSet> out;
  for (std::size_t k = 0; k < std::max<std::size_t>(d.size(), 1); ++k) out.push_back(decomposition_illegal_turns(d.size() ? d.rotate(k) : d));
  return out;
}

struct FactorResult {
  std::optional<PffDecomposition> decomposition;
  std::string failure;  // NotPffFactorable reason when decomposition is empty
};

inline std::optional<EdgePermutation> as_permutation(const GraphMap& h) {
  EdgePermutation p;
  std::set<EdgeId> seen;
  for (const auto& img : h.edge_map) {
    if (img.size() != 1 || !seen.insert(img[0].edge()).second) return std::nullopt;
    p.image.push_back(img[0]);
  }
  bool identity_vertices = true;
  for (VertexId v = 0; v < h.vertex_map.size(); ++v) identity_vertices = identity_vertices && h.vertex_map[v] == v;
  if (!identity_vertices) p.vertices = h.vertex_map;
  return p;
}

// Greedy peeling of proper full folds off the right end of g. Among pairs
// (E, E') where h(E') is a proper prefix of h(E), the smallest |h(E)| wins,
// then the smallest (E, E') by direction code.
inline FactorResult factor_pff(const GraphMap& g) {
  auto tt = is_train_track(g);
  if (!tt.train_track) throw Error("factor_pff: input is not a train track map");
  Graph base = g.domain;
  GraphMap h = g;
  std::vector<Step> steps;
  const std::size_t max_steps = 4 * g.total_length() + 8;
  while (true) {
    if (auto p = as_permutation(h)) {
      if (!p->is_identity()) steps.push_back(*p);
      try {
        return {PffDecomposition(base, steps), ""};
      } catch (const Error& e) {
        return {std::nullopt, std::string("residue permutation does not close the chain: ") + e.what()};
      }
    }
    if (steps.size() > max_steps) return {std::nullopt, "step budget exhausted"};
    std::optional<std::tuple<std::size_t, Direction, Direction>> best;
    for (auto E : h.domain.directions()) {
      EdgePath hE = h.image(E);
      for (auto E2 : h.domain.directions()) {
        if (E2.edge() == E.edge()) continue;
        if (h.domain.initial(E) != h.domain.initial(E2)) continue;
        EdgePath hE2 = h.image(E2);
        if (hE2.size() >= hE.size() || !std::equal(hE2.begin(), hE2.end(), hE.begin())) continue;
        std::tuple<std::size_t, Direction, Direction> cand{hE.size(), E, E2};
        if (!best || cand < *best) best = cand;
      }
    }
    if (!best) return {std::nullopt, "NotPffFactorable: no edge image has another as a proper prefix and the residue " + map_string(h) + " is not a permutation"};
    auto [len, E, E2] = *best;
    ProperFullFold fold{E, E2};
    Graph next = fold_codomain(h.domain, fold);
    EdgePath hE = h.image(E);
    EdgePath rest(hE.begin() + static_cast<std::ptrdiff_t>(h.image(E2).size()), hE.end());
    GraphMap h2{next, h.codomain, h.vertex_map, h.edge_map};
    h2.edge_map[E.edge()] = E.reversed() ? reverse_path(rest) : rest;
    h2.validate();
    steps.push_back(fold);
    h = h2;
  }
}

// ---- chain DSL ----------------------------------------------------------

// "fold a over b; fold c over a; perm b->B" or "a->Ba; c->ac; ...".
inline PffDecomposition parse_chain(const Graph& base, std::string_view text) {
  std::string normalized(text);
  for (auto& c : normalized) {
    if (c == '\n') c = ';';
  }
  std::vector<Step> steps;
  Graph cur = base;
  for (const auto& raw : split(normalized, ';')) {
    auto item = trim(raw);
    if (item.empty()) continue;
    Step s;
    if (item.rfind("fold ", 0) == 0) {
      auto rest = item.substr(5);
      auto over = rest.find(" over ");
      if (over == std::string::npos) throw Error("expected 'fold X over Y' in '" + item + "'");
      s = ProperFullFold{cur.parse_direction(trim(rest.substr(0, over))), cur.parse_direction(trim(rest.substr(over + 6)))};
    } else if (item.rfind("perm", 0) == 0) {
      auto p = EdgePermutation::identity(cur.edge_count());
      auto body = trim(std::string_view(item).substr(4));
      if (body == "id") body.clear();
      for (const auto& [lhs, rhs] : parse_assignments(body)) {
        Direction a = cur.parse_direction(lhs), b = cur.parse_direction(rhs);
        p.image[a.edge()] = a.reversed() ? b.reverse() : b;
      }
      s = p;
    } else {
      auto items = parse_assignments(item);
      if (items.size() != 1) throw Error("cannot parse chain step '" + item + "'");
      Direction d = cur.parse_direction(items[0].first);
      EdgePath p = cur.parse_path(items[0].second);
      if (p.size() != 2 || p[1] != d) throw Error("step '" + item + "' is not of the form X->YX");
      s = ProperFullFold{d, p[0]};
    }
    cur = step_codomain(cur, s);
    steps.push_back(s);
  }
  return PffDecomposition(base, steps);
}

inline PffDecomposition parse_chain(std::string_view text, std::size_t rank) { return parse_chain(Graph::rose(rank), text); }

inline std::string step_string(const Graph& g, const Step& s) {
  if (auto f = std::get_if<ProperFullFold>(&s)) return "fold " + g.name(f->folded) + " over " + g.name(f->target);
  const auto& p = std::get<EdgePermutation>(s);
  std::string out = "perm";
  bool first = true;
  for (EdgeId e = 0; e < p.image.size(); ++e) {
    if (p.image[e] == Direction(e, false)) continue;
    out += (first ? " " : ",") + g.names()[e] + "->" + g.name(p.image[e]);
    first = false;
  }
  if (first) out += " id";
  return out;
}

inline std::string chain_string(const PffDecomposition& d) {
  std::string out;
  for (std::size_t k = 0; k < d.size(); ++k) out += (k ? "; " : "") + step_string(d.carrier(k), d.steps()[k]);
  return out;
}

}  // namespace ttauto
