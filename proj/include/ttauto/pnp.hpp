#pragma once

// Periodic Nielsen path search along a pff decomposition.
//
// An indivisible Nielsen path opens with an illegal turn {d1, d2}:
// rho = reverse(rho1) rho2 with legal legs starting d1, d2. Pushing the legs
// through the repeated chain one fold at a time, the uncancelled tails must
// always meet in a turn that is illegal for the current rotation f_s.
// Branches where that fails are contradictions.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pff.hpp"

namespace ttauto {

enum class PnpKind { NoPNP, CandidateFound, Inconclusive };

inline std::string to_string(PnpKind k) {
  switch (k) {
    case PnpKind::NoPNP: return "NoPNP";
    case PnpKind::CandidateFound: return "CandidateFound";
    case PnpKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

// Rules recorded at search-tree nodes.
namespace rule {
inline constexpr const char* root = "root";
inline constexpr const char* extend = "extend";            // a tail cancelled completely; children extend it
inline constexpr const char* illegal = "illegal";          // residual turn illegal for f_s; child at s+1
inline constexpr const char* legal = "legal";              // contradiction: residual turn legal for f_s
inline constexpr const char* no_extension = "no-extension";  // contradiction: no taken turn continues the leg
inline constexpr const char* candidate = "candidate";      // tails returned to the legs after whole periods
inline constexpr const char* repeat = "repeat";            // state repeated after two periods
inline constexpr const char* depth = "depth";              // stage budget exhausted
inline constexpr const char* budget = "budget";            // node or length budget exhausted
}  // namespace rule

// Which turns a leg may continue through: turns of tau_infinity(g), or any
// legal turn (a weaker constraint, larger trees).
enum class ExtensionPolicy { TakenTurns, LegalTurns };

inline std::string to_string(ExtensionPolicy p) { return p == ExtensionPolicy::TakenTurns ? "taken" : "legal"; }

struct SearchNode {
  std::size_t stage = 0;
  EdgePath leg1, leg2;                 // prefixes of rho1, rho2 in Gamma_0
  std::optional<Turn> residual;        // residual turn at this stage, if both tails are nonempty
  std::string rule;
  std::vector<SearchNode> children;
};

struct PnpVerdict {
  PnpKind kind = PnpKind::NoPNP;
  std::vector<SearchNode> roots;       // one per illegal turn of g
  std::size_t max_stages = 0;
  ExtensionPolicy extension = ExtensionPolicy::TakenTurns;
  std::size_t nodes = 0;
  std::size_t deepest_stage = 0;
  // CandidateFound data
  EdgePath leg1, leg2;
  std::size_t candidate_stage = 0;
  bool candidate_verified = false;
};

struct Leaf {
  std::size_t root = 0;
  const SearchNode* node = nullptr;
};

inline void collect_leaves(const SearchNode& n, std::size_t root, std::vector<Leaf>& out) {
  if (n.children.empty()) out.push_back({root, &n});
  for (const auto& c : n.children) collect_leaves(c, root, out);
}

inline std::vector<Leaf> leaves(const PnpVerdict& v) {
  std::vector<Leaf> out;
  for (std::size_t i = 0; i < v.roots.size(); ++i) collect_leaves(v.roots[i], i, out);
  return out;
}

// Drops the longest common prefix of a and b.
inline void cancel_common_prefix(EdgePath& a, EdgePath& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k));
  b.erase(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(k));
}

inline bool is_legal_path(const EdgePath& p, const TurnSet& illegal) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Turn t(p[i].reverse(), p[i + 1]);
    if (t.degenerate() || illegal.count(t)) return false;
  }
  return true;
}

// {alpha, beta} is dangerous when neither image is an initial subpath of the
// other and cancellation of the tightened images ends in an illegal turn.
inline bool is_dangerous(const GraphMap& g, const EdgePath& alpha, const EdgePath& beta) {
  auto gs = gates_and_illegal_turns(g);
  if (alpha.empty() || beta.empty() || !is_legal_path(alpha, gs.illegal) || !is_legal_path(beta, gs.illegal)) {
    throw Error("is_dangerous: long turn legs must be nonempty legal paths");
  }
  if (g.domain.initial(alpha.front()) != g.domain.initial(beta.front())) throw Error("is_dangerous: legs start at different vertices");
  EdgePath a = g.image_tight(alpha), b = g.image_tight(beta);
  cancel_common_prefix(a, b);
  if (a.empty() || b.empty()) return false;
  return gs.is_illegal(Turn(a.front(), b.front()));
}

// g_#^k(rho) = rho for some 1 <= k <= max_power, rho having exactly one illegal
// turn, nondegenerate, with legal legs on either side.
inline bool inp_shape_check(const GraphMap& g, const EdgePath& rho, unsigned max_power = 0) {
  if (rho.size() < 2 || !is_tight(rho) || !g.domain.is_path(rho)) return false;
  auto gs = gates_and_illegal_turns(g);
  std::size_t illegal_count = 0;
  for (std::size_t i = 0; i + 1 < rho.size(); ++i) {
    Turn t(rho[i].reverse(), rho[i + 1]);
    if (gs.is_illegal(t)) ++illegal_count;
  }
  if (illegal_count != 1) return false;
  if (max_power == 0) max_power = 4 * gs.rotationless_power;
  EdgePath cur = rho;
  const std::size_t cap = 64 * rho.size() + 4096;
  for (unsigned k = 1; k <= max_power; ++k) {
    cur = g.image_tight(cur);
    if (cur == rho) return true;
    if (cur.size() > cap) return false;
  }
  return false;
}

struct PnpOptions {
  std::size_t max_stages = 0;       // 0 means 4 periods
  ExtensionPolicy extension = ExtensionPolicy::TakenTurns;
  std::size_t max_nodes = 2000000;
  std::size_t max_tail = 200000;    // longest tail tracked before giving up
};

namespace detail {

class PnpSearch {
 public:
  PnpSearch(const PffDecomposition& d, const PnpOptions& opt) : d_(d), opt_(opt), n_(d.size()) {
    g_ = d_.compose();
    auto tt = is_train_track(g_);
    if (!tt.train_track) throw Error("pnp_search: map is not a train track map");
    if (n_ == 0) throw Error("pnp_search: empty decomposition");
    max_stages_ = opt_.max_stages ? opt_.max_stages : 4 * n_;
    tau_inf_ = tau_infinity(g_);
    illegal_ = gates_and_illegal_turns(g_).illegal;
    illegal_by_rotation_ = rotation_illegal_turns(d_);
    N_ = d_.base().direction_count();
  }

  PnpVerdict run() {
    PnpVerdict v;
    v.max_stages = max_stages_;
    v.extension = opt_.extension;
    auto gs = gates_and_illegal_turns(g_);
    for (const auto& t : gs.illegal) {
      SearchNode root;
      root.stage = 0;
      root.leg1 = {t.first};
      root.leg2 = {t.second};
      root.residual = t;
      root.rule = rule::root;
      ++nodes_;
      Tails tails{{t.first}, {t.second}};
      std::set<Key> seen;
      auto child = advance(0, root.leg1, root.leg2, tails, seen);
      root.children.push_back(std::move(child));
      v.roots.push_back(std::move(root));
    }
    v.nodes = nodes_;
    v.deepest_stage = deepest_;
    v.kind = kind_;
    if (candidate_) {
      v.leg1 = candidate_->leg1;
      v.leg2 = candidate_->leg2;
      v.candidate_stage = candidate_->stage;
      v.candidate_verified = candidate_->verified;
    }
    return v;
  }

 private:
  using Tails = std::pair<EdgePath, EdgePath>;
  using Key = std::tuple<std::size_t, EdgePath, EdgePath, Direction, Direction>;

  struct Candidate {
    EdgePath leg1, leg2;
    std::size_t stage;
    bool verified;
  };

  // Tightened image of direction d under g_{s,1} over the repeated chain.
  const EdgePath& image(std::size_t s, Direction d) {
    while (images_.size() <= s) {
      if (images_.empty()) {
        std::vector<EdgePath> id;
        for (std::uint32_t c = 0; c < N_; ++c) id.push_back({Direction::from_code(c)});
        images_.push_back(id);
        continue;
      }
      std::size_t k = images_.size();  // build stage k from k-1
      GraphMap step = d_.step((k - 1) % n_ + 1);
      std::vector<EdgePath> next;
      for (const auto& p : images_.back()) {
        EdgePath q = step.image_tight(p);
        if (q.size() > opt_.max_tail) overflow_ = true;
        next.push_back(std::move(q));
      }
      images_.push_back(std::move(next));
    }
    return images_[s][d.code()];
  }

  void meet(PnpKind k) {
    if (k == PnpKind::CandidateFound || (k == PnpKind::Inconclusive && kind_ == PnpKind::NoPNP)) kind_ = k;
  }

  SearchNode leaf(std::size_t s, const EdgePath& l1, const EdgePath& l2, std::optional<Turn> res, const char* r) {
    SearchNode n;
    n.stage = s;
    n.leg1 = l1;
    n.leg2 = l2;
    n.residual = res;
    n.rule = r;
    ++nodes_;
    deepest_ = std::max(deepest_, s);
    return n;
  }

  // Tails at stage s have just been cancelled against each other.
  SearchNode advance(std::size_t s, const EdgePath& l1, const EdgePath& l2, Tails tails, std::set<Key> seen) {
    if (nodes_ > opt_.max_nodes || overflow_) {
      meet(PnpKind::Inconclusive);
      return leaf(s, l1, l2, std::nullopt, rule::budget);
    }
    auto& [x, y] = tails;
    if (x.empty() || y.empty()) {
      bool first = x.empty();
      const EdgePath& leg = first ? l1 : l2;
      SearchNode node = leaf(s, l1, l2, std::nullopt, rule::extend);
      for (auto e : extensions(leg.back())) {
        EdgePath nl1 = l1, nl2 = l2;
        (first ? nl1 : nl2).push_back(e);
        Tails t = tails;
        (first ? t.first : t.second) = image(s, e);
        cancel_common_prefix(t.first, t.second);
        node.children.push_back(advance(s, nl1, nl2, std::move(t), seen));
      }
      if (node.children.empty()) node.rule = rule::no_extension;
      return node;
    }
    Turn res(x.front(), y.front());
    const std::size_t pos = s % n_;
    if (!illegal_by_rotation_[pos].count(res)) return leaf(s, l1, l2, res, rule::legal);
    if (s > 0 && pos == 0 && x == l1 && y == l2) {
      EdgePath rho = reverse_path(l1);
      rho.insert(rho.end(), l2.begin(), l2.end());
      bool ok = inp_shape_check(g_, rho);
      record_candidate(l1, l2, s, ok);
      meet(ok ? PnpKind::CandidateFound : PnpKind::Inconclusive);
      return leaf(s, l1, l2, res, rule::candidate);
    }
    if (s >= 2 * n_) {
      Key key{pos, x, y, l1.back(), l2.back()};
      if (!seen.insert(key).second) {
        EdgePath rho = reverse_path(l1);
        rho.insert(rho.end(), l2.begin(), l2.end());
        bool ok = inp_shape_check(g_, rho);
        record_candidate(l1, l2, s, ok);
        meet(ok ? PnpKind::CandidateFound : PnpKind::Inconclusive);
        return leaf(s, l1, l2, res, rule::repeat);
      }
    }
    if (s >= max_stages_) {
      meet(PnpKind::Inconclusive);
      return leaf(s, l1, l2, res, rule::depth);
    }
    SearchNode node = leaf(s, l1, l2, res, rule::illegal);
    GraphMap step = d_.step(pos + 1);
    Tails next{step.image_tight(x), step.image_tight(y)};
    if (next.first.size() > opt_.max_tail || next.second.size() > opt_.max_tail) {
      meet(PnpKind::Inconclusive);
      node.children.push_back(leaf(s + 1, l1, l2, std::nullopt, rule::budget));
      return node;
    }
    cancel_common_prefix(next.first, next.second);
    node.children.push_back(advance(s + 1, l1, l2, std::move(next), seen));
    return node;
  }

  std::vector<Direction> extensions(Direction last) const {
    std::vector<Direction> out;
    for (std::uint32_t c = 0; c < N_; ++c) {
      Direction e = Direction::from_code(c);
      Turn t(last.reverse(), e);
      if (t.degenerate()) continue;
      bool ok = opt_.extension == ExtensionPolicy::TakenTurns ? tau_inf_.count(t) != 0 : illegal_.count(t) == 0;
      if (ok) out.push_back(e);
    }
    return out;
  }

  void record_candidate(const EdgePath& l1, const EdgePath& l2, std::size_t s, bool ok) {
    if (!candidate_ || (ok && !candidate_->verified)) candidate_ = Candidate{l1, l2, s, ok};
  }

  const PffDecomposition& d_;
  PnpOptions opt_;
  std::size_t n_;
  std::size_t N_ = 0;
  std::size_t max_stages_ = 0;
  GraphMap g_;
  TurnSet tau_inf_;
  TurnSet illegal_;
  std::vector<TurnSet> illegal_by_rotation_;
  std::vector<std::vector<EdgePath>> images_;
  bool overflow_ = false;
  std::size_t nodes_ = 0, deepest_ = 0;
  PnpKind kind_ = PnpKind::NoPNP;
  std::optional<Candidate> candidate_;
};

}  // namespace detail

inline PnpVerdict pnp_search(const PffDecomposition& d, const PnpOptions& opt = {}) {
  return detail::PnpSearch(d, opt).run();
}

inline PnpVerdict pnp_search(const PffDecomposition& d, std::size_t max_stages) {
  PnpOptions opt;
  opt.max_stages = max_stages;
  return pnp_search(d, opt);
}

// Residual turns at which each root's branches die, in tree order.
inline std::vector<std::pair<Turn, std::vector<std::pair<std::size_t, Turn>>>> branch_deaths(const PnpVerdict& v) {
  std::vector<std::pair<Turn, std::vector<std::pair<std::size_t, Turn>>>> out;
  for (std::size_t i = 0; i < v.roots.size(); ++i) {
    std::vector<Leaf> ls;
    collect_leaves(v.roots[i], i, ls);
    std::vector<std::pair<std::size_t, Turn>> deaths;
    for (const auto& l : ls) {
      if (l.node->rule == rule::legal && l.node->residual) deaths.emplace_back(l.node->stage, *l.node->residual);
    }
    out.emplace_back(*v.roots[i].residual, deaths);
  }
  return out;
}

struct CertificateCheck {
  bool ok = true;
  std::vector<std::string> problems;
};

// Independent replay of a NoPNP tree: every root is an illegal turn of g and
// every illegal turn has a root; every contradiction leaf is recomputed from
// full tightened images under g_{s,1} and the gates of the composed rotation;
// every extension node offers exactly the taken-turn continuations.
inline CertificateCheck verify_certificate(const PffDecomposition& d, const PnpVerdict& v) {
  CertificateCheck out;
  auto fail = [&](std::string msg) {
    out.ok = false;
    out.problems.push_back(std::move(msg));
  };
  if (v.kind != PnpKind::NoPNP) fail("verdict is " + to_string(v.kind) + ", not NoPNP");
  const GraphMap g = d.compose();
  const std::size_t n = d.size();
  const Graph& G = d.base();
  auto illegal = gates_and_illegal_turns(g).illegal;
  TurnSet roots;
  for (const auto& r : v.roots) {
    if (!r.residual || r.leg1.size() != 1 || r.leg2.size() != 1 || Turn(r.leg1[0], r.leg2[0]) != *r.residual) {
      fail("malformed root");
      continue;
    }
    roots.insert(*r.residual);
  }
  if (roots != illegal) fail("roots do not match the illegal turns of the map");
  TurnSet tinf = tau_infinity(g);
  auto allowed = [&](const Turn& t) {
    if (t.degenerate()) return false;
    return v.extension == ExtensionPolicy::TakenTurns ? tinf.count(t) != 0 : illegal.count(t) == 0;
  };
  std::map<std::size_t, TurnSet> rot_illegal;
  std::map<std::size_t, GraphMap> prefix;
  auto prefix_map = [&](std::size_t s) -> const GraphMap& {
    auto it = prefix.find(s);
    if (it != prefix.end()) return it->second;
    GraphMap m = GraphMap::identity(G);
    for (std::size_t k = 1; k <= s; ++k) m = tightened(compose(d.step((k - 1) % n + 1), m));
    return prefix.emplace(s, std::move(m)).first->second;
  };
  std::function<void(const SearchNode&)> walk = [&](const SearchNode& node) {
    if (node.rule == rule::extend || node.rule == rule::no_extension) {
      // one of the legs is extended by every taken continuation
      std::set<std::pair<EdgePath, EdgePath>> expected, got;
      for (int side = 0; side < 2; ++side) {
        const EdgePath& leg = side == 0 ? node.leg1 : node.leg2;
        for (auto e : G.directions()) {
          if (!allowed(Turn(leg.back().reverse(), e))) continue;
          EdgePath a = node.leg1, b = node.leg2;
          (side == 0 ? a : b).push_back(e);
          expected.insert({a, b});
        }
      }
      for (const auto& c : node.children) got.insert({c.leg1, c.leg2});
      for (const auto& c : got) {
        if (!expected.count(c)) fail("extension through a disallowed turn at stage " + std::to_string(node.stage));
      }
      if (node.rule == rule::no_extension && !node.children.empty()) fail("no-extension node has children");
      if (!node.children.empty()) {
        // all continuations of the side that was extended must be present
        bool side1 = node.children.front().leg1.size() > node.leg1.size();
        std::size_t want = 0;
        const EdgePath& leg = side1 ? node.leg1 : node.leg2;
        for (auto e : G.directions()) {
          if (allowed(Turn(leg.back().reverse(), e))) ++want;
        }
        if (node.children.size() != want) fail("extension node does not cover every continuation");
      } else {
        const EdgePath& l1 = node.leg1;
        const EdgePath& l2 = node.leg2;
        bool any = false;
        for (const EdgePath* leg : {&l1, &l2}) {
          for (auto e : G.directions()) {
            any = any || allowed(Turn(leg->back().reverse(), e));
          }
        }
        if (any) fail("no-extension leaf has continuations");
      }
    } else if (node.rule == rule::legal) {
      const GraphMap& m = prefix_map(node.stage);
      EdgePath a = m.image_tight(node.leg1), b = m.image_tight(node.leg2);
      cancel_common_prefix(a, b);
      if (a.empty() || b.empty()) {
        fail("legal leaf at stage " + std::to_string(node.stage) + " has an empty tail");
      } else {
        Turn t(a.front(), b.front());
        if (!node.residual || t != *node.residual) fail("recorded residual turn differs at stage " + std::to_string(node.stage));
        std::size_t pos = node.stage % n;
        if (!rot_illegal.count(pos)) rot_illegal[pos] = gates_and_illegal_turns(d.rotate(pos).compose()).illegal;
        if (rot_illegal[pos].count(t)) fail("residual turn is illegal for the rotation at stage " + std::to_string(node.stage));
      }
    } else if (node.rule == rule::illegal || node.rule == rule::root) {
      if (node.children.size() != 1) fail("stage node must have exactly one child");
    } else {
      fail("leaf rule '" + node.rule + "' is not a contradiction");
    }
    for (const auto& c : node.children) walk(c);
  };
  for (const auto& r : v.roots) walk(r);
  return out;
}

}  // namespace ttauto
