#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace ttauto;

namespace {

std::set<Turn> death_turns(const PnpVerdict& v) {
  std::set<Turn> out;
  for (const auto& [root, deaths] : branch_deaths(v)) {
    for (const auto& [stage, t] : deaths) out.insert(t);
  }
  return out;
}

SearchNode* first_legal_leaf(SearchNode& n) {
  if (n.children.empty()) return n.rule == rule::legal ? &n : nullptr;
  for (auto& c : n.children) {
    if (auto p = first_legal_leaf(c)) return p;
  }
  return nullptr;
}

}  // namespace

TEST(Pnp, SIsPnpFree) {
  auto d = fixtures::s_chain();
  const auto& R = d.base();
  auto v = pnp_search(d);
  EXPECT_EQ(v.kind, PnpKind::NoPNP);
  EXPECT_LE(v.deepest_stage, 4 * d.size());
  ASSERT_EQ(v.roots.size(), 2u);
  auto deaths = branch_deaths(v);
  std::set<Turn> roots;
  for (const auto& [root, ds] : deaths) {
    roots.insert(root);
    EXPECT_FALSE(ds.empty());
  }
  EXPECT_EQ(TurnSet(roots.begin(), roots.end()), fixtures::turns(R, "ab;BC"));
  // the {B,C} branch stays illegal through a whole period before dying
  for (const auto& [root, ds] : deaths) {
    if (root == Turn(R.parse_direction("B"), R.parse_direction("C"))) {
      ASSERT_EQ(ds.size(), 1u);
      EXPECT_EQ(ds[0].first, 4u);
      EXPECT_EQ(ds[0].second, Turn(R.parse_direction("A"), R.parse_direction("B")));
    }
  }
  EXPECT_TRUE(verify_certificate(d, v).ok);
}

TEST(Pnp, TamperedCertificateRejected) {
  auto d = fixtures::s_chain();
  auto v = pnp_search(d);
  ASSERT_TRUE(verify_certificate(d, v).ok);

  auto dropped = v;
  dropped.roots.pop_back();
  EXPECT_FALSE(verify_certificate(d, dropped).ok);

  auto flipped = v;
  auto* leaf = first_legal_leaf(flipped.roots[0]);
  ASSERT_NE(leaf, nullptr);
  leaf->residual = Turn(d.base().parse_direction("a"), d.base().parse_direction("b"));
  EXPECT_FALSE(verify_certificate(d, flipped).ok);

  auto pruned = v;
  for (auto& r : pruned.roots) {
    std::function<bool(SearchNode&)> cut = [&](SearchNode& n) {
      if (n.rule == rule::extend && n.children.size() > 1) {
        n.children.pop_back();
        return true;
      }
      for (auto& c : n.children) {
        if (cut(c)) return true;
      }
      return false;
    };
    if (cut(r)) break;
  }
  EXPECT_FALSE(verify_certificate(d, pruned).ok);

  auto relabelled = v;
  relabelled.kind = PnpKind::Inconclusive;
  EXPECT_FALSE(verify_certificate(d, relabelled).ok);
}

TEST(Pnp, GLegalPolicyDeaths) {
  auto d = fixtures::g_chain();
  const auto& R = d.base();
  PnpOptions o;
  o.extension = ExtensionPolicy::LegalTurns;
  auto v = pnp_search(d, o);
  EXPECT_EQ(v.kind, PnpKind::NoPNP);
  auto deaths = death_turns(v);
  EXPECT_TRUE(deaths.count(Turn(R.parse_direction("c"), R.parse_direction("C"))));
  EXPECT_TRUE(deaths.count(Turn(R.parse_direction("a"), R.parse_direction("A"))));
  EXPECT_TRUE(verify_certificate(d, v).ok);

  auto taken = pnp_search(d);
  EXPECT_EQ(taken.kind, PnpKind::NoPNP);
  EXPECT_LE(taken.nodes, v.nodes);
  EXPECT_TRUE(verify_certificate(d, taken).ok);
}

TEST(Pnp, RotationsArePnpFree) {
  auto d = fixtures::s_chain();
  for (std::size_t k = 0; k < d.size(); ++k) {
    auto v = pnp_search(d.rotate(k));
    EXPECT_EQ(v.kind, PnpKind::NoPNP) << k;
    EXPECT_TRUE(verify_certificate(d.rotate(k), v).ok) << k;
  }
}

TEST(Pnp, CandidateOnGeometricMap) {
  auto g = parse_map("a->ab; b->bab");
  auto fr = factor_pff(g);
  ASSERT_TRUE(fr.decomposition.has_value());
  auto v = pnp_search(*fr.decomposition);
  ASSERT_EQ(v.kind, PnpKind::CandidateFound);
  EXPECT_TRUE(v.candidate_verified);
  EdgePath rho = reverse_path(v.leg1);
  rho.insert(rho.end(), v.leg2.begin(), v.leg2.end());
  EXPECT_TRUE(inp_shape_check(g, tighten(rho)));
  EXPECT_FALSE(verify_certificate(*fr.decomposition, v).ok);
  // the oracle sees the same path
  auto hits = fixtures::brute_force_nielsen_paths(g, 4, 4);
  EXPECT_NE(std::find(hits.begin(), hits.end(), tighten(rho)), hits.end());
}

namespace {

// Counts dangerous pairs among legal legs of length <= 2, checking each
// against a direct reading of the definition.
int count_dangerous(const GraphMap& g) {
  const auto& R = g.domain;
  auto gs = gates_and_illegal_turns(g);
  std::vector<EdgePath> legs;
  for (auto x : R.directions()) {
    legs.push_back({x});
    for (auto y : R.directions()) {
      if (y != x.reverse() && !gs.is_illegal(Turn(x.reverse(), y))) legs.push_back({x, y});
    }
  }
  int dangerous = 0;
  for (const auto& a : legs) {
    for (const auto& b : legs) {
      if (R.initial(a.front()) != R.initial(b.front())) continue;
      auto ia = g.image_tight(a), ib = g.image_tight(b);
      std::size_t k = 0;
      while (k < ia.size() && k < ib.size() && ia[k] == ib[k]) ++k;
      bool expect = k < ia.size() && k < ib.size() && gs.is_illegal(Turn(ia[k], ib[k]));
      EXPECT_EQ(is_dangerous(g, a, b), expect) << R.path_string(a) << " " << R.path_string(b);
      dangerous += expect;
    }
  }
  return dangerous;
}

}  // namespace

TEST(Pnp, Dangerous) {
  auto S = parse_map(fixtures::kSMap);
  const auto& R = S.domain;
  // Ab crosses the illegal turn {a,b}
  EXPECT_THROW(is_dangerous(S, R.parse_path("Ab"), R.parse_path("c")), Error);
  EXPECT_THROW(is_dangerous(S, {}, R.parse_path("c")), Error);
  // one image is an initial subpath of the other
  EXPECT_FALSE(is_dangerous(S, R.parse_path("b"), R.parse_path("a")));
  // images split immediately at a legal turn
  EXPECT_FALSE(is_dangerous(S, R.parse_path("c"), R.parse_path("a")));
  count_dangerous(S);
  // the geometric map has a Nielsen path, hence dangerous long turns
  EXPECT_GT(count_dangerous(parse_map("a->ab; b->bab")), 0);
}

TEST(Pnp, ShapeCheckRejects) {
  auto S = parse_map(fixtures::kSMap);
  const auto& R = S.domain;
  EXPECT_FALSE(inp_shape_check(S, R.parse_path("a")));
  EXPECT_FALSE(inp_shape_check(S, R.parse_path("aA")));
  EXPECT_FALSE(inp_shape_check(S, R.parse_path("Ab")));
}

// NoPNP verdicts against an exhaustive search over short tight paths.
TEST(Pnp, NoPnpAgreesWithBruteForce) {
  auto chains = fixtures::small_certifiable_chains(77, 40);
  int checked = 0;
  for (const auto& d : chains) {
    auto v = pnp_search(d);
    if (v.kind == PnpKind::NoPNP) {
      auto g = d.compose();
      auto R = gates_and_illegal_turns(g).rotationless_power;
      auto hits = fixtures::brute_force_nielsen_paths(g, 6, 2 * R);
      EXPECT_TRUE(hits.empty()) << chain_string(d) << " " << g.domain.path_string(hits.front());
      EXPECT_TRUE(verify_certificate(d, v).ok);
      ++checked;
    }
  }
  EXPECT_GE(checked, 5);
  // S itself
  auto S = parse_map(fixtures::kSMap);
  EXPECT_TRUE(fixtures::brute_force_nielsen_paths(S, 6, 2 * gates_and_illegal_turns(S).rotationless_power).empty());
}
