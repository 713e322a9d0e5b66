#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace ttauto;

namespace {

LttStructure s_structure() { return ltt_of_map(parse_map(fixtures::kSMap), pnp_search(fixtures::s_chain())); }

// Closed walk alternating black and colored edges, turning around at no
// vertex, that crosses every edge. Searched over (traversal, covered set).
bool closed_covering_walk(const LttStructure& G) {
  struct T {
    Direction from, to;
    bool black;
    std::size_t id;
  };
  std::vector<T> ts;
  std::size_t id = 0;
  for (EdgeId e = 0; e < G.carrier.edge_count(); ++e, ++id) {
    ts.push_back({Direction(e, false), Direction(e, true), true, id});
    ts.push_back({Direction(e, true), Direction(e, false), true, id});
  }
  for (const auto& t : G.colored) {
    ts.push_back({t.first, t.second, false, id});
    ts.push_back({t.second, t.first, false, id});
    ++id;
  }
  const std::size_t full = (std::size_t{1} << id) - 1;
  for (std::size_t s = 0; s < ts.size(); ++s) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{s, std::size_t{1} << ts[s].id}};
    while (!stack.empty()) {
      auto [i, mask] = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < ts.size(); ++j) {
        if (ts[j].black == ts[i].black || ts[j].from != ts[i].to) continue;
        auto m = mask | (std::size_t{1} << ts[j].id);
        if (j == s && m == full) return true;
        if (seen.insert({j, m}).second) stack.push_back({j, m});
      }
    }
  }
  return false;
}

LttStructure structure_on(const Graph& C, const TurnSet& colored, const std::vector<Direction>& reds = {}) {
  LttStructure G;
  G.carrier = C;
  G.red.assign(C.direction_count(), false);
  for (auto d : reds) G.red[d.code()] = true;
  G.colored = colored;
  return G;
}

}  // namespace

TEST(Ltt, SStructure) {
  auto G = s_structure();
  const auto& C = G.carrier;
  std::string reds;
  for (auto d : G.red_vertices()) reds += C.name(d);
  EXPECT_EQ(reds, "bB");
  EXPECT_EQ(G.red_edges(), fixtures::turns(C, "bC;Bc"));
  EXPECT_EQ(G.purple_edges(), fixtures::turns(C, "aA;aC;Ac;cC"));
  EXPECT_EQ(G.index, HalfInteger::from_int(-1));
  EXPECT_TRUE(validate(G).empty());
  auto lone = validate_lone_axis(G);
  EXPECT_TRUE(has_axiom(lone, "ltt-vii"));
  EXPECT_TRUE(has_axiom(lone, "ltt-viii"));
  EXPECT_FALSE(has_axiom(lone, "ltt-ix"));
  EXPECT_THROW(ltt_of_map(parse_map("a->ab; b->bab"), pnp_search(*factor_pff(parse_map("a->ab; b->bab")).decomposition)), Error);
}

TEST(Ltt, Violations) {
  auto G = s_structure();
  const auto& C = G.carrier;

  auto purple = G;
  purple.red.assign(C.direction_count(), false);
  EXPECT_TRUE(has_axiom(validate(purple), "ltt-ii"));

  auto bare = G;
  for (auto it = bare.colored.begin(); it != bare.colored.end();) {
    it = it->contains(C.parse_direction("a")) ? bare.colored.erase(it) : std::next(it);
  }
  EXPECT_TRUE(has_axiom(validate(bare), "ltt-v"));
  EXPECT_TRUE(has_axiom(validate(bare), "ltt-vi"));

  auto doubled = G;
  doubled.colored.insert(Turn(C.parse_direction("B"), C.parse_direction("a")));
  EXPECT_TRUE(validate(doubled).empty());
  doubled.colored.insert(Turn(C.parse_direction("b"), C.parse_direction("A")));
  EXPECT_TRUE(has_axiom(validate(doubled), "ltt-iii"));

  auto loop = G;
  loop.colored.insert(Turn(C.parse_direction("a"), C.parse_direction("a")));
  EXPECT_TRUE(has_axiom(validate(loop), "ltt-v"));

  auto short_coloring = G;
  short_coloring.red.pop_back();
  EXPECT_TRUE(has_axiom(validate(short_coloring), "ltt-i"));
}

TEST(Ltt, BirecurrenceMatchesClosedWalkOracle) {
  EXPECT_TRUE(is_birecurrent(s_structure()));
  EXPECT_TRUE(closed_covering_walk(s_structure()));

  // every colored subgraph on rose_2
  Graph R2 = Graph::rose(2);
  std::vector<Turn> all;
  for (std::uint32_t a = 0; a < 4; ++a) {
    for (std::uint32_t b = a + 1; b < 4; ++b) all.emplace_back(Direction::from_code(a), Direction::from_code(b));
  }
  int yes = 0, no = 0;
  for (std::uint32_t mask = 0; mask < (1u << all.size()); ++mask) {
    TurnSet colored;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (mask >> i & 1) colored.insert(all[i]);
    }
    auto G = structure_on(R2, colored);
    bool b = is_birecurrent(G);
    EXPECT_EQ(b, closed_covering_walk(G)) << turns_string(R2, colored);
    (b ? yes : no)++;
  }
  EXPECT_GT(yes, 0);
  EXPECT_GT(no, 0);

  // a pendant colored vertex blocks the walk: A touches only {A,b}
  auto pendant = structure_on(R2, fixtures::turns(R2, "ab;aB;Ab"));
  EXPECT_FALSE(is_birecurrent(pendant));
  // a single loop through everything
  auto cycle = structure_on(R2, fixtures::turns(R2, "aB;Ab"));
  EXPECT_TRUE(is_birecurrent(cycle));

  // sparse colorings on rose_3
  Graph R3 = Graph::rose(3);
  std::vector<Turn> all3;
  for (std::uint32_t a = 0; a < 6; ++a) {
    for (std::uint32_t b = a + 1; b < 6; ++b) all3.emplace_back(Direction::from_code(a), Direction::from_code(b));
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 150; ++i) {
    TurnSet colored;
    std::size_t k = 3 + rng() % 4;
    while (colored.size() < k) colored.insert(all3[rng() % all3.size()]);
    auto G = structure_on(R3, colored);
    EXPECT_EQ(is_birecurrent(G), closed_covering_walk(G)) << turns_string(R3, colored);
  }
}

TEST(Ltt, WitnessLoop) {
  auto G = s_structure();
  auto w = witness_loop(G);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(is_smooth_loop(G, *w));
  auto sd = smooth_digraph(G);
  std::set<std::size_t> covered;
  for (std::size_t i = 0; i < w->steps.size(); ++i) {
    const auto& s = w->steps[i];
    const auto& next = w->steps[(i + 1) % w->steps.size()];
    EXPECT_NE(s.black, next.black);
    EXPECT_EQ(s.to, next.from);
    covered.insert(s.edge);
  }
  EXPECT_EQ(covered.size(), sd.edge_count);
  EXPECT_EQ(w->black_projection.size() * 2, w->steps.size());
  EXPECT_TRUE(is_tight(w->black_projection));

  Graph R2 = Graph::rose(2);
  EXPECT_FALSE(witness_loop(structure_on(R2, fixtures::turns(R2, "ab;aB;Ab"))).has_value());
}

TEST(Ltt, CoherenceS) {
  auto d = fixtures::s_chain();
  auto G = ltt_of_map_unchecked(d.compose());
  const auto n = d.size();
  for (std::size_t k = 1; k <= n; ++k) {
    G = step_action(d.steps()[k - 1], G);
    EXPECT_EQ(G, ltt_of_map_unchecked(d.rotate(k % n).compose())) << k;
  }
  EXPECT_EQ(G, ltt_of_map_unchecked(d.compose()));
}

TEST(Ltt, CoherenceGAndPathologies) {
  auto d = fixtures::g_chain();
  auto G = ltt_of_map_unchecked(d.compose());
  const auto n = d.size();
  std::set<std::size_t> red_edge_counts;
  bool red_edge_between_reds = false, red_vertex_in_two = false;
  for (std::size_t k = 1; k <= n; ++k) {
    G = step_action(d.steps()[k - 1], G);
    ASSERT_EQ(G, ltt_of_map_unchecked(d.rotate(k % n).compose())) << k;
    EXPECT_TRUE(validate(G).empty()) << k;
    EXPECT_EQ(G.red_vertex_count(), 2u);
    auto re = G.red_edges();
    red_edge_counts.insert(re.size());
    for (const auto& t : re) red_edge_between_reds = red_edge_between_reds || (G.is_red(t.first) && G.is_red(t.second));
    for (auto v : G.red_vertices()) {
      std::size_t c = 0;
      for (const auto& t : re) c += t.contains(v);
      red_vertex_in_two = red_vertex_in_two || c >= 2;
    }
  }
  EXPECT_GT(red_edge_counts.size(), 1u);
  EXPECT_TRUE(red_edge_between_reds);
  EXPECT_TRUE(red_vertex_in_two);
}

TEST(Ltt, SymmetryAndCanonicalForm) {
  auto G = s_structure();
  auto s = fixtures::sigma_b();
  EXPECT_EQ(symmetry_action(s, symmetry_action(s, G)), G);
  auto cf = canonical_form(G);
  EXPECT_EQ(symmetry_action(cf.relabel, G), cf.form);
  EXPECT_EQ(cf.automorphisms.size(), 2u);
  for (const auto& a : cf.automorphisms) EXPECT_EQ(symmetry_action(a, cf.form), cf.form);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 40; ++i) {
    std::vector<EdgeId> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    EdgePermutation p;
    for (EdgeId e = 0; e < 3; ++e) p.image.push_back(Direction(perm[e], rng() % 2));
    auto H = symmetry_action(p, G);
    auto ch = canonical_form(H);
    EXPECT_EQ(ch.key, cf.key);
    EXPECT_EQ(ch.form, cf.form);
  }
  // different structures get different keys
  auto other = ltt_of_map_unchecked(fixtures::g_chain().compose());
  EXPECT_NE(canonical_form(other).key, cf.key);
}

TEST(Ltt, FriendlyCheck) {
  auto d = fixtures::s_chain();
  auto G = ltt_of_map_unchecked(d.compose());
  for (const auto& st : d.steps()) {
    if (auto f = std::get_if<ProperFullFold>(&st)) {
      auto fc = tt_friendly_pff_check(G, f->folded, f->target);
      EXPECT_TRUE(fc.ok) << fc.reason;
    }
    G = step_action(st, G);
  }
  G = s_structure();
  const auto& C = G.carrier;
  auto dir = [&](const char* s) { return C.parse_direction(s); };
  EXPECT_EQ(tt_friendly_pff_check(G, dir("a"), dir("a")).reason.substr(0, 10), "tt-pff-iv:");
  EXPECT_EQ(tt_friendly_pff_check(G, dir("a"), dir("c")).reason.substr(0, 10), "tt-pff-ii:");
  EXPECT_EQ(tt_friendly_pff_check(G, dir("b"), dir("C")).reason.substr(0, 11), "tt-pff-iii:");
  auto split = G;
  split.colored.erase(Turn(dir("b"), dir("C")));
  EXPECT_EQ(tt_friendly_pff_check(split, dir("b"), dir("c")).reason.substr(0, 9), "tt-pff-i:");
}
