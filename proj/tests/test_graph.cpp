#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace ttauto;

namespace {

// Rescan until no adjacent backtrack remains.
EdgePath tighten_by_rescan(EdgePath p) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (p[i + 1] == p[i].reverse()) {
        p.erase(p.begin() + static_cast<std::ptrdiff_t>(i), p.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return p;
}

}  // namespace

TEST(Graph, RoseBasics) {
  Graph R = Graph::rose(3);
  EXPECT_EQ(R.vertex_count(), 1u);
  EXPECT_EQ(R.edge_count(), 3u);
  EXPECT_EQ(R.directions_at(0).size(), 6u);
  EXPECT_EQ(R.euler_characteristic(), -2);
  EXPECT_EQ(R.betti(), 3);
  EXPECT_TRUE(R.is_connected());
  EXPECT_EQ(R.to_string(), "rose(a,b,c)");
}

TEST(Graph, ThetaGraph) {
  Graph T(2, {{0, 1}, {0, 1}, {0, 1}});
  EXPECT_EQ(T.betti(), 2);
  EXPECT_EQ(T.directions_at(0).size(), 3u);
  EXPECT_EQ(T.directions_at(1).size(), 3u);
  EXPECT_THROW(T.directions_at(2), Error);
}

TEST(Graph, Names) {
  Graph R = Graph::rose(3);
  EXPECT_EQ(R.name(Direction(1, true)), "B");
  EXPECT_EQ(R.parse_direction("B"), Direction(1, true));
  EXPECT_EQ(R.path_string(R.parse_path("cbcA")), "cbcA");
  EXPECT_THROW(R.parse_direction("z"), Error);
  EXPECT_THROW(Graph(1, {{0, 0}, {0, 0}}, {"a", "a"}), Error);
}

TEST(Graph, OverlineInput) {
  Graph R = Graph::rose(3);
  EXPECT_EQ(R.parse_direction("b\xCC\x84"), Direction(1, true));
}

TEST(Graph, Tighten) {
  Graph R = Graph::rose(3);
  EXPECT_TRUE(tighten(R.parse_path("abBA")).empty());
  EXPECT_EQ(R.path_string(tighten(R.parse_path("abBc"))), "ac");
  EXPECT_TRUE(tighten({}).empty());
}

TEST(Graph, TightenMatchesRescan) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> pick(0, 5);
  for (int i = 0; i < 2000; ++i) {
    EdgePath p(rng() % 14);
    for (auto& d : p) d = Direction::from_code(pick(rng));
    auto t = tighten(p);
    EXPECT_EQ(t, tighten_by_rescan(p));
    EXPECT_TRUE(is_tight(t));
    EXPECT_EQ(tighten(t), t);
  }
}

TEST(Graph, TakenTurns) {
  Graph R = Graph::rose(3);
  auto t = taken_turns(R.parse_path("cbca"));
  EXPECT_EQ(t, fixtures::turns(R, "Cb;Bc;Ca"));
  EXPECT_TRUE(taken_turns(R.parse_path("a")).empty());
}

TEST(Graph, TurnNormalization) {
  Direction a(0, false), B(1, true);
  EXPECT_EQ(Turn(a, B), Turn(B, a));
  EXPECT_TRUE(Turn(a, a).degenerate());
}

TEST(Graph, PathCheck) {
  Graph T(2, {{0, 1}, {0, 1}});
  EXPECT_TRUE(T.is_path(T.parse_path("aB")));
  EXPECT_FALSE(T.is_path({T.parse_direction("a"), T.parse_direction("b")}));
  EXPECT_THROW(T.parse_path("ab"), Error);
}

TEST(HalfIntegerTest, Arithmetic) {
  auto h = HalfInteger::from_twice(-3);
  EXPECT_EQ(h.to_string(), "-3/2");
  EXPECT_FALSE(h.is_integer());
  EXPECT_EQ(HalfInteger::parse("-3/2"), h);
  EXPECT_EQ(HalfInteger::parse("2"), HalfInteger::from_int(2));
  EXPECT_EQ(h + HalfInteger::from_twice(1), HalfInteger::from_int(-1));
  EXPECT_LT(h, HalfInteger::from_int(-1));
}
