#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ttauto/io.hpp"

using namespace ttauto;

TEST(Io, GraphAndMap) {
  Graph T(2, {{0, 1}, {0, 1}, {0, 1}}, {"x", "y", "z"});
  EXPECT_EQ(graph_from_json(to_json(T)), T);
  auto S = parse_map(fixtures::kSMap);
  auto j = to_json(S);
  EXPECT_EQ(map_from_json(j), S);
  EXPECT_EQ(map_from_json(json::parse(j.dump())), S);
  auto ts = fixtures::turns(S.domain, "ab;BC;cC");
  EXPECT_EQ(turns_from_json(S.domain, turns_json(S.domain, ts)), ts);
}

TEST(Io, Chain) {
  auto d = fixtures::g_chain();
  auto back = chain_from_json(json::parse(to_json(d).dump()));
  EXPECT_EQ(chain_string(back), chain_string(d));
  EXPECT_EQ(back.compose(), d.compose());
  auto p = fixtures::sigma_b();
  Graph R = Graph::rose(3);
  EXPECT_EQ(permutation_from_json(R, permutation_json(R, p)).image, p.image);
}

TEST(Io, PnpCertificate) {
  auto d = fixtures::s_chain();
  auto v = pnp_search(d);
  auto j = to_json(d.base(), v);
  EXPECT_EQ(j["kind"], "NoPNP");
  auto back = pnp_from_json(d.base(), json::parse(j.dump()));
  EXPECT_TRUE(verify_certificate(d, back).ok);
  EXPECT_EQ(to_json(d.base(), back).dump(), j.dump());
  // tampering survives serialization and is caught
  auto t = j;
  t["tree"][0]["children"] = json::array();
  EXPECT_FALSE(verify_certificate(d, pnp_from_json(d.base(), t)).ok);
}

TEST(Io, LttAndDot) {
  auto G = ltt_of_map_unchecked(parse_map(fixtures::kSMap));
  EXPECT_EQ(ltt_from_json(json::parse(to_json(G).dump())), G);
  auto dot = to_dot(G);
  EXPECT_EQ(dot.rfind("graph", 0), 0u);
  EXPECT_NE(dot.find("red"), std::string::npos);
  EXPECT_NE(dot.find("purple"), std::string::npos);
  EXPECT_EQ(dot, to_dot(G));
}

TEST(Io, AutomatonRoundTrip) {
  auto d = fixtures::s_chain();
  IdealWhiteheadGraphSpec spec{ltt_of_map_unchecked(d.compose()).ideal_whitehead(), 3, AutomatonVariant::FullySingular};
  EXPECT_TRUE(isomorphic(spec_from_json(to_json(spec)).graph, spec.graph));
  auto A = build(spec, chain_seeds(d));
  auto j = to_json(A);
  auto B = automaton_from_json(json::parse(j.dump()));
  EXPECT_EQ(B.vertices.size(), A.vertices.size());
  EXPECT_EQ(B.edges.size(), A.edges.size());
  EXPECT_EQ(B.scc_count, A.scc_count);
  EXPECT_EQ(to_json(B).dump(), j.dump());
  auto lp = decomposition_to_loop(A, d);
  auto l = loop_from_json(to_json(lp.loop));
  EXPECT_EQ(l.edges, lp.loop.edges);
  EXPECT_EQ(loop_to_map(B, l), loop_to_map(A, lp.loop));
  auto dot = to_dot(A);
  EXPECT_NE(dot.find("cluster"), std::string::npos);
  // deterministic output across runs
  EXPECT_EQ(to_json(build(spec, chain_seeds(d))).dump(), j.dump());
  EXPECT_EQ(to_json(certify_loop(A, lp.loop))["verdict"], "Certified");
}
