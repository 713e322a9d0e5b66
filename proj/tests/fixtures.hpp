#pragma once

// Worked examples shared by the unit tests and the acceptance runner.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "ttauto/ttauto.hpp"

namespace fixtures {

using namespace ttauto;

inline const char* kSMap = "a->cbca; b->cbc; c->ac";
inline const char* kSChain = "fold a over b; fold c over a; fold b over c; fold B over C";

inline const char* kGBase =
    "fold a over B; fold c over a; fold B over c; fold a over B; fold a over C; fold C over A; fold C over A; "
    "fold B over C; fold b over a; fold b over C; fold C over B; fold C over B; fold a over b; fold A over C";

inline PffDecomposition s_chain() { return parse_chain(kSChain, 3); }

inline EdgePermutation sigma_b() {
  auto s = EdgePermutation::identity(3);
  s.image[1] = Direction(1, true);
  return s;
}

// g_1..g_14 then g_{14+k} = sigma g_k sigma^-1.
inline PffDecomposition g_chain() {
  Graph R = Graph::rose(3);
  auto base = parse_chain(R, kGBase);
  std::vector<Step> steps = base.steps();
  for (const auto& s : base.steps()) steps.push_back(conjugate_step(s, sigma_b()));
  return PffDecomposition(R, steps);
}

inline TurnSet turns(const Graph& g, const std::string& text) {
  TurnSet out;
  for (const auto& item : split(text, ';')) {
    auto t = trim(item);
    if (t.empty()) continue;
    auto p = g.parse_path(t);
    out.insert(Turn(p.at(0), p.at(1)));
  }
  return out;
}

// Table of the 14 base folds: the new turn tau(g_k) and Dg_k(T_{k-1}).
struct GRow {
  const char* fresh;
  const char* image;
};

inline const std::vector<GRow>& g_table() {
  static const std::vector<GRow> rows = {
      {"ab", ""},
      {"Ac", "ab"},
      {"BC", "ab;Ac"},
      {"ab", "Bb;BC;Ac"},
      {"ac", "Bb;BC;Ac;Cb"},
      {"aC", "Bb;ac;BA;Ac;Ab"},
      {"aC", "Bb;Ac;BA;Ab;ac;Aa"},
      {"cB", "Cb;Ac;CA;Ab;ac;Aa;aC"},
      {"Ab", "Aa;Ac;CA;ac;aC"},
      {"bc", "Aa;Ac;CA;ac;aC"},
      {"bC", "Aa;Ac;BA;ac;aB;bc"},
      {"bC", "Aa;Ac;Bb;BA;ac;aB;bc"},
      {"aB", "Ab;Ac;Bb;BA;bc;bC"},
      {"Ac", "Cb;Cc;Bb;BC;bc;aB"},
  };
  return rows;
}

// Random chain of proper full folds on a rose, closed by a random permutation
// half of the time.
inline PffDecomposition random_chain(std::mt19937_64& rng, std::size_t rank, std::size_t folds) {
  Graph R = Graph::rose(rank);
  std::vector<Step> steps;
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(2 * rank - 1));
  while (steps.size() < folds) {
    Direction a = Direction::from_code(pick(rng)), b = Direction::from_code(pick(rng));
    if (a.edge() == b.edge()) continue;
    steps.push_back(ProperFullFold{a, b});
  }
  if (rng() % 2) {
    std::vector<EdgeId> perm(rank);
    for (EdgeId e = 0; e < rank; ++e) perm[e] = e;
    std::shuffle(perm.begin(), perm.end(), rng);
    EdgePermutation p;
    for (EdgeId e = 0; e < rank; ++e) p.image.push_back(Direction(perm[e], rng() % 2));
    if (!p.is_identity()) steps.push_back(p);
  }
  return PffDecomposition(R, steps);
}

// Tight vertex-to-vertex paths of length <= max_len on a rose fixed by some
// g_#^k, 1 <= k <= max_power. Iterates longer than cap are abandoned.
inline std::vector<EdgePath> brute_force_nielsen_paths(const GraphMap& g, std::size_t max_len, unsigned max_power, std::size_t cap = 64) {
  std::vector<EdgePath> hits;
  const auto nd = static_cast<std::uint32_t>(g.domain.direction_count());
  EdgePath p;
  std::function<void()> grow = [&]() {
    if (!p.empty()) {
      EdgePath cur = p;
      for (unsigned k = 1; k <= max_power; ++k) {
        cur = g.image_tight(cur);
        if (cur == p) {
          hits.push_back(p);
          break;
        }
        if (cur.size() > cap || cur.empty()) break;
      }
    }
    if (p.size() == max_len) return;
    for (std::uint32_t c = 0; c < nd; ++c) {
      Direction d = Direction::from_code(c);
      if (!p.empty() && d == p.back().reverse()) continue;
      p.push_back(d);
      grow();
      p.pop_back();
    }
  };
  grow();
  return hits;
}

// Random rose_3 chains whose composite is tt, PF, expanding, with short images.
inline std::vector<PffDecomposition> small_certifiable_chains(std::uint64_t seed, std::size_t count, std::size_t max_image = 6) {
  std::mt19937_64 rng(seed);
  std::vector<PffDecomposition> out;
  for (int tries = 0; out.size() < count && tries < 200000; ++tries) {
    auto d = random_chain(rng, 3, 3 + rng() % 4);
    auto g = d.compose();
    bool short_images = true;
    for (const auto& im : g.edge_map) short_images = short_images && im.size() <= max_image;
    if (!short_images || !is_train_track(g).train_track) continue;
    auto M = transition_matrix(g);
    if (!is_pf(M) || !is_expanding(g)) continue;
    out.push_back(d);
  }
  return out;
}

}  // namespace fixtures
