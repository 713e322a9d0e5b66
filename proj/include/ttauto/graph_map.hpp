#pragma once

// Graph maps: vertex map plus an edge-path image for every positive edge.

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "graph.hpp"

namespace ttauto {

// Indexed by Direction::code().
using DirectionMap = std::vector<Direction>;

struct GraphMap {
  Graph domain;
  Graph codomain;
  std::vector<VertexId> vertex_map;
  std::vector<EdgePath> edge_map;  // one image per positive edge

  bool is_self_map() const { return domain == codomain; }

  EdgePath image(Direction d) const {
    const EdgePath& p = edge_map.at(d.edge());
    return d.reversed() ? reverse_path(p) : p;
  }

  // Raw concatenation, no tightening.
  EdgePath image(const EdgePath& path) const {
    EdgePath out;
    for (auto d : path) {
      auto im = image(d);
      out.insert(out.end(), im.begin(), im.end());
    }
    return out;
  }

  EdgePath image_tight(const EdgePath& path) const { return tighten(image(path)); }

  std::size_t total_length() const {
    std::size_t n = 0;
    for (const auto& p : edge_map) n += p.size();
    return n;
  }

  void validate() const {
    if (edge_map.size() != domain.edge_count()) throw Error("map: wrong number of edge images");
    if (vertex_map.size() != domain.vertex_count()) throw Error("map: wrong vertex map size");
    for (EdgeId e = 0; e < edge_map.size(); ++e) {
      const auto& p = edge_map[e];
      if (p.empty()) throw Error("map: empty image for edge " + domain.names()[e]);
      if (!codomain.is_path(p)) throw Error("map: image of " + domain.names()[e] + " is not a path");
      Direction d(e, false);
      if (codomain.initial(p.front()) != vertex_map.at(domain.initial(d)) ||
          codomain.terminal(p.back()) != vertex_map.at(domain.terminal(d))) {
        throw Error("map: image of " + domain.names()[e] + " does not match the vertex map");
      }
    }
  }

  static GraphMap identity(const Graph& g) {
    GraphMap m{g, g, {}, {}};
    for (VertexId v = 0; v < g.vertex_count(); ++v) m.vertex_map.push_back(v);
    for (EdgeId e = 0; e < g.edge_count(); ++e) m.edge_map.push_back({Direction(e, false)});
    return m;
  }

  // Vertex map read off the edge images.
  static GraphMap from_images(const Graph& domain, const Graph& codomain, std::vector<EdgePath> images) {
    GraphMap m{domain, codomain, std::vector<VertexId>(domain.vertex_count(), 0), std::move(images)};
    std::vector<bool> seen(domain.vertex_count(), false);
    if (m.edge_map.size() != domain.edge_count()) throw Error("map: wrong number of edge images");
    for (EdgeId e = 0; e < domain.edge_count(); ++e) {
      const auto& p = m.edge_map[e];
      if (p.empty()) throw Error("map: empty image for edge " + domain.names()[e]);
      for (auto [v, w] : {std::pair{domain.initial(Direction(e, false)), codomain.initial(p.front())},
                          std::pair{domain.terminal(Direction(e, false)), codomain.terminal(p.back())}}) {
        if (seen[v] && m.vertex_map[v] != w) throw Error("map: edge images disagree on a vertex image");
        seen[v] = true;
        m.vertex_map[v] = w;
      }
    }
    m.validate();
    return m;
  }

  friend bool operator==(const GraphMap& a, const GraphMap& b) {
    return a.domain == b.domain && a.codomain == b.codomain && a.vertex_map == b.vertex_map && a.edge_map == b.edge_map;
  }
};

// f o g, edge images concatenated without tightening.
inline GraphMap compose(const GraphMap& f, const GraphMap& g) {
  if (!(g.codomain == f.domain)) throw Error("compose: codomain of the inner map differs from domain of the outer map");
  GraphMap out{g.domain, f.codomain, {}, {}};
  for (auto v : g.vertex_map) out.vertex_map.push_back(f.vertex_map.at(v));
  for (const auto& p : g.edge_map) out.edge_map.push_back(f.image(p));
  return out;
}

inline GraphMap tightened(const GraphMap& g) {
  GraphMap out = g;
  for (auto& p : out.edge_map) {
    p = tighten(p);
    if (p.empty()) throw Error("tightened: an edge image tightens to a trivial path");
  }
  return out;
}

inline bool has_tight_images(const GraphMap& g) {
  for (const auto& p : g.edge_map) {
    if (!is_tight(p)) return false;
  }
  return true;
}

inline GraphMap power(const GraphMap& g, unsigned k) {
  GraphMap out = GraphMap::identity(g.domain);
  for (unsigned i = 0; i < k; ++i) out = compose(g, out);
  return out;
}

inline DirectionMap direction_map(const GraphMap& g) {
  DirectionMap out(g.domain.direction_count());
  for (auto d : g.domain.directions()) out[d.code()] = g.image(d).front();
  return out;
}

inline DirectionMap identity_direction_map(std::size_t direction_count) {
  DirectionMap out(direction_count);
  for (std::uint32_t c = 0; c < direction_count; ++c) out[c] = Direction::from_code(c);
  return out;
}

// (outer o inner)
inline DirectionMap compose(const DirectionMap& outer, const DirectionMap& inner) {
  DirectionMap out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer.at(inner[i].code());
  return out;
}

inline Turn map_turn(const DirectionMap& D, const Turn& t) { return Turn(D.at(t.first.code()), D.at(t.second.code())); }

inline TurnSet map_turns(const DirectionMap& D, const TurnSet& turns) {
  TurnSet out;
  for (const auto& t : turns) out.insert(map_turn(D, t));
  return out;
}

// ---- DSL ----------------------------------------------------------------

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::pair<std::string, std::string>> parse_assignments(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string normalized(text);
  for (auto& c : normalized) {
    if (c == '\n' || c == ',') c = ';';
  }
  for (const auto& raw : split(normalized, ';')) {
    auto item = trim(raw);
    if (item.empty()) continue;
    auto arrow = item.find("->");
    std::size_t skip = 2;
    if (arrow == std::string::npos) {
      arrow = item.find("\xE2\x86\xA6");  // U+21A6
      skip = 3;
    }
    if (arrow == std::string::npos) throw Error("expected 'edge -> path' in '" + item + "'");
    out.emplace_back(trim(item.substr(0, arrow)), trim(item.substr(arrow + skip)));
  }
  return out;
}

// Rose carrier on the lowercase letters of the left-hand sides.
inline Graph rose_for_assignments(const std::vector<std::pair<std::string, std::string>>& items) {
  std::vector<std::string> names;
  for (const auto& [lhs, rhs] : items) {
    std::string n = lhs;
    for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    names.push_back(n);
  }
  std::sort(names.begin(), names.end());
  return Graph::rose(names);
}

// "a -> cbca; b -> cbc; c -> ac". Left sides may be reversed edges.
inline GraphMap parse_map(const Graph& carrier, std::string_view text) {
  auto items = parse_assignments(text);
  std::vector<std::optional<EdgePath>> images(carrier.edge_count());
  for (const auto& [lhs, rhs] : items) {
    Direction d = carrier.parse_direction(lhs);
    EdgePath p = carrier.parse_path(rhs);
    if (p.empty()) throw Error("empty image for " + lhs);
    if (d.reversed()) p = reverse_path(p);
    if (images[d.edge()]) throw Error("edge " + carrier.names()[d.edge()] + " assigned twice");
    images[d.edge()] = p;
  }
  std::vector<EdgePath> out;
  for (EdgeId e = 0; e < carrier.edge_count(); ++e) {
    if (!images[e]) throw Error("no image given for edge " + carrier.names()[e]);
    out.push_back(*images[e]);
  }
  return GraphMap::from_images(carrier, carrier, std::move(out));
}

inline GraphMap parse_map(std::string_view text) { return parse_map(rose_for_assignments(parse_assignments(text)), text); }

inline std::string map_string(const GraphMap& g) {
  std::string out;
  for (EdgeId e = 0; e < g.domain.edge_count(); ++e) {
    if (e) out += ";";
    out += g.domain.names()[e] + "->" + g.codomain.path_string(g.edge_map[e]);
  }
  return out;
}

}  // namespace ttauto
