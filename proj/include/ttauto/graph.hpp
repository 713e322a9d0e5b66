#pragma once

// Finite oriented graphs, directions, turns and edge paths.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ttauto {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

// An oriented edge germ. code = 2*edge + (reversed ? 1 : 0).
class Direction {
 public:
  constexpr Direction() = default;
  constexpr Direction(EdgeId edge, bool reversed) : code_(2 * edge + (reversed ? 1u : 0u)) {}
  static constexpr Direction from_code(std::uint32_t code) {
    Direction d;
    d.code_ = code;
    return d;
  }

  constexpr EdgeId edge() const { return code_ >> 1; }
  constexpr bool reversed() const { return (code_ & 1u) != 0; }
  constexpr Direction reverse() const { return from_code(code_ ^ 1u); }
  constexpr std::uint32_t code() const { return code_; }

  friend constexpr auto operator<=>(Direction, Direction) = default;

 private:
  std::uint32_t code_ = 0;
};

// Unordered pair of directions, stored with first <= second.
struct Turn {
  Direction first;
  Direction second;

  constexpr Turn() = default;
  constexpr Turn(Direction a, Direction b) : first(std::min(a, b)), second(std::max(a, b)) {}

  constexpr bool degenerate() const { return first == second; }
  constexpr bool contains(Direction d) const { return first == d || second == d; }
  constexpr Direction other(Direction d) const { return first == d ? second : first; }

  friend constexpr auto operator<=>(const Turn&, const Turn&) = default;
};

using TurnSet = std::set<Turn>;
using EdgePath = std::vector<Direction>;

struct EdgeEnds {
  VertexId from = 0;
  VertexId to = 0;
  friend bool operator==(const EdgeEnds&, const EdgeEnds&) = default;
};

class Graph {
 public:
  Graph() = default;
  Graph(std::size_t vertex_count, std::vector<EdgeEnds> edges, std::vector<std::string> names = {})
      : vertex_count_(vertex_count), edges_(std::move(edges)), names_(std::move(names)) {
    if (names_.empty()) {
      for (std::size_t i = 0; i < edges_.size(); ++i) names_.push_back(default_name(i));
    }
    if (names_.size() != edges_.size()) throw Error("graph: name table size does not match edge count");
    for (const auto& e : edges_) {
      if (e.from >= vertex_count_ || e.to >= vertex_count_) throw Error("graph: edge endpoint out of range");
    }
    for (const auto& n : names_) {
      if (n.empty()) throw Error("graph: empty edge name");
      for (char c : n) {
        if (!std::islower(static_cast<unsigned char>(c)) && !std::isdigit(static_cast<unsigned char>(c)) && c != '_') {
          throw Error("graph: edge names must be lowercase identifiers: " + n);
        }
      }
    }
    std::vector<std::string> sorted = names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error("graph: duplicate edge names");
  }

  // Single vertex with one loop per name.
  static Graph rose(const std::vector<std::string>& names) {
    return Graph(1, std::vector<EdgeEnds>(names.size(), EdgeEnds{0, 0}), names);
  }
  static Graph rose(std::size_t rank) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < rank; ++i) names.push_back(default_name(i));
    return rose(names);
  }

  static std::string default_name(std::size_t i) {
    if (i < 26) return std::string(1, static_cast<char>('a' + i));
    return "e" + std::to_string(i);
  }

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t direction_count() const { return 2 * edges_.size(); }
  const std::vector<EdgeEnds>& edges() const { return edges_; }
  const EdgeEnds& ends(EdgeId e) const { return edges_.at(e); }
  const std::vector<std::string>& names() const { return names_; }

  VertexId initial(Direction d) const {
    const auto& e = edges_.at(d.edge());
    return d.reversed() ? e.to : e.from;
  }
  VertexId terminal(Direction d) const { return initial(d.reverse()); }

  std::vector<Direction> directions() const {
    std::vector<Direction> out;
    for (std::uint32_t c = 0; c < direction_count(); ++c) out.push_back(Direction::from_code(c));
    return out;
  }

  std::vector<Direction> directions_at(VertexId v) const {
    if (v >= vertex_count_) throw Error("directions_at: unknown vertex " + std::to_string(v));
    std::vector<Direction> out;
    for (std::uint32_t c = 0; c < direction_count(); ++c) {
      auto d = Direction::from_code(c);
      if (initial(d) == v) out.push_back(d);
    }
    return out;
  }

  std::size_t valence(VertexId v) const { return directions_at(v).size(); }

  int euler_characteristic() const { return static_cast<int>(vertex_count_) - static_cast<int>(edges_.size()); }
  int betti() const { return 1 - euler_characteristic(); }

  bool is_connected() const {
    if (vertex_count_ == 0) return true;
    std::vector<VertexId> parent(vertex_count_);
    for (VertexId v = 0; v < vertex_count_; ++v) parent[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (const auto& e : edges_) parent[find(e.from)] = find(e.to);
    for (VertexId v = 0; v < vertex_count_; ++v) {
      if (find(v) != find(0)) return false;
    }
    return true;
  }

  // Carrier requirements: connected, every vertex of valence >= 3.
  std::vector<std::string> carrier_violations() const {
    std::vector<std::string> out;
    if (vertex_count_ == 0) out.push_back("graph has no vertices");
    if (!is_connected()) out.push_back("graph is not connected");
    for (VertexId v = 0; v < vertex_count_; ++v) {
      if (valence(v) < 3) out.push_back("vertex " + std::to_string(v) + " has valence " + std::to_string(valence(v)));
    }
    return out;
  }

  bool is_rose() const { return vertex_count_ == 1; }

  // Reversed directions print as the uppercased edge name.
  std::string name(Direction d) const {
    std::string n = names_.at(d.edge());
    if (d.reversed()) {
      for (auto& c : n) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return n;
  }

  Direction parse_direction(std::string_view token) const {
    std::string t(token);
    bool bar = false;
    // Trailing combining overline (U+0305) or macron (U+0304) marks a reversal.
    for (std::string_view mark : {std::string_view("\xCC\x85"), std::string_view("\xCC\x84")}) {
      if (t.size() > mark.size() && std::string_view(t).substr(t.size() - mark.size()) == mark) {
        t.resize(t.size() - mark.size());
        bar = true;
      }
    }
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      if (names_[e] == t) return Direction(e, bar);
      if (!bar && name(Direction(e, true)) == t && t != names_[e]) return Direction(e, true);
    }
    throw Error("unknown edge label '" + std::string(token) + "'");
  }

  bool single_letter_names() const {
    return std::all_of(names_.begin(), names_.end(), [](const std::string& n) { return n.size() == 1; });
  }

  // Words are letter sequences when every edge name is a single letter,
  // otherwise whitespace- or '.'-separated tokens.
  EdgePath parse_path(std::string_view word) const {
    EdgePath out;
    std::vector<std::string> tokens;
    std::string cur;
    bool separated = !single_letter_names() || word.find_first_of(" .") != std::string_view::npos;
    for (std::size_t i = 0; i < word.size(); ++i) {
      char c = word[i];
      if (c == ' ' || c == '.' || c == '\t') {
        if (!cur.empty()) tokens.push_back(cur), cur.clear();
        continue;
      }
      if (!separated && (static_cast<unsigned char>(c) & 0x80) == 0) {
        if (!cur.empty()) tokens.push_back(cur), cur.clear();
        cur.push_back(c);
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) tokens.push_back(cur);
    for (const auto& t : tokens) out.push_back(parse_direction(t));
    if (!is_path(out)) throw Error("'" + std::string(word) + "' is not a path in the graph");
    return out;
  }

  std::string path_string(const EdgePath& p) const {
    std::string out;
    bool sep = !single_letter_names();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (sep && i > 0) out += ' ';
      out += name(p[i]);
    }
    return out;
  }

  std::string turn_string(const Turn& t) const { return "{" + name(t.first) + "," + name(t.second) + "}"; }

  bool is_path(const EdgePath& p) const {
    for (auto d : p) {
      if (d.edge() >= edges_.size()) return false;
    }
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
      if (terminal(p[i]) != initial(p[i + 1])) return false;
    }
    return true;
  }

  std::string to_string() const {
    if (is_rose()) {
      std::string out = "rose(";
      for (std::size_t i = 0; i < names_.size(); ++i) out += (i ? "," : "") + names_[i];
      return out + ")";
    }
    std::string out = "graph(" + std::to_string(vertex_count_) + ";";
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      out += (i ? "," : "") + names_[i] + ":" + std::to_string(edges_[i].from) + "->" + std::to_string(edges_[i].to);
    }
    return out + ")";
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_ && a.names_ == b.names_;
  }

 private:
  std::size_t vertex_count_ = 0;
  std::vector<EdgeEnds> edges_;
  std::vector<std::string> names_;
};

inline EdgePath reverse_path(const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) out.push_back(it->reverse());
  return out;
}

// Free reduction: cancels every adjacent pair d, reverse(d).
inline EdgePath tighten(const EdgePath& p) {
  EdgePath out;
  out.reserve(p.size());
  for (auto d : p) {
    if (!out.empty() && out.back() == d.reverse()) {
      out.pop_back();
    } else {
      out.push_back(d);
    }
  }
  return out;
}

inline bool is_tight(const EdgePath& p) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (p[i + 1] == p[i].reverse()) return false;
  }
  return true;
}

// The turns {reverse(a_i), a_{i+1}}.
inline TurnSet taken_turns(const EdgePath& p) {
  TurnSet out;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) out.insert(Turn(p[i].reverse(), p[i + 1]));
  return out;
}

inline void add_taken_turns(const EdgePath& p, TurnSet& out) {
  for (std::size_t i = 0; i + 1 < p.size(); ++i) out.insert(Turn(p[i].reverse(), p[i + 1]));
}

inline std::string turns_string(const Graph& g, const TurnSet& turns) {
  std::string out;
  for (const auto& t : turns) out += (out.empty() ? "" : " ") + g.turn_string(t);
  return out;
}

}  // namespace ttauto
