#pragma once

// JSON and DOT serialization. Directions are written by name (uppercase for
// reversed edges), so every document reads back against its own carrier.

#include <sstream>
#include <string>

#include "json.hpp"

#include "automaton.hpp"

namespace ttauto {

using json = nlohmann::ordered_json;

// ---- carriers, paths, turns ---------------------------------------------

inline json to_json(const Graph& g) {
  json edges = json::array();
  for (EdgeId e = 0; e < g.edge_count(); ++e) edges.push_back({{"name", g.names()[e]}, {"from", g.ends(e).from}, {"to", g.ends(e).to}});
  return {{"vertices", g.vertex_count()}, {"edges", edges}};
}

inline Graph graph_from_json(const json& j) {
  std::vector<EdgeEnds> edges;
  std::vector<std::string> names;
  for (const auto& e : j.at("edges")) {
    edges.push_back({e.at("from").get<VertexId>(), e.at("to").get<VertexId>()});
    names.push_back(e.at("name").get<std::string>());
  }
  return Graph(j.at("vertices").get<std::size_t>(), edges, names);
}

inline json turn_json(const Graph& g, const Turn& t) { return json::array({g.name(t.first), g.name(t.second)}); }

inline Turn turn_from_json(const Graph& g, const json& j) {
  return Turn(g.parse_direction(j.at(0).get<std::string>()), g.parse_direction(j.at(1).get<std::string>()));
}

inline json turns_json(const Graph& g, const TurnSet& ts) {
  json out = json::array();
  for (const auto& t : ts) out.push_back(turn_json(g, t));
  return out;
}

inline TurnSet turns_from_json(const Graph& g, const json& j) {
  TurnSet out;
  for (const auto& t : j) out.insert(turn_from_json(g, t));
  return out;
}

inline json directions_json(const Graph& g, const std::vector<Direction>& ds) {
  json out = json::array();
  for (auto d : ds) out.push_back(g.name(d));
  return out;
}

// ---- maps and chains ----------------------------------------------------

inline json to_json(const GraphMap& g) {
  json images = json::object();
  for (EdgeId e = 0; e < g.domain.edge_count(); ++e) images[g.domain.names()[e]] = g.codomain.path_string(g.edge_map[e]);
  json out = {{"carrier", to_json(g.domain)}, {"images", images}};
  if (!(g.domain == g.codomain)) out["codomain"] = to_json(g.codomain);
  return out;
}

inline GraphMap map_from_json(const json& j) {
  Graph dom = graph_from_json(j.at("carrier"));
  Graph cod = j.contains("codomain") ? graph_from_json(j.at("codomain")) : dom;
  std::vector<EdgePath> images;
  for (EdgeId e = 0; e < dom.edge_count(); ++e) images.push_back(cod.parse_path(j.at("images").at(dom.names()[e]).get<std::string>()));
  return GraphMap::from_images(dom, cod, std::move(images));
}

inline json permutation_json(const Graph& g, const EdgePermutation& p) {
  json out = {{"images", directions_json(g, p.image)}};
  if (!p.vertices.empty()) out["vertices"] = p.vertices;
  return out;
}

inline EdgePermutation permutation_from_json(const Graph& g, const json& j) {
  EdgePermutation p;
  for (const auto& s : j.at("images")) p.image.push_back(g.parse_direction(s.get<std::string>()));
  if (j.contains("vertices")) p.vertices = j.at("vertices").get<std::vector<VertexId>>();
  p.validate(g.edge_count());
  return p;
}

inline json to_json(const PffDecomposition& d) {
  json steps = json::array();
  for (std::size_t k = 0; k < d.size(); ++k) {
    const auto& s = d.steps()[k];
    if (auto f = std::get_if<ProperFullFold>(&s)) {
      steps.push_back({{"fold", d.carrier(k).name(f->folded)}, {"over", d.carrier(k).name(f->target)}});
    } else {
      steps.push_back({{"perm", permutation_json(d.carrier(k), std::get<EdgePermutation>(s))}});
    }
  }
  return {{"carrier", to_json(d.base())}, {"steps", steps}, {"chain", chain_string(d)}};
}

inline PffDecomposition chain_from_json(const json& j) {
  Graph base = graph_from_json(j.at("carrier"));
  Graph cur = base;
  std::vector<Step> steps;
  for (const auto& s : j.at("steps")) {
    Step st;
    if (s.contains("fold")) {
      st = ProperFullFold{cur.parse_direction(s.at("fold").get<std::string>()), cur.parse_direction(s.at("over").get<std::string>())};
    } else {
      st = permutation_from_json(cur, s.at("perm"));
    }
    cur = step_codomain(cur, st);
    steps.push_back(st);
  }
  return PffDecomposition(base, steps);
}

// ---- verdicts -----------------------------------------------------------

inline json to_json(const Graph& g, const GateStructure& gs) {
  json gates = json::array();
  for (const auto& gv : gs.gates) {
    json at = json::array();
    for (const auto& gate : gv) at.push_back(directions_json(g, gate));
    gates.push_back(at);
  }
  return {{"gates", gates},
          {"illegal_turns", turns_json(g, gs.illegal)},
          {"periodic_directions", directions_json(g, gs.periodic_directions())},
          {"nonperiodic_directions", directions_json(g, gs.nonperiodic_directions())},
          {"rotationless_power", gs.rotationless_power}};
}

inline json matrix_json(const Matrix& M) {
  json out = json::array();
  for (const auto& row : M) out.push_back(row);
  return out;
}

inline json node_json(const Graph& g, const SearchNode& n) {
  json out = {{"stage", n.stage}, {"leg1", g.path_string(n.leg1)}, {"leg2", g.path_string(n.leg2)}};
  out["residual"] = n.residual ? turn_json(g, *n.residual) : json(nullptr);
  out["rule"] = n.rule;
  json ch = json::array();
  for (const auto& c : n.children) ch.push_back(node_json(g, c));
  out["children"] = ch;
  return out;
}

inline SearchNode node_from_json(const Graph& g, const json& j) {
  SearchNode n;
  n.stage = j.at("stage").get<std::size_t>();
  n.leg1 = g.parse_path(j.at("leg1").get<std::string>());
  n.leg2 = g.parse_path(j.at("leg2").get<std::string>());
  if (!j.at("residual").is_null()) n.residual = turn_from_json(g, j.at("residual"));
  n.rule = j.at("rule").get<std::string>();
  for (const auto& c : j.at("children")) n.children.push_back(node_from_json(g, c));
  return n;
}

inline json to_json(const Graph& g, const PnpVerdict& v) {
  json roots = json::array();
  for (const auto& r : v.roots) roots.push_back(node_json(g, r));
  json deaths = json::array();
  for (const auto& [root, ds] : branch_deaths(v)) {
    json at = json::array();
    for (const auto& [stage, t] : ds) at.push_back({{"stage", stage}, {"turn", turn_json(g, t)}});
    deaths.push_back({{"root", turn_json(g, root)}, {"deaths", at}});
  }
  json out = {{"kind", to_string(v.kind)},
              {"max_stages", v.max_stages},
              {"extension", to_string(v.extension)},
              {"nodes", v.nodes},
              {"deepest_stage", v.deepest_stage},
              {"branch_deaths", deaths},
              {"tree", roots}};
  if (v.kind == PnpKind::CandidateFound) {
    out["candidate"] = {{"leg1", g.path_string(v.leg1)}, {"leg2", g.path_string(v.leg2)}, {"stage", v.candidate_stage}, {"verified", v.candidate_verified}};
  }
  return out;
}

inline PnpVerdict pnp_from_json(const Graph& g, const json& j) {
  PnpVerdict v;
  auto kind = j.at("kind").get<std::string>();
  if (kind == "NoPNP") v.kind = PnpKind::NoPNP;
  else if (kind == "CandidateFound") v.kind = PnpKind::CandidateFound;
  else if (kind == "Inconclusive") v.kind = PnpKind::Inconclusive;
  else throw Error("unknown PNP verdict '" + kind + "'");
  v.max_stages = j.at("max_stages").get<std::size_t>();
  auto ext = j.at("extension").get<std::string>();
  if (ext != "taken" && ext != "legal") throw Error("unknown extension policy '" + ext + "'");
  v.extension = ext == "taken" ? ExtensionPolicy::TakenTurns : ExtensionPolicy::LegalTurns;
  v.nodes = j.at("nodes").get<std::size_t>();
  v.deepest_stage = j.at("deepest_stage").get<std::size_t>();
  for (const auto& r : j.at("tree")) v.roots.push_back(node_from_json(g, r));
  if (j.contains("candidate")) {
    const auto& c = j.at("candidate");
    v.leg1 = g.parse_path(c.at("leg1").get<std::string>());
    v.leg2 = g.parse_path(c.at("leg2").get<std::string>());
    v.candidate_stage = c.at("stage").get<std::size_t>();
    v.candidate_verified = c.at("verified").get<bool>();
  }
  return v;
}

inline json to_json(const FicReport& r, const Graph& g) {
  json out = {{"verdict", to_string(r.verdict)},
              {"reason", r.reason},
              {"train_track", r.train_track},
              {"pf", r.pf},
              {"expanding", r.expanding},
              {"lw_connected", r.lw_connected},
              {"illegal_turns", turns_json(g, r.illegal)}};
  if (r.train_track && r.pf) {
    out["index"] = r.index.to_string();
    out["index_deficit"] = r.index_deficit.to_string();
    out["directional_surplus"] = r.directional_surplus;
    out["fully_singular"] = r.fully_singular;
    out["ageometric"] = r.ageometric;
    out["lambda"] = r.lambda;
  }
  if (r.decomposition) out["decomposition"] = to_json(*r.decomposition);
  if (r.pnp) out["pnp"] = to_json(g, *r.pnp);
  return out;
}

// ---- ltt structures -----------------------------------------------------

inline json to_json(const LttStructure& L) {
  return {{"carrier", to_json(L.carrier)},
          {"red", directions_json(L.carrier, L.red_vertices())},
          {"colored", turns_json(L.carrier, L.colored)},
          {"index", L.index.to_string()}};
}

inline LttStructure ltt_from_json(const json& j) {
  LttStructure L;
  L.carrier = graph_from_json(j.at("carrier"));
  L.red.assign(L.carrier.direction_count(), false);
  for (const auto& s : j.at("red")) L.red[L.carrier.parse_direction(s.get<std::string>()).code()] = true;
  L.colored = turns_from_json(L.carrier, j.at("colored"));
  L.index = HalfInteger::parse(j.at("index").get<std::string>());
  return L;
}

inline json ltt_summary_json(const LttStructure& L) {
  json out = to_json(L);
  out["red_edges"] = turns_json(L.carrier, L.red_edges());
  out["purple_edges"] = turns_json(L.carrier, L.purple_edges());
  json viol = json::array();
  for (const auto& v : validate(L)) viol.push_back({{"axiom", v.axiom}, {"detail", v.detail}});
  out["violations"] = viol;
  out["birecurrent"] = is_birecurrent(L);
  return out;
}

inline std::string dot_quote(const std::string& s) { return "\"" + s + "\""; }

inline std::string to_dot(const LttStructure& L, const std::string& name = "ltt") {
  const auto& C = L.carrier;
  std::ostringstream os;
  os << "graph " << name << " {\n";
  for (auto d : C.directions()) os << "  " << dot_quote(C.name(d)) << " [color=" << (L.is_red(d) ? "red" : "purple") << "];\n";
  for (EdgeId e = 0; e < C.edge_count(); ++e) {
    Direction d(e, false);
    os << "  " << dot_quote(C.name(d)) << " -- " << dot_quote(C.name(d.reverse())) << " [style=solid, color=black];\n";
  }
  for (const auto& t : L.colored) {
    os << "  " << dot_quote(C.name(t.first)) << " -- " << dot_quote(C.name(t.second)) << " [style=dashed, color=" << (L.is_red_edge(t) ? "red" : "purple") << "];\n";
  }
  os << "}\n";
  return os.str();
}

// ---- automata -----------------------------------------------------------

inline json to_json(const SimpleGraph& g) {
  json edges = json::array();
  for (auto [a, b] : g.edges) edges.push_back(json::array({a, b}));
  return {{"vertices", g.labels}, {"edges", edges}};
}

inline SimpleGraph simple_graph_from_json(const json& j) {
  SimpleGraph g;
  for (const auto& v : j.at("vertices")) g.labels.push_back(v.is_string() ? v.get<std::string>() : v.dump());
  for (const auto& e : j.at("edges")) {
    int a = e.at(0).get<int>(), b = e.at(1).get<int>();
    if (a < 0 || b < 0 || a >= static_cast<int>(g.size()) || b >= static_cast<int>(g.size()) || a == b) throw Error("graph edge out of range");
    g.edges.emplace_back(a, b);
  }
  return g;
}

inline json to_json(const IdealWhiteheadGraphSpec& s) {
  json out = to_json(s.graph);
  out["rank"] = s.rank;
  out["variant"] = to_string(s.variant);
  return out;
}

inline IdealWhiteheadGraphSpec spec_from_json(const json& j) {
  IdealWhiteheadGraphSpec s;
  s.graph = simple_graph_from_json(j);
  if (j.contains("rank")) s.rank = j.at("rank").get<int>();
  if (j.contains("variant")) s.variant = j.at("variant").get<std::string>() == "lone-axis" ? AutomatonVariant::LoneAxis : AutomatonVariant::FullySingular;
  return s;
}

inline json step_json(const Graph& g, const Step& s) {
  if (auto f = std::get_if<ProperFullFold>(&s)) return {{"fold", g.name(f->folded)}, {"over", g.name(f->target)}};
  return {{"perm", permutation_json(g, std::get<EdgePermutation>(s))}};
}

inline Step step_from_json(const Graph& g, const json& j) {
  if (j.contains("fold")) return ProperFullFold{g.parse_direction(j.at("fold").get<std::string>()), g.parse_direction(j.at("over").get<std::string>())};
  return permutation_from_json(g, j.at("perm"));
}

inline json to_json(const Automaton& A) {
  json vs = json::array();
  for (std::size_t v = 0; v < A.vertices.size(); ++v) {
    json x = to_json(A.vertices[v]);
    x["id"] = v;
    x["scc"] = A.scc[v];
    vs.push_back(x);
  }
  json es = json::array();
  for (std::size_t i = 0; i < A.edges.size(); ++i) {
    const auto& e = A.edges[i];
    const Graph& g = A.vertices[e.source].carrier;
    es.push_back({{"id", i},
                  {"source", e.source},
                  {"target", e.target},
                  {"move", step_json(g, e.move)},
                  {"relabel", permutation_json(step_codomain(g, e.move), e.relabel)}});
  }
  json comps = json::array();
  for (int c = 0; c < A.scc_count; ++c) {
    std::size_t size = 0;
    for (auto x : A.scc) size += x == c ? 1 : 0;
    comps.push_back({{"id", c}, {"size", size}, {"invariant_subgraph", static_cast<bool>(A.scc_invariant_subgraph[c])}});
  }
  return {{"spec", to_json(A.spec)},
          {"vertices", vs},
          {"edges", es},
          {"components", comps},
          {"discarded_vertices", A.discarded_vertices}};
}

inline Automaton automaton_from_json(const json& j) {
  Automaton A;
  A.spec = spec_from_json(j.at("spec"));
  for (const auto& v : j.at("vertices")) {
    A.vertices.push_back(ltt_from_json(v));
    A.by_key.emplace(canonical_form(A.vertices.back()).key, A.vertices.size() - 1);
    A.out.emplace_back();
  }
  for (const auto& e : j.at("edges")) {
    AutomatonEdge x;
    x.source = e.at("source").get<std::size_t>();
    x.target = e.at("target").get<std::size_t>();
    if (x.source >= A.vertices.size() || x.target >= A.vertices.size()) throw Error("automaton edge endpoint out of range");
    const Graph& g = A.vertices[x.source].carrier;
    x.move = step_from_json(g, e.at("move"));
    x.relabel = permutation_from_json(step_codomain(g, x.move), e.at("relabel"));
    A.out[x.source].push_back(A.edges.size());
    A.edges.push_back(x);
  }
  A.discarded_vertices = j.value("discarded_vertices", std::size_t{0});
  compute_components(A);
  return A;
}

inline json to_json(const Loop& l) { return {{"start", l.start}, {"edges", l.edges}}; }

inline Loop loop_from_json(const json& j) {
  Loop l;
  l.start = j.at("start").get<std::size_t>();
  l.edges = j.at("edges").get<std::vector<std::size_t>>();
  return l;
}

inline std::string to_dot(const Automaton& A) {
  std::ostringstream os;
  os << "digraph automaton {\n";
  for (int c = 0; c < A.scc_count; ++c) {
    os << "  subgraph cluster_" << c << " {\n    label=\"scc " << c << (A.scc_invariant_subgraph[c] ? " (invariant subgraph)" : "") << "\";\n";
    for (std::size_t v = 0; v < A.vertices.size(); ++v) {
      if (A.scc[v] != c) continue;
      std::string reds;
      for (auto d : A.vertices[v].red_vertices()) reds += A.vertices[v].carrier.name(d);
      os << "    v" << v << " [label=\"" << v << " red:" << reds << "\"];\n";
    }
    os << "  }\n";
  }
  for (const auto& e : A.edges) {
    os << "  v" << e.source << " -> v" << e.target << " [label=" << dot_quote(step_string(A.vertices[e.source].carrier, e.move))
       << (e.is_fold() ? "" : ", style=dotted") << "];\n";
  }
  os << "}\n";
  return os.str();
}

inline json to_json(const LoopCertificate& c) {
  json out = {{"verdict", to_string(c.verdict)},
              {"reason", c.reason},
              {"train_track", c.train_track},
              {"takes_colored_turns", c.takes_colored_turns},
              {"pnp_free", c.pnp_free},
              {"pf", c.pf},
              {"three_periodic_directions", c.three_periodic},
              {"purple_is_periodic", c.purple_periodic},
              {"iw_isomorphic", c.iw_isomorphic},
              {"lone_axis", c.lone_axis}};
  if (c.map) out["map"] = to_json(*c.map);
  if (c.decomposition) out["decomposition"] = to_json(*c.decomposition);
  if (c.fic && c.map) out["fic"] = to_json(*c.fic, c.map->domain);
  return out;
}

}  // namespace ttauto
