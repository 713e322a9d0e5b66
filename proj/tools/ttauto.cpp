// ttauto: command-line front end.
//
// JSON goes to stdout (or --out), a one-line summary to stderr.
// Exit codes: 0 success/Certified, 1 Failed, 2 Inconclusive, 3 usage or parse error.

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ttauto/ttauto.hpp"

using namespace ttauto;

namespace {

constexpr int kUsage = 3;

struct Inputs {
  std::string map, map_file, chain, chain_file;
  std::size_t rank = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

bool looks_like_json(const std::string& s) {
  auto t = trim(s);
  return !t.empty() && t.front() == '{';
}

// Rank of a chain written on a rose: one more than the largest letter used.
std::size_t infer_rank(const std::string& text) {
  std::size_t r = 0;
  std::string s = text;
  // drop keywords before scanning letters
  for (const char* kw : {"fold", "over", "perm", "id"}) {
    for (auto p = s.find(kw); p != std::string::npos; p = s.find(kw)) s.replace(p, std::strlen(kw), " ");
  }
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) r = std::max<std::size_t>(r, static_cast<std::size_t>(std::tolower(c) - 'a') + 1);
  }
  return r;
}

bool has_map(const Inputs& in) { return !in.map.empty() || !in.map_file.empty(); }
bool has_chain(const Inputs& in) { return !in.chain.empty() || !in.chain_file.empty(); }

GraphMap load_map(const Inputs& in) {
  std::string text = in.map.empty() ? read_file(in.map_file) : in.map;
  if (looks_like_json(text)) return map_from_json(json::parse(text));
  return parse_map(text);
}

PffDecomposition load_chain(const Inputs& in) {
  std::string text = in.chain.empty() ? read_file(in.chain_file) : in.chain;
  if (looks_like_json(text)) return chain_from_json(json::parse(text));
  std::size_t r = in.rank ? in.rank : infer_rank(text);
  return parse_chain(Graph::rose(r), text);
}

void add_inputs(CLI::App* cmd, Inputs& in, bool chain = true) {
  cmd->add_option("--map", in.map, "map, e.g. \"a->cbca;b->cbc;c->ac\"");
  cmd->add_option("--map-file", in.map_file, "file holding a map (DSL or JSON)");
  if (chain) {
    cmd->add_option("--chain", in.chain, "pff chain, e.g. \"fold a over b; fold c over a\"");
    cmd->add_option("--chain-file", in.chain_file, "file holding a chain (DSL or JSON)");
    cmd->add_option("--rank", in.rank, "rank of the rose carrying the chain (default: inferred)");
  }
}

// A decomposition from either input; maps are factored.
std::optional<PffDecomposition> decomposition_of(const Inputs& in, std::string& why) {
  if (has_chain(in)) return load_chain(in);
  if (!has_map(in)) throw CLI::ValidationError("input", "give --map/--map-file or --chain/--chain-file");
  GraphMap g = load_map(in);
  if (!is_train_track(g).train_track) {
    why = "not a train track map";
    return std::nullopt;
  }
  auto fr = factor_pff(g);
  if (!fr.decomposition) why = fr.failure;
  return fr.decomposition;
}

GraphMap map_of(const Inputs& in) {
  if (has_map(in)) return load_map(in);
  if (has_chain(in)) return load_chain(in).compose();
  throw CLI::ValidationError("input", "give --map/--map-file or --chain/--chain-file");
}

std::string out_path;

void emit(json j, const std::string& schema) {
  json doc = {{"schema", schema}};
  for (auto& [k, v] : j.items()) doc[k] = v;
  std::string text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
  }
}

void emit_text(const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
  }
}

PnpOptions pnp_options(std::size_t max_stages, const std::string& extension) {
  PnpOptions o;
  o.max_stages = max_stages;
  o.extension = extension == "legal" ? ExtensionPolicy::LegalTurns : ExtensionPolicy::TakenTurns;
  return o;
}

int pnp_exit(PnpKind k) { return k == PnpKind::NoPNP ? 0 : k == PnpKind::CandidateFound ? 1 : 2; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"train track tools for free group automorphisms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", out_path, "write the report here instead of stdout");

  Inputs in;
  std::size_t max_stages = 0;
  std::string extension = "taken";
  auto add_pnp = [&](CLI::App* c) {
    c->add_option("--max-stages", max_stages, "stage budget for the PNP search (default 4 periods)");
    c->add_option("--extension", extension, "leg extension policy: taken (tau_infinity) or legal")->check(CLI::IsMember({"taken", "legal"}));
  };

  auto verify_tt = app.add_subcommand("verify-tt", "check the train track property");
  add_inputs(verify_tt, in);
  auto gates = app.add_subcommand("gates", "gates, illegal turns, taken turns, transition matrix");
  add_inputs(gates, in);
  auto ltt = app.add_subcommand("ltt", "lamination train track structure of a PNP-free map");
  add_inputs(ltt, in);
  add_pnp(ltt);
  bool ltt_dot = false;
  ltt->add_flag("--dot", ltt_dot, "emit DOT instead of JSON");
  auto pnp = app.add_subcommand("pnp-check", "search for periodic Nielsen paths");
  add_inputs(pnp, in);
  add_pnp(pnp);
  auto fic = app.add_subcommand("fic", "full irreducibility criterion");
  add_inputs(fic, in);
  add_pnp(fic);
  auto factor = app.add_subcommand("factor", "factor a map into proper full folds");
  add_inputs(factor, in, false);
  auto compose_cmd = app.add_subcommand("compose", "compose a chain");
  add_inputs(compose_cmd, in);

  std::string iwg_file, seed_chain;
  int rank = 3;
  bool lone = false, fully = false, exhaustive = false, keep_all = false, drop_flagged = false;
  auto build_cmd = app.add_subcommand("build-automaton", "build the ltt automaton of an ideal Whitehead graph");
  build_cmd->add_option("--iwg", iwg_file, "ideal Whitehead graph JSON")->required();
  build_cmd->add_option("--rank", rank, "rank (default: from the JSON, else 3)");
  auto lone_flag = build_cmd->add_flag("--lone-axis", lone, "lone axis automaton");
  build_cmd->add_flag("--fully-singular", fully, "fully singular automaton (default)")->excludes(lone_flag);
  build_cmd->add_option("--seed-chain", seed_chain, "seed the closure with the structures of this chain (text or file)");
  build_cmd->add_flag("--exhaustive", exhaustive, "seed with every admissible structure on the rose");
  build_cmd->add_flag("--keep-all", keep_all, "keep vertices outside strongly connected components");
  build_cmd->add_flag("--drop-invariant-subgraph", drop_flagged, "drop components flagged with an invariant subgraph");

  std::string automaton_file, loop_file, loop_edges;
  std::size_t loop_start = 0;
  auto certify = app.add_subcommand("certify-loop", "certify the map of an automaton loop");
  certify->add_option("--automaton", automaton_file, "automaton JSON")->required();
  certify->add_option("--loop", loop_file, "loop JSON {start, edges}");
  certify->add_option("--edges", loop_edges, "comma separated edge ids");
  certify->add_option("--start", loop_start, "start vertex for --edges");
  add_inputs(certify, in);
  add_pnp(certify);

  std::string ltt_file;
  auto witness = app.add_subcommand("witness-loop", "smooth loop through every colored edge");
  add_inputs(witness, in);
  witness->add_option("--ltt", ltt_file, "ltt structure JSON");

  auto dot = app.add_subcommand("export-dot", "DOT drawing of an ltt structure or automaton");
  add_inputs(dot, in);
  dot->add_option("--ltt", ltt_file, "ltt structure JSON");
  dot->add_option("--automaton", automaton_file, "automaton JSON");

  std::string cert_file;
  auto verify_cert = app.add_subcommand("verify-certificate", "replay a NoPNP certificate");
  add_inputs(verify_cert, in);
  verify_cert->add_option("--certificate", cert_file, "report from pnp-check or fic")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*verify_tt) {
      GraphMap g = map_of(in);
      auto v = is_train_track(g);
      json j = {{"map", map_string(g)}, {"train_track", v.train_track}};
      if (v.nontight_edge) j["nontight_edge"] = g.domain.names()[*v.nontight_edge];
      if (v.witness) j["offending_turn"] = turn_json(g.domain, *v.witness);
      if (!v.train_track && !v.nontight_edge) j["power"] = v.power;
      emit(j, "ttauto.verify-tt/1");
      std::cerr << (v.train_track ? "train track" : "not a train track map") << "\n";
      return v.train_track ? 0 : 1;
    }
    if (*gates) {
      GraphMap g = map_of(in);
      auto gs = gates_and_illegal_turns(g);
      json j = to_json(g.domain, gs);
      j["map"] = map_string(g);
      j["taken_turns"] = turns_json(g.domain, taken_turns_map(g));
      j["tau_infinity"] = turns_json(g.domain, tau_infinity(g));
      auto M = transition_matrix(g);
      j["transition_matrix"] = matrix_json(M);
      j["irreducible"] = is_irreducible(M);
      j["pf"] = is_pf(M);
      j["expanding"] = is_expanding(g);
      if (is_pf(M)) j["lambda"] = pf_data(M).lambda;
      emit(j, "ttauto.gates/1");
      std::cerr << "illegal turns " << turns_string(g.domain, gs.illegal) << "\n";
      return 0;
    }
    if (*ltt || *witness || (*dot && automaton_file.empty())) {
      LttStructure L;
      if (!ltt_file.empty()) {
        L = ltt_from_json(read_json(ltt_file));
      } else {
        std::string why;
        auto d = decomposition_of(in, why);
        if (!d) {
          std::cerr << "no PNP certificate: " << why << "\n";
          return 2;
        }
        auto v = pnp_search(*d, pnp_options(max_stages, extension));
        if (v.kind != PnpKind::NoPNP) {
          std::cerr << "PNP search: " << to_string(v.kind) << "\n";
          return pnp_exit(v.kind);
        }
        L = ltt_of_map(d->compose(), v);
      }
      if (*witness) {
        auto w = witness_loop(L);
        json j = {{"birecurrent", is_birecurrent(L)}, {"found", static_cast<bool>(w)}};
        if (w) {
          json steps = json::array();
          for (const auto& s : w->steps) steps.push_back({{"from", L.carrier.name(s.from)}, {"to", L.carrier.name(s.to)}, {"black", s.black}});
          j["steps"] = steps;
          j["black_projection"] = L.carrier.path_string(w->black_projection);
          j["smooth"] = is_smooth_loop(L, *w);
        }
        emit(j, "ttauto.witness-loop/1");
        std::cerr << (w ? "witness loop " + L.carrier.path_string(w->black_projection) : std::string("no witness loop")) << "\n";
        return w ? 0 : 1;
      }
      if (ltt_dot || *dot) {
        emit_text(to_dot(L));
        return 0;
      }
      emit(ltt_summary_json(L), "ttauto.ltt/1");
      std::cerr << "red vertices " << L.red_vertex_count() << ", index " << L.index << "\n";
      return 0;
    }
    if (*pnp) {
      std::string why;
      auto d = decomposition_of(in, why);
      if (!d) {
        emit({{"kind", "Inconclusive"}, {"reason", why}}, "ttauto.pnp/1");
        std::cerr << "Inconclusive: " << why << "\n";
        return 2;
      }
      auto v = pnp_search(*d, pnp_options(max_stages, extension));
      json j = {{"decomposition", to_json(*d)}, {"pnp", to_json(d->base(), v)}};
      emit(j, "ttauto.pnp/1");
      std::cerr << to_string(v.kind) << " (" << v.nodes << " nodes)\n";
      return pnp_exit(v.kind);
    }
    if (*fic) {
      FicOptions o;
      o.pnp = pnp_options(max_stages, extension);
      FicReport r = has_chain(in) ? fic_certify(load_chain(in), o) : fic_certify(map_of(in), o);
      Graph g = has_chain(in) ? load_chain(in).base() : map_of(in).domain;
      emit(to_json(r, g), "ttauto.fic/1");
      std::cerr << to_string(r.verdict) << (r.reason.empty() ? "" : ": " + r.reason) << "\n";
      return exit_code(r.verdict);
    }
    if (*factor) {
      GraphMap g = load_map(in);
      if (!is_train_track(g).train_track) {
        emit({{"factored", false}, {"reason", "not a train track map"}}, "ttauto.factor/1");
        std::cerr << "not a train track map\n";
        return 1;
      }
      auto fr = factor_pff(g);
      json j = {{"factored", static_cast<bool>(fr.decomposition)}};
      if (fr.decomposition) {
        const auto& d = *fr.decomposition;
        j["decomposition"] = to_json(d);
        j["folds"] = d.fold_count();
        j["recomposes"] = d.compose() == g;
        json rot = json::array();
        for (std::size_t k = 0; k < d.size(); ++k) rot.push_back({{"k", k}, {"illegal_turns", turns_json(d.carrier(k), decomposition_illegal_turns(d.rotate(k)))}});
        j["rotations"] = rot;
      } else {
        j["reason"] = fr.failure;
      }
      emit(j, "ttauto.factor/1");
      std::cerr << (fr.decomposition ? chain_string(*fr.decomposition) : fr.failure) << "\n";
      return fr.decomposition ? 0 : 1;
    }
    if (*compose_cmd) {
      auto d = load_chain(in);
      GraphMap g = d.compose();
      GraphMap t = tightened(g);
      emit({{"map", map_string(t)}, {"tight", has_tight_images(g)}, {"steps", d.size()}, {"image", to_json(t)}}, "ttauto.compose/1");
      std::cerr << map_string(t) << "\n";
      return 0;
    }
    if (*build_cmd) {
      IdealWhiteheadGraphSpec spec = spec_from_json(read_json(iwg_file));
      if (build_cmd->count("--rank")) spec.rank = rank;
      if (lone) spec.variant = AutomatonVariant::LoneAxis;
      if (fully) spec.variant = AutomatonVariant::FullySingular;
      if (auto p = spec.problems(); !p.empty()) {
        std::cerr << "infeasible spec: " << p.front() << "\n";
        return 1;
      }
      for (const auto& w : spec.warnings()) std::cerr << "warning: " << w << "\n";
      std::vector<LttStructure> seeds;
      if (!seed_chain.empty()) {
        Inputs si;
        (std::filesystem::exists(seed_chain) ? si.chain_file : si.chain) = seed_chain;
        si.rank = static_cast<std::size_t>(spec.rank);
        seeds = chain_seeds(load_chain(si));
      }
      if (seeds.empty() && !exhaustive) {
        if (!Graph::rose(static_cast<std::size_t>(spec.rank)).is_rose()) throw Error("no seeds");
        exhaustive = true;
      }
      BuildOptions bo;
      bo.exhaustive = exhaustive;
      bo.keep_all = keep_all;
      Automaton A = build(spec, seeds, bo);
      if (drop_flagged) {
        // rebuild from the vertices of unflagged components
        std::vector<LttStructure> keep;
        for (std::size_t v = 0; v < A.vertices.size(); ++v) {
          if (!A.scc_invariant_subgraph[A.scc[v]]) keep.push_back(A.vertices[v]);
        }
        std::size_t before = A.vertices.size() + A.discarded_vertices;
        if (keep.empty()) {
          A = Automaton{};
          A.spec = spec;
        } else {
          A = build(spec, keep);
        }
        A.discarded_vertices = before - A.vertices.size();
      }
      emit(to_json(A), "ttauto.automaton/1");
      std::cerr << A.vertices.size() << " vertices, " << A.edges.size() << " edges, " << A.scc_count << " components\n";
      return 0;
    }
    if (*certify) {
      Automaton A = automaton_from_json(read_json(automaton_file));
      Loop l;
      if (!loop_file.empty()) {
        l = loop_from_json(read_json(loop_file));
      } else if (has_chain(in) || has_map(in)) {
        // the loop traced by a decomposition
        std::string why;
        auto d = decomposition_of(in, why);
        if (!d) throw Error("input has no pff decomposition: " + why);
        l = decomposition_to_loop(A, *d).loop;
      } else {
        l.start = loop_start;
        for (const auto& s : split(loop_edges, ',')) {
          if (!trim(s).empty()) l.edges.push_back(std::stoul(trim(s)));
        }
      }
      if (!is_closed_loop(A, l)) throw CLI::ValidationError("loop", "not a closed loop in the automaton");
      FicOptions o;
      o.pnp = pnp_options(max_stages, extension);
      auto c = certify_loop(A, l, o);
      json j = to_json(c);
      j["loop"] = to_json(l);
      emit(j, "ttauto.certify-loop/1");
      std::cerr << to_string(c.verdict) << (c.reason.empty() ? "" : ": " + c.reason) << "\n";
      return exit_code(c.verdict);
    }
    if (*dot) {
      emit_text(to_dot(automaton_from_json(read_json(automaton_file))));
      return 0;
    }
    if (*verify_cert) {
      json rep = read_json(cert_file);
      const json& pj = rep.contains("pnp") ? rep.at("pnp") : rep;
      PffDecomposition d;
      if (has_chain(in) || has_map(in)) {
        std::string why;
        auto x = decomposition_of(in, why);
        if (!x) throw Error("input has no pff decomposition: " + why);
        d = *x;
      } else if (rep.contains("decomposition")) {
        d = chain_from_json(rep.at("decomposition"));
      } else {
        throw CLI::ValidationError("input", "certificate carries no decomposition; give --map or --chain");
      }
      auto v = pnp_from_json(d.base(), pj);
      auto check = verify_certificate(d, v);
      emit({{"ok", check.ok}, {"problems", check.problems}}, "ttauto.verify-certificate/1");
      std::cerr << (check.ok ? "certificate verified" : "certificate rejected") << "\n";
      return check.ok ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
