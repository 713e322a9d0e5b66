#pragma once

// Full irreducibility criterion: tt, PF transition matrix, connected local
// Whitehead graphs and no periodic Nielsen paths.

#include <optional>
#include <string>

#include "pnp.hpp"

namespace ttauto {

enum class Verdict { Certified, Failed, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Failed: return "Failed";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Certified: return 0;
    case Verdict::Failed: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 3;
}

struct FicReport {
  Verdict verdict = Verdict::Failed;
  std::string reason;  // empty when certified

  bool train_track = false;
  bool pf = false;
  bool expanding = false;
  bool lw_connected = false;
  std::optional<PffDecomposition> decomposition;
  std::optional<PnpVerdict> pnp;

  // filled once the map is known to be tt
  TurnSet illegal;
  HalfInteger index;
  HalfInteger index_deficit;
  int directional_surplus = 0;
  bool fully_singular = false;
  bool ageometric = false;  // 0 > i > 1-r
  double lambda = 0;
};

struct FicOptions {
  PnpOptions pnp;
};

// Certification given a pff decomposition of g.
inline FicReport fic_certify(const PffDecomposition& d, const FicOptions& opt = {}) {
  FicReport rep;
  const GraphMap& g = d.compose();
  const int r = g.domain.betti();
  rep.decomposition = d;
  auto tt = is_train_track(g);
  rep.train_track = tt.train_track;
  if (!tt.train_track) {
    rep.reason = tt.nontight_edge ? "edge image not tight" : "not a train track map";
    return rep;
  }
  auto M = transition_matrix(g);
  rep.pf = is_pf(M);
  rep.expanding = is_expanding(g);
  rep.illegal = gates_and_illegal_turns(g).illegal;
  auto wd = whitehead_data(g);
  rep.lw_connected = std::all_of(wd.local.begin(), wd.local.end(), [&](const LocalWhitehead& lw) { return lw.as_graph(g.domain).connected(); });
  rep.index = index_sum(wd.ideal);
  rep.index_deficit = index_deficit(wd.ideal, r);
  rep.directional_surplus = directional_surplus(g);
  rep.fully_singular = is_fully_singular(g);
  rep.ageometric = rep.index < HalfInteger::from_int(0) && rep.index > HalfInteger::from_int(1 - r);
  if (rep.pf) rep.lambda = pf_data(M).lambda;
  if (!rep.pf) {
    rep.reason = "transition matrix not Perron-Frobenius";
    return rep;
  }
  if (!rep.lw_connected) {
    rep.reason = "a local Whitehead graph is disconnected";
    return rep;
  }
  rep.pnp = pnp_search(d, opt.pnp);
  switch (rep.pnp->kind) {
    case PnpKind::NoPNP:
      rep.verdict = Verdict::Certified;
      break;
    case PnpKind::CandidateFound:
      rep.verdict = Verdict::Failed;
      rep.reason = "periodic Nielsen path candidate found";
      break;
    case PnpKind::Inconclusive:
      rep.verdict = Verdict::Inconclusive;
      rep.reason = "PNP search exhausted its budget";
      break;
  }
  return rep;
}

// Bare map: the PNP search needs a pff decomposition, found by factoring.
inline FicReport fic_certify(const GraphMap& g, const FicOptions& opt = {}) {
  auto tt = is_train_track(g);
  if (!tt.train_track) {
    FicReport rep;
    rep.reason = tt.nontight_edge ? "edge image not tight" : "not a train track map";
    return rep;
  }
  auto fr = factor_pff(g);
  if (!fr.decomposition) {
    // run the other tests so a definite failure is still reported
    FicReport rep;
    rep.train_track = true;
    auto M = transition_matrix(g);
    rep.pf = is_pf(M);
    rep.expanding = is_expanding(g);
    rep.illegal = gates_and_illegal_turns(g).illegal;
    if (!rep.pf) {
      rep.reason = "transition matrix not Perron-Frobenius";
      return rep;
    }
    rep.verdict = Verdict::Inconclusive;
    rep.reason = "no pff decomposition: " + fr.failure;
    return rep;
  }
  return fic_certify(*fr.decomposition, opt);
}

}  // namespace ttauto
