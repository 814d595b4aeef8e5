#pragma once

// Transversal loops as event words over a diagram or closed-braid base:
// replay validation, the signed singular sums mu / mu_tilde / mu_framed,
// canonical kink and differentiability loops, Conway smoothing with the Lin
// homomorphism, and the zero-sum skein consistency contract.

#include "skein/expand.hpp"

namespace skein {

struct SwitchEvent {
  int site = 0;  // crossing id (disk) or letter position (annulus)
  int eps = +1;  // +1: crossing changes from negative to positive
};

struct LoopEvent {
  enum Kind { isotopy_diag, isotopy_braid, sw } kind = sw;
  DiagMove diag_move{};
  BraidMove braid_move{};
  SwitchEvent swev{};

  static LoopEvent of(DiagMove m) {
    LoopEvent e;
    e.kind = isotopy_diag;
    e.diag_move = m;
    return e;
  }
  static LoopEvent of(BraidMove m) {
    LoopEvent e;
    e.kind = isotopy_braid;
    e.braid_move = m;
    return e;
  }
  static LoopEvent flip(int site, int eps) {
    LoopEvent e;
    e.kind = sw;
    e.swev = {site, eps};
    return e;
  }
};

struct TransversalLoop {
  Link base;
  std::vector<LoopEvent> events;
};

inline Link apply_switch(const Link& x, const SwitchEvent& ev) {
  if (x.ambient == Ambient::disk) {
    const auto& c = x.diag.crossings[x.diag.crossing_pos(ev.site)];
    if (x.diag.is_singular(c.id)) throw input_error("switch at a singular mark");
    int expected_before = ev.eps > 0 ? -1 : +1;
    if (c.sign != expected_before)
      throw input_error("switch sign does not match crossing state at site " +
                        std::to_string(ev.site));
    return Link::disk(switch_crossing(x.diag, ev.site));
  }
  if (ev.site < 0 || ev.site >= static_cast<int>(x.braid.letters.size()))
    throw input_error("switch site out of range");
  if (x.braid.is_singular(ev.site)) throw input_error("switch at a singular mark");
  int expected_before = ev.eps > 0 ? -1 : +1;
  if (x.braid.letters[ev.site].sign != expected_before)
    throw input_error("switch sign does not match letter state at site " +
                      std::to_string(ev.site));
  BraidWord w = x.braid;
  w.letters[ev.site].sign = -expected_before;
  return Link::annulus(w);
}

inline Link apply_event(const Link& x, const LoopEvent& ev) {
  switch (ev.kind) {
    case LoopEvent::isotopy_diag:
      if (x.ambient != Ambient::disk) throw input_error("diagram move on a braid base");
      return Link::disk(apply_move(x.diag, ev.diag_move));
    case LoopEvent::isotopy_braid:
      if (x.ambient != Ambient::annulus) throw input_error("braid move on a diagram base");
      return Link::annulus(apply_braid_move(x.braid, ev.braid_move));
    case LoopEvent::sw:
      return apply_switch(x, ev.swev);
  }
  throw contract_error("unhandled loop event");
}

struct ReplayResult {
  bool ok = false;
  std::string fault;
  std::vector<Link> states;  // state before each event, then the final state
};

inline ReplayResult replay_validate(const TransversalLoop& l) {
  ReplayResult res;
  Link cur = l.base;
  if (cur.ambient == Ambient::disk) {
    auto faults = validate(cur.diag);
    if (!faults.empty()) {
      res.fault = "base: " + faults.front();
      return res;
    }
  }
  res.states.push_back(cur);
  for (size_t i = 0; i < l.events.size(); ++i) {
    try {
      cur = apply_event(cur, l.events[i]);
    } catch (const input_error& e) {
      res.fault = "event " + std::to_string(i) + ": " + e.what();
      res.states.clear();
      return res;
    }
    res.states.push_back(cur);
  }
  if (cur.canonical_key() != l.base.canonical_key()) {
    res.fault = "loop does not close: final state differs from the base";
    res.states.clear();
    return res;
  }
  res.ok = true;
  return res;
}

// ---------------------------------------------------------------------------
// Signed singular sums

struct SingularSum {
  std::vector<std::pair<Rees, Link>> terms;  // deduplicated by canonical key

  void add(const Rees& c, const Link& l) {
    if (c.is_zero()) return;
    std::string key = l.canonical_key();
    for (auto& [coeff, link] : terms) {
      if (link.canonical_key() == key) {
        coeff = coeff + c;
        return;
      }
    }
    terms.push_back({c, l});
  }
  void prune() {
    std::vector<std::pair<Rees, Link>> out;
    for (auto& t : terms)
      if (!t.first.is_zero()) out.push_back(t);
    terms = std::move(out);
  }
  bool is_zero() const {
    for (const auto& t : terms)
      if (!t.first.is_zero()) return false;
    return true;
  }
};

// marks the switched site of the state before the event
inline Link marked_state(const Link& before, int site) {
  if (before.ambient == Ambient::disk) {
    Link m = before;
    m.diag.singular_marks.push_back(site);
    return m;
  }
  Link m = before;
  m.braid.singular_marks.push_back(site);
  std::sort(m.braid.singular_marks.begin(), m.braid.singular_marks.end());
  return m;
}

inline SingularSum mu(const TransversalLoop& l) {
  auto rep = replay_validate(l);
  if (!rep.ok) throw input_error("invalid loop: " + rep.fault);
  SingularSum out;
  for (size_t i = 0; i < l.events.size(); ++i) {
    if (l.events[i].kind != LoopEvent::sw) continue;
    const auto& ev = l.events[i].swev;
    out.add(Rees::integer(ev.eps), marked_state(rep.states[i], ev.site));
  }
  out.prune();
  return out;
}

// mu_tilde applies the running-weight formula
//   sum_i eps_i q^{2(eps_1+...+eps_{i-1}) + eps_i} K_{*,i}.
inline SingularSum mu_tilde(const TransversalLoop& l) {
  auto rep = replay_validate(l);
  if (!rep.ok) throw input_error("invalid loop: " + rep.fault);
  SingularSum out;
  int prefix = 0;
  for (size_t i = 0; i < l.events.size(); ++i) {
    if (l.events[i].kind != LoopEvent::sw) continue;
    const auto& ev = l.events[i].swev;
    out.add(Rees::integer(ev.eps) * Rees::q(2 * prefix + ev.eps),
            marked_state(rep.states[i], ev.site));
    prefix += ev.eps;
  }
  out.prune();
  return out;
}

// framing transport of an isotopy event: writhe change of R1 and of the
// braid (de)stabilizations
inline int framing_change(const LoopEvent& ev, const Link& before) {
  switch (ev.kind) {
    case LoopEvent::isotopy_diag:
      if (ev.diag_move.kind == DiagMove::r1_insert) return ev.diag_move.sign;
      if (ev.diag_move.kind == DiagMove::r1_remove) {
        const auto& c =
            before.diag.crossings[before.diag.crossing_pos(ev.diag_move.crossing)];
        return -c.sign;
      }
      return 0;
    case LoopEvent::isotopy_braid:
      if (ev.braid_move.kind == BraidMove::stabilize_pos) return +1;
      if (ev.braid_move.kind == BraidMove::stabilize_neg) return -1;
      if (ev.braid_move.kind == BraidMove::destabilize)
        return -before.braid.letters.back().sign;
      return 0;
    case LoopEvent::sw:
      return 0;
  }
  return 0;
}

// mu_framed multiplies the running weight by the framing transport of the
// R1-type events; around a closed loop the switch factors q^{2 eps} and the
// framing factors cancel (trivial framed monodromy).
struct FramedMu {
  SingularSum sum;
  int total_monodromy = 0;  // exponent of q транспортed around the loop
};

inline FramedMu mu_framed(const TransversalLoop& l) {
  auto rep = replay_validate(l);
  if (!rep.ok) throw input_error("invalid loop: " + rep.fault);
  FramedMu out;
  int running = 0;
  for (size_t i = 0; i < l.events.size(); ++i) {
    const auto& ev = l.events[i];
    if (ev.kind == LoopEvent::sw) {
      out.sum.add(Rees::integer(ev.swev.eps) * Rees::q(running + ev.swev.eps),
                  marked_state(rep.states[i], ev.swev.site));
      running += 2 * ev.swev.eps;
    } else {
      running += framing_change(ev, rep.states[i]);
    }
  }
  out.sum.prune();
  out.total_monodromy = running;
  return out;
}

inline int delta_prime(const TransversalLoop& l) {
  auto rep = replay_validate(l);
  if (!rep.ok) throw input_error("invalid loop: " + rep.fault);
  int d = 0;
  for (const auto& ev : l.events)
    if (ev.kind == LoopEvent::sw) d += ev.swev.eps;
  return d;
}

inline TransversalLoop reversed_loop(const TransversalLoop& l) {
  auto rep = replay_validate(l);
  if (!rep.ok) throw input_error("invalid loop: " + rep.fault);
  TransversalLoop out;
  out.base = l.base;
  for (size_t i = l.events.size(); i-- > 0;) {
    const auto& ev = l.events[i];
    switch (ev.kind) {
      case LoopEvent::sw:
        out.events.push_back(LoopEvent::flip(ev.swev.site, -ev.swev.eps));
        break;
      case LoopEvent::isotopy_braid: {
        const auto& mv = ev.braid_move;
        const Link& before = rep.states[i];
        const Link& after = rep.states[i + 1];
        BraidMove inv;
        switch (mv.kind) {
          case BraidMove::rotate: {
            // inverse of rotate: rotate length-1 times
            for (size_t k = 1; k < after.braid.letters.size(); ++k)
              out.events.push_back(LoopEvent::of(BraidMove{BraidMove::rotate, 0}));
            continue;
          }
          case BraidMove::relation:
            inv = mv;  // relations are involutive at the same site
            break;
          case BraidMove::stabilize_pos:
          case BraidMove::stabilize_neg:
            inv = BraidMove{BraidMove::destabilize, 0};
            break;
          case BraidMove::destabilize:
            inv = BraidMove{before.braid.letters.back().sign > 0
                                ? BraidMove::stabilize_pos
                                : BraidMove::stabilize_neg,
                            0};
            break;
        }
        out.events.push_back(LoopEvent::of(inv));
        break;
      }
      case LoopEvent::isotopy_diag: {
        const auto& mv = ev.diag_move;
        const Link& before = rep.states[i];
        const Link& after = rep.states[i + 1];
        DiagMove inv;
        switch (mv.kind) {
          case DiagMove::r1_insert:
            inv.kind = DiagMove::r1_remove;
            inv.crossing = after.diag.max_crossing_id();
            break;
          case DiagMove::r1_remove: {
            // reinsert the same kink shape on the merged edge
            const auto& c = before.diag.crossings[before.diag.crossing_pos(mv.crossing)];
            inv.kind = DiagMove::r1_insert;
            inv.sign = c.sign;
            int oi = over_in_slot(c.sign), oo = over_out_slot(c.sign);
            bool under_first = c.ends[2] == c.ends[oi];
            inv.over_first = !under_first;
            int loop_edge = under_first ? c.ends[2] : c.ends[oo];
            int head = under_first ? c.ends[0] : c.ends[oi];
            int tail_out = under_first ? c.ends[oo] : c.ends[2];
            inv.edge = head == tail_out ? std::min(head, loop_edge) : head;
            break;
          }
          case DiagMove::r2_insert: {
            inv.kind = DiagMove::r2_remove;
            inv.crossing = after.diag.crossings[after.diag.crossings.size() - 2].id;
            inv.crossing2 = after.diag.crossings.back().id;
            break;
          }
          case DiagMove::r2_remove:
          case DiagMove::r3:
            throw input_error(
                "loop reversal for r2 removals and r3 slides is not supported; "
                "reverse the loop before building it");
        }
        out.events.push_back(LoopEvent::of(inv));
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Canonical loops

// kink loop: insert a kink of sign -eps, switch it to eps, remove it
inline TransversalLoop kink_loop(const Link& base, int eps, int edge_or_strand = -1) {
  TransversalLoop l;
  l.base = base;
  if (base.ambient == Ambient::disk) {
    int edge = edge_or_strand;
    if (edge < 0) {
      if (base.diag.components.empty()) throw input_error("kink loop needs a component");
      edge = base.diag.components[0][0];
    }
    DiagMove ins;
    ins.kind = DiagMove::r1_insert;
    ins.edge = edge;
    ins.sign = -eps;
    PlanarDiagram kinked = apply_move(base.diag, ins);
    int cid = kinked.max_crossing_id();
    l.events.push_back(LoopEvent::of(ins));
    l.events.push_back(LoopEvent::flip(cid, eps));
    DiagMove rem;
    rem.kind = DiagMove::r1_remove;
    rem.crossing = cid;
    l.events.push_back(LoopEvent::of(rem));
    return l;
  }
  // braid base: stabilize / switch / destabilize
  l.events.push_back(LoopEvent::of(
      BraidMove{eps > 0 ? BraidMove::stabilize_neg : BraidMove::stabilize_pos, 0}));
  int pos = static_cast<int>(base.braid.letters.size());
  l.events.push_back(LoopEvent::flip(pos, eps));
  l.events.push_back(LoopEvent::of(BraidMove{BraidMove::destabilize, 0}));
  return l;
}

// differentiability loop around two crossing sites: flip a, flip b, flip a
// back, flip b back
inline TransversalLoop differentiability_loop(const Link& base, int site_a, int site_b) {
  TransversalLoop l;
  l.base = base;
  auto sign_at = [](const Link& x, int site) {
    if (x.ambient == Ambient::disk)
      return x.diag.crossings[x.diag.crossing_pos(site)].sign;
    return x.braid.letters[site].sign;
  };
  Link cur = base;
  for (int step = 0; step < 4; ++step) {
    int site = (step % 2 == 0) ? site_a : site_b;
    int eps = -sign_at(cur, site);
    l.events.push_back(LoopEvent::flip(site, eps));
    cur = apply_switch(cur, {site, eps});
  }
  return l;
}

// commutator of two switch events at distinct sites: a up, b up, a down, b down
inline TransversalLoop commutator_loop(const Link& base, int site_a, int site_b) {
  return differentiability_loop(base, site_a, site_b);
}

// ---------------------------------------------------------------------------
// Conway smoothing, the Lin homomorphism and j

struct LinSplit {
  SingularSum self_part, mixed_part;             // smoothed sums
  std::map<ModelMonomial, Rees> j_self, j_mixed;  // homotopy classes
};

inline Link smooth_marked(const Link& x, int site) {
  if (x.ambient == Ambient::disk) {
    PlanarDiagram d = x.diag;
    d.singular_marks.erase(
        std::find(d.singular_marks.begin(), d.singular_marks.end(), site));
    return Link::disk(smooth_crossing(d, site));
  }
  BraidWord w = x.braid;
  w.singular_marks.erase(
      std::find(w.singular_marks.begin(), w.singular_marks.end(), site));
  w.letters.erase(w.letters.begin() + site);
  for (auto& m : w.singular_marks)
    if (m > site) --m;
  return Link::annulus(w);
}

inline LinSplit lin_and_j(const TransversalLoop& l) {
  auto rep = replay_validate(l);
  if (!rep.ok) throw input_error("invalid loop: " + rep.fault);
  LinSplit out;
  for (size_t i = 0; i < l.events.size(); ++i) {
    if (l.events[i].kind != LoopEvent::sw) continue;
    const auto& ev = l.events[i].swev;
    const Link& before = rep.states[i];
    // path A: classify the marked crossing, then smooth
    bool self = site_is_self(before, ev.site);
    Link smoothed = smooth_marked(marked_state(before, ev.site), ev.site);
    // path B: smooth first and detect the classification from the component
    // count change (a self smoothing splits one component into two)
    int before_comps = before.components();
    int after_comps = smoothed.components();
    bool self_by_counts = after_comps == before_comps + 1;
    if (self != self_by_counts)
      throw contract_error("smoothing classification paths disagree");
    Rees c = Rees::integer(ev.eps);
    if (self) out.self_part.add(c, smoothed);
    else out.mixed_part.add(c, smoothed);
  }
  out.self_part.prune();
  out.mixed_part.prune();
  auto classes = [](const SingularSum& s) {
    std::map<ModelMonomial, Rees> m;
    for (const auto& [c, link] : s.terms) {
      ModelMonomial cls = link.ambient == Ambient::disk
                              ? homotopy_class(link.diag)
                              : homotopy_class(link.braid);
      auto it = m.find(cls);
      if (it == m.end()) m.emplace(cls, c);
      else {
        it->second = it->second + c;
        if (it->second.is_zero()) m.erase(it);
      }
    }
    return m;
  };
  out.j_self = classes(out.self_part);
  out.j_mixed = classes(out.mixed_part);
  return out;
}

// ---------------------------------------------------------------------------
// Zero-sum consistency: around a closed transversal loop,
//   (1 - q^{-2 delta'}) [base] + sum_i eps_i q^{-2 prefix_i - eps_i} sigma(K_{*,i})
// expands to zero for any honest isotopy loop in the disk or the annulus.

inline Expansion skein_consistency(const TransversalLoop& l, Expander& engine) {
  const PotentialSpec& pot = engine.potential();
  if (pot.kind != PotentialSpec::conway_split)
    throw input_error("skein consistency is defined for the conway potential");
  if (l.base.mark_count() > 0)
    throw input_error("skein consistency needs an unmarked base");
  auto rep = replay_validate(l);
  if (!rep.ok) throw input_error("invalid loop: " + rep.fault);

  Variant v = pot.variant;
  Expansion acc = Expansion::zero(l.base.ambient, v);
  int prefix = 0;
  for (size_t i = 0; i < l.events.size(); ++i) {
    if (l.events[i].kind != LoopEvent::sw) continue;
    const auto& ev = l.events[i].swev;
    const Link& before = rep.states[i];
    bool self = site_is_self(before, ev.site);
    const Rees& c = pot.rule(self).coeff;
    Link smoothed;
    if (before.ambient == Ambient::disk) {
      smoothed = Link::disk(smooth_crossing(before.diag, ev.site));
    } else {
      BraidWord w = before.braid;
      w.letters.erase(w.letters.begin() + ev.site);
      smoothed = Link::annulus(w);
    }
    Rees weight = Rees::integer(ev.eps, v) * Rees::q(-2 * prefix - ev.eps, v) * c;
    acc = acc + engine.expand(smoothed).scaled(weight);
    prefix += ev.eps;
  }
  int dp = prefix;
  Rees closure_factor = Rees::one(v) - Rees::q(-2 * dp, v);
  acc = acc + engine.expand(l.base).scaled(closure_factor);
  return acc;
}

}  // namespace skein
