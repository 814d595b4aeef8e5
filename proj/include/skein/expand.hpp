#pragma once

// The skein expansion engine: skein potentials, the descending reduction for
// disk diagrams, the positive-permutation reduction for closed braids,
// memoized evaluation into model bases, the naive oracle, projections, and
// the disjoint-union action.

#include <random>
#include <variant>

#include "skein/homotopy.hpp"
#include "skein/movegen.hpp"

namespace skein {

// ---------------------------------------------------------------------------
// Link presentations: a planar diagram in the disk or a closed braid in the
// solid torus.

struct Link {
  Ambient ambient = Ambient::disk;
  PlanarDiagram diag;
  BraidWord braid;

  static Link disk(PlanarDiagram d) {
    Link l;
    l.ambient = Ambient::disk;
    l.diag = std::move(d);
    return l;
  }
  static Link annulus(BraidWord w) {
    Link l;
    l.ambient = Ambient::annulus;
    l.braid = std::move(w);
    return l;
  }

  int components() const {
    if (ambient == Ambient::disk) return static_cast<int>(diag.components.size());
    return static_cast<int>(closure_structure(braid).cycle_type.size());
  }
  int mark_count() const {
    return ambient == Ambient::disk ? static_cast<int>(diag.singular_marks.size())
                                    : static_cast<int>(braid.singular_marks.size());
  }
  std::string canonical_key() const {
    if (ambient == Ambient::disk) return "D:" + canonical_code(diag).bytes;
    std::ostringstream out;
    out << "A:" << braid.str() << "/m";
    for (int m : braid.singular_marks) out << m << ",";
    return out.str();
  }
};

// ---------------------------------------------------------------------------
// Potentials

enum class TangleTarget { smoothing, singular, identity };

struct PotentialRule {
  Rees coeff = Rees::h();
  TangleTarget target = TangleTarget::smoothing;
};

struct PotentialSpec {
  enum Kind { conway_split, vassiliev, local_table } kind = conway_split;
  Variant variant = Variant::oriented;
  PotentialRule self_rule{Rees::h(), TangleTarget::smoothing};
  PotentialRule mixed_rule{Rees::z(), TangleTarget::smoothing};
  // ideal declaration I ⊂ J by generator names among {z, h, u}
  std::vector<std::string> ideal_I{"h"};
  std::vector<std::string> ideal_J{"h", "z"};

  static PotentialSpec conway(Variant var = Variant::oriented) {
    PotentialSpec p;
    p.kind = conway_split;
    p.variant = var;
    p.self_rule = {Rees::h(var), TangleTarget::smoothing};
    p.mixed_rule = {Rees::z(var), TangleTarget::smoothing};
    return p;
  }
  static PotentialSpec vassiliev_pot() {
    PotentialSpec p;
    p.kind = vassiliev;
    p.self_rule = {Rees::h(), TangleTarget::singular};
    p.mixed_rule = {Rees::h(), TangleTarget::singular};
    p.ideal_J = {"h"};
    return p;
  }

  // membership of every term in the ideal generated by the named variables
  static bool in_ideal(const Rees& x, const std::vector<std::string>& gens) {
    for (const auto& [e, c] : x.terms()) {
      bool covered = false;
      for (const auto& g : gens) {
        if (g == "h" && e.dh > 0) covered = true;
        if (g == "z" && e.dz > 0) covered = true;
        if (g == "u" && e.du > 0) covered = true;
      }
      if (!covered) return false;
    }
    return true;
  }

  void check() const {
    if (kind == conway_split || kind == local_table) {
      if (!in_ideal(self_rule.coeff, ideal_J))
        throw input_error("self coefficient must lie in J");
      if (self_rule.target == TangleTarget::smoothing &&
          !in_ideal(self_rule.coeff, ideal_I))
        throw input_error(
            "self smoothing raises the component count; its coefficient must lie in I");
      if (!in_ideal(mixed_rule.coeff, ideal_J) || in_ideal(mixed_rule.coeff, ideal_I))
        throw input_error("mixed coefficient must lie in J minus I");
    }
  }

  const PotentialRule& rule(bool self) const { return self ? self_rule : mixed_rule; }
};

// ---------------------------------------------------------------------------
// Linear combinations of links and expansions in the model basis

struct SkeinExpression {
  std::vector<std::pair<Rees, Link>> terms;

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
};

struct Expansion {
  Ambient ambient = Ambient::disk;
  Variant variant = Variant::oriented;
  std::map<ModelMonomial, Rees> coeffs;

  static Expansion zero(Ambient a, Variant v) { return Expansion{a, v, {}}; }

  void add(const ModelMonomial& m, const Rees& c) {
    if (c.is_zero()) return;
    auto it = coeffs.find(m);
    if (it == coeffs.end()) {
      coeffs.emplace(m, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) coeffs.erase(it);
    }
  }
  Expansion operator+(const Expansion& o) const {
    Expansion r = *this;
    for (const auto& [m, c] : o.coeffs) r.add(m, c);
    return r;
  }
  Expansion scaled(const Rees& s) const {
    Expansion r = Expansion::zero(ambient, variant);
    for (const auto& [m, c] : coeffs) r.add(m, c * s);
    return r;
  }
  bool operator==(const Expansion& o) const {
    return ambient == o.ambient && variant == o.variant && coeffs == o.coeffs;
  }
  bool is_zero() const { return coeffs.empty(); }

  // keys serialized in descending monomial order
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
      j[it->first.str()] = it->second.str();
    return j;
  }
  std::string str() const { return to_json().dump(); }
  static Expansion from_json(const nlohmann::json& j, Ambient a, Variant v) {
    Expansion e = zero(a, v);
    for (auto it = j.begin(); it != j.end(); ++it)
      e.add(ModelMonomial::parse(it.key(), a), Rees::parse(it.value().get<std::string>(), v));
    return e;
  }
};

inline Rees iota_beta(const Expansion& e, const ModelMonomial& beta) {
  auto it = e.coeffs.find(beta);
  if (it == e.coeffs.end()) return Rees::zero(e.variant);
  return it->second;
}

// Disjoint union with a 3-ball factor: monomials multiply by multiset union.
inline Expansion disjoint_union_action(const Expansion& a, const Expansion& b) {
  if (b.ambient != Ambient::disk)
    throw input_error("disjoint union action needs a disk factor on the right");
  Expansion r = Expansion::zero(a.ambient, a.variant);
  for (const auto& [ma, ca] : a.coeffs)
    for (const auto& [mb, cb] : b.coeffs) r.add(ma.merged(mb), ca * cb);
  return r;
}

// ---------------------------------------------------------------------------
// Single skein-relation application (the q^{-1}K+ - qK- = sigma(K*) rule)

enum class RelationDirection { plus_to_rest, minus_to_rest };

// classification of a crossing site: do its two strands belong to the same
// component?
inline bool site_is_self(const PlanarDiagram& d, int crossing_id) {
  const auto& c = d.crossings[d.crossing_pos(crossing_id)];
  int under_edge = c.ends[0];
  int over_edge = c.ends[over_in_slot(c.sign)];
  int cu = -1, co = -1;
  for (size_t k = 0; k < d.components.size(); ++k) {
    const auto& comp = d.components[k];
    if (std::find(comp.begin(), comp.end(), under_edge) != comp.end())
      cu = static_cast<int>(k);
    if (std::find(comp.begin(), comp.end(), over_edge) != comp.end())
      co = static_cast<int>(k);
  }
  if (cu < 0 || co < 0) throw contract_error("crossing edges missing from components");
  return cu == co;
}

inline bool site_is_self(const Link& x, int site) {
  if (x.ambient == Ambient::disk) return site_is_self(x.diag, site);
  auto cs = closure_structure(x.braid);
  if (site < 0 || site >= static_cast<int>(cs.letter_self.size()))
    throw input_error("no braid letter at site " + std::to_string(site));
  return cs.letter_self[site];
}

inline SkeinExpression apply_relation(const Link& x, int site, const PotentialSpec& pot,
                                      RelationDirection dir) {
  pot.check();
  Variant var = pot.variant;
  SkeinExpression out;
  bool self = site_is_self(x, site);
  const PotentialRule& rule = pot.rule(self);

  auto push_sigma = [&](const Rees& weight) {
    if (x.ambient == Ambient::disk) {
      if (rule.target == TangleTarget::singular) {
        auto res = resolve(x.diag, site);
        out.add(weight * rule.coeff, Link::disk(res.star));
      } else {
        out.add(weight * rule.coeff, Link::disk(smooth_crossing(x.diag, site)));
      }
    } else {
      if (x.braid.is_singular(site)) throw input_error("site is singular");
      if (rule.target == TangleTarget::singular) {
        BraidWord star = x.braid;
        star.singular_marks.push_back(site);
        std::sort(star.singular_marks.begin(), star.singular_marks.end());
        out.add(weight * rule.coeff, Link::annulus(star));
      } else {
        BraidWord del = x.braid;
        del.letters.erase(del.letters.begin() + site);
        for (auto& m : del.singular_marks)
          if (m > site) --m;
        out.add(weight * rule.coeff, Link::annulus(del));
      }
    }
  };

  if (x.ambient == Ambient::disk) {
    if (x.diag.is_singular(site)) throw input_error("site is singular");
    auto res = resolve(x.diag, site);
    int sign = x.diag.crossings[x.diag.crossing_pos(site)].sign;
    if (dir == RelationDirection::plus_to_rest) {
      if (sign < 0) throw input_error("plus_to_rest needs a positive crossing");
      out.add(Rees::q(2, var), Link::disk(res.minus));
      push_sigma(Rees::q(1, var));
    } else {
      if (sign > 0) throw input_error("minus_to_rest needs a negative crossing");
      out.add(Rees::q(-2, var), Link::disk(res.plus));
      push_sigma(-Rees::q(-1, var));
    }
  } else {
    if (site < 0 || site >= static_cast<int>(x.braid.letters.size()))
      throw input_error("no braid letter at site " + std::to_string(site));
    if (x.braid.is_singular(site)) throw input_error("site is singular");
    int sign = x.braid.letters[site].sign;
    BraidWord flipped = x.braid;
    flipped.letters[site].sign = -sign;
    if (dir == RelationDirection::plus_to_rest) {
      if (sign < 0) throw input_error("plus_to_rest needs a positive crossing");
      out.add(Rees::q(2, var), Link::annulus(flipped));
      push_sigma(Rees::q(1, var));
    } else {
      if (sign > 0) throw input_error("minus_to_rest needs a negative crossing");
      out.add(Rees::q(-2, var), Link::annulus(flipped));
      push_sigma(-Rees::q(-1, var));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The memoized expansion engine

struct ExpandStats {
  long long nodes = 0;
  long long memo_hits = 0;
};

class Expander {
 public:
  explicit Expander(PotentialSpec pot = PotentialSpec::conway()) : pot_(std::move(pot)) {
    pot_.check();
    if (pot_.kind == PotentialSpec::vassiliev)
      throw input_error("the vassiliev potential is expanded by expand_vassiliev");
    if (pot_.self_rule.target != TangleTarget::smoothing &&
        pot_.self_rule.target != TangleTarget::identity)
      throw input_error("exact expansion requires smoothing-type potentials");
    if (pot_.mixed_rule.target != TangleTarget::smoothing &&
        pot_.mixed_rule.target != TangleTarget::identity)
      throw input_error("exact expansion requires smoothing-type potentials");
  }

  const PotentialSpec& potential() const { return pot_; }
  const ExpandStats& stats() const { return stats_; }

  Expansion expand(const Link& x) {
    if (x.mark_count() > 0)
      throw input_error("expand needs a regular (unmarked) presentation");
    if (x.ambient == Ambient::disk) return expand_diag(x.diag);
    return expand_braid(x.braid);
  }

  // Independent oracle: no memoization, seeded random site choices.
  Expansion naive_resolve(const Link& x, uint32_t seed) {
    if (x.mark_count() > 0)
      throw input_error("expand needs a regular (unmarked) presentation");
    std::mt19937 rng(seed);
    if (x.ambient == Ambient::disk) return naive_diag(x.diag, rng);
    return naive_braid(x.braid, rng);
  }

 private:
  PotentialSpec pot_;
  ExpandStats stats_;
  std::map<std::string, Expansion> memo_;

  Variant var() const { return pot_.variant; }

  Expansion unlink_value(int components, Ambient a) const {
    Expansion e = Expansion::zero(a, var());
    e.add(ModelMonomial::trivial(a), Rees::u(var()).pow(components));
    return e;
  }

  // All passages violating descending, in the fixed walk order: components
  // by index, basepoint at the lowest edge id. The walk depends only on the
  // underlying labeled shadow, so switching a crossing keeps it fixed and the
  // count of violations strictly drops.
  std::vector<int> bad_sites(const PlanarDiagram& d) const {
    EdgeIndex idx = edge_index(d);
    std::set<int> visited;
    std::vector<int> bad;
    for (const auto& comp : d.components) {
      auto ps = component_passages(d, idx, comp);
      if (ps.empty()) continue;
      size_t start = std::min_element(comp.begin(), comp.end()) - comp.begin();
      for (size_t t = 0; t < ps.size(); ++t) {
        const auto& p = ps[(start + t) % ps.size()];
        const auto& c = d.crossings[p.cpos];
        if (d.is_singular(c.id)) continue;
        bool first = visited.insert(p.cpos).second;
        if (first && p.slot == 0) bad.push_back(c.id);
      }
    }
    return bad;
  }

  Expansion rewrite_diag(const PlanarDiagram& d, int site,
                         const std::function<Expansion(const PlanarDiagram&)>& rec) {
    int sign = d.crossings[d.crossing_pos(site)].sign;
    bool self = site_is_self(d, site);
    const Rees& c = pot_.rule(self).coeff;
    auto res = resolve(d, site);
    if (sign > 0)
      return rec(res.minus).scaled(Rees::q(2, var())) +
             rec(res.zero).scaled(Rees::q(1, var()) * c);
    return rec(res.plus).scaled(Rees::q(-2, var())) +
           rec(res.zero).scaled(-(Rees::q(-1, var()) * c));
  }

  Expansion expand_diag(const PlanarDiagram& d) {
    std::string key = "D:" + canonical_code(d).bytes;
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    ++stats_.nodes;
    auto bad = bad_sites(d);
    Expansion result =
        bad.empty()
            ? unlink_value(static_cast<int>(d.components.size()), Ambient::disk)
            : rewrite_diag(d, bad.front(),
                           [&](const PlanarDiagram& n) { return expand_diag(n); });
    memo_.emplace(std::move(key), result);
    return result;
  }

  Expansion naive_diag(const PlanarDiagram& d, std::mt19937& rng) {
    auto bad = bad_sites(d);
    if (bad.empty())
      return unlink_value(static_cast<int>(d.components.size()), Ambient::disk);
    std::uniform_int_distribution<size_t> pick(0, bad.size() - 1);
    int site = bad[pick(rng)];
    return rewrite_diag(d, site,
                        [&](const PlanarDiagram& n) { return naive_diag(n, rng); });
  }

  Expansion expand_braid(const BraidWord& w) {
    std::string key = "A:" + w.str();
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++stats_.memo_hits;
      return it->second;
    }
    ++stats_.nodes;
    Expansion result = reduce_braid(w, [&](const BraidWord& n) { return expand_braid(n); });
    memo_.emplace(std::move(key), result);
    return result;
  }

  Expansion naive_braid(const BraidWord& w, std::mt19937& rng) {
    // random negative site, else random rotation before the square reduction;
    // rotation keeps the closed diagram and merely picks another site first
    std::vector<int> negatives;
    for (size_t i = 0; i < w.letters.size(); ++i)
      if (w.letters[i].sign < 0) negatives.push_back(static_cast<int>(i));
    if (!negatives.empty()) {
      std::uniform_int_distribution<size_t> pick(0, negatives.size() - 1);
      int site = negatives[pick(rng)];
      auto cs = closure_structure(w);
      const Rees& c = pot_.rule(cs.letter_self[site]).coeff;
      BraidWord flipped = w;
      flipped.letters[site].sign = 1;
      BraidWord del = w;
      del.letters.erase(del.letters.begin() + site);
      return naive_braid(flipped, rng).scaled(Rees::q(-2, var())) +
             naive_braid(del, rng).scaled(-(Rees::q(-1, var()) * pot_targetless(c)));
    }
    // random representative with an adjacent square from the closure class
    auto hits = find_cyclic_squares(w, 48);
    if (hits.empty()) {
      Expansion e = Expansion::zero(Ambient::annulus, var());
      e.add(homotopy_class(w), Rees::one(var()));
      return e;
    }
    std::uniform_int_distribution<size_t> pick(0, hits.size() - 1);
    const auto& hit = hits[pick(rng)];
    return square_reduce(hit.word, hit.square_at,
                         [&](const BraidWord& n) { return naive_braid(n, rng); });
  }

  static const Rees& pot_targetless(const Rees& c) { return c; }

  template <typename Rec>
  Expansion square_reduce(const BraidWord& rw, int p, const Rec& rec) {
    auto cs = closure_structure(rw);
    const Rees& c = pot_.rule(cs.letter_self[p]).coeff;
    BraidWord del2 = rw;
    del2.letters.erase(del2.letters.begin() + p, del2.letters.begin() + p + 2);
    BraidWord del1 = rw;
    del1.letters.erase(del1.letters.begin() + p);
    return rec(del2).scaled(Rees::q(2, var())) +
           rec(del1).scaled(Rees::q(1, var()) * c);
  }

  template <typename Rec>
  Expansion reduce_braid(const BraidWord& w, const Rec& rec) {
    auto pn = permutation_normal(w);
    switch (pn.status) {
      case PermutationNormal::positive_permutation: {
        // A permutation word may still hide a reducible pair behind the
        // closure basepoint or behind braid relations (e.g. the half twist
        // sigma2 sigma1 sigma2, whose closure is a clasp, not the split
        // model). Search the rotation/relation class for a square; the word
        // presents a split union of spirals exactly when none exists.
        auto hits = find_cyclic_squares(w, 1);
        if (!hits.empty()) return square_reduce(hits[0].word, hits[0].square_at, rec);
        Expansion e = Expansion::zero(Ambient::annulus, var());
        e.add(homotopy_class(w), Rees::one(var()));
        return e;
      }
      case PermutationNormal::has_negative: {
        int site = pn.negative_position;
        auto cs = closure_structure(w);
        const Rees& c = pot_.rule(cs.letter_self[site]).coeff;
        BraidWord flipped = w;
        flipped.letters[site].sign = 1;
        BraidWord del = w;
        del.letters.erase(del.letters.begin() + site);
        return rec(flipped).scaled(Rees::q(-2, var())) +
               rec(del).scaled(-(Rees::q(-1, var()) * c));
      }
      case PermutationNormal::positive_reducible:
        return square_reduce(pn.rewritten, pn.square_at, rec);
    }
    throw contract_error("unhandled braid classification");
  }
};

// Convenience wrappers
inline Expansion expand(const Link& x, const PotentialSpec& pot = PotentialSpec::conway()) {
  Expander ex(pot);
  return ex.expand(x);
}
inline Expansion naive_resolve(const Link& x, uint32_t seed,
                               const PotentialSpec& pot = PotentialSpec::conway()) {
  Expander ex(pot);
  return ex.naive_resolve(x, seed);
}

// ---------------------------------------------------------------------------
// sigma_i and del_i on marked presentations (1-based mark indices)

inline std::pair<Rees, Link> sigma_at(const Link& x, int i,
                                      const PotentialSpec& pot = PotentialSpec::conway()) {
  if (i < 1 || i > x.mark_count()) throw input_error("mark index out of range");
  if (x.ambient == Ambient::disk) {
    int site = x.diag.singular_marks[i - 1];
    bool self = site_is_self(x.diag, site);
    PlanarDiagram d = x.diag;
    d.singular_marks.erase(d.singular_marks.begin() + (i - 1));
    return {pot.rule(self).coeff, Link::disk(smooth_crossing(d, site))};
  }
  int site = x.braid.singular_marks[i - 1];
  auto cs = closure_structure(x.braid);
  bool self = cs.letter_self[site];
  BraidWord w = x.braid;
  w.singular_marks.erase(w.singular_marks.begin() + (i - 1));
  w.letters.erase(w.letters.begin() + site);
  for (auto& m : w.singular_marks)
    if (m > site) --m;
  return {pot.rule(self).coeff, Link::annulus(w)};
}

// resolves mark i to the requested sign, dropping it from the mark list
inline Link resolve_mark(const Link& x, int i, int sign) {
  if (i < 1 || i > x.mark_count()) throw input_error("mark index out of range");
  if (x.ambient == Ambient::disk) {
    int site = x.diag.singular_marks[i - 1];
    PlanarDiagram d = x.diag;
    d.singular_marks.erase(d.singular_marks.begin() + (i - 1));
    if (d.crossings[d.crossing_pos(site)].sign != sign) d = switch_crossing(d, site);
    return Link::disk(d);
  }
  int site = x.braid.singular_marks[i - 1];
  BraidWord w = x.braid;
  w.singular_marks.erase(w.singular_marks.begin() + (i - 1));
  w.letters[site].sign = sign;
  return Link::annulus(w);
}

inline std::pair<Link, Link> del_at(const Link& x, int i) {
  return {resolve_mark(x, i, +1), resolve_mark(x, i, -1)};
}

}  // namespace skein
