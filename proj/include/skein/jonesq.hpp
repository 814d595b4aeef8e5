#pragma once

// The q-deformation bookkeeping: twist homomorphisms on morphism words,
// deformed objects as (power, object) pairs, the projection and inclusion
// functors, the deformed-potential evaluation, and the Jones local-system
// degree of transversal loops.

#include "skein/loops.hpp"

namespace skein {

struct MorLetter {
  std::string name;
  int sign = +1;  // -1 denotes the inverse morphism
  bool operator==(const MorLetter& o) const = default;
};
using MorWord = std::vector<MorLetter>;  // letters applied first to last

struct TwistSystem {
  std::map<std::string, int> eps;

  int of(const MorLetter& l) const {
    auto it = eps.find(l.name);
    if (it == eps.end()) throw input_error("no twist value for morphism " + l.name);
    return l.sign * it->second;
  }
  int of(const MorWord& w) const {
    int total = 0;
    for (const auto& l : w) total += of(l);
    return total;
  }
};

// Deformed word: base word plus the running object powers. The object at
// step j carries power p_j = p_{j-1} - 2 eps(letter_j).
struct QWord {
  MorWord word;
  int source_power = 0;
  std::vector<int> powers;  // p_0 .. p_n

  int target_power() const { return powers.back(); }
};

inline QWord deform(const MorWord& w, int initial_power, const TwistSystem& twists) {
  QWord q;
  q.word = w;
  q.source_power = initial_power;
  q.powers.push_back(initial_power);
  for (const auto& l : w) q.powers.push_back(q.powers.back() - 2 * twists.of(l));
  return q;
}

inline MorWord p_q(const QWord& q) { return q.word; }
inline QWord i_q(const MorWord& w, const TwistSystem& twists) { return deform(w, 0, twists); }

// composition a ∘ b (b applied first); powers must match up
inline QWord compose(const QWord& a, const QWord& b) {
  if ((a.source_power - b.target_power()) % 2 != 0)
    throw input_error("parity violation: q-morphisms compose only across even powers");
  if (a.source_power != b.target_power())
    throw input_error("q-morphism powers do not match under composition");
  QWord r = b;
  for (size_t i = 0; i < a.word.size(); ++i) {
    r.word.push_back(a.word[i]);
    r.powers.push_back(a.powers[i + 1]);
  }
  return r;
}

// Linear combinations of objects with Rees coefficients
using LinComb = std::map<std::string, Rees>;

inline LinComb lincomb_add(const LinComb& a, const LinComb& b) {
  LinComb r = a;
  for (const auto& [k, v] : b) {
    auto it = r.find(k);
    if (it == r.end()) r.emplace(k, v);
    else {
      it->second = it->second + v;
      if (it->second.is_zero()) r.erase(it);
    }
  }
  return r;
}
inline LinComb lincomb_scale(const LinComb& a, const Rees& s) {
  LinComb r;
  for (const auto& [k, v] : a) {
    Rees sv = v * s;
    if (!sv.is_zero()) r.emplace(k, sv);
  }
  return r;
}

struct PotentialTable {
  std::map<std::string, LinComb> values;

  const LinComb& of(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw input_error("no potential value for morphism " + name);
    return it->second;
  }
};

// The deformed-potential value of a word: sum_j eps_j q^{-eps_j eps(s_j)} a(s_j).
inline LinComb a_q_eval(const MorWord& w, const TwistSystem& twists,
                        const PotentialTable& pot) {
  LinComb acc;
  for (const auto& l : w) {
    Rees weight = Rees::integer(l.sign) * Rees::q(-l.sign * twists.of({l.name, +1}));
    acc = lincomb_add(acc, lincomb_scale(pot.of(l.name), weight));
  }
  return acc;
}

// The same value read off the power ledger of the deformed word: each letter
// contributes in the frame transported along the path, the exponent being
// half the power drop across its crossing.
inline LinComb a_q_eval_via_deform(const QWord& q, const PotentialTable& pot) {
  LinComb acc;
  for (size_t j = 0; j < q.word.size(); ++j) {
    int drop = q.powers[j + 1] - q.powers[j];
    if (drop % 2 != 0) throw contract_error("odd power drop in a deformed word");
    Rees weight = Rees::integer(q.word[j].sign) * Rees::q(drop / 2);
    acc = lincomb_add(acc, lincomb_scale(pot.of(q.word[j].name), weight));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Jones local-system degree of transversal loops

inline Rees jones_monodromy(const TransversalLoop& l) {
  return Rees::q(-2 * delta_prime(l));
}

// The loop's event word in the twist system where every crossing switch has
// twist one.
inline MorWord loop_event_word(const TransversalLoop& l) {
  MorWord w;
  for (const auto& ev : l.events)
    if (ev.kind == LoopEvent::sw)
      w.push_back({"switch@" + std::to_string(ev.swev.site), ev.swev.eps});
  return w;
}

inline TwistSystem loop_twists(const TransversalLoop& l) {
  TwistSystem t;
  for (const auto& ev : l.events)
    if (ev.kind == LoopEvent::sw)
      t.eps["switch@" + std::to_string(ev.swev.site)] = 1;
  return t;
}

}  // namespace skein
