#pragma once

// Annular links as closed braids: words, closure combinatorics, Markov-type
// moves, and the positive-permutation normal-form classification that drives
// the solid-torus expansion.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "skein/rees.hpp"

namespace skein {

struct BraidLetter {
  int index;  // 1..strands-1
  int sign;   // +1 or -1
  bool operator==(const BraidLetter& o) const { return index == o.index && sign == o.sign; }
  auto operator<=>(const BraidLetter& o) const = default;
};

struct BraidWord {
  int strands = 1;
  std::vector<BraidLetter> letters;
  std::vector<int> singular_marks;  // positions into letters, ordered

  bool operator==(const BraidWord& o) const {
    return strands == o.strands && letters == o.letters && singular_marks == o.singular_marks;
  }
  bool operator<(const BraidWord& o) const {
    return std::tie(strands, letters, singular_marks) <
           std::tie(o.strands, o.letters, o.singular_marks);
  }

  void check() const {
    if (strands < 1) throw input_error("braid needs at least one strand");
    for (const auto& l : letters) {
      if (l.index < 1 || l.index >= strands)
        throw input_error("braid letter index out of range");
      if (l.sign != 1 && l.sign != -1) throw input_error("braid letter sign must be ±1");
    }
    std::set<int> seen;
    int prev = -1;
    for (int p : singular_marks) {
      if (p < 0 || p >= static_cast<int>(letters.size()))
        throw input_error("singular mark position out of range");
      if (!seen.insert(p).second) throw input_error("duplicate singular mark");
      if (p < prev) throw input_error("singular marks must be listed in order");
      prev = p;
    }
  }
  bool is_singular(int pos) const {
    return std::find(singular_marks.begin(), singular_marks.end(), pos) !=
           singular_marks.end();
  }

  std::string str() const {
    std::ostringstream out;
    out << "B" << strands << ":";
    for (const auto& l : letters) out << " " << (l.sign < 0 ? "-" : "") << "s" << l.index;
    return out.str();
  }

  // Text format "B<n>: s1 -s2 ..."
  static BraidWord parse(const std::string& text) {
    BraidWord w;
    std::istringstream in(text);
    std::string head;
    if (!(in >> head) || head.size() < 2 || head[0] != 'B')
      throw input_error("braid text must start with 'B<n>:'");
    std::string num = head.substr(1);
    if (!num.empty() && num.back() == ':') num.pop_back();
    else {
      std::string colon;
      // allow "B2 :" spacing only in the glued form
    }
    try {
      w.strands = std::stoi(num);
    } catch (...) {
      throw input_error("bad strand count in braid text");
    }
    std::string tok;
    while (in >> tok) {
      int sign = 1;
      size_t i = 0;
      if (tok[i] == '-') {
        sign = -1;
        ++i;
      }
      if (i >= tok.size() || tok[i] != 's')
        throw input_error("bad braid letter token: " + tok);
      ++i;
      int idx = 0;
      try {
        idx = std::stoi(tok.substr(i));
      } catch (...) {
        throw input_error("bad braid letter token: " + tok);
      }
      w.letters.push_back({idx, sign});
    }
    w.check();
    return w;
  }
};

// Permutation of strand start positions induced by the word: perm[p] is the
// bottom position reached by the strand entering top position p.
inline std::vector<int> braid_permutation(const BraidWord& w) {
  std::vector<int> pos(w.strands);
  for (int i = 0; i < w.strands; ++i) pos[i] = i;  // pos[p] = current slot of strand p
  for (const auto& l : w.letters) {
    int a = l.index - 1, b = l.index;
    for (int p = 0; p < w.strands; ++p) {
      if (pos[p] == a) pos[p] = b;
      else if (pos[p] == b) pos[p] = a;
    }
  }
  return pos;
}

struct ClosureStructure {
  std::vector<int> permutation;            // perm[p] as above (0-based)
  std::vector<std::vector<int>> cycles;    // partition of 0..n-1
  std::vector<int> cycle_type;             // multiset of lengths, descending
  std::vector<bool> letter_self;           // per letter: same closure component
};

inline ClosureStructure closure_structure(const BraidWord& w) {
  w.check();
  ClosureStructure cs;
  cs.permutation = braid_permutation(w);
  int n = w.strands;
  std::vector<int> comp(n, -1);
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> cyc;
    int c = static_cast<int>(cs.cycles.size());
    int x = s;
    while (comp[x] < 0) {
      comp[x] = c;
      cyc.push_back(x);
      x = cs.permutation[x];
    }
    cs.cycles.push_back(cyc);
  }
  for (const auto& cyc : cs.cycles) cs.cycle_type.push_back(static_cast<int>(cyc.size()));
  std::sort(cs.cycle_type.rbegin(), cs.cycle_type.rend());

  // strand occupying each slot as we scan the word
  std::vector<int> slot(n);
  for (int i = 0; i < n; ++i) slot[i] = i;
  for (const auto& l : w.letters) {
    int a = l.index - 1, b = l.index;
    cs.letter_self.push_back(comp[slot[a]] == comp[slot[b]]);
    std::swap(slot[a], slot[b]);
  }
  return cs;
}

inline int inversion_count(const std::vector<int>& perm) {
  int inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return inv;
}

// ---------------------------------------------------------------------------
// Markov-type moves

struct BraidMove {
  enum Kind { rotate, relation, stabilize_pos, stabilize_neg, destabilize } kind;
  int site = 0;  // for relation: position of the pattern's first letter
};

inline BraidWord apply_braid_move(const BraidWord& w, const BraidMove& mv) {
  w.check();
  BraidWord r = w;
  int len = static_cast<int>(w.letters.size());
  switch (mv.kind) {
    case BraidMove::rotate: {
      if (len == 0) return r;
      BraidLetter first = r.letters.front();
      r.letters.erase(r.letters.begin());
      r.letters.push_back(first);
      for (auto& p : r.singular_marks) p = (p + len - 1) % len;
      std::sort(r.singular_marks.begin(), r.singular_marks.end());
      return r;
    }
    case BraidMove::relation: {
      int p = mv.site;
      auto singular_involved = [&](int lo, int hi) {
        for (int m : r.singular_marks)
          if (m >= lo && m <= hi) return true;
        return false;
      };
      if (p >= 0 && p + 1 < len &&
          std::abs(w.letters[p].index - w.letters[p + 1].index) >= 2) {
        std::swap(r.letters[p], r.letters[p + 1]);
        // marks ride with their letters under a commutation
        for (auto& m : r.singular_marks) {
          if (m == p) m = p + 1;
          else if (m == p + 1) m = p;
        }
        std::sort(r.singular_marks.begin(), r.singular_marks.end());
        return r;
      }
      if (p >= 0 && p + 2 < len) {
        const auto &x = w.letters[p], &y = w.letters[p + 1], &z = w.letters[p + 2];
        bool yb = x.sign == y.sign && y.sign == z.sign && x.index == z.index &&
                  std::abs(x.index - y.index) == 1;
        if (yb) {
          if (singular_involved(p, p + 2))
            throw input_error("braid relation through a singular mark");
          int s = x.sign;
          r.letters[p] = {y.index, s};
          r.letters[p + 1] = {x.index, s};
          r.letters[p + 2] = {y.index, s};
          return r;
        }
      }
      throw input_error("no braid relation applicable at site " + std::to_string(p));
    }
    case BraidMove::stabilize_pos:
    case BraidMove::stabilize_neg: {
      r.strands += 1;
      r.letters.push_back({w.strands, mv.kind == BraidMove::stabilize_pos ? 1 : -1});
      return r;
    }
    case BraidMove::destabilize: {
      if (len == 0) throw input_error("cannot destabilize an empty word");
      const auto& last = w.letters.back();
      if (last.index != w.strands - 1)
        throw input_error("destabilize needs the last letter at index n-1");
      int count = 0;
      for (const auto& l : w.letters)
        if (l.index == w.strands - 1) ++count;
      if (count != 1)
        throw input_error("destabilize needs index n-1 to occur exactly once");
      if (!r.singular_marks.empty() && r.singular_marks.back() == len - 1)
        throw input_error("cannot destabilize a singular letter");
      r.letters.pop_back();
      r.strands -= 1;
      return r;
    }
  }
  throw contract_error("unhandled braid move");
}

// ---------------------------------------------------------------------------
// Positive-permutation classification

struct PermutationNormal {
  enum Status { positive_permutation, has_negative, positive_reducible } status;
  int negative_position = -1;        // for has_negative
  std::pair<int, int> witness{-1, -1};  // top positions of the twice-crossing strands
  // Deterministic relation moves carrying the word to one with an adjacent
  // equal pair, followed by the resulting word and the pair position.
  std::vector<BraidMove> moves;
  BraidWord rewritten;
  int square_at = -1;  // rewritten.letters[square_at] == rewritten.letters[square_at+1]
};

namespace detail {

// All single braid-relation rewrites of a positive word.
inline std::vector<std::pair<BraidMove, std::vector<BraidLetter>>> relation_rewrites(
    const std::vector<BraidLetter>& ls) {
  std::vector<std::pair<BraidMove, std::vector<BraidLetter>>> out;
  int len = static_cast<int>(ls.size());
  for (int p = 0; p + 1 < len; ++p) {
    if (std::abs(ls[p].index - ls[p + 1].index) >= 2) {
      auto nw = ls;
      std::swap(nw[p], nw[p + 1]);
      out.push_back({{BraidMove::relation, p}, std::move(nw)});
    }
  }
  for (int p = 0; p + 2 < len; ++p) {
    if (ls[p].index == ls[p + 2].index && std::abs(ls[p].index - ls[p + 1].index) == 1) {
      auto nw = ls;
      nw[p] = ls[p + 1];
      nw[p + 1] = ls[p];
      nw[p + 2] = ls[p + 1];
      out.push_back({{BraidMove::relation, p}, std::move(nw)});
    }
  }
  return out;
}

}  // namespace detail

// Breadth-first search over rotations and braid relations of a positive word
// for a representative with an adjacent equal pair. Rotations keep the
// closure; a word whose whole class is square-free presents a split union of
// standard spirals.
struct CyclicSquare {
  bool found = false;
  BraidWord word;
  int square_at = -1;
};

inline std::vector<CyclicSquare> find_cyclic_squares(const BraidWord& w, size_t max_hits,
                                                     size_t node_cap = 2000000) {
  std::vector<CyclicSquare> hits;
  auto square_pos = [](const std::vector<BraidLetter>& ls) {
    for (int p = 0; p + 1 < static_cast<int>(ls.size()); ++p)
      if (ls[p] == ls[p + 1]) return p;
    return -1;
  };
  std::set<std::vector<BraidLetter>> seen{w.letters};
  std::deque<std::vector<BraidLetter>> queue{w.letters};
  size_t expanded = 0;
  while (!queue.empty() && hits.size() < max_hits) {
    auto cur = queue.front();
    queue.pop_front();
    if (++expanded > node_cap)
      throw contract_error("cyclic square search exceeded the node cap");
    int sq = square_pos(cur);
    if (sq >= 0) {
      CyclicSquare hit;
      hit.found = true;
      hit.word = w;
      hit.word.letters = cur;
      hit.square_at = sq;
      hits.push_back(hit);
      continue;
    }
    if (!cur.empty()) {
      auto rot = cur;
      BraidLetter first = rot.front();
      rot.erase(rot.begin());
      rot.push_back(first);
      if (seen.insert(rot).second) queue.push_back(rot);
    }
    for (auto& [mv, nw] : detail::relation_rewrites(cur))
      if (seen.insert(nw).second) queue.push_back(nw);
  }
  return hits;
}

// Classifies a word. For a positive non-permutation word, finds the first
// position whose letter crosses a pair of strands for the second time and a
// braid-relation sequence making the two crossings adjacent. The search is a
// breadth-first walk over relation rewrites of the (reduced) prefix; the
// prefix is a permutation braid, so the walk stays inside its reduced words.
inline PermutationNormal permutation_normal(const BraidWord& w) {
  w.check();
  PermutationNormal res;
  for (size_t i = 0; i < w.letters.size(); ++i) {
    if (w.letters[i].sign < 0) {
      res.status = PermutationNormal::has_negative;
      res.negative_position = static_cast<int>(i);
      return res;
    }
  }
  // find the first prefix that stops being reduced
  int n = w.strands;
  std::vector<int> slot(n);  // slot -> strand
  for (int i = 0; i < n; ++i) slot[i] = i;
  std::set<std::pair<int, int>> crossed;
  int bad = -1;
  std::pair<int, int> pair{-1, -1};
  for (size_t i = 0; i < w.letters.size(); ++i) {
    int a = w.letters[i].index - 1, b = w.letters[i].index;
    int s1 = slot[a], s2 = slot[b];
    auto key = std::minmax(s1, s2);
    if (!crossed.insert(key).second) {
      bad = static_cast<int>(i);
      pair = key;
      break;
    }
    std::swap(slot[a], slot[b]);
  }
  if (bad < 0) {
    res.status = PermutationNormal::positive_permutation;
    return res;
  }
  res.status = PermutationNormal::positive_reducible;
  res.witness = pair;

  // BFS over relation rewrites of the reduced prefix, looking for a word
  // ending in the same index as the bad letter.
  std::vector<BraidLetter> prefix(w.letters.begin(), w.letters.begin() + bad);
  int target = w.letters[bad].index;
  std::map<std::vector<BraidLetter>, std::pair<std::vector<BraidLetter>, BraidMove>> parent;
  std::deque<std::vector<BraidLetter>> queue{prefix};
  parent[prefix] = {prefix, BraidMove{BraidMove::rotate, -1}};
  std::vector<BraidLetter> goal;
  bool found = prefix.empty() ? false : prefix.back().index == target;
  if (found) goal = prefix;
  size_t expanded = 0;
  const size_t node_cap = 2000000;
  while (!queue.empty() && !found) {
    auto cur = queue.front();
    queue.pop_front();
    if (++expanded > node_cap)
      throw contract_error("reducible-witness search exceeded the node cap");
    for (auto& [mv, nw] : detail::relation_rewrites(cur)) {
      if (parent.count(nw)) continue;
      parent[nw] = {cur, mv};
      if (!nw.empty() && nw.back().index == target) {
        goal = nw;
        found = true;
        break;
      }
      queue.push_back(nw);
    }
  }
  if (!found) throw contract_error("positive word not reducible as promised");
  // reconstruct the move path
  std::vector<BraidMove> path;
  for (auto cur = goal; cur != prefix;) {
    auto& [prev, mv] = parent[cur];
    path.push_back(mv);
    cur = prev;
  }
  std::reverse(path.begin(), path.end());
  res.moves = path;
  res.rewritten = w;
  std::copy(goal.begin(), goal.end(), res.rewritten.letters.begin());
  res.square_at = bad - 1;
  return res;
}

}  // namespace skein
