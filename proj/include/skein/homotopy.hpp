#pragma once

// Homotopy-class models: winding-number multisets for the annulus, the
// trivial class for the disk, standard model links, and chord-diagram
// classes of singular disk diagrams.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "skein/diagram.hpp"

namespace skein {

enum class Ambient { disk, annulus };

// Multiset of positive winding numbers, stored descending. The disk ambient
// uses only the empty (trivial) monomial.
struct ModelMonomial {
  Ambient ambient = Ambient::disk;
  std::vector<int> entries;  // descending, all >= 1

  static ModelMonomial trivial(Ambient a = Ambient::disk) { return {a, {}}; }
  static ModelMonomial of(std::vector<int> es, Ambient a = Ambient::annulus) {
    for (int e : es)
      if (e < 1) throw input_error("model monomial entries must be positive");
    std::sort(es.rbegin(), es.rend());
    return {a, std::move(es)};
  }

  int complexity() const { return static_cast<int>(entries.size()); }

  ModelMonomial merged(const ModelMonomial& o) const {
    std::vector<int> es = entries;
    es.insert(es.end(), o.entries.begin(), o.entries.end());
    std::sort(es.rbegin(), es.rend());
    return {ambient == Ambient::annulus || o.ambient == Ambient::annulus
                ? Ambient::annulus
                : Ambient::disk,
            es};
  }

  bool operator==(const ModelMonomial& o) const {
    return ambient == o.ambient && entries == o.entries;
  }
  bool operator<(const ModelMonomial& o) const {
    return std::tie(ambient, entries) < std::tie(o.ambient, o.entries);
  }

  std::string str() const {
    std::ostringstream out;
    out << "[";
    for (size_t i = 0; i < entries.size(); ++i) {
      if (i) out << ",";
      out << entries[i];
    }
    out << "]";
    return out.str();
  }
  static ModelMonomial parse(const std::string& s, Ambient a) {
    if (s.empty() || s.front() != '[' || s.back() != ']')
      throw input_error("model monomial must look like [3,2,2]");
    std::vector<int> es;
    std::string body = s.substr(1, s.size() - 2);
    std::istringstream in(body);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (tok.empty()) continue;
      es.push_back(std::stoi(tok));
    }
    if (a == Ambient::disk && !es.empty())
      throw input_error("disk ambient admits only the trivial monomial");
    return es.empty() ? trivial(a) : of(es, a);
  }
};

// Standard link realizing a monomial: one positive cycle braid block per
// entry, repeated entries as adjacent parallel blocks.
inline BraidWord model_link(const ModelMonomial& m) {
  if (m.ambient == Ambient::disk) {
    if (!m.entries.empty()) throw contract_error("disk monomial with entries");
    return BraidWord{1, {}, {}};
  }
  BraidWord w;
  w.strands = 0;
  for (int lambda : m.entries) w.strands += lambda;
  if (w.strands == 0) w.strands = 1;
  int offset = 0;
  for (int lambda : m.entries) {
    for (int i = 1; i < lambda; ++i) w.letters.push_back({offset + i, +1});
    offset += lambda;
  }
  return w;
}

// Annular homotopy class of a closed braid: the multiset of cycle lengths.
inline ModelMonomial homotopy_class(const BraidWord& w) {
  auto cs = closure_structure(w);
  return ModelMonomial::of(cs.cycle_type, Ambient::annulus);
}

// Disk diagrams are null-homotopic.
inline ModelMonomial homotopy_class(const PlanarDiagram&) {
  return ModelMonomial::trivial(Ambient::disk);
}

// ---------------------------------------------------------------------------
// Chord diagrams of singular disk diagrams. Chord order is part of the data;
// the canonical key minimizes over circle basepoints and circle order only.

struct ChordDiagram {
  int circles = 0;
  // chords indexed by singular-mark order; endpoints as (circle, position)
  std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> chords;
  std::string key;  // canonical form

  bool operator==(const ChordDiagram& o) const { return key == o.key; }
  bool operator<(const ChordDiagram& o) const { return key < o.key; }
};

inline ChordDiagram chord_class(const PlanarDiagram& d) {
  // passes through marked crossings only, per component
  EdgeIndex idx = edge_index(d);
  std::vector<std::vector<std::pair<int, int>>> seqs;  // per circle: (mark idx, side)
  std::map<int, int> mark_order;
  for (size_t i = 0; i < d.singular_marks.size(); ++i)
    mark_order[d.singular_marks[i]] = static_cast<int>(i);
  for (const auto& comp : d.components) {
    std::vector<std::pair<int, int>> seq;
    for (const auto& p : component_passages(d, idx, comp)) {
      const auto& c = d.crossings[p.cpos];
      if (!d.is_singular(c.id)) continue;
      seq.push_back({mark_order.at(c.id), 0});
    }
    seqs.push_back(seq);
  }

  ChordDiagram cd;
  cd.circles = static_cast<int>(seqs.size());
  // canonical: minimal rotation per circle, circles sorted
  std::vector<std::string> circle_keys;
  for (auto& seq : seqs) {
    std::string best;
    size_t n = seq.size();
    if (n == 0) {
      circle_keys.push_back("()");
      continue;
    }
    for (size_t r = 0; r < n; ++r) {
      std::ostringstream out;
      out << "(";
      for (size_t i = 0; i < n; ++i) out << seq[(i + r) % n].first << ";";
      out << ")";
      std::string s = out.str();
      if (best.empty() || s < best) best = s;
    }
    circle_keys.push_back(best);
  }
  std::sort(circle_keys.begin(), circle_keys.end());
  std::ostringstream key;
  key << cd.circles << "|";
  for (const auto& s : circle_keys) key << s;
  cd.key = key.str();

  // endpoint list in mark order (positions within the canonical key are not
  // tracked; raw positions suffice for structural reports)
  std::vector<std::vector<std::pair<int, int>>> found(d.singular_marks.size());
  for (size_t ci = 0; ci < seqs.size(); ++ci)
    for (size_t pos = 0; pos < seqs[ci].size(); ++pos)
      found[seqs[ci][pos].first].push_back({static_cast<int>(ci), static_cast<int>(pos)});
  for (auto& f : found) {
    if (f.size() != 2) throw contract_error("chord endpoint count mismatch");
    cd.chords.push_back({f[0], f[1]});
  }
  return cd;
}

}  // namespace skein
