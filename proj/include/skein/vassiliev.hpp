#pragma once

// The truncated Vassiliev expansion for disk diagrams: descending reduction
// with singular marks held fixed, the rewrite K+ = K- + h K* with the mark
// appended last, values on chord-diagram classes with formal split-unknot
// powers, and the emitted relation generators.

#include "skein/expand.hpp"

namespace skein {

// Chord diagrams built from per-circle mark sequences.
inline ChordDiagram chord_from_seqs(const std::vector<std::vector<int>>& seqs) {
  ChordDiagram cd;
  cd.circles = static_cast<int>(seqs.size());
  std::vector<std::string> circle_keys;
  for (const auto& seq : seqs) {
    std::string best;
    size_t n = seq.size();
    if (n == 0) {
      circle_keys.push_back("()");
      continue;
    }
    for (size_t r = 0; r < n; ++r) {
      std::ostringstream out;
      out << "(";
      for (size_t i = 0; i < n; ++i) out << seq[(i + r) % n] << ";";
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
  return cd;
}

// per-circle mark sequences of a marked disk diagram, markless circles kept
inline std::vector<std::vector<int>> mark_sequences(const PlanarDiagram& d) {
  EdgeIndex idx = edge_index(d);
  std::map<int, int> mark_order;
  for (size_t i = 0; i < d.singular_marks.size(); ++i)
    mark_order[d.singular_marks[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> seqs;
  for (const auto& comp : d.components) {
    std::vector<int> seq;
    for (const auto& p : component_passages(d, idx, comp)) {
      const auto& c = d.crossings[p.cpos];
      if (d.is_singular(c.id)) seq.push_back(mark_order.at(c.id));
    }
    seqs.push_back(seq);
  }
  return seqs;
}

struct DifferentiabilityGenerator {
  // signed resolutions of the last two marks of an encountered diagram:
  // K_{*+} - K_{*-} - K_{+*} + K_{-*}
  std::vector<std::pair<int, std::string>> terms;  // (sign, canonical code)
};

struct FourTQuadruple {
  std::array<std::string, 4> keys;
  std::array<int, 4> signs{+1, -1, -1, +1};
};

struct TangencySwap {
  std::string before, after;
  int order_index;
};

struct VassilievReport {
  std::vector<DifferentiabilityGenerator> differentiability;
  std::vector<FourTQuadruple> four_t;
  std::vector<TangencySwap> tangency;
};

struct VassilievExpansion {
  int order = 0;
  // coefficients in the free ring Z[h, u]: h-degree counts marks, u counts
  // split unknot factors
  std::map<ChordDiagram, Laurent> coeffs;
  VassilievReport report;

  void add(const ChordDiagram& cd, const Laurent& c) {
    if (c.is_zero()) return;
    auto it = coeffs.find(cd);
    if (it == coeffs.end()) {
      coeffs.emplace(cd, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) coeffs.erase(it);
    }
  }
  bool same_values(const VassilievExpansion& o) const { return coeffs == o.coeffs; }
  VassilievExpansion scaled_values(const Laurent& s) const {
    VassilievExpansion r;
    r.order = order;
    for (const auto& [k, c] : coeffs) r.add(k, c * s);
    return r;
  }
  VassilievExpansion plus_values(const VassilievExpansion& o) const {
    VassilievExpansion r = *this;
    for (const auto& [k, c] : o.coeffs) r.add(k, c);
    return r;
  }
  // truncation: drop terms above the order (h-degree = mark count)
  VassilievExpansion truncated(int n) const {
    VassilievExpansion r;
    r.order = n;
    for (const auto& [k, c] : coeffs) {
      Laurent kept;
      for (const auto& [e, coefficient] : c.terms())
        if (e.dh <= n) kept = kept + Laurent::term(coefficient, e);
      r.add(k, kept);
    }
    return r;
  }
};

class VassilievExpander {
 public:
  explicit VassilievExpander(int order) : order_(order) {
    if (order < 0) throw input_error("truncation order must be nonnegative");
  }

  VassilievExpansion expand(const PlanarDiagram& d) {
    require_valid(d);
    VassilievExpansion out;
    out.order = order_;
    if (static_cast<int>(d.singular_marks.size()) > order_) return out;  // truncated away
    for (auto& [k, c] : reduce(d)) out.add(k, c);
    out.report.differentiability = diff_gens_;
    build_structural_reports(out);
    return out;
  }

 private:
  int order_;
  using Values = std::map<ChordDiagram, Laurent>;
  std::map<std::string, Values> memo_;
  std::vector<DifferentiabilityGenerator> diff_gens_;
  std::set<std::string> diff_seen_;
  std::vector<std::vector<std::vector<int>>> terminal_seqs_;
  std::set<std::string> terminal_seen_;

  static void add_to(Values& v, const ChordDiagram& cd, const Laurent& c) {
    if (c.is_zero()) return;
    auto it = v.find(cd);
    if (it == v.end()) {
      v.emplace(cd, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) v.erase(it);
    }
  }

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
        if (d.is_singular(c.id)) continue;  // marks are transparent
        bool first = visited.insert(p.cpos).second;
        if (first && p.slot == 0) bad.push_back(c.id);
      }
    }
    return bad;
  }

  void note_differentiability(const PlanarDiagram& d) {
    if (d.singular_marks.size() < 2) return;
    std::string code = canonical_code(d).bytes;
    if (!diff_seen_.insert(code).second) return;
    size_t k = d.singular_marks.size();
    int last = d.singular_marks[k - 1];
    int prev = d.singular_marks[k - 2];
    auto resolved = [&](int site, int sign) {
      PlanarDiagram r = d;
      r.singular_marks.erase(
          std::find(r.singular_marks.begin(), r.singular_marks.end(), site));
      if (r.crossings[r.crossing_pos(site)].sign != sign) r = switch_crossing(r, site);
      return canonical_code(r).bytes;
    };
    DifferentiabilityGenerator gen;
    gen.terms.push_back({+1, resolved(last, +1)});
    gen.terms.push_back({-1, resolved(last, -1)});
    gen.terms.push_back({-1, resolved(prev, +1)});
    gen.terms.push_back({+1, resolved(prev, -1)});
    diff_gens_.push_back(std::move(gen));
  }

  Values reduce(const PlanarDiagram& d) {
    std::string key = canonical_code(d).bytes;
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    note_differentiability(d);

    Values result;
    auto bad = bad_sites(d);
    if (bad.empty()) {
      auto seqs = mark_sequences(d);
      std::vector<std::vector<int>> marked;
      int split = 0;
      for (auto& s : seqs) {
        if (s.empty()) ++split;
        else marked.push_back(s);
      }
      ChordDiagram cd = chord_from_seqs(marked);
      add_to(result, cd, Laurent::term(1, Exps{0, 0, 0, 0, split}));
      if (terminal_seen_.insert(cd.key).second) terminal_seqs_.push_back(marked);
    } else {
      int site = bad.front();
      int sign = d.crossings[d.crossing_pos(site)].sign;
      auto res = resolve(d, site);
      int marks = static_cast<int>(d.singular_marks.size());
      // K+ = K- + h K*, the new mark appended last
      if (sign > 0) {
        result = reduce(res.minus);
        if (marks + 1 <= order_)
          for (auto& [k, c] : reduce(res.star))
            add_to(result, k, c * Laurent::term(1, Exps{0, 0, 0, 1, 0}));
      } else {
        result = reduce(res.plus);
        if (marks + 1 <= order_)
          for (auto& [k, c] : reduce(res.star))
            add_to(result, k, c * Laurent::term(-1, Exps{0, 0, 0, 1, 0}));
      }
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  void build_structural_reports(VassilievExpansion& out) {
    std::set<std::array<std::string, 4>> quad_seen;
    std::set<std::pair<std::string, std::string>> swap_seen;
    for (const auto& seqs : terminal_seqs_) {
      int nmarks = 0;
      for (const auto& s : seqs) nmarks += static_cast<int>(s.size());
      nmarks /= 2;
      if (nmarks < 1) continue;
      for (int i = 0; i + 1 < nmarks; ++i) {
        auto swapped = seqs;
        for (auto& s : swapped)
          for (auto& m : s) {
            if (m == i) m = i + 1;
            else if (m == i + 1) m = i;
          }
        auto before = chord_from_seqs(seqs).key;
        auto after = chord_from_seqs(swapped).key;
        if (swap_seen.insert({before, after}).second)
          out.report.tangency.push_back({before, after, i});
      }
      if (nmarks < 2) continue;
      // 4T quadruples: slide one endpoint of chord a across an adjacent
      // endpoint of b and around b's other endpoint
      for (size_t ci = 0; ci < seqs.size(); ++ci) {
        const auto& s = seqs[ci];
        size_t n = s.size();
        for (size_t p = 0; p < n; ++p) {
          int a = s[p];
          int b = s[(p + 1) % n];
          if (a == b) continue;
          auto d2 = seqs;
          std::swap(d2[ci][p], d2[ci][(p + 1) % n]);
          int bo_ci = -1, bo_p = -1;
          for (size_t cj = 0; cj < seqs.size(); ++cj)
            for (size_t pj = 0; pj < seqs[cj].size(); ++pj)
              if (seqs[cj][pj] == b && !(cj == ci && pj == (p + 1) % n)) {
                bo_ci = static_cast<int>(cj);
                bo_p = static_cast<int>(pj);
              }
          if (bo_ci < 0) continue;
          auto base = seqs;
          base[ci].erase(base[ci].begin() + p);
          int insert_at = bo_p;
          if (bo_ci == static_cast<int>(ci) && bo_p > static_cast<int>(p)) insert_at--;
          auto d3 = base;
          d3[bo_ci].insert(d3[bo_ci].begin() + insert_at + 1, a);
          auto d4 = base;
          d4[bo_ci].insert(d4[bo_ci].begin() + insert_at, a);
          std::array<std::string, 4> keys{chord_from_seqs(seqs).key,
                                          chord_from_seqs(d2).key,
                                          chord_from_seqs(d3).key,
                                          chord_from_seqs(d4).key};
          if (quad_seen.insert(keys).second) out.report.four_t.push_back({keys});
        }
      }
    }
  }
};

inline VassilievExpansion expand_vassiliev(const PlanarDiagram& d, int order) {
  VassilievExpander ex(order);
  return ex.expand(d);
}

}  // namespace skein
