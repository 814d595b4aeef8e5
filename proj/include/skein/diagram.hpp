#pragma once

// Planar oriented link diagrams for the disk ambient. Crossings store their
// four incident edge-ends counterclockwise starting at the incoming
// under-strand; sign +1 means the over-strand enters at slot 1, sign -1 at
// slot 3. Components are cyclic edge sequences following orientation.

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skein/braid.hpp"
#include "skein/rees.hpp"

namespace skein {

struct Crossing {
  int id = 0;
  std::array<int, 4> ends{};  // edge ids, CCW from the incoming under-strand
  int sign = 1;

  bool operator==(const Crossing& o) const {
    return id == o.id && ends == o.ends && sign == o.sign;
  }
};

struct PlanarDiagram {
  std::vector<Crossing> crossings;
  std::vector<std::vector<int>> components;  // cyclic edge id sequences
  std::vector<int> singular_marks;           // crossing ids, ordered
  std::map<int, int> framings;               // component index -> framing

  bool is_singular(int crossing_id) const {
    return std::find(singular_marks.begin(), singular_marks.end(), crossing_id) !=
           singular_marks.end();
  }
  int crossing_pos(int crossing_id) const {
    for (size_t i = 0; i < crossings.size(); ++i)
      if (crossings[i].id == crossing_id) return static_cast<int>(i);
    throw input_error("no crossing with id " + std::to_string(crossing_id));
  }
  int writhe() const {
    int w = 0;
    for (const auto& c : crossings)
      if (!is_singular(c.id)) w += c.sign;
    return w;
  }
  int regular_crossing_count() const {
    return static_cast<int>(crossings.size() - singular_marks.size());
  }
  int max_edge_id() const {
    int m = -1;
    for (const auto& comp : components)
      for (int e : comp) m = std::max(m, e);
    for (const auto& c : crossings)
      for (int e : c.ends) m = std::max(m, e);
    return m;
  }
  int max_crossing_id() const {
    int m = -1;
    for (const auto& c : crossings) m = std::max(m, c.id);
    return m;
  }
};

inline int over_in_slot(int sign) { return sign > 0 ? 1 : 3; }
inline int over_out_slot(int sign) { return sign > 0 ? 3 : 1; }
inline bool slot_incoming(int slot, int sign) {
  return slot == 0 || slot == over_in_slot(sign);
}

struct EdgeRef {
  int cpos = -1;  // index into crossings
  int slot = -1;
  bool operator==(const EdgeRef& o) const { return cpos == o.cpos && slot == o.slot; }
};

struct EdgeEnds {
  std::optional<EdgeRef> tail;  // outgoing slot
  std::optional<EdgeRef> head;  // incoming slot
  int uses = 0;
};

using EdgeIndex = std::map<int, EdgeEnds>;

// Incidence structure; `known_edges` seeds ids that may have no crossing ends
// (crossingless circles).
inline EdgeIndex edge_index_of(const std::vector<Crossing>& crossings,
                               const std::set<int>& known_edges,
                               std::vector<std::string>* faults = nullptr) {
  EdgeIndex idx;
  auto fault = [&](const std::string& m) {
    if (faults) faults->push_back(m);
    else throw input_error(m);
  };
  for (int e : known_edges) idx[e];
  for (size_t ci = 0; ci < crossings.size(); ++ci) {
    const auto& c = crossings[ci];
    for (int s = 0; s < 4; ++s) {
      int e = c.ends[s];
      auto& ee = idx[e];
      ee.uses++;
      EdgeRef ref{static_cast<int>(ci), s};
      if (slot_incoming(s, c.sign)) {
        if (ee.head) fault("edge multiplicity: edge " + std::to_string(e) +
                           " has two incoming ends");
        else ee.head = ref;
      } else {
        if (ee.tail) fault("edge multiplicity: edge " + std::to_string(e) +
                           " has two outgoing ends");
        else ee.tail = ref;
      }
    }
  }
  for (auto& [e, ee] : idx) {
    if (ee.uses != 0 && ee.uses != 2)
      fault("edge multiplicity: edge " + std::to_string(e) + " used " +
            std::to_string(ee.uses) + " times");
    if (ee.uses == 2 && (!ee.head || !ee.tail))
      fault("edge orientation: edge " + std::to_string(e) +
            " lacks a head or tail end");
  }
  return idx;
}

inline EdgeIndex edge_index(const PlanarDiagram& d, std::vector<std::string>* faults = nullptr) {
  std::set<int> known;
  for (const auto& comp : d.components)
    for (int e : comp) known.insert(e);
  return edge_index_of(d.crossings, known, faults);
}

// Continuation of the strand through a crossing entered at `slot`.
inline int continuation_slot(int slot, int sign) {
  if (slot == 0) return 2;
  if (slot == over_in_slot(sign)) return over_out_slot(sign);
  throw contract_error("continuation from a non-incoming slot");
}

// Components recomputed from the incidence structure, ordered by smallest
// edge id. Crossingless circles are edges with no ends.
inline std::vector<std::vector<int>> trace_components(const std::vector<Crossing>& crossings,
                                                      const EdgeIndex& idx) {
  std::vector<std::vector<int>> comps;
  std::set<int> visited;
  for (const auto& [e0, ee0] : idx) {
    if (visited.count(e0)) continue;
    std::vector<int> comp;
    if (ee0.uses == 0) {
      comp.push_back(e0);
      visited.insert(e0);
    } else {
      int e = e0;
      while (!visited.count(e)) {
        visited.insert(e);
        comp.push_back(e);
        const auto& ee = idx.at(e);
        if (!ee.head) throw input_error("open strand at edge " + std::to_string(e));
        const auto& c = crossings[ee.head->cpos];
        int out = continuation_slot(ee.head->slot, c.sign);
        e = c.ends[out];
      }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline void recompute_components(PlanarDiagram& d, const std::set<int>& surviving_edges) {
  EdgeIndex idx = edge_index_of(d.crossings, surviving_edges);
  d.components = trace_components(d.crossings, idx);
}

// ---------------------------------------------------------------------------
// Faces via the rotation system. A dart is identified with the slot it
// arrives at; next() turns to the CCW-next slot and runs along that edge to
// its far end.
struct Dart {
  int cpos, slot;
  auto operator<=>(const Dart&) const = default;
};

inline std::vector<std::vector<Dart>> trace_faces(const PlanarDiagram& d,
                                                  const EdgeIndex& idx) {
  auto other_end = [&](int edge, EdgeRef from) -> EdgeRef {
    const auto& ee = idx.at(edge);
    if (ee.tail && ee.tail->cpos == from.cpos && ee.tail->slot == from.slot)
      return *ee.head;
    return *ee.tail;
  };
  std::set<Dart> seen;
  std::vector<std::vector<Dart>> faces;
  for (size_t ci = 0; ci < d.crossings.size(); ++ci) {
    for (int s = 0; s < 4; ++s) {
      Dart start{static_cast<int>(ci), s};
      if (seen.count(start)) continue;
      std::vector<Dart> face;
      Dart cur = start;
      do {
        seen.insert(cur);
        face.push_back(cur);
        int s2 = (cur.slot + 1) % 4;
        int e2 = d.crossings[cur.cpos].ends[s2];
        EdgeRef far = other_end(e2, EdgeRef{cur.cpos, s2});
        cur = Dart{far.cpos, far.slot};
      } while (!(cur == start));
      faces.push_back(std::move(face));
    }
  }
  return faces;
}

// The edge bordering the face at a dart's turn position.
inline int dart_turn_edge(const PlanarDiagram& d, const Dart& dt) {
  return d.crossings[dt.cpos].ends[(dt.slot + 1) % 4];
}

// ---------------------------------------------------------------------------

inline std::vector<std::string> validate(const PlanarDiagram& d) {
  std::vector<std::string> faults;
  EdgeIndex idx = edge_index(d, &faults);
  if (!faults.empty()) return faults;

  std::set<int> comp_edges;
  for (size_t k = 0; k < d.components.size(); ++k) {
    const auto& comp = d.components[k];
    if (comp.empty()) {
      faults.push_back("component " + std::to_string(k) + " is empty");
      continue;
    }
    for (size_t i = 0; i < comp.size(); ++i) {
      if (!comp_edges.insert(comp[i]).second)
        faults.push_back("edge " + std::to_string(comp[i]) +
                         " appears in two component positions");
    }
    const auto& first = idx.at(comp[0]);
    if (first.uses == 0) {
      if (comp.size() != 1)
        faults.push_back("crossingless circle must be a single edge (component " +
                         std::to_string(k) + ")");
      continue;
    }
    for (size_t i = 0; i < comp.size(); ++i) {
      int e = comp[i];
      int enext = comp[(i + 1) % comp.size()];
      const auto& ee = idx.at(e);
      if (!ee.head) {
        faults.push_back("orientation: edge " + std::to_string(e) + " has no head");
        continue;
      }
      const auto& c = d.crossings[ee.head->cpos];
      int out = continuation_slot(ee.head->slot, c.sign);
      if (c.ends[out] != enext)
        faults.push_back("orientation: component " + std::to_string(k) +
                         " breaks after edge " + std::to_string(e));
    }
  }
  for (const auto& [e, ee] : idx)
    if (!comp_edges.count(e))
      faults.push_back("edge " + std::to_string(e) + " missing from components");

  std::set<int> mark_seen;
  for (int id : d.singular_marks) {
    bool found = false;
    for (const auto& c : d.crossings) found = found || c.id == id;
    if (!found) faults.push_back("singular order: mark refers to missing crossing " +
                                 std::to_string(id));
    if (!mark_seen.insert(id).second)
      faults.push_back("singular order: duplicate singular mark " + std::to_string(id));
  }

  for (const auto& [k, f] : d.framings)
    if (k < 0 || k >= static_cast<int>(d.components.size()))
      faults.push_back("framing refers to missing component " + std::to_string(k));

  std::set<int> ids;
  for (const auto& c : d.crossings)
    if (!ids.insert(c.id).second)
      faults.push_back("duplicate crossing id " + std::to_string(c.id));

  if (!faults.empty()) return faults;

  // planarity: Euler count per connected piece of the 4-valent graph
  if (!d.crossings.empty()) {
    int n = static_cast<int>(d.crossings.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (const auto& [e, ee] : idx)
      if (ee.uses == 2) parent[find(ee.head->cpos)] = find(ee.tail->cpos);
    std::map<int, int> verts, edges, facecnt;
    for (int i = 0; i < n; ++i) verts[find(i)]++;
    for (const auto& [e, ee] : idx)
      if (ee.uses == 2) edges[find(ee.head->cpos)]++;
    for (const auto& face : trace_faces(d, idx)) facecnt[find(face[0].cpos)]++;
    for (const auto& [root, v] : verts) {
      int eu = v - edges[root] + facecnt[root];
      if (eu != 2)
        faults.push_back("planarity: Euler count " + std::to_string(eu) +
                         " in piece at crossing " + std::to_string(d.crossings[root].id));
    }
  }
  return faults;
}

inline void require_valid(const PlanarDiagram& d) {
  auto faults = validate(d);
  if (!faults.empty()) throw input_error("invalid diagram: " + faults.front());
}

// ---------------------------------------------------------------------------
// Junction contraction: when crossings are deleted, each deleted passage
// prescribes in-edge -> out-edge continuations. Chains merge into the leading
// edge; closed chains become crossingless circles.

struct JunctionResult {
  std::map<int, int> rename;  // dropped edge -> surviving edge
  std::set<int> circles;      // surviving edges that became crossingless circles
};

inline JunctionResult contract_junctions(const std::map<int, int>& junction) {
  JunctionResult res;
  std::set<int> values;
  for (const auto& [a, b] : junction) values.insert(b);
  std::set<int> done;
  for (const auto& [a, b0] : junction) {
    if (done.count(a) || values.count(a)) continue;
    // chain starting at a
    std::vector<int> run{a};
    int x = a;
    while (junction.count(x)) {
      done.insert(x);
      x = junction.at(x);
      run.push_back(x);
    }
    for (size_t i = 1; i < run.size(); ++i) res.rename[run[i]] = a;
  }
  for (const auto& [a, b0] : junction) {
    if (done.count(a)) continue;
    // cycle through a
    std::vector<int> cyc{a};
    done.insert(a);
    int x = junction.at(a);
    while (x != a) {
      done.insert(x);
      cyc.push_back(x);
      x = junction.at(x);
    }
    int keep = *std::min_element(cyc.begin(), cyc.end());
    for (int e : cyc)
      if (e != keep) res.rename[e] = keep;
    res.circles.insert(keep);
  }
  return res;
}

// Deletes the crossings at `cps` and reconnects strands through `junction`.
inline PlanarDiagram delete_crossings(const PlanarDiagram& d, std::vector<int> cps,
                                      const std::map<int, int>& junction) {
  PlanarDiagram r = d;
  std::sort(cps.rbegin(), cps.rend());
  for (int cp : cps) r.crossings.erase(r.crossings.begin() + cp);
  JunctionResult jr = contract_junctions(junction);
  for (auto& c : r.crossings)
    for (int s = 0; s < 4; ++s) {
      auto it = jr.rename.find(c.ends[s]);
      if (it != jr.rename.end()) c.ends[s] = it->second;
    }
  std::set<int> surviving;
  for (const auto& comp : d.components)
    for (int e : comp)
      if (!jr.rename.count(e)) surviving.insert(e);
  recompute_components(r, surviving);
  return r;
}

// ---------------------------------------------------------------------------
// Crossing resolutions

inline PlanarDiagram switch_crossing(const PlanarDiagram& d, int crossing_id) {
  PlanarDiagram r = d;
  auto& c = r.crossings[r.crossing_pos(crossing_id)];
  int rot = over_in_slot(c.sign);
  std::array<int, 4> ne;
  for (int s = 0; s < 4; ++s) ne[s] = c.ends[(s + rot) % 4];
  c.ends = ne;
  c.sign = -c.sign;
  return r;
}

// Oriented smoothing: the crossing disappears and the strands reconnect.
inline PlanarDiagram smooth_crossing(const PlanarDiagram& d, int crossing_id) {
  int cp = d.crossing_pos(crossing_id);
  if (d.is_singular(crossing_id)) throw input_error("cannot smooth a singular mark");
  const Crossing c = d.crossings[cp];
  std::map<int, int> junction;
  if (c.sign > 0) {
    junction[c.ends[0]] = c.ends[3];
    junction[c.ends[1]] = c.ends[2];
  } else {
    junction[c.ends[0]] = c.ends[1];
    junction[c.ends[3]] = c.ends[2];
  }
  PlanarDiagram r = delete_crossings(d, {cp}, junction);
  r.framings.clear();
  return r;
}

struct Resolutions {
  PlanarDiagram plus, minus, zero, star;
};

inline Resolutions resolve(const PlanarDiagram& d, int crossing_id) {
  if (d.is_singular(crossing_id)) throw input_error("cannot resolve a singular site");
  int cp = d.crossing_pos(crossing_id);
  Resolutions res;
  if (d.crossings[cp].sign > 0) {
    res.plus = d;
    res.minus = switch_crossing(d, crossing_id);
  } else {
    res.minus = d;
    res.plus = switch_crossing(d, crossing_id);
  }
  res.zero = smooth_crossing(d, crossing_id);
  res.star = d;
  res.star.singular_marks.push_back(crossing_id);
  return res;
}

// ---------------------------------------------------------------------------
// Reidemeister moves

struct DiagMove {
  enum Kind { r1_insert, r1_remove, r2_insert, r2_remove, r3 } kind;
  int edge = -1;       // r1_insert host edge; r2_insert moving edge
  int sign = 1;        // r1_insert kink sign
  bool over_first = false;  // r1_insert: strand passes over before under
  int edge2 = -1;      // r2_insert crossed edge
  bool over = true;    // r2_insert: moving edge passes over
  int crossing = -1;   // r1_remove / r2_remove
  int crossing2 = -1;  // r2_remove second crossing
  int face = -1;       // r3 face index in trace_faces order
};

namespace detail_diag {

// carries framings through a move via surviving representative edges
inline void remap_framings(PlanarDiagram& r, const PlanarDiagram& base,
                           const std::map<int, int>& comp_rep) {
  std::map<int, int> nf;
  for (const auto& [oldk, f] : base.framings) {
    auto it = comp_rep.find(oldk);
    if (it == comp_rep.end()) continue;
    for (size_t k = 0; k < r.components.size(); ++k)
      if (std::find(r.components[k].begin(), r.components[k].end(), it->second) !=
          r.components[k].end())
        nf[static_cast<int>(k)] = f;
  }
  r.framings = nf;
}

}  // namespace detail_diag

inline PlanarDiagram apply_move(const PlanarDiagram& d, const DiagMove& mv) {
  require_valid(d);
  EdgeIndex idx = edge_index(d);

  switch (mv.kind) {
    case DiagMove::r1_insert: {
      if (!idx.count(mv.edge)) throw input_error("r1: no such edge");
      if (mv.sign != 1 && mv.sign != -1) throw input_error("r1: kink sign must be ±1");
      PlanarDiagram r = d;
      int l = d.max_edge_id() + 1;
      int cid = d.max_crossing_id() + 1;
      const auto& ee = idx.at(mv.edge);
      Crossing c;
      c.id = cid;
      c.sign = mv.sign;
      auto kink_ends = [&](int e_in, int e_out) -> std::array<int, 4> {
        if (!mv.over_first) {
          // strand passes under first: loop runs under-out -> over-in
          if (mv.sign > 0) return {e_in, l, l, e_out};
          return {e_in, e_out, l, l};
        }
        // strand passes over first: loop runs over-out -> under-in
        if (mv.sign > 0) return {l, e_in, e_out, l};
        return {l, l, e_out, e_in};
      };
      if (ee.uses == 0) {
        c.ends = kink_ends(mv.edge, mv.edge);
        r.crossings.push_back(c);
        for (auto& comp : r.components)
          if (comp.size() == 1 && comp[0] == mv.edge) comp = {mv.edge, l};
        return r;
      }
      int eb = d.max_edge_id() + 2;
      c.ends = kink_ends(mv.edge, eb);
      r.crossings[ee.head->cpos].ends[ee.head->slot] = eb;
      r.crossings.push_back(c);
      for (auto& comp : r.components) {
        auto it = std::find(comp.begin(), comp.end(), mv.edge);
        if (it != comp.end()) {
          size_t pos = it - comp.begin();
          comp.insert(comp.begin() + pos + 1, {l, eb});
        }
      }
      return r;
    }
    case DiagMove::r1_remove: {
      int cp = d.crossing_pos(mv.crossing);
      const Crossing& c = d.crossings[cp];
      if (d.is_singular(c.id)) throw input_error("r1: cannot remove a singular mark");
      int oi = over_in_slot(c.sign), oo = over_out_slot(c.sign);
      std::map<int, int> junction;
      if (c.ends[2] == c.ends[oi]) {
        // loop runs under-out -> over-in
        junction[c.ends[0]] = c.ends[2];
        junction[c.ends[2]] = c.ends[oo];
      } else if (c.ends[oo] == c.ends[0]) {
        // loop runs over-out -> under-in
        junction[c.ends[oi]] = c.ends[oo];
        junction[c.ends[oo]] = c.ends[2];
      } else {
        throw input_error("r1: crossing " + std::to_string(c.id) + " is not a kink");
      }
      std::map<int, int> comp_rep;
      for (size_t k = 0; k < d.components.size(); ++k)
        comp_rep[static_cast<int>(k)] = d.components[k][0];
      PlanarDiagram r = delete_crossings(d, {cp}, junction);
      // representatives may have been renamed into the chain head
      JunctionResult jr = contract_junctions(junction);
      for (auto& [k, e] : comp_rep) {
        auto it = jr.rename.find(e);
        if (it != jr.rename.end()) e = it->second;
      }
      detail_diag::remap_framings(r, d, comp_rep);
      return r;
    }
    case DiagMove::r2_insert: {
      if (!idx.count(mv.edge) || !idx.count(mv.edge2))
        throw input_error("r2: no such edge");
      if (mv.edge == mv.edge2) throw input_error("r2: edges must be distinct");
      const auto& ee = idx.at(mv.edge);
      const auto& ff = idx.at(mv.edge2);
      if (ee.uses == 0 && ff.uses == 0)
        throw input_error("r2: both edges are crossingless circles");

      int rel = 0;  // +1 antiparallel, -1 parallel
      bool found = false;
      if (ee.uses != 0 && ff.uses != 0) {
        for (const auto& face : trace_faces(d, idx)) {
          bool e_marked = false, f_marked = false, e_along = false, f_along = false;
          for (const auto& dt : face) {
            int te = dart_turn_edge(d, dt);
            int s2 = (dt.slot + 1) % 4;
            const auto& inc = idx.at(te);
            bool along = inc.tail && inc.tail->cpos == dt.cpos && inc.tail->slot == s2;
            if (te == mv.edge && !e_marked) {
              e_marked = true;
              e_along = along;
            } else if (te == mv.edge2 && !f_marked) {
              f_marked = true;
              f_along = along;
            }
          }
          if (e_marked && f_marked) {
            rel = (e_along == f_along) ? +1 : -1;
            found = true;
            break;
          }
        }
      } else {
        // a crossingless circle shares a face with every edge of its region
        rel = +1;
        found = true;
      }
      if (!found) throw input_error("r2: edges do not share a face");

      PlanarDiagram r = d;
      bool circle_e = ee.uses == 0, circle_f = ff.uses == 0;
      int base_id = d.max_edge_id();
      int em = base_id + 1, e2 = circle_e ? mv.edge : base_id + 2;
      int fm = base_id + 3, f2 = circle_f ? mv.edge2 : base_id + 4;
      int x = d.max_crossing_id() + 1, y = d.max_crossing_id() + 2;
      int e1 = mv.edge, f1 = mv.edge2;

      Crossing cx, cy;
      cx.id = x;
      cy.id = y;
      if (rel > 0) {
        // antiparallel: f passes y first
        if (mv.over) {
          cx.sign = -1; cx.ends = {fm, em, f2, e1};
          cy.sign = +1; cy.ends = {f1, em, fm, e2};
        } else {
          cx.sign = +1; cx.ends = {e1, fm, em, f2};
          cy.sign = -1; cy.ends = {em, fm, e2, f1};
        }
      } else {
        // parallel: f passes x first
        if (mv.over) {
          cx.sign = +1; cx.ends = {f1, e1, fm, em};
          cy.sign = -1; cy.ends = {fm, e2, f2, em};
        } else {
          cx.sign = -1; cx.ends = {e1, fm, em, f1};
          cy.sign = +1; cy.ends = {em, fm, e2, f2};
        }
      }
      if (!circle_e) r.crossings[ee.head->cpos].ends[ee.head->slot] = e2;
      if (!circle_f) r.crossings[ff.head->cpos].ends[ff.head->slot] = f2;
      r.crossings.push_back(cx);
      r.crossings.push_back(cy);
      std::map<int, int> comp_rep;
      for (size_t k = 0; k < d.components.size(); ++k)
        comp_rep[static_cast<int>(k)] = d.components[k][0];
      std::set<int> surviving;
      for (const auto& comp : d.components)
        for (int e : comp) surviving.insert(e);
      surviving.insert(em);
      surviving.insert(fm);
      if (!circle_e) surviving.insert(e2);
      if (!circle_f) surviving.insert(f2);
      recompute_components(r, surviving);
      detail_diag::remap_framings(r, d, comp_rep);
      auto faults = validate(r);
      if (!faults.empty())
        throw input_error("r2: move produced an invalid diagram: " + faults.front());
      return r;
    }
    case DiagMove::r2_remove: {
      int xp = d.crossing_pos(mv.crossing), yp = d.crossing_pos(mv.crossing2);
      if (xp == yp) throw input_error("r2: need two distinct crossings");
      const Crossing& cx = d.crossings[xp];
      const Crossing& cy = d.crossings[yp];
      if (d.is_singular(cx.id) || d.is_singular(cy.id))
        throw input_error("r2: cannot remove singular marks");
      if (cx.sign == cy.sign) throw input_error("r2: crossings must have opposite signs");
      // the over middle and the under middle may run in either direction
      int em = -1, emA = -1, emB = -1;  // over middle: tail at emA, head at emB
      if (cx.ends[over_out_slot(cx.sign)] == cy.ends[over_in_slot(cy.sign)]) {
        em = cx.ends[over_out_slot(cx.sign)];
        emA = xp;
        emB = yp;
      } else if (cy.ends[over_out_slot(cy.sign)] == cx.ends[over_in_slot(cx.sign)]) {
        em = cy.ends[over_out_slot(cy.sign)];
        emA = yp;
        emB = xp;
      }
      int fm = -1, fmA = -1, fmB = -1;  // under middle: tail at fmA, head at fmB
      if (cx.ends[2] == cy.ends[0]) {
        fm = cx.ends[2];
        fmA = xp;
        fmB = yp;
      } else if (cy.ends[2] == cx.ends[0]) {
        fm = cy.ends[2];
        fmA = yp;
        fmB = xp;
      }
      if (em < 0 || fm < 0)
        throw input_error("r2: crossings are not joined by over/under middle edges");
      if (em == fm) throw input_error("r2: degenerate middle edges");
      bool bigon = false;
      for (const auto& face : trace_faces(d, idx)) {
        if (face.size() != 2) continue;
        std::set<int> fe{dart_turn_edge(d, face[0]), dart_turn_edge(d, face[1])};
        if (fe == std::set<int>{em, fm}) bigon = true;
      }
      if (!bigon) throw input_error("r2: middle edges do not bound a bigon");

      std::map<int, int> junction;
      const Crossing& cEA = d.crossings[emA];
      const Crossing& cEB = d.crossings[emB];
      const Crossing& cFA = d.crossings[fmA];
      const Crossing& cFB = d.crossings[fmB];
      junction[cEA.ends[over_in_slot(cEA.sign)]] = em;
      junction[em] = cEB.ends[over_out_slot(cEB.sign)];
      junction[cFA.ends[0]] = fm;
      junction[fm] = cFB.ends[2];
      std::map<int, int> comp_rep;
      for (size_t k = 0; k < d.components.size(); ++k)
        comp_rep[static_cast<int>(k)] = d.components[k][0];
      PlanarDiagram r = delete_crossings(d, {xp, yp}, junction);
      JunctionResult jr = contract_junctions(junction);
      for (auto& [k, e] : comp_rep) {
        auto it = jr.rename.find(e);
        if (it != jr.rename.end()) e = it->second;
      }
      detail_diag::remap_framings(r, d, comp_rep);
      return r;
    }
    case DiagMove::r3: {
      auto faces = trace_faces(d, idx);
      if (mv.face < 0 || mv.face >= static_cast<int>(faces.size()))
        throw input_error("r3: no such face");
      const auto& face = faces[mv.face];
      if (face.size() != 3) throw input_error("r3: face is not a triangle");
      std::array<int, 3> cps{face[0].cpos, face[1].cpos, face[2].cpos};
      if (cps[0] == cps[1] || cps[1] == cps[2] || cps[0] == cps[2])
        throw input_error("r3: degenerate triangle");
      for (int cp : cps)
        if (d.is_singular(d.crossings[cp].id))
          throw input_error("r3: triangle touches a singular mark");
      std::set<int> tri_edges;
      for (const auto& dt : face) tri_edges.insert(dart_turn_edge(d, dt));
      if (tri_edges.size() != 3) throw input_error("r3: triangle edges degenerate");
      // the move needs a strand passing over (or under) at both of its
      // triangle corners; a cyclic over/under pattern admits no slide
      bool has_constant = false;
      for (int te : tri_edges) {
        std::vector<int> parities;
        for (int cp : cps) {
          const auto& c = d.crossings[cp];
          for (int s = 0; s < 4; ++s)
            if (c.ends[s] == te) parities.push_back(s % 2);
        }
        if (parities.size() == 2 && parities[0] == parities[1]) has_constant = true;
      }
      if (!has_constant)
        throw input_error("r3: cyclic over/under pattern, move not applicable");

      PlanarDiagram r = d;
      for (int cp : cps) {
        const Crossing& c = d.crossings[cp];
        std::array<int, 4> ne{};
        for (int s = 0; s < 4; ++s) {
          int e = c.ends[s];
          int target = (s + 2) % 4;
          if (tri_edges.count(e)) {
            ne[target] = e;
            continue;
          }
          // partner: the outer edge of the same strand at the neighbouring
          // triangle crossing, reached through this strand's triangle edge
          int p = s % 2;
          int t = -1;
          for (int s2 = 0; s2 < 4; ++s2)
            if (s2 % 2 == p && tri_edges.count(c.ends[s2])) t = c.ends[s2];
          if (t < 0) throw contract_error("r3: missing triangle edge on strand");
          int other_cp = -1, other_slot = -1;
          for (int cp2 : cps) {
            if (cp2 == cp) continue;
            const auto& c2 = d.crossings[cp2];
            for (int s2 = 0; s2 < 4; ++s2)
              if (c2.ends[s2] == t) {
                other_cp = cp2;
                other_slot = s2;
              }
          }
          if (other_cp < 0) throw contract_error("r3: dangling triangle edge");
          int p2 = other_slot % 2;
          int partner = -1;
          const auto& c2 = d.crossings[other_cp];
          for (int s2 = 0; s2 < 4; ++s2)
            if (s2 % 2 == p2 && s2 != other_slot) partner = c2.ends[s2];
          ne[target] = partner;
        }
        r.crossings[cp].ends = ne;
      }
      std::set<int> surviving;
      for (const auto& comp : d.components)
        for (int e : comp) surviving.insert(e);
      std::map<int, int> comp_rep;
      for (size_t k = 0; k < d.components.size(); ++k)
        comp_rep[static_cast<int>(k)] = d.components[k][0];
      recompute_components(r, surviving);
      detail_diag::remap_framings(r, d, comp_rep);
      auto faults = validate(r);
      if (!faults.empty())
        throw input_error("r3: move produced an invalid diagram: " + faults.front());
      return r;
    }
  }
  throw contract_error("unhandled diagram move");
}

// ---------------------------------------------------------------------------
// Canonical code: minimal oriented Gauss code with signs, singular flags and
// framings over basepoint rotation and component order.

struct Passage {
  int cpos;  // crossing position in the diagram
  int slot;  // incoming slot
  int edge;  // edge walked along before entering
};

inline std::vector<Passage> component_passages(const PlanarDiagram& d, const EdgeIndex& idx,
                                               const std::vector<int>& comp) {
  std::vector<Passage> ps;
  const auto& e0 = idx.at(comp[0]);
  if (e0.uses == 0) return ps;
  for (int e : comp) {
    const auto& ee = idx.at(e);
    ps.push_back({ee.head->cpos, ee.head->slot, e});
  }
  return ps;
}

struct CanonicalCode {
  std::string bytes;
  // canonical traversal for the deterministic descending walk
  std::vector<std::vector<Passage>> walk;
  std::vector<int> component_order;

  bool operator==(const CanonicalCode& o) const { return bytes == o.bytes; }
  bool operator<(const CanonicalCode& o) const { return bytes < o.bytes; }
};

inline CanonicalCode canonical_code(const PlanarDiagram& d) {
  EdgeIndex idx = edge_index(d);
  int ncomp = static_cast<int>(d.components.size());
  std::vector<std::vector<Passage>> passages;
  for (const auto& comp : d.components)
    passages.push_back(component_passages(d, idx, comp));

  std::map<int, int> mark_order;
  for (size_t i = 0; i < d.singular_marks.size(); ++i)
    mark_order[d.singular_marks[i]] = static_cast<int>(i);

  auto encode = [&](const std::vector<int>& order, const std::vector<int>& rot,
                    std::vector<std::vector<Passage>>* walk_out) {
    std::vector<int> code;
    std::map<int, int> label;
    for (int k = 0; k < ncomp; ++k) {
      int ci = order[k];
      const auto& ps = passages[ci];
      code.push_back(-1);
      code.push_back(static_cast<int>(ps.size()));
      auto fr = d.framings.find(ci);
      code.push_back(fr == d.framings.end() ? 0 : fr->second + 1000);
      std::vector<Passage> rotated;
      for (size_t t = 0; t < ps.size(); ++t)
        rotated.push_back(ps[(t + rot[k]) % ps.size()]);
      for (const auto& p : rotated) {
        const auto& c = d.crossings[p.cpos];
        auto it = label.find(p.cpos);
        int lab;
        if (it == label.end()) {
          lab = static_cast<int>(label.size());
          label.emplace(p.cpos, lab);
        } else {
          lab = it->second;
        }
        code.push_back(lab);
        if (d.is_singular(c.id)) {
          code.push_back(9);
          code.push_back(mark_order.at(c.id));
          // the other strand enters to the right (slot+1) or left (slot+3)
          int other_in = p.slot == 0 ? over_in_slot(c.sign) : 0;
          code.push_back((other_in - p.slot + 4) % 4 == 1 ? 1 : 3);
        } else {
          code.push_back(p.slot == 0 ? 7 : 8);  // under / over
          code.push_back(c.sign > 0 ? 1 : 2);
        }
      }
      if (walk_out) (*walk_out)[k] = rotated;
    }
    return code;
  };

  std::vector<int> order(ncomp);
  for (int i = 0; i < ncomp; ++i) order[i] = i;
  std::sort(order.begin(), order.end());

  std::vector<int> best_code;
  std::vector<int> best_order, best_rot;
  do {
    std::vector<int> rot(ncomp, 0);
    while (true) {
      auto code = encode(order, rot, nullptr);
      if (best_code.empty() || code < best_code) {
        best_code = code;
        best_order = order;
        best_rot = rot;
      }
      int k = ncomp - 1;
      while (k >= 0) {
        size_t sz = std::max<size_t>(1, passages[order[k]].size());
        if (++rot[k] < static_cast<int>(sz)) break;
        rot[k] = 0;
        --k;
      }
      if (k < 0) break;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  CanonicalCode cc;
  cc.walk.resize(ncomp);
  encode(best_order, best_rot, &cc.walk);
  cc.component_order = best_order;
  std::ostringstream out;
  for (int v : best_code) out << v << ",";
  cc.bytes = out.str();
  return cc;
}

// ---------------------------------------------------------------------------
// Braid closures as planar diagrams. Strands run downwards; sigma_i^+ passes
// the strand at position i over position i+1, a positive crossing.

inline PlanarDiagram braid_closure_diagram(const BraidWord& w) {
  w.check();
  PlanarDiagram d;
  int n = w.strands;
  std::vector<int> cur(n);
  for (int i = 0; i < n; ++i) cur[i] = i;
  int next_edge = n;
  std::vector<int> first = cur;
  for (size_t t = 0; t < w.letters.size(); ++t) {
    const auto& l = w.letters[t];
    int a = l.index - 1, b = l.index;
    Crossing c;
    c.id = static_cast<int>(t);
    c.sign = l.sign;
    int leftin = cur[a], rightin = cur[b];
    int leftout = next_edge++, rightout = next_edge++;
    if (l.sign > 0) {
      // under = right strand, in at NE: CCW [NE, NW, SW, SE]
      c.ends = {rightin, leftin, leftout, rightout};
    } else {
      // under = left strand, in at NW: CCW [NW, SW, SE, NE]
      c.ends = {leftin, leftout, rightout, rightin};
    }
    cur[a] = leftout;
    cur[b] = rightout;
    d.crossings.push_back(c);
  }
  std::map<int, int> rename;
  for (int p = 0; p < n; ++p)
    if (cur[p] != first[p]) rename[cur[p]] = first[p];
  auto resolved = [&](int e) {
    while (rename.count(e)) e = rename.at(e);
    return e;
  };
  for (auto& c : d.crossings)
    for (int s = 0; s < 4; ++s) c.ends[s] = resolved(c.ends[s]);
  for (int pos : w.singular_marks) d.singular_marks.push_back(pos);
  std::set<int> all;
  for (const auto& c : d.crossings)
    for (int e : c.ends) all.insert(e);
  for (int p = 0; p < n; ++p) all.insert(resolved(first[p]));
  recompute_components(d, all);
  return d;
}

// ---------------------------------------------------------------------------
// JSON serialization with the exact interchange field names.

inline nlohmann::ordered_json diagram_to_json(const PlanarDiagram& d) {
  nlohmann::ordered_json j;
  j["crossings"] = nlohmann::ordered_json::array();
  for (const auto& c : d.crossings) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["ends"] = c.ends;
    cj["sign"] = c.sign;
    j["crossings"].push_back(cj);
  }
  j["components"] = d.components;
  j["singular"] = d.singular_marks;
  nlohmann::ordered_json fr = nlohmann::ordered_json::object();
  for (const auto& [k, f] : d.framings) fr[std::to_string(k)] = f;
  j["framing"] = fr;
  return j;
}

inline PlanarDiagram diagram_from_json(const nlohmann::json& j) {
  PlanarDiagram d;
  try {
    for (const auto& cj : j.at("crossings")) {
      Crossing c;
      c.id = cj.at("id").get<int>();
      auto ends = cj.at("ends");
      if (ends.size() != 4) throw input_error("crossing needs 4 ends");
      for (int s = 0; s < 4; ++s) c.ends[s] = ends[s].get<int>();
      c.sign = cj.at("sign").get<int>();
      if (c.sign != 1 && c.sign != -1) throw input_error("crossing sign must be ±1");
      d.crossings.push_back(c);
    }
    d.components = j.at("components").get<std::vector<std::vector<int>>>();
    if (j.contains("singular")) d.singular_marks = j.at("singular").get<std::vector<int>>();
    if (j.contains("framing"))
      for (auto it = j.at("framing").begin(); it != j.at("framing").end(); ++it)
        d.framings[std::stoi(it.key())] = it.value().get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("malformed diagram JSON: ") + e.what());
  }
  return d;
}

}  // namespace skein
