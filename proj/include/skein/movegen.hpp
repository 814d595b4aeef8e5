#pragma once

// Enumeration of applicable Reidemeister moves, used to generate isotopy
// corpora and transversal loops.

#include <random>

#include "skein/diagram.hpp"

namespace skein {

inline std::vector<DiagMove> applicable_moves(const PlanarDiagram& d,
                                              bool include_inserts = true) {
  std::vector<DiagMove> out;
  EdgeIndex idx = edge_index(d);
  if (include_inserts) {
    for (const auto& [e, ee] : idx) {
      for (int s : {+1, -1}) {
        DiagMove mv;
        mv.kind = DiagMove::r1_insert;
        mv.edge = e;
        mv.sign = s;
        out.push_back(mv);
      }
    }
  }
  for (const auto& c : d.crossings) {
    if (d.is_singular(c.id)) continue;
    int oi = over_in_slot(c.sign), oo = over_out_slot(c.sign);
    if (c.ends[2] == c.ends[oi] || c.ends[oo] == c.ends[0]) {
      DiagMove mv;
      mv.kind = DiagMove::r1_remove;
      mv.crossing = c.id;
      out.push_back(mv);
    }
  }
  auto faces = trace_faces(d, idx);
  if (include_inserts) {
    for (const auto& face : faces) {
      std::set<int> edges;
      for (const auto& dt : face) edges.insert(dart_turn_edge(d, dt));
      for (int e : edges)
        for (int f : edges) {
          if (e >= f) continue;
          for (bool over : {true, false}) {
            DiagMove mv;
            mv.kind = DiagMove::r2_insert;
            mv.edge = e;
            mv.edge2 = f;
            mv.over = over;
            // applicability confirmed by construction later
            try {
              apply_move(d, mv);
              out.push_back(mv);
            } catch (const input_error&) {
            }
          }
        }
    }
  }
  // bigon removals
  for (const auto& face : faces) {
    if (face.size() != 2) continue;
    int c1 = d.crossings[face[0].cpos].id;
    int c2 = d.crossings[face[1].cpos].id;
    if (c1 == c2) continue;
    DiagMove mv;
    mv.kind = DiagMove::r2_remove;
    mv.crossing = c1;
    mv.crossing2 = c2;
    try {
      apply_move(d, mv);
      out.push_back(mv);
    } catch (const input_error&) {
    }
  }
  for (size_t f = 0; f < faces.size(); ++f) {
    if (faces[f].size() != 3) continue;
    DiagMove mv;
    mv.kind = DiagMove::r3;
    mv.face = static_cast<int>(f);
    try {
      apply_move(d, mv);
      out.push_back(mv);
    } catch (const input_error&) {
    }
  }
  return out;
}

// A random sequence of valid moves applied to d; returns the intermediate
// diagrams (d excluded) and the moves taken. Inserting moves are skipped
// when they would push the diagram above max_crossings.
inline std::pair<std::vector<PlanarDiagram>, std::vector<DiagMove>> random_move_walk(
    const PlanarDiagram& d, std::mt19937& rng, int steps, int max_crossings = 12) {
  std::vector<PlanarDiagram> states;
  std::vector<DiagMove> taken;
  PlanarDiagram cur = d;
  for (int i = 0; i < steps; ++i) {
    int ncross = static_cast<int>(cur.crossings.size());
    auto all = applicable_moves(cur, ncross < max_crossings);
    std::vector<DiagMove> moves;
    for (const auto& mv : all) {
      if (mv.kind == DiagMove::r1_insert && ncross + 1 > max_crossings) continue;
      if (mv.kind == DiagMove::r2_insert && ncross + 2 > max_crossings) continue;
      moves.push_back(mv);
    }
    if (moves.empty()) break;
    std::uniform_int_distribution<size_t> pick(0, moves.size() - 1);
    const auto& mv = moves[pick(rng)];
    cur = apply_move(cur, mv);
    states.push_back(cur);
    taken.push_back(mv);
  }
  return {states, taken};
}

}  // namespace skein
