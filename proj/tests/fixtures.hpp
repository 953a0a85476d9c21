#pragma once

// Shared desk-scale systems used across the suites.

#include "netifs/measures.hpp"

namespace netifs::fixtures {

inline Similarity tr1(const Rat& ratio, const Rat& t) {
  return Similarity{ratio, SignedPerm::identity(1), Vec{t}};
}

inline Similarity tr2(const Rat& ratio, const Rat& tx, const Rat& ty) {
  return Similarity{ratio, SignedPerm::identity(2), Vec{tx, ty}};
}

// Four half-scale corner copies plus a half-scale center copy of the square.
inline IfsSystem quadrants_center() {
  return make_ifs(2, {tr2(rat(1, 2), rat(-1, 4), rat(1, 4)), tr2(rat(1, 2), rat(-1, 4), rat(-1, 4)),
                      tr2(rat(1, 2), rat(1, 4), rat(-1, 4)), tr2(rat(1, 2), rat(1, 4), rat(1, 4)),
                      tr2(rat(1, 2), rat(0), rat(0))});
}

inline SelfSimilarMeasure quadrants_center_measure() {
  return make_measure(quadrants_center(),
                      {rat(1, 8), rat(1, 8), rat(1, 8), rat(1, 8), rat(1, 2)});
}

inline SelfSimilarMeasure quadrants_center_measure_alt() {
  return make_measure(quadrants_center(),
                      {rat(1, 6), rat(1, 6), rat(1, 6), rat(1, 6), rat(1, 3)});
}

// Three third-scale copies tiling the line plus a ninth-scale copy at 0.
inline IfsSystem thirds_with_ninth() {
  return make_ifs(1, {tr1(rat(1, 3), rat(-1, 3)), tr1(rat(1, 3), rat(0)),
                      tr1(rat(1, 3), rat(1, 3)), tr1(rat(1, 9), rat(0))});
}

// Four half-scale corner copies and a third-scale center copy.
inline IfsSystem quadrants_third_center() {
  return make_ifs(2, {tr2(rat(1, 2), rat(-1, 4), rat(1, 4)), tr2(rat(1, 3), rat(0), rat(0)),
                      tr2(rat(1, 2), rat(1, 4), rat(1, 4)), tr2(rat(1, 2), rat(-1, 4), rat(-1, 4)),
                      tr2(rat(1, 2), rat(1, 4), rat(-1, 4))});
}

// Exact corner tiling of the square (open set condition holds).
inline IfsSystem corner_tiling_2d() {
  return make_ifs(2, {tr2(rat(1, 2), rat(-1, 4), rat(-1, 4)), tr2(rat(1, 2), rat(-1, 4), rat(1, 4)),
                      tr2(rat(1, 2), rat(1, 4), rat(-1, 4)), tr2(rat(1, 2), rat(1, 4), rat(1, 4))});
}

inline SelfSimilarMeasure corner_tiling_measure() {
  return make_measure(corner_tiling_2d(), {rat(1, 4), rat(1, 4), rat(1, 4), rat(1, 4)});
}

// Two half-scale copies tiling the line; the uniform measure is Lebesgue.
inline IfsSystem halves_1d() {
  return make_ifs(1, {tr1(rat(1, 2), rat(-1, 4)), tr1(rat(1, 2), rat(1, 4))});
}

inline SelfSimilarMeasure halves_measure() {
  return make_measure(halves_1d(), {rat(1, 2), rat(1, 2)});
}

// Eight corner copies plus a center copy of the 3-cube, all half scale.
inline IfsSystem corners_center_3d() {
  std::vector<Similarity> maps;
  for (int mask = 0; mask < 8; ++mask) {
    Vec t(3);
    for (int j = 0; j < 3; ++j) t[j] = ((mask >> j) & 1) ? rat(1, 4) : rat(-1, 4);
    maps.push_back(Similarity{rat(1, 2), SignedPerm::identity(3), t});
  }
  maps.push_back(Similarity{rat(1, 2), SignedPerm::identity(3), Vec(3, rat(0))});
  return make_ifs(3, maps);
}

inline SelfSimilarMeasure corners_center_3d_measure() {
  std::vector<Rat> probs(9, rat(1, 16));
  probs[8] = rat(1, 2);
  return make_measure(corners_center_3d(), probs);
}

// Halves of the line with the left copy reflected and an overlapping
// centered copy.
inline IfsSystem reflected_overlap_1d() {
  SignedPerm refl{{0}, {-1}};
  return make_ifs(1, {Similarity{rat(1, 2), refl, Vec{rat(-1, 4)}},
                      Similarity{rat(1, 2), SignedPerm::identity(1), Vec{rat(1, 4)}},
                      Similarity{rat(1, 2), SignedPerm::identity(1), Vec{rat(0)}}});
}

inline SelfSimilarMeasure reflected_overlap_measure() {
  return make_measure(reflected_overlap_1d(), {rat(1, 4), rat(1, 4), rat(1, 2)});
}

}  // namespace netifs::fixtures
