#pragma once

#include <optional>
#include <vector>

#include "netifs/rational.hpp"

namespace netifs {

struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Orthogonal map y[i] = signs[i] * x[perm[i]]. These are exactly the
// orthogonal maps fixing [-1/2,1/2]^d, so all geometry stays axis-aligned.
struct SignedPerm {
  std::vector<int> perm;
  std::vector<int> signs;  // each +1 or -1

  static SignedPerm identity(int dim);
  bool is_identity() const;
  int dim() const { return static_cast<int>(perm.size()); }
  Vec apply(const Vec& x) const;
  SignedPerm after(const SignedPerm& inner) const;  // this ∘ inner
  SignedPerm inverse() const;

  bool operator==(const SignedPerm& o) const { return perm == o.perm && signs == o.signs; }
  bool operator!=(const SignedPerm& o) const { return !(*this == o); }
};

int signed_perm_cmp(const SignedPerm& a, const SignedPerm& b);
void validate_signed_perm(const SignedPerm& p, int dim);

// x -> ratio * rot(x) + trans, ratio > 0. IFS members have ratio < 1;
// neighbor maps may have ratio >= 1.
struct Similarity {
  Rat ratio;
  SignedPerm rot;
  Vec trans;

  static Similarity identity(int dim);
  int dim() const { return static_cast<int>(trans.size()); }
  Vec apply(const Vec& x) const;
  bool is_identity() const;

  bool operator==(const Similarity& o) const {
    return ratio == o.ratio && rot == o.rot && trans == o.trans;
  }
  bool operator!=(const Similarity& o) const { return !(*this == o); }
};

Similarity compose(const Similarity& f, const Similarity& g);  // f ∘ g
Similarity invert(const Similarity& f);

// Canonical order: (ratio, rot, trans).
int similarity_cmp(const Similarity& a, const Similarity& b);
// Matrix order: (image of 0, then ratio, rot) — the lexicographic-S(0) rule.
int similarity_anchor_cmp(const Similarity& a, const Similarity& b);

// Closed product of intervals [lo_j, hi_j], lo_j < hi_j on every axis.
struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  Rat volume() const;
  Rat min_side() const;
  bool contains_point(const Vec& p) const;          // closed membership
  bool strictly_contains_point(const Vec& p) const; // open-interior membership
  bool contains_box(const Box& b) const;
  bool operator==(const Box& o) const { return lo == o.lo && hi == o.hi; }
};

int box_cmp(const Box& a, const Box& b);
Box cube_box(int dim, const Rat& lo, const Rat& hi);
// The standard domain [-1/2,1/2]^d.
Box unit_cube(int dim);

// Closed intersection; nullopt when empty or degenerate unless
// allow_degenerate, in which case flat boxes (lo_j == hi_j) are returned.
std::optional<Box> box_intersection(const Box& a, const Box& b, bool allow_degenerate = false);
// Open interiors intersect (strict overlap on every axis).
bool open_overlap(const Box& a, const Box& b);

Box image_box(const Similarity& f, const Box& b);

// Finite union of closed boxes with pairwise disjoint interiors, held in a
// canonical slab decomposition so equality is plain cell-list equality.
struct Region {
  int dimension = 0;
  std::vector<Box> cells;  // canonical order

  bool empty() const { return cells.empty(); }
  Rat volume() const;
  bool contains_point(const Vec& p) const;
  bool contains_box(const Box& b) const;
  bool operator==(const Region& o) const;
  bool operator!=(const Region& o) const { return !(*this == o); }
  Box bounding_box() const;  // requires nonempty
};

int region_cmp(const Region& a, const Region& b);

Region make_region(int dim, std::vector<Box> boxes);  // canonicalizes a union
Region empty_region(int dim);
Region box_region(const Box& b);

Region region_union(const Region& a, const Region& b);
Region region_intersect(const Region& a, const Region& b);
// Regularized difference: closure of a \ b (subtracting keeps shared faces).
Region region_subtract(const Region& a, const Region& b);
// Image under a similarity (axis-aligned, exact).
Region region_image(const Similarity& f, const Region& r);

// (∩ closed_in) \ (∪ open interiors of open_out), on the arrangement grid of
// all input coordinates. Boundary faces of removed open boxes are kept.
Region region_from_signature(int dim, const std::vector<Box>& closed_in,
                             const std::vector<Box>& open_out);

struct InscribedCube {
  Rat side;
  Vec anchor;  // lexicographically smallest e with [e, e+side]^d ⊆ region
};

// Largest axis-aligned cube inside the region. Uniform grids take the
// largest-full-block dynamic program; otherwise the side is binary-searched
// over the finite set of same-axis breakpoint differences with an exact
// feasibility sweep.
InscribedCube inscribed_cube(const Region& r);

}  // namespace netifs
