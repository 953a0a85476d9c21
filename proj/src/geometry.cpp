#include "netifs/geometry.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace netifs {

SignedPerm SignedPerm::identity(int dim) {
  SignedPerm p;
  p.perm.resize(dim);
  p.signs.assign(dim, 1);
  for (int i = 0; i < dim; ++i) p.perm[i] = i;
  return p;
}

bool SignedPerm::is_identity() const {
  for (int i = 0; i < dim(); ++i)
    if (perm[i] != i || signs[i] != 1) return false;
  return true;
}

Vec SignedPerm::apply(const Vec& x) const {
  Vec y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = signs[i] * x[perm[i]];
  return y;
}

SignedPerm SignedPerm::after(const SignedPerm& inner) const {
  SignedPerm out;
  int d = dim();
  out.perm.resize(d);
  out.signs.resize(d);
  for (int i = 0; i < d; ++i) {
    out.perm[i] = inner.perm[perm[i]];
    out.signs[i] = signs[i] * inner.signs[perm[i]];
  }
  return out;
}

SignedPerm SignedPerm::inverse() const {
  SignedPerm out;
  int d = dim();
  out.perm.resize(d);
  out.signs.resize(d);
  for (int i = 0; i < d; ++i) {
    out.perm[perm[i]] = i;
    out.signs[perm[i]] = signs[i];
  }
  return out;
}

int signed_perm_cmp(const SignedPerm& a, const SignedPerm& b) {
  if (a.perm != b.perm) return a.perm < b.perm ? -1 : 1;
  if (a.signs != b.signs) return a.signs < b.signs ? -1 : 1;
  return 0;
}

void validate_signed_perm(const SignedPerm& p, int dim) {
  if (p.dim() != dim || static_cast<int>(p.signs.size()) != dim)
    throw ParseError("rotation arrays must have length dim");
  std::vector<bool> seen(dim, false);
  for (int i = 0; i < dim; ++i) {
    int t = p.perm[i];
    if (t < 0 || t >= dim || seen[t]) throw ParseError("rotation.perm is not a permutation");
    seen[t] = true;
    if (p.signs[i] != 1 && p.signs[i] != -1) throw ParseError("rotation.signs entries must be +-1");
  }
}

Similarity Similarity::identity(int dim) {
  return Similarity{rat(1), SignedPerm::identity(dim), Vec(dim, rat(0))};
}

Vec Similarity::apply(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim()) throw DimensionMismatch("similarity applied to wrong dimension");
  Vec y = rot.apply(x);
  for (auto& c : y) c *= ratio;
  return vec_add(y, trans);
}

bool Similarity::is_identity() const {
  if (ratio != 1 || !rot.is_identity()) return false;
  for (const auto& c : trans)
    if (c != 0) return false;
  return true;
}

Similarity compose(const Similarity& f, const Similarity& g) {
  if (f.dim() != g.dim()) throw DimensionMismatch("compose: dimension mismatch");
  Similarity out;
  out.ratio = f.ratio * g.ratio;
  out.rot = f.rot.after(g.rot);
  Vec t = f.rot.apply(g.trans);
  for (auto& c : t) c *= f.ratio;
  out.trans = vec_add(t, f.trans);
  return out;
}

Similarity invert(const Similarity& f) {
  Similarity out;
  out.ratio = 1 / f.ratio;
  out.rot = f.rot.inverse();
  Vec t = out.rot.apply(f.trans);
  for (auto& c : t) c *= -out.ratio;
  out.trans = t;
  return out;
}

int similarity_cmp(const Similarity& a, const Similarity& b) {
  int c = cmp(a.ratio, b.ratio);
  if (c != 0) return c;
  c = signed_perm_cmp(a.rot, b.rot);
  if (c != 0) return c;
  return vec_cmp(a.trans, b.trans);
}

int similarity_anchor_cmp(const Similarity& a, const Similarity& b) {
  int c = vec_cmp(a.trans, b.trans);  // S(0) = trans
  if (c != 0) return c;
  c = cmp(a.ratio, b.ratio);
  if (c != 0) return c;
  return signed_perm_cmp(a.rot, b.rot);
}

Rat Box::volume() const {
  Rat v = 1;
  for (int j = 0; j < dim(); ++j) v *= hi[j] - lo[j];
  return v;
}

Rat Box::min_side() const {
  Rat m = hi[0] - lo[0];
  for (int j = 1; j < dim(); ++j) m = std::min(m, Rat(hi[j] - lo[j]));
  return m;
}

bool Box::contains_point(const Vec& p) const {
  for (int j = 0; j < dim(); ++j)
    if (p[j] < lo[j] || p[j] > hi[j]) return false;
  return true;
}

bool Box::strictly_contains_point(const Vec& p) const {
  for (int j = 0; j < dim(); ++j)
    if (p[j] <= lo[j] || p[j] >= hi[j]) return false;
  return true;
}

bool Box::contains_box(const Box& b) const {
  for (int j = 0; j < dim(); ++j)
    if (b.lo[j] < lo[j] || b.hi[j] > hi[j]) return false;
  return true;
}

int box_cmp(const Box& a, const Box& b) {
  int c = vec_cmp(a.lo, b.lo);
  if (c != 0) return c;
  return vec_cmp(a.hi, b.hi);
}

Box cube_box(int dim, const Rat& lo, const Rat& hi) {
  return Box{Vec(dim, lo), Vec(dim, hi)};
}

Box unit_cube(int dim) { return cube_box(dim, rat(-1, 2), rat(1, 2)); }

std::optional<Box> box_intersection(const Box& a, const Box& b, bool allow_degenerate) {
  Box out;
  out.lo.resize(a.dim());
  out.hi.resize(a.dim());
  for (int j = 0; j < a.dim(); ++j) {
    out.lo[j] = std::max(a.lo[j], b.lo[j]);
    out.hi[j] = std::min(a.hi[j], b.hi[j]);
    if (out.lo[j] > out.hi[j]) return std::nullopt;
    if (!allow_degenerate && out.lo[j] == out.hi[j]) return std::nullopt;
  }
  return out;
}

bool open_overlap(const Box& a, const Box& b) {
  for (int j = 0; j < a.dim(); ++j)
    if (std::max(a.lo[j], b.lo[j]) >= std::min(a.hi[j], b.hi[j])) return false;
  return true;
}

Box image_box(const Similarity& f, const Box& b) {
  Vec c1 = f.apply(b.lo);
  Vec c2 = f.apply(b.hi);
  Box out;
  out.lo.resize(b.dim());
  out.hi.resize(b.dim());
  for (int j = 0; j < b.dim(); ++j) {
    out.lo[j] = std::min(c1[j], c2[j]);
    out.hi[j] = std::max(c1[j], c2[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Region canonicalization: recursive slab decomposition. Along the first
// axis the union is cut at every breakpoint; slabs whose (recursively
// canonical) cross-sections coincide are merged back. The result is a unique
// normal form for the union, so region equality is cell-list equality.

namespace {

using Interval = std::pair<Rat, Rat>;
using SuffixCell = std::vector<Interval>;  // per-axis intervals, axes [axis..dim)

std::vector<SuffixCell> canon_rec(const std::vector<const Box*>& boxes, int axis, int dim) {
  if (axis == dim) return {SuffixCell{}};
  std::vector<Rat> breaks;
  breaks.reserve(boxes.size() * 2);
  for (const Box* b : boxes) {
    breaks.push_back(b->lo[axis]);
    breaks.push_back(b->hi[axis]);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  struct Slab {
    Rat lo, hi;
    std::vector<SuffixCell> cross;
  };
  std::vector<Slab> slabs;
  std::vector<const Box*> sub;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    const Rat& u = breaks[k];
    const Rat& v = breaks[k + 1];
    sub.clear();
    for (const Box* b : boxes)
      if (b->lo[axis] <= u && v <= b->hi[axis]) sub.push_back(b);
    if (sub.empty()) continue;
    std::vector<SuffixCell> cross = canon_rec(sub, axis + 1, dim);
    if (!slabs.empty() && slabs.back().hi == u && slabs.back().cross == cross) {
      slabs.back().hi = v;
    } else {
      slabs.push_back(Slab{u, v, std::move(cross)});
    }
  }
  std::vector<SuffixCell> out;
  for (auto& s : slabs) {
    for (auto& c : s.cross) {
      SuffixCell cell;
      cell.reserve(dim - axis);
      cell.emplace_back(s.lo, s.hi);
      cell.insert(cell.end(), c.begin(), c.end());
      out.push_back(std::move(cell));
    }
  }
  return out;
}

}  // namespace

Region make_region(int dim, std::vector<Box> boxes) {
  Region r;
  r.dimension = dim;
  for (const Box& b : boxes) {
    if (b.dim() != dim) throw DimensionMismatch("region cell of wrong dimension");
    for (int j = 0; j < dim; ++j)
      if (b.lo[j] >= b.hi[j]) throw std::invalid_argument("degenerate box in region");
  }
  if (boxes.empty()) return r;
  std::vector<const Box*> ptrs;
  ptrs.reserve(boxes.size());
  for (const Box& b : boxes) ptrs.push_back(&b);
  for (SuffixCell& c : canon_rec(ptrs, 0, dim)) {
    Box cell;
    cell.lo.resize(dim);
    cell.hi.resize(dim);
    for (int j = 0; j < dim; ++j) {
      cell.lo[j] = std::move(c[j].first);
      cell.hi[j] = std::move(c[j].second);
    }
    r.cells.push_back(std::move(cell));
  }
  return r;
}

Region empty_region(int dim) { return Region{dim, {}}; }

Region box_region(const Box& b) { return make_region(b.dim(), {b}); }

Rat Region::volume() const {
  Rat v = 0;
  for (const Box& c : cells) v += c.volume();
  return v;
}

bool Region::contains_point(const Vec& p) const {
  for (const Box& c : cells)
    if (c.contains_point(p)) return true;
  return false;
}

namespace {

// Guillotine split: closed remainder pieces of `cell` minus `cut`, dropping
// measure-zero slivers (regularized difference).
void subtract_box_into(const Box& cell, const Box& cut, std::vector<Box>& out) {
  auto inter = box_intersection(cell, cut);
  if (!inter) {
    out.push_back(cell);
    return;
  }
  Box rest = cell;
  for (int j = 0; j < cell.dim(); ++j) {
    if (rest.lo[j] < inter->lo[j]) {
      Box piece = rest;
      piece.hi[j] = inter->lo[j];
      out.push_back(piece);
      rest.lo[j] = inter->lo[j];
    }
    if (inter->hi[j] < rest.hi[j]) {
      Box piece = rest;
      piece.lo[j] = inter->hi[j];
      out.push_back(piece);
      rest.hi[j] = inter->hi[j];
    }
  }
}

std::vector<Box> subtract_boxes(std::vector<Box> cells, const std::vector<Box>& cuts) {
  for (const Box& cut : cuts) {
    std::vector<Box> next;
    for (const Box& cell : cells) subtract_box_into(cell, cut, next);
    cells = std::move(next);
    if (cells.empty()) break;
  }
  return cells;
}

}  // namespace

bool Region::contains_box(const Box& b) const {
  return subtract_boxes({b}, cells).empty();
}

bool Region::operator==(const Region& o) const {
  return dimension == o.dimension && cells == o.cells;
}

Box Region::bounding_box() const {
  assert(!cells.empty());
  Box out = cells[0];
  for (const Box& c : cells)
    for (int j = 0; j < dimension; ++j) {
      out.lo[j] = std::min(out.lo[j], c.lo[j]);
      out.hi[j] = std::max(out.hi[j], c.hi[j]);
    }
  return out;
}

int region_cmp(const Region& a, const Region& b) {
  size_t n = std::min(a.cells.size(), b.cells.size());
  for (size_t i = 0; i < n; ++i) {
    int c = box_cmp(a.cells[i], b.cells[i]);
    if (c != 0) return c;
  }
  if (a.cells.size() != b.cells.size()) return a.cells.size() < b.cells.size() ? -1 : 1;
  return 0;
}

Region region_union(const Region& a, const Region& b) {
  if (a.dimension != b.dimension) throw DimensionMismatch("region_union");
  std::vector<Box> boxes = a.cells;
  boxes.insert(boxes.end(), b.cells.begin(), b.cells.end());
  return make_region(a.dimension, std::move(boxes));
}

Region region_intersect(const Region& a, const Region& b) {
  if (a.dimension != b.dimension) throw DimensionMismatch("region_intersect");
  std::vector<Box> boxes;
  for (const Box& x : a.cells)
    for (const Box& y : b.cells)
      if (auto i = box_intersection(x, y)) boxes.push_back(*i);
  return make_region(a.dimension, std::move(boxes));
}

Region region_subtract(const Region& a, const Region& b) {
  if (a.dimension != b.dimension) throw DimensionMismatch("region_subtract");
  return make_region(a.dimension, subtract_boxes(a.cells, b.cells));
}

Region region_image(const Similarity& f, const Region& r) {
  std::vector<Box> boxes;
  boxes.reserve(r.cells.size());
  for (const Box& c : r.cells) boxes.push_back(image_box(f, c));
  return make_region(r.dimension, std::move(boxes));
}

Region region_from_signature(int dim, const std::vector<Box>& closed_in,
                             const std::vector<Box>& open_out) {
  if (closed_in.empty()) throw std::invalid_argument("region_from_signature: no closed boxes");
  Box base = closed_in[0];
  for (const Box& b : closed_in) {
    auto i = box_intersection(base, b);
    if (!i) return empty_region(dim);
    base = *i;
  }
  // Arrangement breakpoints per axis, clipped to the base intersection.
  std::vector<std::vector<Rat>> breaks(dim);
  for (int j = 0; j < dim; ++j) {
    breaks[j].push_back(base.lo[j]);
    breaks[j].push_back(base.hi[j]);
    for (const Box& b : open_out) {
      if (b.lo[j] > base.lo[j] && b.lo[j] < base.hi[j]) breaks[j].push_back(b.lo[j]);
      if (b.hi[j] > base.lo[j] && b.hi[j] < base.hi[j]) breaks[j].push_back(b.hi[j]);
    }
    std::sort(breaks[j].begin(), breaks[j].end());
    breaks[j].erase(std::unique(breaks[j].begin(), breaks[j].end()), breaks[j].end());
  }
  std::vector<Box> kept;
  std::vector<size_t> idx(dim, 0);
  Box cell;
  cell.lo.resize(dim);
  cell.hi.resize(dim);
  // Walk the grid; a cell survives iff no open box covers its interior.
  while (true) {
    bool removed = false;
    for (int j = 0; j < dim; ++j) {
      cell.lo[j] = breaks[j][idx[j]];
      cell.hi[j] = breaks[j][idx[j] + 1];
    }
    for (const Box& b : open_out) {
      if (open_overlap(b, cell)) {
        removed = true;
        break;
      }
    }
    if (!removed) kept.push_back(cell);
    int j = 0;
    for (; j < dim; ++j) {
      if (++idx[j] + 1 < breaks[j].size()) break;
      idx[j] = 0;
    }
    if (j == dim) break;
  }
  return make_region(dim, std::move(kept));
}

// ---------------------------------------------------------------------------
// Inscribed cube.

namespace {

std::vector<std::vector<Rat>> region_breakpoints(const Region& r) {
  std::vector<std::vector<Rat>> breaks(r.dimension);
  for (int j = 0; j < r.dimension; ++j) {
    for (const Box& c : r.cells) {
      breaks[j].push_back(c.lo[j]);
      breaks[j].push_back(c.hi[j]);
    }
    std::sort(breaks[j].begin(), breaks[j].end());
    breaks[j].erase(std::unique(breaks[j].begin(), breaks[j].end()), breaks[j].end());
  }
  return breaks;
}

// Uniform-grid detection: every gap on every axis equals the same unit.
std::optional<Rat> uniform_unit(const std::vector<std::vector<Rat>>& breaks) {
  std::optional<Rat> unit;
  for (const auto& bs : breaks) {
    for (size_t k = 0; k + 1 < bs.size(); ++k) {
      Rat gap = bs[k + 1] - bs[k];
      if (!unit)
        unit = gap;
      else if (*unit != gap)
        return std::nullopt;
    }
  }
  return unit;
}

// Largest full block of occupied grid cells; exact because a cube of side
// s > k units must span a full (k+1)-cell block. Returns (side in units,
// lex-min anchor grid index).
struct BlockResult {
  int side = 0;
  std::vector<int> anchor;
};

BlockResult largest_block(const std::vector<std::vector<Rat>>& breaks, const Region& r) {
  int dim = r.dimension;
  std::vector<int> n(dim);
  long total = 1;
  for (int j = 0; j < dim; ++j) {
    n[j] = static_cast<int>(breaks[j].size()) - 1;
    total *= n[j];
  }
  auto flat = [&](const std::vector<int>& v) {
    long f = 0;
    for (int j = dim - 1; j >= 0; --j) f = f * n[j] + v[j];
    return f;
  };
  std::vector<char> occ(total, 0);
  std::vector<int> v(dim, 0);
  {
    Box cell;
    cell.lo.resize(dim);
    cell.hi.resize(dim);
    while (true) {
      for (int j = 0; j < dim; ++j) {
        cell.lo[j] = breaks[j][v[j]];
        cell.hi[j] = breaks[j][v[j] + 1];
      }
      for (const Box& c : r.cells)
        if (c.contains_box(cell)) {
          occ[flat(v)] = 1;
          break;
        }
      int j = 0;
      for (; j < dim; ++j) {
        if (++v[j] < n[j]) break;
        v[j] = 0;
      }
      if (j == dim) break;
    }
  }
  // dp[v] = side of the largest cube of occupied cells whose max-corner cell
  // is v; the d-dimensional analogue of the classic max-square recurrence.
  std::vector<int> dp(total, 0);
  BlockResult best;
  v.assign(dim, 0);
  std::vector<int> w(dim);
  while (true) {
    long fv = flat(v);
    if (occ[fv]) {
      int m = std::numeric_limits<int>::max();
      bool boundary = false;
      for (int j = 0; j < dim; ++j)
        if (v[j] == 0) boundary = true;
      if (boundary) {
        m = 0;
      } else {
        // min over the 2^d - 1 offset predecessors
        for (long mask = 1; mask < (1L << dim) && m > 0; ++mask) {
          for (int j = 0; j < dim; ++j) w[j] = v[j] - ((mask >> j) & 1);
          m = std::min(m, dp[flat(w)]);
        }
      }
      dp[fv] = m + 1;
      if (dp[fv] > best.side) {
        best.side = dp[fv];
        best.anchor.resize(dim);
        for (int j = 0; j < dim; ++j) best.anchor[j] = v[j] - dp[fv] + 1;
      }
    }
    int j = dim - 1;  // iterate with axis 0 slowest so ties keep lex-min anchors
    for (; j >= 0; --j) {
      if (++v[j] < n[j]) break;
      v[j] = 0;
    }
    if (j < 0) break;
  }
  // The first maximal block found is lex-min in (anchor[0], ..., anchor[d-1])
  // only if iteration order matches; re-scan to be exact.
  if (best.side > 0) {
    std::vector<int> bestAnchor = best.anchor;
    v.assign(dim, 0);
    bool first = true;
    while (true) {
      long fv = flat(v);
      if (dp[fv] >= best.side) {
        std::vector<int> a(dim);
        for (int j = 0; j < dim; ++j) a[j] = v[j] - best.side + 1;
        if (first || a < bestAnchor) {
          bestAnchor = a;
          first = false;
        }
      }
      int j = dim - 1;
      for (; j >= 0; --j) {
        if (++v[j] < n[j]) break;
        v[j] = 0;
      }
      if (j < 0) break;
    }
    best.anchor = bestAnchor;
  }
  return best;
}

bool cube_fits_at(const Region& r, const Vec& e, const Rat& side) {
  Box cube;
  cube.lo = e;
  cube.hi.resize(e.size());
  for (size_t j = 0; j < e.size(); ++j) cube.hi[j] = e[j] + side;
  return r.contains_box(cube);
}

// Anchor-space coordinates where feasibility can change: every breakpoint and
// every breakpoint shifted left by the side length.
std::vector<std::vector<Rat>> anchor_grid(const std::vector<std::vector<Rat>>& breaks,
                                          const Rat& side) {
  std::vector<std::vector<Rat>> grid(breaks.size());
  for (size_t j = 0; j < breaks.size(); ++j) {
    for (const Rat& b : breaks[j]) {
      grid[j].push_back(b);
      grid[j].push_back(b - side);
    }
    std::sort(grid[j].begin(), grid[j].end());
    grid[j].erase(std::unique(grid[j].begin(), grid[j].end()), grid[j].end());
  }
  return grid;
}

bool side_feasible(const Region& r, const std::vector<std::vector<Rat>>& breaks, const Rat& side) {
  // A nonempty anchor set contains its lex-min, whose coordinates all lie on
  // the anchor grid, so testing grid vertices is complete.
  auto grid = anchor_grid(breaks, side);
  int dim = r.dimension;
  std::vector<size_t> idx(dim, 0);
  Vec e(dim);
  while (true) {
    for (int j = 0; j < dim; ++j) e[j] = grid[j][idx[j]];
    if (cube_fits_at(r, e, side)) return true;
    int j = 0;
    for (; j < dim; ++j) {
      if (++idx[j] < grid[j].size()) break;
      idx[j] = 0;
    }
    if (j == dim) break;
  }
  return false;
}

// Lex-min feasible anchor at the optimal side: minimize coordinate 0 over
// feasible grid vertices, then coordinate 1 subject to that, and so on.
// Sound because the feasible set is a union of closed boxes whose corners
// lie on the anchor grid.
Vec lexmin_anchor(const Region& r, const std::vector<std::vector<Rat>>& breaks, const Rat& side) {
  auto grid = anchor_grid(breaks, side);
  int dim = r.dimension;
  Vec fixed;
  for (int axis = 0; axis < dim; ++axis) {
    bool found = false;
    Rat bestc;
    for (const Rat& c : grid[axis]) {
      // test whether some vertex with prefix (fixed..., c) is feasible
      std::vector<size_t> idx(dim - axis - 1, 0);
      Vec e = fixed;
      e.push_back(c);
      e.resize(dim);
      while (true) {
        for (int j = axis + 1; j < dim; ++j) e[j] = grid[j][idx[j - axis - 1]];
        if (cube_fits_at(r, e, side)) {
          found = true;
          bestc = c;
          break;
        }
        if (axis + 1 == dim) break;
        int j = 0;
        for (; j < dim - axis - 1; ++j) {
          if (++idx[j] < grid[axis + 1 + j].size()) break;
          idx[j] = 0;
        }
        if (j == dim - axis - 1) break;
      }
      if (found) break;
    }
    assert(found);
    fixed.push_back(bestc);
  }
  return fixed;
}

}  // namespace

InscribedCube inscribed_cube(const Region& r) {
  if (r.empty()) throw std::invalid_argument("inscribed_cube of empty region");
  auto breaks = region_breakpoints(r);
  if (auto unit = uniform_unit(breaks)) {
    BlockResult blk = largest_block(breaks, r);
    assert(blk.side > 0);
    Rat side = *unit * blk.side;
    Vec anchor(r.dimension);
    for (int j = 0; j < r.dimension; ++j) anchor[j] = breaks[j][blk.anchor[j]];
    return InscribedCube{side, anchor};
  }
  // candidate sides: positive same-axis breakpoint differences
  std::set<Rat> cands;
  for (const auto& bs : breaks)
    for (size_t a = 0; a < bs.size(); ++a)
      for (size_t b = a + 1; b < bs.size(); ++b) cands.insert(bs[b] - bs[a]);
  std::vector<Rat> sides(cands.begin(), cands.end());
  // binary search the largest feasible side
  size_t lo = 0, hi = sides.size();  // feasible prefix [0, hi)
  if (!side_feasible(r, breaks, sides[0]))
    throw std::logic_error("inscribed_cube: no feasible side");  // unreachable for nonempty regions
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (side_feasible(r, breaks, sides[mid]))
      lo = mid;
    else
      hi = mid;
  }
  Rat side = sides[lo];
  return InscribedCube{side, lexmin_anchor(r, breaks, side)};
}

}  // namespace netifs
