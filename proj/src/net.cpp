#include "netifs/net.hpp"

#include <algorithm>
#include <cassert>

namespace netifs {

Similarity NetInterval::norm_map() const {
  return Similarity{size, SignedPerm::identity(region.dimension), anchor};
}

namespace {

Similarity normalize_by(const Rat& size, const Vec& anchor, const Similarity& s) {
  // T_Δ^{-1} ∘ s with T_Δ = size·x + anchor
  Similarity out;
  out.ratio = s.ratio / size;
  out.rot = s.rot;
  out.trans = vec_scale(1 / size, vec_sub(s.trans, anchor));
  return out;
}

Region normalize_region(const Rat& size, const Vec& anchor, const Region& r) {
  std::vector<Box> cells;
  cells.reserve(r.cells.size());
  Rat inv = 1 / size;
  for (const Box& c : r.cells) {
    Box b;
    b.lo = vec_scale(inv, vec_sub(c.lo, anchor));
    b.hi = vec_scale(inv, vec_sub(c.hi, anchor));
    cells.push_back(std::move(b));
  }
  // scaling by a positive factor preserves the canonical slab form
  Region out;
  out.dimension = r.dimension;
  out.cells = std::move(cells);
  return out;
}

std::vector<Similarity> dedup_sorted_maps(std::vector<Similarity> maps,
                                          int (*cmpfn)(const Similarity&, const Similarity&)) {
  std::sort(maps.begin(), maps.end(),
            [&](const Similarity& a, const Similarity& b) { return cmpfn(a, b) < 0; });
  maps.erase(std::unique(maps.begin(), maps.end()), maps.end());
  return maps;
}

}  // namespace

std::vector<Similarity> neighbor_set(const NetInterval& n) {
  std::vector<Similarity> maps;
  maps.reserve(n.cover.size());
  for (const Word& w : n.cover) maps.push_back(normalize_by(n.size, n.anchor, w.map));
  return dedup_sorted_maps(std::move(maps), similarity_cmp);
}

bool NetTypeKey::operator<(const NetTypeKey& o) const {
  int c = region_cmp(normalized, o.normalized);
  if (c != 0) return c < 0;
  size_t n = std::min(neighbors.size(), o.neighbors.size());
  for (size_t i = 0; i < n; ++i) {
    int s = similarity_cmp(neighbors[i], o.neighbors[i]);
    if (s != 0) return s < 0;
  }
  return neighbors.size() < o.neighbors.size();
}

NetTypeKey type_of(const NetInterval& n) {
  return NetTypeKey{normalize_region(n.size, n.anchor, n.region), neighbor_set(n)};
}

NetTypeKey root_type(int dim) {
  NetTypeKey key;
  key.normalized = box_region(cube_box(dim, rat(0), rat(1)));
  Similarity t{rat(1), SignedPerm::identity(dim), Vec(dim, rat(1, 2))};
  key.neighbors = {t};
  return key;
}

// ---------------------------------------------------------------------------
// Arrangement sweep.

namespace {

struct SweepState {
  int dim;
  const std::vector<Box>* boxes;
  const Region* window;
  std::map<std::vector<int>, std::vector<Box>> groups;
};

void sweep(SweepState& st, int axis, Box& cell, std::vector<int>& active,
           std::vector<int>& active_win) {
  if (axis == st.dim) {
    if (st.window && active_win.empty()) return;
    if (active.empty()) return;
    st.groups[active].push_back(cell);
    return;
  }
  std::vector<Rat> breaks;
  for (int i : active) {
    breaks.push_back((*st.boxes)[i].lo[axis]);
    breaks.push_back((*st.boxes)[i].hi[axis]);
  }
  if (st.window)
    for (int i : active_win) {
      breaks.push_back(st.window->cells[i].lo[axis]);
      breaks.push_back(st.window->cells[i].hi[axis]);
    }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  std::vector<int> sub, sub_win;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    const Rat& u = breaks[k];
    const Rat& v = breaks[k + 1];
    sub.clear();
    for (int i : active)
      if ((*st.boxes)[i].lo[axis] <= u && v <= (*st.boxes)[i].hi[axis]) sub.push_back(i);
    if (sub.empty()) continue;
    sub_win.clear();
    if (st.window) {
      for (int i : active_win)
        if (st.window->cells[i].lo[axis] <= u && v <= st.window->cells[i].hi[axis])
          sub_win.push_back(i);
      if (sub_win.empty()) continue;
    }
    cell.lo[axis] = u;
    cell.hi[axis] = v;
    sweep(st, axis + 1, cell, sub, sub_win);
  }
}

}  // namespace

std::vector<SignatureClass> signature_classes(int dim, const std::vector<Box>& boxes,
                                              const Region* window) {
  SweepState st;
  st.dim = dim;
  st.boxes = &boxes;
  st.window = window;
  std::vector<int> active(boxes.size());
  for (size_t i = 0; i < boxes.size(); ++i) active[i] = static_cast<int>(i);
  std::vector<int> active_win;
  if (window)
    for (size_t i = 0; i < window->cells.size(); ++i) active_win.push_back(static_cast<int>(i));
  Box cell;
  cell.lo.resize(dim);
  cell.hi.resize(dim);
  sweep(st, 0, cell, active, active_win);
  std::vector<SignatureClass> out;
  out.reserve(st.groups.size());
  for (auto& [sig, cells] : st.groups) out.push_back(SignatureClass{sig, std::move(cells)});
  return out;
}

// ---------------------------------------------------------------------------
// Global enumeration.

namespace {

NetInterval build_net_interval(const Rat& alpha, Region region, std::vector<Word> cover) {
  NetInterval n;
  n.level = alpha;
  n.region = std::move(region);
  n.cover = std::move(cover);
  InscribedCube ic = inscribed_cube(n.region);
  n.size = ic.side;
  n.anchor = ic.anchor;
  return n;
}

Region depth_cover_region(const IfsSystem& sys, int depth) {
  std::vector<Word> words{sys.empty_word()};
  for (int level = 0; level < depth; ++level) {
    std::vector<Word> next;
    next.reserve(words.size() * sys.count());
    for (const Word& w : words)
      for (int j = 0; j < sys.count(); ++j) next.push_back(sys.extend(w, j));
    words = std::move(next);
  }
  std::vector<Box> boxes;
  boxes.reserve(words.size());
  for (const Word& w : words) boxes.push_back(image_box(w.map, sys.domain()));
  return make_region(sys.dim, std::move(boxes));
}

}  // namespace

NetEnumeration net_intervals_at(const IfsSystem& sys, const Rat& alpha,
                                const EnumerateOptions& opts) {
  std::vector<Word> words = generation_words(sys, alpha);
  std::vector<Box> boxes;
  boxes.reserve(words.size());
  for (const Word& w : words) boxes.push_back(image_box(w.map, sys.domain()));

  NetEnumeration out;
  out.level = alpha;
  ValidationReport rep = validate(sys);
  std::optional<Region> k_cover;
  if (!rep.full_support) {
    out.k_filter_approximate = true;
    k_cover = depth_cover_region(sys, opts.k_cover_depth);
  }
  for (SignatureClass& cls : signature_classes(sys.dim, boxes)) {
    Region region = make_region(sys.dim, std::move(cls.cells));
    if (k_cover && region_intersect(region, *k_cover).volume() == 0) continue;
    std::vector<Word> cover;
    cover.reserve(cls.signature.size());
    for (int i : cls.signature) cover.push_back(words[i]);
    out.intervals.push_back(build_net_interval(alpha, std::move(region), std::move(cover)));
  }
  std::sort(out.intervals.begin(), out.intervals.end(),
            [](const NetInterval& a, const NetInterval& b) {
              return region_cmp(a.region, b.region) < 0;
            });
  return out;
}

std::vector<const NetInterval*> containing_intervals(const NetEnumeration& nets, const Vec& p) {
  std::vector<const NetInterval*> out;
  for (const NetInterval& n : nets.intervals)
    if (n.region.contains_point(p)) out.push_back(&n);
  std::sort(out.begin(), out.end(), [](const NetInterval* a, const NetInterval* b) {
    int c = vec_cmp(a->anchor, b->anchor);
    if (c != 0) return c < 0;
    return region_cmp(a->region, b->region) < 0;
  });
  return out;
}

std::vector<std::pair<NetInterval, ChildCertificate>> children(const IfsSystem& sys,
                                                               const NetInterval& n,
                                                               const Rat& alpha_child,
                                                               const EnumerateOptions& opts) {
  if (alpha_child >= n.level) throw ValidationError("child level must be finer than the parent's");
  NetEnumeration fine = net_intervals_at(sys, alpha_child, opts);
  std::vector<std::pair<NetInterval, ChildCertificate>> out;
  for (NetInterval& cand : fine.intervals) {
    ChildCertificate cert;
    bool inside = true;
    for (size_t ci = 0; ci < cand.region.cells.size() && inside; ++ci) {
      int found = -1;
      for (size_t pi = 0; pi < n.region.cells.size(); ++pi)
        if (n.region.cells[pi].contains_box(cand.region.cells[ci])) {
          found = static_cast<int>(pi);
          break;
        }
      if (found < 0)
        inside = false;
      else
        cert.containments.emplace_back(static_cast<int>(ci), found);
    }
    if (inside) out.emplace_back(std::move(cand), std::move(cert));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Type-local expansion.

TypeExpansion expand_type(const IfsSystem& sys, const NetTypeKey& type) {
  assert(!type.neighbors.empty());
  Rat birth = type.neighbors[0].ratio;
  for (const Similarity& t : type.neighbors) birth = std::max(birth, t.ratio);
  Rat scale(0);
  for (const Similarity& t : type.neighbors) {
    Rat cand = t.ratio < birth ? t.ratio : t.ratio * sys.max_ratio();
    scale = std::max(scale, cand);
  }

  // Words active at `scale` from each neighbor's subtree.
  std::vector<ActiveMap> active;
  auto add_active = [&](const Similarity& m, const Rat& q, int row, std::vector<int> letters) {
    for (ActiveMap& a : active)
      if (a.map == m) {
        a.provenance.emplace_back(row, std::move(letters));
        return;
      }
    active.push_back(ActiveMap{m, q, {{row, std::move(letters)}}});
  };
  struct Frame {
    Similarity map;
    Rat ratio;
    std::vector<int> letters;
  };
  for (size_t i = 0; i < type.neighbors.size(); ++i) {
    std::vector<Frame> stack{{type.neighbors[i], type.neighbors[i].ratio, {}}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      if (f.ratio <= scale) {
        add_active(f.map, f.ratio, static_cast<int>(i), f.letters);
        continue;
      }
      for (int j = sys.count() - 1; j >= 0; --j) {
        Frame g;
        g.map = compose(f.map, sys.maps[j]);
        g.ratio = f.ratio * sys.maps[j].ratio;
        g.letters = f.letters;
        g.letters.push_back(j);
        stack.push_back(std::move(g));
      }
    }
  }
  std::sort(active.begin(), active.end(), [](const ActiveMap& a, const ActiveMap& b) {
    return similarity_anchor_cmp(a.map, b.map) < 0;
  });

  std::vector<Box> boxes;
  boxes.reserve(active.size());
  const Box cube = sys.domain();
  for (const ActiveMap& a : active) boxes.push_back(image_box(a.map, cube));

  TypeExpansion out;
  out.child_scale = scale;
  for (SignatureClass& cls : signature_classes(sys.dim, boxes, &type.normalized)) {
    TypeChild child;
    child.region = make_region(sys.dim, std::move(cls.cells));
    for (int i : cls.signature) child.cover.push_back(active[i]);
    InscribedCube ic = inscribed_cube(child.region);
    child.size = ic.side;
    child.anchor = ic.anchor;
    child.key.normalized = normalize_region(ic.side, ic.anchor, child.region);
    std::vector<Similarity> nb;
    nb.reserve(child.cover.size());
    for (const ActiveMap& a : child.cover) nb.push_back(normalize_by(ic.side, ic.anchor, a.map));
    child.key.neighbors = dedup_sorted_maps(std::move(nb), similarity_cmp);
    out.children.push_back(std::move(child));
  }
  std::sort(out.children.begin(), out.children.end(), [](const TypeChild& a, const TypeChild& b) {
    return region_cmp(a.region, b.region) < 0;
  });
  return out;
}

}  // namespace netifs
