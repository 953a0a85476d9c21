#include "netifs/conditions.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace netifs {

int FncReport::type_index(const NetTypeKey& key) const {
  for (size_t i = 0; i < types.size(); ++i)
    if (types[i].key == key) return static_cast<int>(i);
  return -1;
}

std::vector<std::vector<int>> FncReport::children_of() const {
  std::vector<std::vector<int>> out(types.size());
  for (const TypeEdge& e : edges) {
    auto& slots = out[e.parent];
    if (static_cast<int>(slots.size()) <= e.slot) slots.resize(e.slot + 1, -1);
    slots[e.slot] = e.child;
  }
  return out;
}

int FncReport::max_neighbor_count() const {
  int m = 0;
  for (const TypeRecord& t : types) m = std::max(m, static_cast<int>(t.key.neighbors.size()));
  return m;
}

FncReport explore_fnc(const IfsSystem& sys, const ExploreCaps& caps) {
  ValidationReport val = validate(sys);
  if (!val.invariant) throw ValidationError(val.problems.front());

  FncReport rep;
  rep.approximate = !val.full_support;

  std::map<NetTypeKey, int> index;
  auto intern = [&](const NetTypeKey& key) {
    auto it = index.find(key);
    if (it != index.end()) return std::pair<int, bool>{it->second, false};
    int id = static_cast<int>(rep.types.size());
    index.emplace(key, id);
    rep.types.push_back(TypeRecord{key, 0, {}, rat(1), rat(1), {}, false});
    return std::pair<int, bool>{id, true};
  };

  NetTypeKey root = root_type(sys.dim);
  intern(root);
  rep.types[0].representative = box_region(sys.domain());
  rep.types[0].representative_level = rat(1);
  rep.types[0].representative_size = rat(1);
  rep.types[0].representative_anchor = Vec(sys.dim, rat(-1, 2));
  rep.expansions.resize(1);

  std::vector<int> frontier{0};
  int generation = 0;
  while (!frontier.empty()) {
    if (generation >= caps.max_levels) {
      rep.status = FncStatus::cap_reached;
      return rep;
    }
    bool discovered = false;
    std::vector<int> next;
    Rat sweep_level(1);
    bool sweep_level_set = false;
    for (int id : frontier) {
      TypeExpansion exp = expand_type(sys, rep.types[id].key);
      Rat parent_size = rep.types[id].representative_size;
      Vec parent_anchor = rep.types[id].representative_anchor;
      Similarity to_abs{parent_size, SignedPerm::identity(sys.dim), parent_anchor};
      Rat child_level = exp.child_scale * parent_size;
      if (!sweep_level_set || child_level < sweep_level) {
        sweep_level = child_level;
        sweep_level_set = true;
      }
      for (size_t slot = 0; slot < exp.children.size(); ++slot) {
        const TypeChild& child = exp.children[slot];
        auto [cid, fresh] = intern(child.key);
        if (fresh) {
          discovered = true;
          TypeRecord& rec = rep.types[cid];
          rec.bfs_generation = generation + 1;
          rec.representative = region_image(to_abs, child.region);
          rec.representative_level = child_level;
          InscribedCube ic = inscribed_cube(rec.representative);
          rec.representative_size = ic.side;
          rec.representative_anchor = ic.anchor;
          next.push_back(cid);
          if (static_cast<int>(rep.types.size()) > caps.max_types) {
            rep.status = FncStatus::cap_reached;
            rep.expansions.resize(rep.types.size());
            return rep;
          }
        }
        rep.edges.push_back(TypeEdge{id, cid, static_cast<int>(slot)});
      }
      rep.expansions.resize(rep.types.size());
      rep.expansions[id] = std::move(exp);
      rep.types[id].expanded = true;
    }
    if (!discovered) {
      rep.status = FncStatus::fnc_detected;
      rep.closure_level = sweep_level;
      return rep;
    }
    frontier = std::move(next);
    ++generation;
  }
  rep.status = FncStatus::fnc_detected;  // no frontier left: vacuously closed
  return rep;
}

WscBound wsc_bound(const IfsSystem& sys, const std::vector<Rat>& levels) {
  WscBound out;
  for (const Rat& alpha : levels) {
    NetEnumeration nets = net_intervals_at(sys, alpha);
    WscLevel lvl;
    lvl.level = alpha;
    lvl.interval_count = static_cast<int>(nets.intervals.size());
    for (const NetInterval& n : nets.intervals)
      lvl.max_neighbors =
          std::max(lvl.max_neighbors, static_cast<int>(neighbor_set(n).size()));
    out.max_neighbors = std::max(out.max_neighbors, lvl.max_neighbors);
    out.per_level.push_back(std::move(lvl));
  }
  return out;
}

namespace {

// Overlapping same-generation pairs via a sweep along axis 0.
template <typename Fn>
void for_each_overlapping_pair(const IfsSystem& sys, const std::vector<Word>& words, Fn&& fn) {
  const Box cube = sys.domain();
  struct Entry {
    Box box;
    const Word* word;
  };
  std::vector<Entry> entries;
  entries.reserve(words.size());
  for (const Word& w : words) entries.push_back({image_box(w.map, cube), &w});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.box.lo[0] < b.box.lo[0]; });
  for (size_t i = 0; i < entries.size(); ++i) {
    for (size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[j].box.lo[0] >= entries[i].box.hi[0]) break;  // sorted by lo[0]
      if (!open_overlap(entries[i].box, entries[j].box)) continue;
      fn(*entries[i].word, entries[i].box, *entries[j].word, entries[j].box);
    }
  }
}

}  // namespace

std::vector<Similarity> neighbor_pair_witness(const FncReport& fnc) {
  std::set<Similarity, bool (*)(const Similarity&, const Similarity&)> witness(
      [](const Similarity& a, const Similarity& b) { return similarity_cmp(a, b) < 0; });
  for (const TypeRecord& t : fnc.types)
    for (const Similarity& ti : t.key.neighbors)
      for (const Similarity& tj : t.key.neighbors) witness.insert(compose(invert(ti), tj));
  return {witness.begin(), witness.end()};
}

GftcSet gftc_set(const IfsSystem& sys, const Rat& truncation_alpha, const FncReport* fnc) {
  if (truncation_alpha <= 0 || truncation_alpha > 1)
    throw ValidationError("truncation alpha must lie in (0,1]");
  GftcSet out;
  out.truncation_alpha = truncation_alpha;
  std::set<Similarity, bool (*)(const Similarity&, const Similarity&)> elems(
      [](const Similarity& a, const Similarity& b) { return similarity_cmp(a, b) < 0; });
  elems.insert(Similarity::identity(sys.dim));  // the diagonal σ = τ
  for (const Rat& alpha : generation_thresholds(sys, truncation_alpha)) {
    std::vector<Word> words = generation_words(sys, alpha);
    for_each_overlapping_pair(sys, words,
                              [&](const Word& a, const Box&, const Word& b, const Box&) {
                                elems.insert(compose(invert(a.map), b.map));
                                elems.insert(compose(invert(b.map), a.map));
                              });
    out.growth.emplace_back(alpha, static_cast<int>(elems.size()));
  }
  out.elements.assign(elems.begin(), elems.end());
  out.contains_identity = elems.count(Similarity::identity(sys.dim)) > 0;
  out.inverse_closed = true;
  for (const Similarity& e : out.elements)
    if (!elems.count(invert(e))) {
      out.inverse_closed = false;
      break;
    }
  if (fnc && fnc->status == FncStatus::fnc_detected) {
    std::vector<Similarity> witness = neighbor_pair_witness(*fnc);
    out.witness_size = static_cast<int>(witness.size());
    bool contained = true;
    for (const Similarity& e : out.elements) {
      if (!std::binary_search(witness.begin(), witness.end(), e,
                              [](const Similarity& a, const Similarity& b) {
                                return similarity_cmp(a, b) < 0;
                              })) {
        contained = false;
        break;
      }
    }
    out.contained_in_witness = contained;
  }
  return out;
}

FsetResult fset_characterization(const IfsSystem& sys, int n_max) {
  if (!sys.equicontractive())
    throw ValidationError("sup-norm characterization requires an equicontractive system");
  const Rat r = sys.maps[0].ratio;
  FsetResult out;
  std::set<Vec> fset;
  std::vector<Vec> points{Vec(sys.dim, rat(0))};
  int prev_growthless = 0;
  for (int n = 1; n <= n_max; ++n) {
    std::set<Vec> next_points;
    for (const Vec& p : points)
      for (const Similarity& s : sys.maps) next_points.insert(s.apply(p));
    points.assign(next_points.begin(), next_points.end());
    size_t before = fset.size();
    Rat scale = rat_pow(r, -n);
    for (size_t a = 0; a < points.size(); ++a)
      for (size_t b = 0; b < points.size(); ++b) {
        if (a == b) {
          fset.insert(Vec(sys.dim, rat(0)));
          continue;
        }
        Vec diff = vec_scale(scale, vec_sub(points[a], points[b]));
        if (sup_norm(diff) <= 1) fset.insert(std::move(diff));
      }
    out.sizes_per_n.emplace_back(n, static_cast<int>(fset.size()));
    prev_growthless = (fset.size() == before) ? prev_growthless + 1 : 0;
  }
  out.stabilized = prev_growthless >= 2;
  out.vectors.assign(fset.begin(), fset.end());
  return out;
}

namespace {

Rat boundary_displacement_floor(const IfsSystem& sys) {
  // r_min * min over maps and axes of the nonzero |S_i(0)_j|
  std::optional<Rat> m;
  for (const Similarity& s : sys.maps)
    for (const Rat& c : s.trans) {
      if (c == 0) continue;
      Rat v = abs(c);
      if (!m || v < *m) m = v;
    }
  if (!m) return rat(0);
  return sys.min_ratio() * *m;
}

}  // namespace

OverlapFloor overlap_floor(const IfsSystem& sys, const std::vector<Rat>& levels) {
  OverlapFloor out;
  out.delta_diagnostic = boundary_displacement_floor(sys);
  for (const Rat& alpha : levels) {
    OverlapLevel lvl;
    lvl.level = alpha;
    std::vector<Word> words = generation_words(sys, alpha);
    for_each_overlapping_pair(
        sys, words, [&](const Word&, const Box& ba, const Word&, const Box& bb) {
          auto inter = box_intersection(ba, bb);
          if (!inter) return;
          ++lvl.overlapping_pairs;
          Rat norm = inter->min_side() / alpha;
          if (!lvl.min_normalized || norm < *lvl.min_normalized) lvl.min_normalized = norm;
        });
    if (lvl.min_normalized && (!out.eps_hat || *lvl.min_normalized < *out.eps_hat))
      out.eps_hat = *lvl.min_normalized;
    out.per_level.push_back(std::move(lvl));
  }
  // eps_1: overlaps among words with ratio >= r_min^2 (a finite family)
  {
    Rat floor = sys.min_ratio() * sys.min_ratio();
    std::vector<Word> words;
    std::vector<Word> stack{sys.empty_word()};
    while (!stack.empty()) {
      Word w = std::move(stack.back());
      stack.pop_back();
      if (w.ratio >= floor) {
        if (!w.empty()) words.push_back(w);
        for (int j = sys.count() - 1; j >= 0; --j) stack.push_back(sys.extend(w, j));
      }
    }
    const Box cube = sys.domain();
    std::optional<Rat> eps1;
    for (size_t i = 0; i < words.size(); ++i)
      for (size_t j = i + 1; j < words.size(); ++j) {
        if (words[i].map == words[j].map) continue;
        Box bi = image_box(words[i].map, cube);
        Box bj = image_box(words[j].map, cube);
        if (!open_overlap(bi, bj)) continue;
        auto inter = box_intersection(bi, bj);
        Rat side = inter->min_side();
        if (!eps1 || side < *eps1) eps1 = side;
      }
    out.eps1_diagnostic = eps1;
  }
  return out;
}

}  // namespace netifs
