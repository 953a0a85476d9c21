#include "netifs/ifs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace netifs {

bool word_is_prefix(const Word& p, const Word& w) {
  if (p.letters.size() > w.letters.size()) return false;
  return std::equal(p.letters.begin(), p.letters.end(), w.letters.begin());
}

Word IfsSystem::empty_word() const {
  return Word{{}, rat(1), Similarity::identity(dim)};
}

Word IfsSystem::extend(const Word& w, int letter) const {
  Word out;
  out.letters = w.letters;
  out.letters.push_back(letter);
  out.ratio = w.ratio * maps[letter].ratio;
  out.map = compose(w.map, maps[letter]);
  return out;
}

Word IfsSystem::word_from_letters(const std::vector<int>& letters) const {
  Word w = empty_word();
  for (int l : letters) w = extend(w, l);
  return w;
}

Rat IfsSystem::min_ratio() const {
  Rat m = maps[0].ratio;
  for (const auto& s : maps) m = std::min(m, s.ratio);
  return m;
}

Rat IfsSystem::max_ratio() const {
  Rat m = maps[0].ratio;
  for (const auto& s : maps) m = std::max(m, s.ratio);
  return m;
}

bool IfsSystem::equicontractive() const {
  for (const auto& s : maps)
    if (s.ratio != maps[0].ratio) return false;
  return true;
}

IfsSystem make_ifs(int dim, std::vector<Similarity> maps) {
  if (dim <= 0) throw ValidationError("dim must be positive");
  if (maps.empty()) throw ValidationError("an IFS needs at least one map");
  for (size_t i = 0; i < maps.size(); ++i) {
    const Similarity& s = maps[i];
    if (s.dim() != dim) throw ValidationError("map " + std::to_string(i + 1) + ": wrong dimension");
    if (s.ratio <= 0 || s.ratio >= 1)
      throw ValidationError("map " + std::to_string(i + 1) + ": ratio must lie in (0,1)");
    validate_signed_perm(s.rot, dim);
  }
  IfsSystem sys;
  sys.dim = dim;
  sys.maps = std::move(maps);
  return sys;
}

namespace {

void enumerate_generation(const IfsSystem& sys, const Rat& alpha, const Word& w,
                          std::vector<Word>& out) {
  if (w.ratio <= alpha) {
    out.push_back(w);
    return;
  }
  for (int j = 0; j < sys.count(); ++j) enumerate_generation(sys, alpha, sys.extend(w, j), out);
}

}  // namespace

std::vector<Word> generation_words(const IfsSystem& sys, const Rat& alpha) {
  if (alpha <= 0 || alpha > 1) throw ValidationError("alpha must lie in (0,1]");
  std::vector<Word> out;
  enumerate_generation(sys, alpha, sys.empty_word(), out);
  return out;
}

std::vector<Rat> generation_thresholds(const IfsSystem& sys, const Rat& floor) {
  std::set<Rat, std::greater<Rat>> seen;
  // breadth-first over word ratios, pruned below the floor
  std::vector<Rat> frontier{rat(1)};
  seen.insert(rat(1));
  while (!frontier.empty()) {
    std::vector<Rat> next;
    for (const Rat& q : frontier)
      for (const auto& s : sys.maps) {
        Rat v = q * s.ratio;
        if (v < floor) continue;
        if (seen.insert(v).second) next.push_back(v);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

namespace {

// Certified corner-of-cube membership in the attractor: search inverse
// orbits that stay inside the cube. A revisited point closes a cycle, which
// makes it the fixed point of some composite map, hence a point of K.
Tristate corner_in_attractor(const IfsSystem& sys, const Vec& corner, int depth) {
  const Box cube = sys.domain();
  std::set<std::vector<std::string>> seen;
  auto key = [&](const Vec& p) {
    std::vector<std::string> k;
    k.reserve(p.size());
    for (const auto& c : p) k.push_back(c.get_str());
    return k;
  };
  struct Item {
    Vec p;
    int d;
  };
  std::vector<Item> stack{{corner, 0}};
  seen.insert(key(corner));
  bool truncated = false;
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    if (it.d >= depth) {
      truncated = true;
      continue;
    }
    for (const auto& s : sys.maps) {
      Vec q = invert(s).apply(it.p);
      if (!cube.contains_point(q)) continue;
      if (!seen.insert(key(q)).second) return Tristate::yes;  // cycle closed
      if (q == it.p) return Tristate::yes;                    // fixed point
      stack.push_back({std::move(q), it.d + 1});
    }
  }
  return truncated ? Tristate::unknown : Tristate::no;
}

}  // namespace

ValidationReport validate(const IfsSystem& sys, int depth) {
  ValidationReport rep;
  const Box cube = sys.domain();
  rep.invariant = true;
  std::vector<Box> images;
  for (int i = 0; i < sys.count(); ++i) {
    Box img = image_box(sys.maps[i], cube);
    images.push_back(img);
    if (!cube.contains_box(img)) {
      rep.invariant = false;
      rep.escaping_maps.push_back(i + 1);
    }
    bool on_boundary = false;
    for (int j = 0; j < sys.dim; ++j)
      if (img.lo[j] == cube.lo[j] || img.hi[j] == cube.hi[j]) on_boundary = true;
    if (on_boundary) rep.boundary_maps.push_back(i + 1);
  }
  if (!rep.invariant) {
    std::ostringstream os;
    os << "invariance: S_i([-1/2,1/2]^d) must stay inside the cube (maps";
    for (int i : rep.escaping_maps) os << " " << i;
    os << ")";
    rep.problems.push_back(os.str());
  }
  for (int a = 0; a < sys.count() && !rep.duplicate_maps; ++a)
    for (int b = a + 1; b < sys.count(); ++b)
      if (sys.maps[a] == sys.maps[b]) {
        rep.duplicate_maps = true;
        rep.problems.push_back("duplicate maps: S_" + std::to_string(a + 1) + " = S_" +
                               std::to_string(b + 1));
        break;
      }
  rep.equicontractive = sys.equicontractive();
  if (rep.invariant) {
    Region uni = empty_region(sys.dim);
    for (const Box& b : images) uni = region_union(uni, box_region(b));
    rep.full_support = (uni == box_region(cube));
  }
  if (rep.full_support) {
    rep.hull_is_cube = Tristate::yes;  // K equals the cube outright
  } else if (rep.invariant) {
    rep.hull_is_cube = Tristate::yes;
    std::vector<size_t> idx(sys.dim, 0);
    Vec corner(sys.dim);
    for (long mask = 0; mask < (1L << sys.dim); ++mask) {
      for (int j = 0; j < sys.dim; ++j)
        corner[j] = ((mask >> j) & 1) ? rat(1, 2) : rat(-1, 2);
      Tristate t = corner_in_attractor(sys, corner, depth);
      if (t == Tristate::no) {
        rep.hull_is_cube = Tristate::no;
        break;
      }
      if (t == Tristate::unknown) rep.hull_is_cube = Tristate::unknown;
    }
    if (rep.hull_is_cube == Tristate::no)
      rep.problems.push_back("hull: cl(hull(K)) is not the hypercube");
  }
  return rep;
}

}  // namespace netifs
