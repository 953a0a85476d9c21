#include <doctest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "netifs/net.hpp"

using namespace netifs;
using namespace netifs::fixtures;

namespace {

Region interval_union(std::initializer_list<std::pair<Rat, Rat>> parts) {
  std::vector<Box> cells;
  for (const auto& [a, b] : parts) cells.push_back(cube_box(1, a, b));
  return make_region(1, cells);
}

const NetInterval* find_by_region(const NetEnumeration& nets, const Region& r) {
  for (const NetInterval& n : nets.intervals)
    if (n.region == r) return &n;
  return nullptr;
}

}  // namespace

TEST_CASE("triadic line system: four net intervals at alpha 1/2") {
  NetEnumeration nets = net_intervals_at(thirds_with_ninth(), rat(1, 2));
  REQUIRE(nets.intervals.size() == 4);
  CHECK(!nets.k_filter_approximate);

  Region d1 = interval_union({{rat(-1, 2), rat(-1, 6)}});
  Region d2 = interval_union({{rat(-1, 6), rat(-1, 18)}, {rat(1, 18), rat(1, 6)}});
  Region d3 = interval_union({{rat(-1, 18), rat(1, 18)}});
  Region d4 = interval_union({{rat(1, 6), rat(1, 2)}});
  const NetInterval* n1 = find_by_region(nets, d1);
  const NetInterval* n2 = find_by_region(nets, d2);
  const NetInterval* n3 = find_by_region(nets, d3);
  const NetInterval* n4 = find_by_region(nets, d4);
  REQUIRE(n1);
  REQUIRE(n2);
  REQUIRE(n3);
  REQUIRE(n4);

  CHECK(n2->region.cells.size() == 2);  // genuinely disconnected
  CHECK(n1->size == rat(1, 3));
  CHECK(n1->anchor == Vec{rat(-1, 2)});
  // first and last intervals carry the same neighbor-set value
  CHECK(type_of(*n1) == type_of(*n4));
  CHECK_FALSE(type_of(*n1) == type_of(*n2));

  // the derived neighbor of the leftmost interval: ratio 1, translation 1/2
  std::vector<Similarity> nb = neighbor_set(*n1);
  REQUIRE(nb.size() == 1);
  CHECK(nb[0].ratio == rat(1));
  CHECK(nb[0].trans == Vec{rat(1, 2)});
  // middle overlap interval: neighbors {x + 1/2, 3x + 1/2}
  std::vector<Similarity> nb3 = neighbor_set(*n3);
  REQUIRE(nb3.size() == 2);
  CHECK(nb3[0].ratio == rat(1));
  CHECK(nb3[0].trans == Vec{rat(1, 2)});
  CHECK(nb3[1].ratio == rat(3));
  CHECK(nb3[1].trans == Vec{rat(1, 2)});
}

TEST_CASE("whole cube at alpha 1") {
  NetEnumeration nets = net_intervals_at(quadrants_center(), rat(1));
  REQUIRE(nets.intervals.size() == 1);
  const NetInterval& n = nets.intervals[0];
  CHECK(n.region == box_region(unit_cube(2)));
  REQUIRE(n.cover.size() == 1);
  CHECK(n.cover[0].empty());
  std::vector<Similarity> nb = neighbor_set(n);
  REQUIRE(nb.size() == 1);
  CHECK(nb[0].ratio == rat(1));
  CHECK(nb[0].trans == Vec{rat(1, 2), rat(1, 2)});
  CHECK(type_of(n) == root_type(2));
}

TEST_CASE("quadrants-with-center: eight intervals of six types at level 1") {
  NetEnumeration nets = net_intervals_at(quadrants_center(), rat(1, 2));
  CHECK(nets.intervals.size() == 8);
  std::set<NetTypeKey> types;
  int l_shapes = 0, overlaps = 0;
  for (const NetInterval& n : nets.intervals) {
    types.insert(type_of(n));
    if (n.cover.size() == 1)
      ++l_shapes;
    else if (n.cover.size() == 2)
      ++overlaps;
  }
  CHECK(types.size() == 6);
  CHECK(l_shapes == 4);
  CHECK(overlaps == 4);
}

TEST_CASE("corner tiling: four quadrant intervals, singleton neighbor sets") {
  NetEnumeration nets = net_intervals_at(corner_tiling_2d(), rat(1, 2));
  CHECK(nets.intervals.size() == 4);
  std::set<NetTypeKey> types;
  for (const NetInterval& n : nets.intervals) {
    CHECK(neighbor_set(n).size() == 1);
    types.insert(type_of(n));
  }
  CHECK(types.size() == 1);
  CHECK(*types.begin() == root_type(2));
}

TEST_CASE("interiors of distinct net intervals are disjoint") {
  for (const Rat& alpha : {rat(1, 2), rat(1, 4)}) {
    NetEnumeration nets = net_intervals_at(quadrants_center(), alpha);
    for (size_t a = 0; a < nets.intervals.size(); ++a)
      for (size_t b = a + 1; b < nets.intervals.size(); ++b)
        CHECK(region_intersect(nets.intervals[a].region, nets.intervals[b].region).volume() == 0);
  }
  NetEnumeration nets = net_intervals_at(thirds_with_ninth(), rat(1, 9));
  for (size_t a = 0; a < nets.intervals.size(); ++a)
    for (size_t b = a + 1; b < nets.intervals.size(); ++b)
      CHECK(region_intersect(nets.intervals[a].region, nets.intervals[b].region).volume() == 0);
}

TEST_CASE("net intervals cover the full-support attractor") {
  for (const Rat& alpha : {rat(1, 2), rat(1, 4)}) {
    NetEnumeration nets = net_intervals_at(quadrants_center(), alpha);
    Region uni = empty_region(2);
    for (const NetInterval& n : nets.intervals) uni = region_union(uni, n.region);
    CHECK(uni == box_region(unit_cube(2)));
  }
}

TEST_CASE("hierarchy: every finer interval lies in exactly one coarser one") {
  NetEnumeration coarse = net_intervals_at(quadrants_center(), rat(1, 2));
  NetEnumeration fine = net_intervals_at(quadrants_center(), rat(1, 4));
  for (const NetInterval& f : fine.intervals) {
    int containers = 0;
    for (const NetInterval& c : coarse.intervals) {
      bool inside = true;
      for (const Box& cell : f.region.cells)
        if (!c.region.contains_box(cell)) {
          inside = false;
          break;
        }
      if (inside) ++containers;
    }
    CHECK(containers == 1);
  }
}

TEST_CASE("children: tiling volumes and certificates") {
  NetEnumeration coarse = net_intervals_at(quadrants_center(), rat(1, 2));
  for (const NetInterval& parent : coarse.intervals) {
    auto kids = children(quadrants_center(), parent, rat(1, 4));
    Rat total = 0;
    for (const auto& [child, cert] : kids) {
      total += child.region.volume();
      CHECK(cert.containments.size() == child.region.cells.size());
      for (const auto& [ci, pi] : cert.containments)
        CHECK(parent.region.cells[pi].contains_box(child.region.cells[ci]));
    }
    CHECK(total == parent.region.volume());  // full support tiles exactly
  }
}

TEST_CASE("children of a two-cover overlap square") {
  // the top-left corner/center overlap square
  NetEnumeration coarse = net_intervals_at(quadrants_center(), rat(1, 2));
  const NetInterval* overlap = nullptr;
  for (const NetInterval& n : coarse.intervals)
    if (n.cover.size() == 2 && n.region.contains_point(Vec{rat(-1, 8), rat(1, 8)}))
      overlap = &n;
  REQUIRE(overlap);
  auto kids = children(quadrants_center(), *overlap, rat(1, 4));
  REQUIRE(kids.size() == 3);
  int two_cell = 0, squares = 0;
  for (const auto& [child, cert] : kids) {
    if (child.region.cells.size() == 2) {
      ++two_cell;
      // two cover words collapse to one map (identical composites)
      CHECK(neighbor_set(child).size() == 1);
      CHECK(child.cover.size() == 2);
    } else {
      ++squares;
      CHECK(neighbor_set(child).size() == 2);
      CHECK(type_of(child) == type_of(*overlap));
    }
  }
  CHECK(two_cell == 1);
  CHECK(squares == 2);
}

TEST_CASE("pushforward of a maximal-cover net interval keeps its type") {
  IfsSystem sys = quadrants_center();
  NetEnumeration coarse = net_intervals_at(sys, rat(1, 2));
  NetEnumeration fine = net_intervals_at(sys, rat(1, 4));
  for (const NetInterval& n : coarse.intervals) {
    if (n.cover.size() != 2) continue;  // maximal neighbor count here is 2
    for (int letter : {0, 4}) {
      Region pushed = region_image(sys.maps[letter], n.region);
      const NetInterval* hit = find_by_region(fine, pushed);
      REQUIRE(hit);
      CHECK(type_of(*hit) == type_of(n));
    }
  }
}

TEST_CASE("equal types are exactly affine-equivalent") {
  IfsSystem sys = quadrants_center();
  NetEnumeration fine = net_intervals_at(sys, rat(1, 4));
  std::map<NetTypeKey, std::vector<const NetInterval*>> by_type;
  for (const NetInterval& n : fine.intervals) by_type[type_of(n)].push_back(&n);
  for (const auto& [key, members] : by_type) {
    for (const NetInterval* m : members) {
      // the normalization carries the region onto the shared normal form,
      // and the cover maps onto the shared neighbor maps
      Similarity t = m->norm_map();
      Region back = region_image(t, key.normalized);
      CHECK(back == m->region);
      std::set<std::pair<std::string, std::string>> realized;
      for (const Word& w : m->cover) {
        Similarity nb = compose(invert(t), w.map);
        realized.insert({rat_str(nb.ratio), vec_str(nb.trans)});
      }
      std::set<std::pair<std::string, std::string>> expected;
      for (const Similarity& nb : key.neighbors)
        expected.insert({rat_str(nb.ratio), vec_str(nb.trans)});
      CHECK(realized == expected);
    }
  }
}

TEST_CASE("approximate attractor filter flags non-full-support systems") {
  IfsSystem sys = make_ifs(1, {tr1(rat(1, 3), rat(-1, 3)), tr1(rat(1, 3), rat(1, 3))});
  NetEnumeration nets = net_intervals_at(sys, rat(1, 3));
  CHECK(nets.k_filter_approximate);
  // the middle third holds no attractor points and is dropped
  for (const NetInterval& n : nets.intervals)
    CHECK(!n.region.contains_point(Vec{rat(0)}));
}

TEST_CASE("type expansion is realization-independent") {
  IfsSystem sys = thirds_with_ninth();
  // realize the same type at two different levels; children types must match
  NetEnumeration a = net_intervals_at(sys, rat(1, 3));
  NetEnumeration b = net_intervals_at(sys, rat(1, 9));
  std::map<NetTypeKey, std::vector<NetTypeKey>> children_sets;
  for (const NetEnumeration* nets : {&a, &b}) {
    for (const NetInterval& n : nets->intervals) {
      TypeExpansion exp = expand_type(sys, type_of(n));
      std::vector<NetTypeKey> kinds;
      for (const TypeChild& c : exp.children) kinds.push_back(c.key);
      auto [it, fresh] = children_sets.try_emplace(type_of(n), kinds);
      if (!fresh) CHECK(it->second == kinds);
    }
  }
}

TEST_CASE("point queries list every containing interval, chain choice first") {
  NetEnumeration nets = net_intervals_at(quadrants_center(), rat(1, 2));
  // an interior point lies in exactly one net interval
  auto inner = containing_intervals(nets, Vec{rat(-3, 8), rat(3, 8)});
  CHECK(inner.size() == 1);
  // the center is a corner point of all four overlap squares
  auto center = containing_intervals(nets, Vec{rat(0), rat(0)});
  CHECK(center.size() == 4);
  for (const NetInterval* n : center) CHECK(n->cover.size() == 2);
  // the first entry is the lexicographically smallest anchor
  for (size_t i = 1; i < center.size(); ++i)
    CHECK(vec_cmp(center[0]->anchor, center[i]->anchor) <= 0);
  // a point on the face between an L-shape and an overlap square lies in two
  auto face = containing_intervals(nets, Vec{rat(-1, 4), rat(1, 8)});
  CHECK(face.size() == 2);
}
