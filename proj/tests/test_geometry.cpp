#include <doctest.h>

#include <random>

#include "netifs/geometry.hpp"
#include "oracles.hpp"

using namespace netifs;

namespace {

Similarity sim1(const Rat& ratio, const Rat& trans) {
  return Similarity{ratio, SignedPerm::identity(1), Vec{trans}};
}

Similarity sim2(const Rat& ratio, const Rat& tx, const Rat& ty) {
  return Similarity{ratio, SignedPerm::identity(2), Vec{tx, ty}};
}

std::mt19937 rng(20240817);

Rat random_rat(int denom_cap = 8, int span = 4) {
  std::uniform_int_distribution<int> num(-span * denom_cap, span * denom_cap);
  std::uniform_int_distribution<int> den(1, denom_cap);
  return rat(num(rng), den(rng));
}

Similarity random_similarity(int dim) {
  Similarity s;
  std::uniform_int_distribution<int> num(1, 7);
  std::uniform_int_distribution<int> den(8, 16);
  s.ratio = rat(num(rng), den(rng));
  std::vector<int> perm(dim);
  for (int i = 0; i < dim; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::uniform_int_distribution<int> coin(0, 1);
  SignedPerm p;
  p.perm = perm;
  for (int i = 0; i < dim; ++i) p.signs.push_back(coin(rng) ? 1 : -1);
  s.rot = p;
  for (int i = 0; i < dim; ++i) s.trans.push_back(random_rat());
  return s;
}

Box random_box(int dim) {
  Box b;
  b.lo.resize(dim);
  b.hi.resize(dim);
  for (int j = 0; j < dim; ++j) {
    Rat a = random_rat(6, 2), c = random_rat(6, 2);
    while (a == c) c = random_rat(6, 2);
    b.lo[j] = std::min(a, c);
    b.hi[j] = std::max(a, c);
  }
  return b;
}

}  // namespace

TEST_CASE("rational parsing accepts exact strings only") {
  CHECK(parse_rat("-3/6") == rat(-1, 2));
  CHECK(parse_rat("7") == rat(7));
  CHECK_THROWS_AS(parse_rat("0.5"), ParseError);
  CHECK_THROWS_AS(parse_rat("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rat(""), ParseError);
  CHECK_THROWS_AS(parse_rat("1/ 2"), ParseError);
  CHECK(rat_str(rat(2, 4)) == "1/2");
  CHECK(rat_str(rat(-8, 2)) == "-4");
}

TEST_CASE("rational powers and roots") {
  CHECK(rat_pow(rat(1, 2), 3) == rat(1, 8));
  CHECK(rat_pow(rat(2, 3), -2) == rat(9, 4));
  CHECK(*rat_root(rat(1, 8), 3) == rat(1, 2));
  CHECK(!rat_root(rat(1, 2), 2).has_value());
}

TEST_CASE("signed permutations compose and invert") {
  SignedPerm swap_neg{{1, 0}, {1, -1}};  // (x,y) -> (y, -x)
  Vec x{rat(2), rat(3)};
  Vec y = swap_neg.apply(x);
  CHECK(y == Vec{rat(3), rat(-2)});
  CHECK(swap_neg.after(swap_neg.inverse()).is_identity());
  CHECK(swap_neg.inverse().after(swap_neg).is_identity());
  for (int i = 0; i < 20; ++i) {
    Similarity s = random_similarity(3);
    SignedPerm p = s.rot;
    Vec v{random_rat(), random_rat(), random_rat()};
    CHECK(p.inverse().apply(p.apply(v)) == v);
  }
}

TEST_CASE("compose matches direct substitution") {
  Similarity id = Similarity::identity(2);
  Similarity s1 = sim2(rat(1, 2), rat(-1, 4), rat(1, 4));
  Similarity s2 = sim2(rat(1, 2), rat(-1, 4), rat(-1, 4));
  CHECK(compose(id, s1) == s1);
  CHECK(compose(s1, id) == s1);
  Similarity s12 = compose(s1, s2);
  CHECK(s12.ratio == rat(1, 4));
  CHECK(s12.trans == Vec{rat(-3, 8), rat(1, 8)});
  CHECK(compose(s1, invert(s1)).is_identity());
  CHECK(compose(invert(s1), s1).is_identity());
}

TEST_CASE("invert solves f(g(x)) = x") {
  Similarity f = sim1(rat(1, 2), rat(-1, 4));
  Similarity g = invert(f);
  CHECK(g.ratio == rat(2));
  CHECK(g.trans == Vec{rat(1, 2)});
  for (int i = 0; i < 20; ++i) {
    Similarity s = random_similarity(2);
    CHECK(invert(invert(s)) == s);
  }
}

TEST_CASE("compose is associative; invert is an anti-homomorphism") {
  for (int i = 0; i < 25; ++i) {
    Similarity a = random_similarity(3), b = random_similarity(3), c = random_similarity(3);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    CHECK(invert(compose(a, b)) == compose(invert(b), invert(a)));
    Vec x{random_rat(), random_rat(), random_rat()};
    CHECK(compose(a, b).apply(x) == a.apply(b.apply(x)));
  }
}

TEST_CASE("image_box maps boxes to boxes") {
  Box cube = unit_cube(2);
  CHECK(image_box(Similarity::identity(2), cube) == cube);
  Similarity s1 = sim2(rat(1, 2), rat(-1, 4), rat(1, 4));
  Box img = image_box(s1, cube);
  CHECK(img.lo == Vec{rat(-1, 2), rat(0)});
  CHECK(img.hi == Vec{rat(0), rat(1, 2)});
  // quarter-turn-style map: e0 -> e1, e1 -> -e0
  Similarity rot{rat(1), SignedPerm{{1, 0}, {1, -1}}, Vec{rat(0), rat(0)}};
  Box b{Vec{rat(0), rat(2)}, Vec{rat(1), rat(3)}};
  Box rb = image_box(rot, b);
  CHECK(rb.lo == Vec{rat(2), rat(-1)});
  CHECK(rb.hi == Vec{rat(3), rat(0)});
}

TEST_CASE("region_from_signature: single subtraction keeps the shared faces") {
  Box closed = cube_box(1, rat(-1, 2), rat(1, 2));
  Box open = cube_box(1, rat(-1, 18), rat(1, 18));
  Region r = region_from_signature(1, {closed}, {open});
  Region want =
      make_region(1, {cube_box(1, rat(-1, 2), rat(-1, 18)), cube_box(1, rat(1, 18), rat(1, 2))});
  CHECK(r == want);
}

TEST_CASE("region_from_signature: disconnected middle-cover region") {
  // triadic maps with an extra ninth-scale map at the origin
  Box s1 = cube_box(1, rat(-1, 2), rat(-1, 6));
  Box s2 = cube_box(1, rat(-1, 6), rat(1, 6));
  Box s3 = cube_box(1, rat(1, 6), rat(1, 2));
  Box s4 = cube_box(1, rat(-1, 18), rat(1, 18));
  Region r = region_from_signature(1, {s2}, {s1, s3, s4});
  Region want = make_region(
      1, {cube_box(1, rat(-1, 6), rat(-1, 18)), cube_box(1, rat(1, 18), rat(1, 6))});
  CHECK(r == want);
}

TEST_CASE("region_from_signature: corner copy minus third-scale center") {
  Box quad{Vec{rat(-1, 2), rat(0)}, Vec{rat(0), rat(1, 2)}};
  Box center = cube_box(2, rat(-1, 6), rat(1, 6));
  Box tr{Vec{rat(0), rat(0)}, Vec{rat(1, 2), rat(1, 2)}};
  Box bl = cube_box(2, rat(-1, 2), rat(0));
  Box br{Vec{rat(0), rat(-1, 2)}, Vec{rat(1, 2), rat(0)}};
  Region r = region_from_signature(2, {quad}, {center, tr, bl, br});
  CHECK(r.volume() == rat(2, 9));  // 1/4 - (1/6)^2
  // interior face of the removed open square stays in the region
  CHECK(r.contains_point(Vec{rat(-1, 6), rat(1, 12)}));
  CHECK(!r.contains_point(Vec{rat(-1, 12), rat(1, 12)}));
}

TEST_CASE("region boolean algebra identities") {
  Region a = make_region(2, {cube_box(2, rat(0), rat(1))});
  Region none = empty_region(2);
  CHECK(region_union(a, none) == a);
  CHECK(region_intersect(a, a) == a);
  CHECK(region_subtract(a, a).empty());
  Region b = make_region(2, {cube_box(2, rat(1, 2), rat(3, 2))});
  CHECK(region_subtract(a, b).volume() == rat(3, 4));
}

TEST_CASE("randomized boolean-algebra properties with a membership oracle") {
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 1 + trial % 3;
    std::vector<Box> cellsA, cellsB;
    std::uniform_int_distribution<int> count(1, 4);
    for (int i = count(rng); i > 0; --i) cellsA.push_back(random_box(dim));
    for (int i = count(rng); i > 0; --i) cellsB.push_back(random_box(dim));
    Region A = make_region(dim, cellsA);
    Region B = make_region(dim, cellsB);
    Region U = region_union(A, B);
    Region I = region_intersect(A, B);
    CHECK(U.volume() == A.volume() + B.volume() - I.volume());

    // canonical-form equality: rebuilding from canonical cells is stable
    CHECK(make_region(dim, A.cells) == A);

    // membership agreement at random rational probes
    for (int p = 0; p < 12; ++p) {
      Vec probe(dim);
      for (int j = 0; j < dim; ++j) probe[j] = random_rat(7, 2) + rat(1, 97);
      bool inA = false, inB = false;
      for (const Box& c : cellsA) inA = inA || c.contains_point(probe);
      for (const Box& c : cellsB) inB = inB || c.contains_point(probe);
      CHECK(U.contains_point(probe) == (inA || inB));
      CHECK(I.contains_point(probe) == (inA && inB));
    }

    // De Morgan inside a bounding box
    Box bb = random_box(dim);
    Region frame = box_region(bb);
    Region lhs = region_subtract(frame, region_union(A, B));
    Region rhs = region_intersect(region_subtract(frame, A), region_subtract(frame, B));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("signature regions agree with the direct predicate oracle") {
  for (int trial = 0; trial < 50; ++trial) {
    int dim = 1 + trial % 2;
    std::vector<Box> closed{random_box(dim)};
    std::vector<Box> open;
    std::uniform_int_distribution<int> count(0, 3);
    for (int i = count(rng); i > 0; --i) open.push_back(random_box(dim));
    Region r = region_from_signature(dim, closed, open);
    for (int p = 0; p < 15; ++p) {
      Vec probe(dim);
      for (int j = 0; j < dim; ++j) probe[j] = random_rat(5, 2) + rat(1, 101);
      // probes avoid the arrangement grid, where open/closed choices differ
      CHECK(r.contains_point(probe) == oracles::region_membership(closed, open, probe));
    }
  }
}

TEST_CASE("inscribed cube: desk examples") {
  Region square = make_region(2, {cube_box(2, rat(0), rat(1))});
  InscribedCube ic = inscribed_cube(square);
  CHECK(ic.side == rat(1));
  CHECK(ic.anchor == Vec{rat(0), rat(0)});

  Region two = make_region(
      1, {cube_box(1, rat(-1, 6), rat(-1, 18)), cube_box(1, rat(1, 18), rat(1, 6))});
  ic = inscribed_cube(two);
  CHECK(ic.side == rat(1, 9));
  CHECK(ic.anchor == Vec{rat(-1, 6)});

  Region ell = make_region(2, {Box{Vec{rat(0), rat(0)}, Vec{rat(2), rat(1)}},
                               Box{Vec{rat(0), rat(1)}, Vec{rat(1), rat(2)}}});
  ic = inscribed_cube(ell);
  CHECK(ic.side == rat(1));
  CHECK(ic.anchor == Vec{rat(0), rat(0)});
  CHECK_THROWS(inscribed_cube(empty_region(2)));
}

TEST_CASE("inscribed cube matches the exhaustive oracle on random regions") {
  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + trial % 3;
    std::vector<Box> cells;
    std::uniform_int_distribution<int> count(1, dim == 3 ? 3 : 6);
    for (int i = count(rng); i > 0; --i) cells.push_back(random_box(dim));
    Region r = make_region(dim, cells);
    InscribedCube fast = inscribed_cube(r);
    InscribedCube slow = oracles::inscribed_cube_exhaustive(r);
    CHECK(fast.side == slow.side);
    CHECK(fast.anchor == slow.anchor);

    Box cube;
    cube.lo = fast.anchor;
    cube.hi = fast.anchor;
    for (int j = 0; j < dim; ++j) cube.hi[j] += fast.side;
    CHECK(r.contains_box(cube));
  }
}

TEST_CASE("256-bit float shadow agrees with exact volumes") {
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 1 + trial % 3;
    std::vector<Box> cells;
    for (int i = 0; i < 4; ++i) cells.push_back(random_box(dim));
    Region r = make_region(dim, cells);
    Rat exact = r.volume();
    mpf_set_default_prec(256);
    mpf_class shadow = 0;
    for (const Box& c : r.cells) {
      mpf_class v = 1;
      for (int j = 0; j < dim; ++j) v *= mpf_class(c.hi[j] - c.lo[j]);
      shadow += v;
    }
    mpf_class diff = abs(shadow - mpf_class(exact));
    if (exact != 0) diff /= mpf_class(exact);
    CHECK(diff < mpf_class(1e-30));
  }
}
