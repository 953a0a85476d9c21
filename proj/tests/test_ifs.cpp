#include <doctest.h>

#include <cmath>
#include <random>

#include "netifs/ifs.hpp"
#include "oracles.hpp"

using namespace netifs;

namespace {

Similarity tr1(const Rat& ratio, const Rat& t) {
  return Similarity{ratio, SignedPerm::identity(1), Vec{t}};
}

Similarity tr2(const Rat& ratio, const Rat& tx, const Rat& ty) {
  return Similarity{ratio, SignedPerm::identity(2), Vec{tx, ty}};
}

IfsSystem quadrants_center() {
  return make_ifs(2, {tr2(rat(1, 2), rat(-1, 4), rat(1, 4)), tr2(rat(1, 2), rat(-1, 4), rat(-1, 4)),
                      tr2(rat(1, 2), rat(1, 4), rat(-1, 4)), tr2(rat(1, 2), rat(1, 4), rat(1, 4)),
                      tr2(rat(1, 2), rat(0), rat(0))});
}

IfsSystem quadrants_third_center() {
  return make_ifs(2, {tr2(rat(1, 2), rat(-1, 4), rat(1, 4)), tr2(rat(1, 3), rat(0), rat(0)),
                      tr2(rat(1, 2), rat(1, 4), rat(1, 4)), tr2(rat(1, 2), rat(-1, 4), rat(-1, 4)),
                      tr2(rat(1, 2), rat(1, 4), rat(-1, 4))});
}

IfsSystem thirds_with_ninth() {
  return make_ifs(1, {tr1(rat(1, 3), rat(-1, 3)), tr1(rat(1, 3), rat(0)),
                      tr1(rat(1, 3), rat(1, 3)), tr1(rat(1, 9), rat(0))});
}

}  // namespace

TEST_CASE("construction rejects bad systems") {
  CHECK_THROWS_AS(make_ifs(1, {tr1(rat(1), rat(0))}), ValidationError);
  CHECK_THROWS_AS(make_ifs(1, {tr1(rat(-1, 2), rat(0))}), ValidationError);
  CHECK_THROWS_AS(make_ifs(2, {tr1(rat(1, 2), rat(0))}), ValidationError);
  CHECK_THROWS_AS(make_ifs(1, {}), ValidationError);
}

TEST_CASE("generation words at coarse scales") {
  IfsSystem sys = quadrants_third_center();
  // five maps, all single letters, anywhere in (1/2, 1)
  for (const Rat& alpha : {rat(3, 4), rat(2, 3), rat(99, 100)}) {
    std::vector<Word> words = generation_words(sys, alpha);
    CHECK(words.size() == 5);
    for (const Word& w : words) CHECK(w.length() == 1);
  }
  // at alpha = 1 only the empty word
  std::vector<Word> root = generation_words(sys, rat(1));
  REQUIRE(root.size() == 1);
  CHECK(root[0].empty());
}

TEST_CASE("equicontractive generations are the fixed-length slices") {
  IfsSystem sys = quadrants_center();
  for (int n = 1; n <= 3; ++n) {
    std::vector<Word> words = generation_words(sys, rat_pow(rat(1, 2), n));
    CHECK(static_cast<int>(words.size()) == static_cast<int>(std::pow(5, n)));
    for (const Word& w : words) CHECK(w.length() == n);
  }
}

TEST_CASE("mixed-ratio generation matches the brute-force filter") {
  IfsSystem sys = make_ifs(1, {tr1(rat(1, 2), rat(-1, 4)), tr1(rat(1, 3), rat(1, 3))});
  for (const Rat& alpha : {rat(1, 4), rat(1, 6), rat(1, 3), rat(2, 5)}) {
    std::vector<Word> words = generation_words(sys, alpha);
    std::vector<std::vector<int>> got;
    for (const Word& w : words) got.push_back(w.letters);
    std::sort(got.begin(), got.end());
    CHECK(got == oracles::generation_brute(sys, alpha, 6));
  }
}

TEST_CASE("generation is a maximal antichain") {
  std::mt19937 rng(7);
  IfsSystem sys = make_ifs(1, {tr1(rat(1, 2), rat(-1, 4)), tr1(rat(1, 3), rat(1, 3)),
                               tr1(rat(2, 5), rat(0))});
  std::uniform_int_distribution<int> letter(0, 2);
  for (const Rat& alpha : {rat(1, 5), rat(1, 7), rat(3, 10)}) {
    std::vector<Word> words = generation_words(sys, alpha);
    // no word is a prefix of another
    for (size_t a = 0; a < words.size(); ++a)
      for (size_t b = 0; b < words.size(); ++b)
        if (a != b) CHECK(!word_is_prefix(words[a], words[b]));
    // random infinite words have exactly one prefix in the antichain
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<int> inf;
      for (int i = 0; i < 24; ++i) inf.push_back(letter(rng));
      int hits = 0;
      for (const Word& w : words) {
        if (w.length() > static_cast<int>(inf.size())) continue;
        if (std::equal(w.letters.begin(), w.letters.end(), inf.begin())) ++hits;
      }
      CHECK(hits == 1);
    }
    // image scales sit in the half-open window (alpha * r_min, alpha]
    for (const Word& w : words) {
      CHECK(w.ratio <= alpha);
      CHECK(w.ratio > alpha * sys.min_ratio());
    }
  }
}

TEST_CASE("word maps equal the fold of compose") {
  IfsSystem sys = quadrants_third_center();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> letter(0, sys.count() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> letters;
    for (int i = 0; i < 6; ++i) letters.push_back(letter(rng));
    Word w = sys.word_from_letters(letters);
    Similarity folded = Similarity::identity(2);
    for (int l : letters) folded = compose(folded, sys.maps[l]);
    CHECK(w.map == folded);
    CHECK(w.map.apply(Vec{rat(0), rat(0)}) == folded.apply(Vec{rat(0), rat(0)}));
    CHECK(w.ratio == folded.ratio);
  }
}

TEST_CASE("validation: full-support tilings with overlaps") {
  ValidationReport rep = validate(quadrants_center());
  CHECK(rep.invariant);
  CHECK(rep.full_support);
  CHECK(rep.equicontractive);
  CHECK(rep.boundary_maps == std::vector<int>{1, 2, 3, 4});
  CHECK(rep.hull_is_cube == Tristate::yes);
  CHECK(rep.ok());
}

TEST_CASE("validation: mixed-ratio line system has full support") {
  ValidationReport rep = validate(thirds_with_ninth());
  CHECK(rep.full_support);
  CHECK(!rep.equicontractive);
  CHECK(rep.boundary_maps == std::vector<int>{1, 3});
}

TEST_CASE("validation: a single strict contraction lacks full support") {
  IfsSystem sys = make_ifs(1, {tr1(rat(1, 2), rat(0))});
  ValidationReport rep = validate(sys);
  CHECK(rep.invariant);
  CHECK(!rep.full_support);
  // attractor is the single point 0, so the hull is not the cube
  CHECK(rep.hull_is_cube == Tristate::no);
}

TEST_CASE("validation flags escaping and duplicate maps") {
  IfsSystem sys = make_ifs(1, {tr1(rat(1, 2), rat(1, 2))});
  ValidationReport rep = validate(sys);
  CHECK(!rep.invariant);
  CHECK(rep.escaping_maps == std::vector<int>{1});
  IfsSystem dup = make_ifs(1, {tr1(rat(1, 2), rat(-1, 4)), tr1(rat(1, 2), rat(-1, 4))});
  CHECK(validate(dup).duplicate_maps);
}

TEST_CASE("generation thresholds enumerate distinct scales") {
  IfsSystem sys = thirds_with_ninth();
  std::vector<Rat> ts = generation_thresholds(sys, rat(1, 27));
  CHECK(ts == std::vector<Rat>{rat(1), rat(1, 3), rat(1, 9), rat(1, 27)});
}
