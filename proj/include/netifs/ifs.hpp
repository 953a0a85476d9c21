#pragma once

#include <string>
#include <vector>

#include "netifs/geometry.hpp"

namespace netifs {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite word over the map alphabet; letters are 0-based map indices.
// ratio and map are the fold of the letters (empty word = identity).
struct Word {
  std::vector<int> letters;
  Rat ratio;
  Similarity map;

  bool empty() const { return letters.empty(); }
  int length() const { return static_cast<int>(letters.size()); }
};

bool word_is_prefix(const Word& p, const Word& w);

struct IfsSystem {
  int dim = 0;
  std::vector<Similarity> maps;

  int count() const { return static_cast<int>(maps.size()); }
  Word empty_word() const;
  Word extend(const Word& w, int letter) const;
  Word word_from_letters(const std::vector<int>& letters) const;

  Rat min_ratio() const;
  Rat max_ratio() const;
  bool equicontractive() const;
  Box domain() const { return unit_cube(dim); }
};

// Constructs and checks structural invariants (ratios in (0,1), rotation
// arrays valid, dimensions consistent).
IfsSystem make_ifs(int dim, std::vector<Similarity> maps);

// The generation antichain at scale alpha: words whose image scale has just
// reached alpha, {σ : r_σ <= alpha < r_{σ-}} with the empty word's parent
// treated as scale +inf. For an equicontractive system with ratio r this is
// exactly the words of length n at alpha = r^n, and {ε} at alpha = 1.
std::vector<Word> generation_words(const IfsSystem& sys, const Rat& alpha);

// Distinct values of r_σ in (0, 1], largest first, down to at most `floor`.
std::vector<Rat> generation_thresholds(const IfsSystem& sys, const Rat& floor);

enum class Tristate { yes, no, unknown };

struct ValidationReport {
  bool invariant = false;          // every S_i(cube) ⊆ cube
  std::vector<int> escaping_maps;  // 1-based indices violating invariance
  bool full_support = false;       // ∪ S_i(cube) = cube exactly (then K = cube)
  bool equicontractive = false;
  std::vector<int> boundary_maps;  // 1-based: image touches the cube boundary
  bool duplicate_maps = false;
  Tristate hull_is_cube = Tristate::unknown;
  std::vector<std::string> problems;  // human-readable failure clauses

  bool ok() const { return problems.empty(); }
};

// depth bounds the corner-membership search used for the hull certificate.
ValidationReport validate(const IfsSystem& sys, int depth = 12);

}  // namespace netifs
