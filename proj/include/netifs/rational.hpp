#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netifs {

// Exact rational scalar. mpq_class keeps gcd(|num|,den)=1 and den>0 once
// canonicalized; every constructor below canonicalizes.
using Rat = mpq_class;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p/q" or "p" with optional sign; anything else (floats, spaces)
// is rejected so exactness can't silently leak away.
Rat parse_rat(const std::string& text);

std::string rat_str(const Rat& r);

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

// r^e for integer e (e may be negative; r must be nonzero then).
Rat rat_pow(const Rat& r, long e);

// Exact q-th root if it exists.
std::optional<Rat> rat_root(const Rat& r, unsigned long q);

// Point / translation vector with exact coordinates.
using Vec = std::vector<Rat>;

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_scale(const Rat& s, const Vec& a);
Rat sup_norm(const Vec& a);

// Lexicographic comparison, coordinate 0 first.
int vec_cmp(const Vec& a, const Vec& b);

std::string vec_str(const Vec& v);
Vec parse_vec(const std::vector<std::string>& coords);

}  // namespace netifs
