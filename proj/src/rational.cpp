#include "netifs/rational.hpp"

#include <cctype>
#include <sstream>

namespace netifs {

Rat parse_rat(const std::string& text) {
  auto fail = [&]() -> void {
    throw ParseError("not an exact rational: \"" + text +
                     "\" (expected \"p/q\" or integer \"p\")");
  };
  if (text.empty()) fail();
  size_t slash = text.find('/');
  auto check_int = [&](const std::string& s, bool allow_sign) {
    if (s.empty()) fail();
    size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) fail();
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail();
  };
  if (slash == std::string::npos) {
    check_int(text, true);
    Rat r(text);
    r.canonicalize();
    return r;
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  check_int(num, true);
  check_int(den, false);
  if (mpz_class(den) == 0) fail();
  Rat r(text);
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

Rat rat_pow(const Rat& r, long e) {
  if (e == 0) return rat(1);
  bool neg = e < 0;
  unsigned long k = neg ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), r.get_den().get_mpz_t(), k);
  if (neg) {
    if (num == 0) throw std::invalid_argument("negative power of zero");
    std::swap(num, den);
  }
  Rat out(num, den);
  out.canonicalize();
  return out;
}

std::optional<Rat> rat_root(const Rat& r, unsigned long q) {
  if (q == 0) throw std::invalid_argument("zeroth root");
  if (q == 1) return r;
  if (sgn(r) < 0) return std::nullopt;
  mpz_class num, den;
  if (mpz_root(num.get_mpz_t(), r.get_num().get_mpz_t(), q) == 0) return std::nullopt;
  if (mpz_root(den.get_mpz_t(), r.get_den().get_mpz_t(), q) == 0) return std::nullopt;
  Rat out(num, den);
  out.canonicalize();
  return out;
}

Vec vec_add(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec vec_scale(const Rat& s, const Vec& a) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

Rat sup_norm(const Vec& a) {
  Rat m = 0;
  for (const Rat& x : a) {
    Rat v = abs(x);
    if (v > m) m = v;
  }
  return m;
}

int vec_cmp(const Vec& a, const Vec& b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

std::string vec_str(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << rat_str(v[i]);
  }
  os << ")";
  return os.str();
}

Vec parse_vec(const std::vector<std::string>& coords) {
  Vec out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(parse_rat(c));
  return out;
}

}  // namespace netifs
