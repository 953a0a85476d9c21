#include "netifs/measures.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <sstream>

namespace netifs {

Rat SelfSimilarMeasure::p_min() const {
  Rat m = probs[0];
  for (const Rat& p : probs) m = std::min(m, p);
  return m;
}

SelfSimilarMeasure make_measure(IfsSystem sys, std::vector<Rat> probs) {
  if (probs.size() != sys.maps.size())
    throw ValidationError("probabilities: need one per map");
  Rat total = 0;
  for (const Rat& p : probs) {
    if (p <= 0) throw ValidationError("probabilities: p_i > 0 required");
    total += p;
  }
  if (total != 1) throw ValidationError("probabilities: sum p_i = 1 required");
  return SelfSimilarMeasure{std::move(sys), std::move(probs)};
}

std::string TechnicalAssumptions::failing_clause() const {
  if (!fnc_detected) return "finite neighbor condition not established";
  if (!attractor_is_cube) return "attractor K must equal [-1/2,1/2]^d (full support)";
  if (!boundary_pmin) return "boundary maps must carry p_j = p_min";
  if (!equicontractive) return "all contraction ratios must be equal";
  return "";
}

TechnicalAssumptions check_technical_assumptions(const SelfSimilarMeasure& mu,
                                                 const FncReport& fnc) {
  TechnicalAssumptions ta;
  ta.fnc_detected = fnc.status == FncStatus::fnc_detected;
  ValidationReport val = validate(mu.sys);
  ta.attractor_is_cube = val.full_support;
  ta.equicontractive = val.equicontractive;
  ta.boundary_pmin = true;
  Rat pmin = mu.p_min();
  for (int i : val.boundary_maps)
    if (mu.probs[i - 1] != pmin) ta.boundary_pmin = false;
  return ta;
}

TransitionMatrix matrix_product(const TransitionMatrix& a, const TransitionMatrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matrix product shape mismatch");
  TransitionMatrix out;
  out.rows = a.rows;
  out.cols = b.cols;
  out.entries.assign(a.rows, std::vector<Rat>(b.cols, rat(0)));
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      if (a.entries[i][k] == 0) continue;
      for (int j = 0; j < b.cols; ++j) out.entries[i][j] += a.entries[i][k] * b.entries[k][j];
    }
  return out;
}

Rat entry_sum(const TransitionMatrix& m) {
  Rat s = 0;
  for (const auto& row : m.entries)
    for (const Rat& e : row) s += e;
  return s;
}

namespace {

std::vector<int> anchor_order(const std::vector<Similarity>& maps) {
  std::vector<int> order(maps.size());
  for (size_t i = 0; i < maps.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return similarity_anchor_cmp(maps[a], maps[b]) < 0; });
  return order;
}

TransitionMatrix edge_matrix(const std::vector<Similarity>& parent_neighbors,
                             const TypeChild& child, const std::vector<Rat>& probs) {
  std::vector<int> rows = anchor_order(parent_neighbors);
  std::vector<int> rowpos(parent_neighbors.size());
  for (size_t i = 0; i < rows.size(); ++i) rowpos[rows[i]] = static_cast<int>(i);
  TransitionMatrix m;
  m.rows = static_cast<int>(parent_neighbors.size());
  m.cols = static_cast<int>(child.cover.size());
  m.entries.assign(m.rows, std::vector<Rat>(m.cols, rat(0)));
  for (int k = 0; k < m.cols; ++k) {
    for (const auto& [row, letters] : child.cover[k].provenance) {
      if (letters.size() != 1)
        throw ValidationError(
            "transition matrices need one-letter refinements (equicontractive systems)");
      m.entries[rowpos[row]][k] = probs[letters[0]];
    }
    bool nonzero = false;
    for (int i = 0; i < m.rows; ++i)
      if (m.entries[i][k] != 0) nonzero = true;
    if (!nonzero) throw InvariantViolation("transition matrix with an all-zero column");
  }
  return m;
}

QuotientGraph assemble_graph(FncReport fnc, bool weighted, const std::vector<Rat>* probs,
                             const Rat& ratio) {
  QuotientGraph g;
  g.weighted = weighted;
  g.contraction_ratio = ratio;
  g.fnc = std::move(fnc);
  g.out.resize(g.fnc.types.size());
  for (size_t v = 0; v < g.fnc.types.size(); ++v) {
    const TypeExpansion& exp = g.fnc.expansions[v];
    for (size_t slot = 0; slot < exp.children.size(); ++slot) {
      GraphEdge e;
      e.parent = static_cast<int>(v);
      e.slot = static_cast<int>(slot);
      e.child = g.fnc.type_index(exp.children[slot].key);
      assert(e.child >= 0);
      if (weighted)
        e.weight = edge_matrix(g.fnc.types[v].key.neighbors, exp.children[slot], *probs);
      g.out[v].push_back(std::move(e));
    }
  }
  return g;
}

}  // namespace

QuotientGraph build_graph(const SelfSimilarMeasure& mu, const GraphOptions& opts) {
  FncReport fnc = explore_fnc(mu.sys, opts.caps);
  if (fnc.status != FncStatus::fnc_detected)
    throw ValidationError("type exploration hit its caps; cannot certify a finite graph");
  if (opts.weighted) {
    TechnicalAssumptions ta = check_technical_assumptions(mu, fnc);
    if (!ta.all())
      throw ValidationError("technical assumptions violated: " + ta.failing_clause());
    return assemble_graph(std::move(fnc), true, &mu.probs, mu.sys.maps[0].ratio);
  }
  return assemble_graph(std::move(fnc), false, nullptr, rat(0));
}

QuotientGraph build_graph_unweighted(const IfsSystem& sys, const ExploreCaps& caps) {
  FncReport fnc = explore_fnc(sys, caps);
  if (fnc.status != FncStatus::fnc_detected)
    throw ValidationError("type exploration hit its caps; cannot certify a finite graph");
  return assemble_graph(std::move(fnc), false, nullptr, rat(0));
}

// ---------------------------------------------------------------------------
// Strongly connected components (iterative Tarjan).

ClassDecomposition class_decomposition(const QuotientGraph& g, bool enforce_unique) {
  int n = g.vertex_count();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<int>> sccs;
  int counter = 0;

  struct Frame {
    int v;
    size_t edge;
  };
  for (int start = 0; start < n; ++start) {
    if (index[start] != -1) continue;
    std::vector<Frame> call{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.edge < g.out[f.v].size()) {
        int w = g.out[f.v][f.edge++].child;
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back(Frame{w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        int v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        if (low[v] == index[v]) {
          std::vector<int> scc;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            scc.push_back(w);
            if (w == v) break;
          }
          std::sort(scc.begin(), scc.end());
          sccs.push_back(std::move(scc));
        }
      }
    }
  }
  std::sort(sccs.begin(), sccs.end());
  ClassDecomposition out;
  out.sccs = std::move(sccs);
  out.scc_of.assign(n, -1);
  for (size_t c = 0; c < out.sccs.size(); ++c)
    for (int v : out.sccs[c]) out.scc_of[v] = static_cast<int>(c);
  for (size_t c = 0; c < out.sccs.size(); ++c) {
    bool internal = false, leaves = false;
    for (int v : out.sccs[c])
      for (const GraphEdge& e : g.out[v]) {
        if (out.scc_of[e.child] == static_cast<int>(c))
          internal = true;
        else
          leaves = true;
      }
    if (internal) out.loop_classes.push_back(static_cast<int>(c));
    if (internal && !leaves) out.essential_classes.push_back(static_cast<int>(c));
  }
  if (enforce_unique && out.essential_classes.size() != 1)
    throw InvariantViolation("expected exactly one essential class, found " +
                             std::to_string(out.essential_classes.size()));
  return out;
}

// ---------------------------------------------------------------------------
// P_n along paths and oracles.

namespace {

std::vector<Rat> row_times(const std::vector<Rat>& v, const TransitionMatrix& m) {
  assert(static_cast<int>(v.size()) == m.rows);
  std::vector<Rat> out(m.cols, rat(0));
  for (int i = 0; i < m.rows; ++i) {
    if (v[i] == 0) continue;
    for (int k = 0; k < m.cols; ++k) out[k] += v[i] * m.entries[i][k];
  }
  return out;
}

Rat vec_sum(const std::vector<Rat>& v) {
  Rat s = 0;
  for (const Rat& x : v) s += x;
  return s;
}

const GraphEdge& edge_at(const QuotientGraph& g, int vertex, int slot) {
  if (slot < 0 || slot >= static_cast<int>(g.out[vertex].size()))
    throw ValidationError("path leaves the graph: vertex " + std::to_string(vertex) +
                          " has no edge slot " + std::to_string(slot));
  return g.out[vertex][slot];
}

}  // namespace

Rat pn_along(const QuotientGraph& g, const EdgePath& path) {
  if (!g.weighted) throw ValidationError("path products need a weighted graph");
  int vertex = 0;
  std::vector<Rat> row{rat(1)};
  for (int slot : path) {
    const GraphEdge& e = edge_at(g, vertex, slot);
    row = row_times(row, *e.weight);
    vertex = e.child;
  }
  return vec_sum(row);
}

namespace {

struct FollowResult {
  Region region;  // absolute coordinates
  int vertex;
};

FollowResult follow_path_region(const QuotientGraph& g, const EdgePath& path) {
  int vertex = 0;
  Similarity frame{rat(1), SignedPerm::identity(g.fnc.types[0].representative.dimension),
                   Vec(g.fnc.types[0].representative.dimension, rat(-1, 2))};
  Region region = g.fnc.types[0].representative;
  for (int slot : path) {
    const GraphEdge& e = edge_at(g, vertex, slot);
    const TypeChild& child = g.fnc.expansions[vertex].children[slot];
    region = region_image(frame, child.region);
    frame = compose(frame, Similarity{child.size, SignedPerm::identity(frame.dim()), child.anchor});
    vertex = e.child;
  }
  return FollowResult{std::move(region), vertex};
}

}  // namespace

Rat pn_oracle_for_path(const SelfSimilarMeasure& mu, const QuotientGraph& g,
                       const EdgePath& path) {
  FollowResult fr = follow_path_region(g, path);
  const Box cube = mu.sys.domain();
  Box target = fr.region.bounding_box();
  Rat total = 0;
  // word enumeration, structurally independent of the matrix chain; a word
  // can only cover the target if every prefix image already contains it
  std::vector<Word> stack{mu.sys.empty_word()};
  int n = static_cast<int>(path.size());
  while (!stack.empty()) {
    Word w = std::move(stack.back());
    stack.pop_back();
    if (!image_box(w.map, cube).contains_box(target)) continue;
    if (w.length() == n) {
      Box img = image_box(w.map, cube);
      bool covers = true;
      for (const Box& cell : fr.region.cells)
        if (!img.contains_box(cell)) {
          covers = false;
          break;
        }
      if (covers) {
        Rat p = 1;
        for (int l : w.letters) p *= mu.probs[l];
        total += p;
      }
      continue;
    }
    for (int j = mu.sys.count() - 1; j >= 0; --j) stack.push_back(mu.sys.extend(w, j));
  }
  return total;
}

Rat pn_oracle_at_point(const SelfSimilarMeasure& mu, const Vec& x, int n) {
  Rat alpha = rat_pow(mu.sys.maps[0].ratio, n);
  if (!mu.sys.equicontractive())
    throw ValidationError("point oracle defined for equicontractive systems");
  NetEnumeration nets = net_intervals_at(mu.sys, alpha);
  const NetInterval* best = nullptr;
  for (const NetInterval& ni : nets.intervals) {
    if (!ni.region.contains_point(x)) continue;
    if (!best || vec_cmp(ni.anchor, best->anchor) < 0) best = &ni;
  }
  if (!best) throw ValidationError("point lies outside every net interval at that level");
  Rat total = 0;
  for (const Word& w : best->cover) {
    Rat p = 1;
    for (int l : w.letters) p *= mu.probs[l];
    total += p;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Exact polynomial machinery for the spectral certificate.

namespace {

using Poly = std::vector<Rat>;  // coefficient of x^i at index i

Poly poly_trim(Poly p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

int poly_deg(const Poly& p) { return static_cast<int>(p.size()) - 1; }

Rat poly_eval(const Poly& p, const Rat& x) {
  Rat acc = 0;
  for (int i = poly_deg(p); i >= 0; --i) acc = acc * x + p[i];
  return acc;
}

Poly poly_derivative(const Poly& p) {
  Poly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  return poly_trim(d);
}

Poly poly_neg_rem(const Poly& a, const Poly& b) {
  // -(a mod b)
  Poly r = a;
  int db = poly_deg(b);
  while (poly_deg(r) >= db && !r.empty()) {
    Rat f = r.back() / b.back();
    int shift = poly_deg(r) - db;
    for (int i = 0; i <= db; ++i) r[i + shift] -= f * b[i];
    r = poly_trim(r);
  }
  for (Rat& c : r) c = -c;
  return r;
}

Poly poly_gcd(Poly a, Poly b) {
  a = poly_trim(a);
  b = poly_trim(b);
  while (!b.empty()) {
    Poly r = poly_neg_rem(a, b);  // sign irrelevant for gcd
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_div_exact(const Poly& a, const Poly& b) {
  Poly r = a, q(std::max<size_t>(a.size() - b.size() + 1, 1), rat(0));
  int db = poly_deg(b);
  while (poly_deg(r) >= db && !r.empty()) {
    Rat f = r.back() / b.back();
    int shift = poly_deg(r) - db;
    q[shift] = f;
    for (int i = 0; i <= db; ++i) r[i + shift] -= f * b[i];
    r = poly_trim(r);
  }
  return poly_trim(q);
}

std::vector<Poly> sturm_chain(const Poly& p) {
  std::vector<Poly> chain{p, poly_derivative(p)};
  while (!chain.back().empty() && poly_deg(chain.back()) > 0) {
    Poly next = poly_neg_rem(chain[chain.size() - 2], chain.back());
    if (next.empty()) break;
    chain.push_back(std::move(next));
  }
  return chain;
}

int sign_variations(const std::vector<Poly>& chain, const Rat& x) {
  int count = 0, prev = 0;
  for (const Poly& p : chain) {
    if (p.empty()) continue;
    int s = sgn(poly_eval(p, x));
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

}  // namespace

std::vector<Rat> charpoly(const TransitionMatrix& m) {
  // Faddeev–LeVerrier: p(λ) = λ^n + a_{n-1}λ^{n-1} + ... + a_0
  int n = m.rows;
  assert(m.rows == m.cols);
  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, rat(0)));
  std::vector<Rat> coeffs(n + 1, rat(0));
  coeffs[n] = 1;
  // M_1 = A; a_{n-k} = -tr(A M_{k-1} ... ) / k, M_{k+1} = A(M_k + a I)
  std::vector<std::vector<Rat>> Mk(n, std::vector<Rat>(n, rat(0)));
  for (int i = 0; i < n; ++i) Mk[i][i] = 1;  // M_0 = I
  for (int k = 1; k <= n; ++k) {
    // Mk = A * Mk_prev
    std::vector<std::vector<Rat>> next(n, std::vector<Rat>(n, rat(0)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (m.entries[i][l] == 0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += m.entries[i][l] * Mk[l][j];
      }
    Rat trace = 0;
    for (int i = 0; i < n; ++i) trace += next[i][i];
    Rat a = -trace / k;
    coeffs[n - k] = a;
    for (int i = 0; i < n; ++i) next[i][i] += a;
    Mk = std::move(next);
  }
  return coeffs;
}

bool poly_has_root(const std::vector<Rat>& poly, const Rat& x) {
  return poly_eval(poly, x) == 0;
}

std::pair<Rat, Rat> largest_real_root(const std::vector<Rat>& poly, const Rat& width) {
  Poly p = poly_trim(poly);
  if (p.size() <= 1) throw std::invalid_argument("constant polynomial");
  // squarefree part
  Poly g = poly_gcd(p, poly_derivative(p));
  if (poly_deg(g) > 0) p = poly_div_exact(p, g);
  std::vector<Poly> chain = sturm_chain(p);
  // Cauchy bound
  Rat bound = 0;
  for (int i = 0; i + 1 < static_cast<int>(p.size()); ++i)
    bound = std::max(bound, Rat(abs(p[i] / p.back())));
  bound += 1;
  Rat lo = -bound, hi = bound;
  auto count_in = [&](const Rat& a, const Rat& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
  };
  if (count_in(lo, hi) < 1) throw InvariantViolation("spectral polynomial has no real root");
  // shrink towards the largest root
  while (hi - lo > width) {
    Rat mid = (lo + hi) / 2;
    if (poly_eval(p, mid) == 0) {
      if (count_in(mid, hi) == 0) return {mid, mid};
      lo = mid;
      continue;
    }
    if (count_in(mid, hi) >= 1)
      lo = mid;
    else
      hi = mid;
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// High-precision log ratios (MPFR, 300-bit, directed rounding).

namespace {

constexpr mpfr_prec_t kPrec = 300;

std::string mpfr_to_string(mpfr_t v) {
  char buf[128];
  mpfr_snprintf(buf, sizeof buf, "%.40Rg", v);
  return std::string(buf);
}

// log(a)/ (k * log(b)) rounded to nearest
std::string log_ratio_str(const Rat& a, const Rat& b, long k) {
  mpfr_t la, lb, q;
  mpfr_inits2(kPrec, la, lb, q, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_q(la, a.get_mpq_t(), MPFR_RNDN);
  mpfr_log(la, la, MPFR_RNDN);
  mpfr_set_q(lb, b.get_mpq_t(), MPFR_RNDN);
  mpfr_log(lb, lb, MPFR_RNDN);
  mpfr_mul_si(lb, lb, k, MPFR_RNDN);
  mpfr_div(q, la, lb, MPFR_RNDN);
  std::string out = mpfr_to_string(q);
  mpfr_clears(la, lb, q, static_cast<mpfr_ptr>(nullptr));
  return out;
}

// Rigorous outward bounds for log(x)/(k*log(r)) over x in [xlo, xhi], r < 1.
std::pair<std::string, std::string> log_ratio_bounds(const Rat& xlo, const Rat& xhi, const Rat& r,
                                                     long k) {
  mpfr_t num, den, cand, lo_m, hi_m;
  mpfr_inits2(kPrec, num, den, cand, lo_m, hi_m, static_cast<mpfr_ptr>(nullptr));
  bool first = true;
  for (int xi = 0; xi < 2; ++xi)
    for (int rn = 0; rn < 2; ++rn) {
      mpfr_rnd_t rnd = rn ? MPFR_RNDU : MPFR_RNDD;
      mpfr_rnd_t opp = rn ? MPFR_RNDD : MPFR_RNDU;
      mpfr_set_q(num, (xi ? xhi : xlo).get_mpq_t(), rnd);
      mpfr_log(num, num, rnd);
      mpfr_set_q(den, r.get_mpq_t(), opp);
      mpfr_log(den, den, opp);
      mpfr_mul_si(den, den, k, opp);
      mpfr_div(cand, num, den, rnd);
      if (first || mpfr_cmp(cand, lo_m) < 0) mpfr_set(lo_m, cand, MPFR_RNDD);
      if (first || mpfr_cmp(cand, hi_m) > 0) mpfr_set(hi_m, cand, MPFR_RNDU);
      first = false;
    }
  mpfr_nextbelow(lo_m);
  mpfr_nextabove(hi_m);
  std::string slo = mpfr_to_string(lo_m);
  std::string shi = mpfr_to_string(hi_m);
  mpfr_clears(num, den, cand, lo_m, hi_m, static_cast<mpfr_ptr>(nullptr));
  return {slo, shi};
}

// Try to recognize dim = s/t exactly: holds iff rho = r^{qs/t} with the t-th
// root rational and a true root of the characteristic polynomial.
std::optional<Rat> exact_dim_candidate(const std::vector<Rat>& poly, const Rat& rho_lo,
                                       const Rat& rho_hi, const Rat& r, long period) {
  mpfr_t v, lr;
  mpfr_inits2(kPrec, v, lr, static_cast<mpfr_ptr>(nullptr));
  Rat mid = (rho_lo + rho_hi) / 2;
  mpfr_set_q(v, mid.get_mpq_t(), MPFR_RNDN);
  mpfr_log(v, v, MPFR_RNDN);
  mpfr_set_q(lr, r.get_mpq_t(), MPFR_RNDN);
  mpfr_log(lr, lr, MPFR_RNDN);
  mpfr_mul_si(lr, lr, period, MPFR_RNDN);
  mpfr_div(v, v, lr, MPFR_RNDN);
  double approx = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clears(v, lr, static_cast<mpfr_ptr>(nullptr));
  if (!(approx >= 0) || approx > 1e6) return std::nullopt;

  auto try_candidate = [&](long s, long t) -> std::optional<Rat> {
    if (t <= 0 || s < 0 || t > 4096) return std::nullopt;
    // dim = s/t requires rho = (r^{period*s})^{1/t} to be rational and a root
    Rat target_pow = rat_pow(r, period * s);
    if (auto root = rat_root(target_pow, static_cast<unsigned long>(t)))
      if (*root >= rho_lo && *root <= rho_hi && poly_has_root(poly, *root)) return rat(s, t);
    return std::nullopt;
  };

  // continued-fraction convergents of the approximate dimension
  double x = approx;
  long p0 = 1, q0 = 0, p1 = static_cast<long>(std::floor(x)), q1 = 1;
  for (int it = 0; it < 24; ++it) {
    if (auto hit = try_candidate(p1, q1)) return hit;
    double frac = x - std::floor(x);
    if (frac < 1e-14) break;
    x = 1.0 / frac;
    long a = static_cast<long>(std::floor(x));
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Local dimension.

namespace {

struct Tracker {
  int vertex = 0;
  Similarity frame;  // normalized frame -> cube coordinates
  Vec xi;            // tracked point in the normalized frame
  std::vector<Rat> row{};
};

DimCertificate certify_cycle(const QuotientGraph& g, const std::vector<TransitionMatrix>& cycle,
                             int prefix_len) {
  DimCertificate cert;
  cert.prefix_length = prefix_len;
  cert.period = static_cast<int>(cycle.size());
  TransitionMatrix prod = cycle[0];
  for (size_t i = 1; i < cycle.size(); ++i) prod = matrix_product(prod, cycle[i]);
  cert.cycle_product = prod;
  std::vector<Rat> poly = charpoly(prod);
  // products of column-nonzero nonnegative matrices are never nilpotent, so
  // the largest real root is positive; shrink until the enclosure clears 0
  Rat width = rat_pow(rat(1, 2), 120);
  auto enclosure = largest_real_root(poly, width);
  for (int tries = 0; enclosure.first <= 0 && tries < 8; ++tries) {
    width = width * rat_pow(rat(1, 2), 120);
    enclosure = largest_real_root(poly, width);
  }
  if (enclosure.first <= 0)
    throw InvariantViolation("spectral radius enclosure failed to separate from zero");
  auto [lo, hi] = enclosure;
  cert.radius_lo = lo;
  cert.radius_hi = hi;
  const Rat& r = g.contraction_ratio;
  cert.exact_dim = exact_dim_candidate(poly, lo, hi, r, cert.period);
  if (cert.exact_dim) {
    cert.dim_lo = cert.dim_hi = rat_str(*cert.exact_dim);
  } else {
    auto [dlo, dhi] = log_ratio_bounds(lo, hi, r, cert.period);
    cert.dim_lo = dlo;
    cert.dim_hi = dhi;
  }
  return cert;
}

void push_estimates(DimReport& rep, const QuotientGraph& g, const std::vector<Rat>& pns) {
  for (size_t n = 0; n < pns.size(); ++n) {
    DimEstimate est;
    est.n = static_cast<int>(n + 1);
    est.pn = pns[n];
    est.value = log_ratio_str(pns[n], g.contraction_ratio, static_cast<long>(n + 1));
    rep.estimates.push_back(std::move(est));
  }
}

}  // namespace

DimReport local_dimension(const SelfSimilarMeasure& mu, const QuotientGraph& g, const Vec& point,
                          int depth) {
  if (!g.weighted) throw ValidationError("local dimension needs a weighted graph");
  if (static_cast<int>(point.size()) != mu.sys.dim)
    throw ValidationError("point has the wrong dimension");
  if (!mu.sys.domain().contains_point(point))
    throw ValidationError("point lies outside [-1/2,1/2]^d");

  DimReport rep;
  Tracker t;
  t.vertex = 0;
  t.frame = Similarity{rat(1), SignedPerm::identity(mu.sys.dim), Vec(mu.sys.dim, rat(-1, 2))};
  t.xi = vec_sub(point, t.frame.trans);
  t.row = {rat(1)};

  std::map<std::pair<int, Vec>, int> seen;
  seen[{t.vertex, t.xi}] = 0;
  std::vector<TransitionMatrix> step_matrices;
  std::vector<Rat> pns;
  std::optional<std::pair<int, int>> cycle_span;  // (start, period)

  for (int n = 1; n <= depth; ++n) {
    const TypeExpansion& exp = g.fnc.expansions[t.vertex];
    int chosen = -1;
    for (size_t slot = 0; slot < exp.children.size(); ++slot) {
      const TypeChild& c = exp.children[slot];
      if (!c.region.contains_point(t.xi)) continue;
      if (chosen < 0) {
        chosen = static_cast<int>(slot);
        continue;
      }
      int cmp_anchor = vec_cmp(c.anchor, exp.children[chosen].anchor);
      if (cmp_anchor < 0 ||
          (cmp_anchor == 0 && region_cmp(c.region, exp.children[chosen].region) < 0))
        chosen = static_cast<int>(slot);
    }
    if (chosen < 0) throw InvariantViolation("tracked point escaped its net interval");
    const TypeChild& c = exp.children[chosen];
    const GraphEdge& e = edge_at(g, t.vertex, chosen);
    t.row = row_times(t.row, *e.weight);
    step_matrices.push_back(*e.weight);
    pns.push_back(vec_sum(t.row));
    t.frame = compose(t.frame, Similarity{c.size, SignedPerm::identity(mu.sys.dim), c.anchor});
    t.xi = vec_scale(1 / c.size, vec_sub(t.xi, c.anchor));
    t.vertex = e.child;
    rep.followed_path.push_back(chosen);
    if (!cycle_span) {
      auto key = std::make_pair(t.vertex, t.xi);
      auto it = seen.find(key);
      if (it != seen.end())
        cycle_span = std::make_pair(it->second, n - it->second);
      else
        seen.emplace(std::move(key), n);
    }
  }
  push_estimates(rep, g, pns);
  if (cycle_span) {
    std::vector<TransitionMatrix> cyc(step_matrices.begin() + cycle_span->first,
                                      step_matrices.begin() + cycle_span->first + cycle_span->second);
    rep.certificate = certify_cycle(g, cyc, cycle_span->first);
  } else {
    rep.warnings.push_back("no periodic state found up to the requested depth; estimates only");
  }
  return rep;
}

DimReport local_dimension(const SelfSimilarMeasure&, const QuotientGraph& g,
                          const PathTarget& path, int depth) {
  if (!g.weighted) throw ValidationError("local dimension needs a weighted graph");
  DimReport rep;
  // walk prefix, then repeat the cycle up to the requested depth
  int vertex = 0;
  std::vector<Rat> row{rat(1)};
  std::vector<Rat> pns;
  std::vector<TransitionMatrix> cycle_mats;
  int steps = 0;
  auto advance = [&](int slot, bool record_cycle) {
    const GraphEdge& e = edge_at(g, vertex, slot);
    row = row_times(row, *e.weight);
    pns.push_back(vec_sum(row));
    if (record_cycle) cycle_mats.push_back(*e.weight);
    vertex = e.child;
    ++steps;
  };
  for (int slot : path.prefix) {
    if (steps >= depth) break;
    advance(slot, false);
  }
  if (!path.cycle.empty()) {
    int cycle_entry = vertex;
    size_t i = 0;
    bool recorded = false;
    while (steps < depth || !recorded) {
      advance(path.cycle[i], !recorded);
      i = (i + 1) % path.cycle.size();
      if (i == 0 && !recorded) {
        recorded = true;
        if (vertex != cycle_entry)
          throw ValidationError("cycle does not return to its starting vertex");
      }
      if (steps >= depth && recorded) break;
    }
    rep.certificate = certify_cycle(g, cycle_mats, static_cast<int>(path.prefix.size()));
  } else {
    rep.warnings.push_back("no cycle given; estimates only, no certificate");
  }
  push_estimates(rep, g, pns);
  rep.followed_path = path.prefix;
  return rep;
}

}  // namespace netifs
