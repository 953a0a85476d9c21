#pragma once

#include "netifs/conditions.hpp"

namespace netifs {

struct SelfSimilarMeasure {
  IfsSystem sys;
  std::vector<Rat> probs;

  Rat p_min() const;
};

SelfSimilarMeasure make_measure(IfsSystem sys, std::vector<Rat> probs);

struct TechnicalAssumptions {
  bool fnc_detected = false;
  bool attractor_is_cube = false;
  bool boundary_pmin = false;
  bool equicontractive = false;

  bool all() const {
    return fnc_detected && attractor_is_cube && boundary_pmin && equicontractive;
  }
  std::string failing_clause() const;
};

TechnicalAssumptions check_technical_assumptions(const SelfSimilarMeasure& mu,
                                                 const FncReport& fnc);

// Parent-cover × child-cover matrix; entry (i,k) = p_j exactly when the
// column-k map is the row-i map composed with S_j. Rows and columns are
// ordered lexicographically by the map's image of 0.
struct TransitionMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<Rat>> entries;

  bool operator==(const TransitionMatrix& o) const {
    return rows == o.rows && cols == o.cols && entries == o.entries;
  }
};

TransitionMatrix matrix_product(const TransitionMatrix& a, const TransitionMatrix& b);
Rat entry_sum(const TransitionMatrix& m);

struct GraphEdge {
  int parent = 0;
  int child = 0;
  int slot = 0;
  std::optional<TransitionMatrix> weight;
};

struct QuotientGraph {
  bool weighted = false;
  Rat contraction_ratio;  // meaningful when weighted
  FncReport fnc;          // vertices = fnc.types, root = 0
  std::vector<std::vector<GraphEdge>> out;  // per vertex, slot order

  int vertex_count() const { return static_cast<int>(fnc.types.size()); }
};

struct GraphOptions {
  bool weighted = true;
  ExploreCaps caps;
};

// Weighted build enforces the technical assumptions and throws
// ValidationError naming the failing clause; graph-only builds need FNC
// detection only.
QuotientGraph build_graph(const SelfSimilarMeasure& mu, const GraphOptions& opts = {});
QuotientGraph build_graph_unweighted(const IfsSystem& sys, const ExploreCaps& caps = {});

struct ClassDecomposition {
  std::vector<std::vector<int>> sccs;   // each sorted; deterministic order
  std::vector<int> scc_of;              // vertex -> scc index
  std::vector<int> loop_classes;        // scc indices with an internal edge
  std::vector<int> essential_classes;   // loop classes no edge leaves
};

// `enforce_unique` asserts the unique-essential-class invariant and throws
// InvariantViolation on violation (engine bug under the technical
// assumptions).
ClassDecomposition class_decomposition(const QuotientGraph& g, bool enforce_unique);

// Path from the root: edge slots to follow, path[i] indexes out[v_i].
using EdgePath = std::vector<int>;

Rat pn_along(const QuotientGraph& g, const EdgePath& path);

// Independent brute force: sum of p_σ over all length-n words whose image
// contains the net interval reached by the path.
Rat pn_oracle_for_path(const SelfSimilarMeasure& mu, const QuotientGraph& g,
                       const EdgePath& path);
// Same, for the net interval of a point at level r^n (boundary points take
// the lexicographically smallest containing chain).
Rat pn_oracle_at_point(const SelfSimilarMeasure& mu, const Vec& x, int n);

struct DimEstimate {
  int n = 0;
  Rat pn;
  std::string value;  // log(P_n)/log(r^n), 256-bit evaluation
};

struct DimCertificate {
  int prefix_length = 0;
  int period = 0;
  TransitionMatrix cycle_product;
  Rat radius_lo, radius_hi;  // certified enclosure of the spectral radius
  std::optional<Rat> exact_dim;
  std::string dim_lo, dim_hi;
};

struct DimReport {
  std::vector<DimEstimate> estimates;
  std::optional<DimCertificate> certificate;
  std::vector<std::string> warnings;
  EdgePath followed_path;  // for point queries: the chain actually taken
};

struct PathTarget {
  EdgePath prefix;
  EdgePath cycle;  // empty = no periodic certificate requested
};

DimReport local_dimension(const SelfSimilarMeasure& mu, const QuotientGraph& g,
                          const Vec& point, int depth);
DimReport local_dimension(const SelfSimilarMeasure& mu, const QuotientGraph& g,
                          const PathTarget& path, int depth);

// --- exact spectral enclosure ----------------------------------------------

// Characteristic polynomial, monic, exact coefficients (constant term first).
std::vector<Rat> charpoly(const TransitionMatrix& m);

// Certified enclosure of the largest real root (the spectral radius for
// nonnegative matrices), width at most `width`.
std::pair<Rat, Rat> largest_real_root(const std::vector<Rat>& poly, const Rat& width);

bool poly_has_root(const std::vector<Rat>& poly, const Rat& x);

}  // namespace netifs
