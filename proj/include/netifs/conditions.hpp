#pragma once

#include "netifs/net.hpp"

namespace netifs {

struct InvariantViolation : std::logic_error {
  using std::logic_error::logic_error;
};

enum class FncStatus { fnc_detected, cap_reached };

struct TypeRecord {
  NetTypeKey key;
  int bfs_generation = 0;
  // one concrete realization, in cube coordinates, for reporting
  Region representative;
  Rat representative_level;
  Rat representative_size;
  Vec representative_anchor;
  bool expanded = false;
};

struct TypeEdge {
  int parent = 0;
  int child = 0;
  int slot = 0;  // position among the parent's children (deterministic order)
};

// Breadth-first closure over net-interval types. Detection means every
// discovered type's children are themselves discovered; caps yield partial
// data and never claim the negative.
struct FncReport {
  FncStatus status = FncStatus::cap_reached;
  std::vector<TypeRecord> types;  // index = type id, root = 0
  std::vector<TypeExpansion> expansions;  // per expanded type
  std::vector<TypeEdge> edges;
  Rat closure_level;  // level by which a full sweep added nothing new
  bool approximate = false;  // full support unavailable; K-filter downgraded

  int type_index(const NetTypeKey& key) const;
  std::vector<std::vector<int>> children_of() const;
  int max_neighbor_count() const;
};

struct ExploreCaps {
  int max_levels = 24;
  int max_types = 512;
};

FncReport explore_fnc(const IfsSystem& sys, const ExploreCaps& caps = {});

struct WscLevel {
  Rat level;
  int max_neighbors = 0;
  int interval_count = 0;
};

struct WscBound {
  int max_neighbors = 0;  // lower bound on sup #V(Δ); exact when FNC holds
  std::vector<WscLevel> per_level;
};

WscBound wsc_bound(const IfsSystem& sys, const std::vector<Rat>& levels);

struct GftcSet {
  std::vector<Similarity> elements;  // canonical order; includes the identity
  Rat truncation_alpha;
  std::vector<std::pair<Rat, int>> growth;  // threshold -> cumulative size
  bool inverse_closed = false;
  bool contains_identity = false;
  // Finite-closure certificate when the FNC exploration converged:
  // every element equals T_i^{-1}∘T_j for neighbors of one discovered type.
  std::optional<bool> contained_in_witness;
  std::optional<int> witness_size;
};

GftcSet gftc_set(const IfsSystem& sys, const Rat& truncation_alpha,
                 const FncReport* fnc = nullptr);

std::vector<Similarity> neighbor_pair_witness(const FncReport& fnc);

struct FsetResult {
  std::vector<Vec> vectors;  // cumulative normalized differences, sup-norm <= 1
  std::vector<std::pair<int, int>> sizes_per_n;
  bool stabilized = false;
};

// Sup-norm characterization for equicontractive systems with ratio r:
// collect r^{-n}(S_σ(0) - S_τ(0)) over |σ|=|τ|=n whenever the sup-norm is
// at most 1.
FsetResult fset_characterization(const IfsSystem& sys, int n_max);

struct OverlapLevel {
  Rat level;
  int overlapping_pairs = 0;
  std::optional<Rat> min_normalized;  // min m(Sσ(cube) ∩ Sτ(cube)) / alpha
};

struct OverlapFloor {
  std::optional<Rat> eps_hat;  // min over levels; empty when nothing overlaps
  std::vector<OverlapLevel> per_level;
  // Proof-device constants, reported for diagnostics only.
  Rat delta_diagnostic;
  std::optional<Rat> eps1_diagnostic;
};

OverlapFloor overlap_floor(const IfsSystem& sys, const std::vector<Rat>& levels);

}  // namespace netifs
