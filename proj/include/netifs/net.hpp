#pragma once

#include <map>
#include <optional>
#include <vector>

#include "netifs/ifs.hpp"

namespace netifs {

// One net interval: the region of points sharing an open-cover signature at
// a generation scale, together with that cover. Regions may be disconnected.
struct NetInterval {
  Rat level;
  Region region;
  std::vector<Word> cover;  // signature words, sorted by letters
  Rat size;                 // side of the largest inscribed axis-aligned cube
  Vec anchor;               // lex-min placement of that cube

  // T_Δ(x) = size·x + anchor maps [0,1]^d onto the inscribed cube.
  Similarity norm_map() const;
};

// Deduped cover maps normalized by T_Δ^{-1}, canonically sorted.
std::vector<Similarity> neighbor_set(const NetInterval& n);

// Identity of a net interval for quotient purposes: the normalized region
// together with the neighbor maps (ratios included). Equal keys have
// isomorphic sub-structure because every descendant word factors through a
// cover word.
struct NetTypeKey {
  Region normalized;
  std::vector<Similarity> neighbors;

  bool operator==(const NetTypeKey& o) const {
    return normalized == o.normalized && neighbors == o.neighbors;
  }
  bool operator<(const NetTypeKey& o) const;
};

NetTypeKey type_of(const NetInterval& n);
NetTypeKey root_type(int dim);

struct EnumerateOptions {
  // When the system lacks full support, keep only net intervals meeting the
  // depth-m cover of K and mark results approximate.
  int k_cover_depth = 3;
};

struct NetEnumeration {
  Rat level;
  std::vector<NetInterval> intervals;  // sorted by region
  bool k_filter_approximate = false;
};

NetEnumeration net_intervals_at(const IfsSystem& sys, const Rat& alpha,
                                const EnumerateOptions& opts = {});

// All net intervals whose closed region contains the point; boundary points
// belong to several. The lexicographically-smallest-anchor interval comes
// first, which is the one chain-following picks.
std::vector<const NetInterval*> containing_intervals(const NetEnumeration& nets, const Vec& p);

struct ChildCertificate {
  // child cell index -> parent cell index containing it
  std::vector<std::pair<int, int>> containments;
};

// Net intervals at the finer level lying inside n's region, with cell-wise
// containment certificates.
std::vector<std::pair<NetInterval, ChildCertificate>> children(
    const IfsSystem& sys, const NetInterval& n, const Rat& alpha_child,
    const EnumerateOptions& opts = {});

// --- type-local expansion -------------------------------------------------

// A map active at the child scale inside a normalized net interval, with the
// (neighbor row, appended letters) derivations that produce it.
struct ActiveMap {
  Similarity map;
  Rat ratio;
  std::vector<std::pair<int, std::vector<int>>> provenance;
};

struct TypeChild {
  Region region;  // inside the parent's normalized frame
  std::vector<ActiveMap> cover;
  NetTypeKey key;
  Rat size;    // inscribed-cube side of `region`
  Vec anchor;  // its lex-min anchor, still in the parent frame
};

struct TypeExpansion {
  Rat child_scale;  // next refinement threshold, relative to the parent frame
  std::vector<TypeChild> children;  // deterministic order (by region)
};

// Decomposes a type at its first refinement threshold below the birth scale
// max_i ratio(T_i). Realization-independent.
TypeExpansion expand_type(const IfsSystem& sys, const NetTypeKey& type);

// --- shared arrangement sweep ----------------------------------------------

struct SignatureClass {
  std::vector<int> signature;  // indices into the box list, sorted
  std::vector<Box> cells;
};

// Groups the full-dimensional arrangement cells of `boxes` (clipped to
// `window` when given) by the set of boxes whose open interior covers them.
// Cells covered by no box are dropped.
std::vector<SignatureClass> signature_classes(int dim, const std::vector<Box>& boxes,
                                              const Region* window = nullptr);

}  // namespace netifs
