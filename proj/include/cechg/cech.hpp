#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "cechg/bundle.hpp"

namespace cechg {

// Finite cover of a finite base set; sets are stored as ascending index lists
// and must union to the base.
struct Cover {
  IndexedSet base;
  IndexedSet indices;
  std::vector<std::vector<int>> sets;

  bool memberOf(int idx, int m) const;
  std::vector<int> overlap(int a, int b) const;  // ascending
  std::vector<int> indicesContaining(int m) const;
  int leastIndexContaining(int m) const;  // DomainError if none
  Report validate() const;

  bool operator==(const Cover& o) const {
    return base == o.base && indices == o.indices && sets == o.sets;
  }
  bool operator!=(const Cover& o) const { return !(*this == o); }
};

Cover singleton_cover(const IndexedSet& base, const Id& name = "U");

// Refinement: every fine set is contained in the coarse set it maps to.
struct Refinement {
  Cover coarse;
  Cover fine;
  std::vector<int> map;  // fine index -> coarse index

  Report validate() const;
};

// Nonabelian 1-cocycle: local momenta and transition arrows over a cover.
// cocycle holds a key (a, b) exactly when the overlap U_a ∩ U_b is nonempty,
// including the diagonal.
struct LocalTrivData {
  Cover cover;
  FiniteGroupoid structure;
  std::vector<std::map<int, int>> momenta;  // per index: base point -> object
  std::map<std::pair<int, int>, std::map<int, int>> cocycle;

  int momentumAt(int idx, int m) const;
  int cocycleAt(int a, int b, int m) const;
  // Serialization key used for canonical ordering of enumeration output.
  std::vector<int> orderKey() const;

  bool operator==(const LocalTrivData& o) const {
    return cover == o.cover && structure == o.structure &&
           momenta == o.momenta && cocycle == o.cocycle;
  }
  bool operator!=(const LocalTrivData& o) const { return !(*this == o); }
};

Report validate_trivdata(const LocalTrivData& d);

// Glued bundle with its quotient bookkeeping.  Canonical representative of a
// class: the triple whose cover index is the least one containing the point.
struct GluedBundle {
  PrincipalBundle bundle;
  LocalTrivData data;
  std::vector<std::tuple<int, int, int>> reps;  // total -> (alpha, m, g)
  std::map<std::tuple<int, int, int>, int> canon;

  // Class of an arbitrary admissible triple.
  int classOf(int alpha, int m, int g) const;
};

GluedBundle glue_bundle(const LocalTrivData& d);

// Per cover index: base point -> chosen total element.
using SectionFamily = std::vector<std::map<int, int>>;

// sigma_a(m) = [a, m, unit(eps_a(m))].
SectionFamily canonical_glued_sections(const GluedBundle& gb);

// Least total element of each fiber, restricted to each cover set.
SectionFamily canonical_sections(const PrincipalBundle& p, const Cover& cover);

Report validate_sections(const PrincipalBundle& p, const Cover& cover,
                         const SectionFamily& sections);

// eps_a = momentum ∘ sigma_a, Phi_ab(m) = division(sigma_a(m), sigma_b(m)).
LocalTrivData extract_trivdata(const PrincipalBundle& p, const Cover& cover,
                               const SectionFamily& sections);

// 0-cochain family conjugating one cocycle into another.
using SigmaFamily = std::vector<std::map<int, int>>;

struct LocalMorphismData {
  LocalTrivData from;
  LocalTrivData to;
  SigmaFamily sigma;  // per index: base point -> arrow
};

Report validate_local_morphism(const LocalMorphismData& m);

// New momenta t∘Sigma, new cocycle Sigma_a · Phi_ab · Sigma_b^{-1};
// requires s∘Sigma_a = eps_a pointwise.
LocalTrivData apply_coboundary(const SigmaFamily& sigma,
                               const LocalTrivData& d);

SigmaFamily unit_sigma(const LocalTrivData& d);
SigmaFamily compose_sigma(const LocalTrivData& base, const SigmaFamily& first,
                          const SigmaFamily& second);  // pointwise product

// Decision procedure: the overlap constraints factor pointwise, so a witness
// exists iff each point admits an arrow between the two momenta at its least
// covering index.  Returns the canonical witness or nothing.
std::optional<LocalMorphismData> are_cohomologous(const LocalTrivData& d1,
                                                  const LocalTrivData& d2);

// [a, x, g] -> [a, x, Sigma_a(x)·g] between the glued bundles.
BundleMorphism build_bundle_morphism(const LocalMorphismData& m);

LocalTrivData refine_data(const LocalTrivData& d, const Refinement& r);

// Witness Sigma(f,g)_j = Phi_{f(j) g(j)} restricted; then
// f*(d) = apply_coboundary(Sigma(f,g), g*(d)).
LocalMorphismData refinement_independence_witness(const LocalTrivData& d,
                                                  const Refinement& rf,
                                                  const Refinement& rg);

struct H1Result {
  std::vector<std::vector<LocalTrivData>> classes;  // members sorted
  std::vector<LocalTrivData> representatives;       // least member per class
  long long cocycleCount = 0;
};

// Enumerates every valid datum on the cover and partitions by
// are_cohomologous; BudgetError when the enumeration size exceeds the budget.
H1Result h1_at_cover(const Cover& cover, const FiniteGroupoid& g,
                     Budget& budget);

// Group-valued data are ordinary principal bundles: momenta land in the one
// object and the cocycle is a classical group cocycle.
Report classify_group_data(const LocalTrivData& d);

// Splits an action-groupoid cocycle into its group cocycle and the section
// family, checking the two compatibility identities.
struct ActionClassification {
  LocalTrivData groupCocycle;                // over the group, same cover
  std::vector<std::map<int, int>> section;   // per index: point -> X element
  Report report;
};

ActionClassification classify_action_data(const LocalTrivData& d,
                                          const ActionGroupoid& ag);

// Quotient (P × X)/G for a group bundle P and a left G-set X; classes are
// canonical orbit representatives in lexicographic pair order.
struct AssociatedBundle {
  IndexedSet total;
  IndexedSet base;
  std::vector<int> proj;
  std::vector<std::pair<int, int>> reps;  // (total idx of P, X idx)
  std::map<std::pair<int, int>, int> classIndex;

  int classOf(int p, int x) const;
};

AssociatedBundle associated_bundle(const PrincipalBundle& p,
                                   const FiniteGroupAction& x);

// Glue a global section from local families eps_a: U_a -> X satisfying the
// compatibility identity with the group cocycle; nothing when incompatible.
std::optional<std::vector<int>> associated_section(
    const AssociatedBundle& ab, const PrincipalBundle& p, const Cover& cover,
    const SectionFamily& sections, const std::vector<std::map<int, int>>& eps,
    const FiniteGroupAction& x);

// Family of local gauge transformations tau_ba over nonempty overlaps,
// indexed by (b, a); each map sends total elements of P over U_ab to total
// elements over U_ab.
struct GaugeTransformationFamily {
  std::map<std::pair<int, int>, std::map<int, int>> maps;
};

GaugeTransformationFamily gauge_tau_identity(const PrincipalBundle& p,
                                             const Cover& cover);
GaugeTransformationFamily gauge_tau_from_transitions(
    const PrincipalBundle& p, const Cover& cover,
    const SectionFamily& sections);

// Cocycle over the gauge groupoid with inclusion momenta:
// Phi_ab(x) = [sigma_a(x), tau_ba(sigma_a(x))].
LocalTrivData gauge_cocycles(const PrincipalBundle& p, const Cover& cover,
                             const SectionFamily& sections,
                             const GaugeTransformationFamily& tau,
                             const GaugeGroupoid& gauge);

}  // namespace cechg
