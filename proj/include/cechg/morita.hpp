#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cechg/compose.hpp"

namespace cechg {

// Bibundle that is simultaneously right and left principal; carries both
// division tables.  leftDiv on pairs with equal right momentum solves
// p = phi^L(p, q)·q; rightDiv on fiberwise pairs solves q = p·phi^R(p, q).
struct MoritaEquivalence {
  GeneralizedMorphism gm;
  std::map<std::pair<int, int>, int> leftDiv;
  std::map<std::pair<int, int>, int> rightDiv;

  int leftAt(int p, int q) const;
  int rightAt(int p, int q) const;
};

// Unique source arrow g with p = g·q; DomainError when momenta differ or the
// bibundle is not left principal at the pair.
int left_division(const GeneralizedMorphism& m, int p, int q);

// Left principality (existence and uniqueness), surjective momentum, the
// division-map laws, both invariances, and twisted injectivity of the
// localized component maps over the canonical single-set cover.
Report validate_morita(const GeneralizedMorphism& m);

MoritaEquivalence make_morita(const GeneralizedMorphism& m);

// Swapped actions h·p := p·h^{-1}, p·g := g^{-1}·p; division maps swap.
MoritaEquivalence inverse_morita(const MoritaEquivalence& m);

// The formal inverse bibundle; valid exactly when m is a Morita equivalence.
GeneralizedMorphism inverse_candidate(const GeneralizedMorphism& m);

// Canonical bundle isomorphisms of the two self-composites onto the unit
// bundles: [p1, p2] -> phi^R(p1, p2) on P∘P^{-1} and [p1, p2] ->
// phi^L(p1, p2) on P^{-1}∘P; both verified as bibundle equivalences.
struct UnitIsos {
  ComposedGenMor compositePPinv;  // P∘P^{-1}, a bibundle H -> H
  ComposedGenMor compositePinvP;  // P^{-1}∘P, a bibundle G -> G
  GenMorEquivalence toUnitH;
  GenMorEquivalence toUnitG;
};

UnitIsos canonical_unit_iso(const MoritaEquivalence& m);

// Both factorization identities over all admissible quadruples.
Report factorization_check(const MoritaEquivalence& m);

// Map exchanging the two structures: proj/momentum swap and both actions are
// twisted by inverses.
struct TwistedEquivariantMap {
  GeneralizedMorphism source;
  GeneralizedMorphism target;
  std::vector<int> map;
};

Report validate_twisted(const TwistedEquivariantMap& t);

struct CriterionResult {
  bool certified = false;
  Report report;
  std::map<std::pair<int, int>, int> leftDiv;  // built via the composite
  std::vector<int> psi1;  // P -> Q, twisted equivariant
  std::vector<int> psi2;  // Q -> P, twisted equivariant
};

// Certifies P through a companion Q: searches for bibundle equivalences
// Q∘P -> U_G and P∘Q -> U_H; when both exist the left division is assembled
// from the composite and the q-choice independence is verified.  The search
// is complete, so "not certified" is a genuine negative for this companion.
CriterionResult morita_criterion(const GeneralizedMorphism& p,
                                 const GeneralizedMorphism& q);

// Companion defaults to the formal inverse of p.
CriterionResult morita_criterion(const GeneralizedMorphism& p);

// Local Morita equivalence: two local generalized morphisms in opposite
// directions plus coboundary families over the two birefined covers.
// phiTheta is keyed by (alpha, i) pairs with nonempty U_{alpha_i}; phiEta by
// (i, alpha) pairs with nonempty V_{i_alpha}.
struct LocalMoritaEquivalence {
  LocalGeneralizedMorphism theta;  // G -> H
  LocalGeneralizedMorphism eta;    // H -> G
  std::map<std::pair<int, int>, std::map<int, int>> phiTheta;
  std::map<std::pair<int, int>, std::map<int, int>> phiEta;
};

Report validate_local_morita(const LocalMoritaEquivalence& m);

struct LocalToGlobal {
  MoritaEquivalence forward;   // globalized theta, certified G -> H
  MoritaEquivalence backward;  // globalized eta, certified H -> G
  Report report;
};

LocalToGlobal local_to_global(const LocalMoritaEquivalence& m);

// The explicit local Morita equivalence between the gauge groupoid of a
// group bundle and its group, with base point p0 and the given sections.
LocalMoritaEquivalence gauge_group_fixture(const PrincipalBundle& p,
                                           const Cover& cover,
                                           const SectionFamily& sections,
                                           int basePoint);

}  // namespace cechg
