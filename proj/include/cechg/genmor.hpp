#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cechg/cech.hpp"

namespace cechg {

// Bibundle: right principal H-bundle over the objects of the source groupoid
// together with a compatible left action of the source.  left maps
// (source arrow g, total p) -> g·p, defined exactly when src(g) = proj(p);
// then proj(g·p) = tgt(g).
struct GeneralizedMorphism {
  FiniteGroupoid source;
  PrincipalBundle bundle;
  std::map<std::pair<int, int>, int> left;

  bool leftDefined(int g, int p) const { return left.count({g, p}) > 0; }
  int leftAct(int g, int p) const;

  bool operator==(const GeneralizedMorphism& o) const {
    return source == o.source && bundle == o.bundle && left == o.left;
  }
};

Report validate_genmor(const GeneralizedMorphism& m);

// Pullback of the unit bundle along the object map, with left action
// g·(x, h) = (tgt g, Phi(g)·h); the canonical section x -> (x, unit) is
// checked to intertwine both actions.
GeneralizedMorphism from_strict_morphism(const GroupoidMorphism& m);

// The identity morphism as a bibundle: the unit bundle of g.
GeneralizedMorphism unit_genmor(const FiniteGroupoid& g);

// Cocycle data over the source objects with values in H, plus arrow maps
// theta[(b, a)] : arrows of the (a, b) local component -> arrows of H.
// Components with empty arrow sets carry no entry.
struct LocalGeneralizedMorphism {
  FiniteGroupoid source;
  LocalTrivData data;
  std::map<std::pair<int, int>, std::map<int, int>> theta;

  int thetaAt(int b, int a, int g) const;
};

Report validate_local_genmor(const LocalGeneralizedMorphism& m);

// theta_ba(g) = division(sigma_b(tgt g), g·sigma_a(src g)).
LocalGeneralizedMorphism localize(const GeneralizedMorphism& m,
                                  const Cover& cover,
                                  const SectionFamily& sections);

// Glue the data and install g·[a, x, h] = [b, tgt g, theta_ba(g)·h] with b
// the least index containing tgt g; well-definedness over representatives
// and the b-choice is re-verified, not assumed.
struct Globalized {
  GeneralizedMorphism gm;
  GluedBundle glued;
};

Globalized globalize(const LocalGeneralizedMorphism& m);

// Equivalence of bibundles: bundle morphism that also intertwines the left
// actions.
struct GenMorEquivalence {
  GeneralizedMorphism source;
  GeneralizedMorphism target;
  std::vector<int> map;
};

Report validate_genmor_equivalence(const GenMorEquivalence& e);

// Same engine as bundle isomorphism search with the left-equivariance filter.
std::optional<GenMorEquivalence> find_equivalence(
    const GeneralizedMorphism& a, const GeneralizedMorphism& b);

// Local form of an equivalence with coboundary families over one cover.
struct LocalEquivalence {
  LocalGeneralizedMorphism from;
  LocalGeneralizedMorphism to;
  SigmaFamily sigma;  // per index: base point -> arrow of H
};

Report validate_local_equivalence(const LocalEquivalence& e);

// Sigma_a(x) = division_Q(sigma2_a(x), Sigma(sigma1_a(x))).
LocalEquivalence localize_equivalence(const GenMorEquivalence& e,
                                      const Cover& cover,
                                      const SectionFamily& sectionsSource,
                                      const SectionFamily& sectionsTarget);

// [a, x, h] -> [a, x, Sigma_a(x)·h] between the globalized bibundles.
GenMorEquivalence globalize_equivalence(const LocalEquivalence& e);

// Bibundles between action groupoids are equivariant pointed bundles; checks
// the split identities for the lift maps, their relation to the transition
// cocycle, and the equivariance of the glued section.
Report classify_equivariant(const LocalGeneralizedMorphism& m,
                            const ActionGroupoid& src,
                            const ActionGroupoid& dst);

}  // namespace cechg
