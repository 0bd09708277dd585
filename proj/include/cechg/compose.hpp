#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cechg/genmor.hpp"

namespace cechg {

// Composite bibundle Q∘P with its quotient bookkeeping.  Classes of pairs
// (p, q) with momentum_P(p) = proj_Q(q) modulo (p, q) ~ (p·g, g^{-1}·q);
// representatives are the least orbit elements in lexicographic pair order.
struct ComposedGenMor {
  GeneralizedMorphism gm;
  std::vector<std::pair<int, int>> reps;
  std::map<std::pair<int, int>, int> classIndex;

  int classOf(int p, int q) const;
};

// P : F -> G followed by Q : G -> H; DomainError on a middle mismatch.
ComposedGenMor compose_global(const GeneralizedMorphism& p,
                              const GeneralizedMorphism& q);

// The division map of the composite evaluated through the factors:
// phi(q1, phi_P(p1, p2)·q2); checked against the composite bundle's own
// division map by the tests.
int composite_division(const ComposedGenMor& c, const GeneralizedMorphism& p,
                       const GeneralizedMorphism& q, int class1, int class2);

// Fine cover with sets U_{a_i} = eps_a^{-1}(V_i), nonempty only, ordered by
// a then i; both index projections kept.
struct Birefinement {
  Cover coarse;
  Cover coverV;
  Cover fine;
  std::vector<int> toAlpha;  // fine index -> coarse index
  std::vector<int> toI;      // fine index -> index of V

  Refinement asRefinement() const;
};

// momenta: the coarse data's local momenta into the base of coverV.
Birefinement birefine(const Cover& coverU,
                      const std::vector<std::map<int, int>>& momenta,
                      const Cover& coverV);

// Restriction of data and component maps to the birefined cover.
LocalGeneralizedMorphism refine_local_genmor(const LocalGeneralizedMorphism& m,
                                             const Birefinement& b);

// Composition over the birefined cover:
//   eps'_{a_i} = eps2_i ∘ eps1_{a_i},
//   Phi'_{a_i b_j} = Eta_{i j}(Phi_{a_i b_j}),
//   (Eta∘Theta)_{b_j a_i}(f) = Eta_{j i}(Theta_{b_j a_i}(f)).
// The output is re-validated.
LocalGeneralizedMorphism compose_local(const LocalGeneralizedMorphism& theta,
                                       const LocalGeneralizedMorphism& eta,
                                       Birefinement* birOut = nullptr);

// Canonical composite sections sigma'_{a_i}(x) = [sigma1_{a_i}(x),
// sigma2_i(eps1_{a_i}(x))]; checks that localizing the composite equals the
// composition of the localizations, exactly.
Report check_local_global_compat(const GeneralizedMorphism& p,
                                 const GeneralizedMorphism& q,
                                 const Cover& coverU,
                                 const SectionFamily& sectionsP,
                                 const Cover& coverV,
                                 const SectionFamily& sectionsQ);

}  // namespace cechg
