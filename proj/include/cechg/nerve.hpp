#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cechg/genmor.hpp"

namespace cechg {

// Degree-n piece of the nerve: neighbour-to-neighbour composable tuples
// (g1, ..., gn) with src(g_i) = tgt(g_{i+1}); degree 0 is the object set.
// The n+1 face maps drop the first arrow, merge a neighbouring pair, or drop
// the last arrow; degeneracies are not modelled.
struct NerveLevel {
  FiniteGroupoid g;
  int degree = 0;
  std::vector<std::vector<int>> tuples;
  std::map<std::vector<int>, int> index;
  IndexedSet names;  // one id per tuple, used as a base set for covers

  std::vector<int> faceTuple(int k, const std::vector<int>& t) const;
  int indexOf(const std::vector<int>& t) const;
};

NerveLevel nerve(const FiniteGroupoid& g, int n);

// The degree-2 face identities: tgt∘mu = tgt∘pr1, src∘mu = src∘pr2,
// tgt∘pr2 = src∘pr1, checked over every composable pair.
Report check_face_identities(const FiniteGroupoid& g);

// Cover of the degree-n nerve with sets indexed by (n+1)-tuples of base
// indices: a tuple lies in U_{a1..a_{n+1}} when its successive endpoints lie
// in the corresponding sets.  Empty sets are kept so that index projections
// stay total.
Cover simplicial_cover(const Cover& base, const NerveLevel& level);

// The degree-n cover refines each face-pulled-back degree-(n-1) cover via the
// index projection dropping position k+1.
Report simplicial_cover_refines_faces(const Cover& base,
                                      const FiniteGroupoid& g, int n);

// Pull a cocycle back along a map into its base: the cover becomes the
// preimage cover (same indices), momenta and cocycle compose with the map.
LocalTrivData pullback_cocycle(const LocalTrivData& d, const IndexedSet& w,
                               const std::vector<int>& m);

// The nerve-level coherence of a localized bibundle: the degree-1 coboundary
// relation, its three pullbacks to degree 2, the degree-2 cocycle relation of
// the component maps, and the global bundle-morphism identity
// mu*Theta = pr1*Theta ∘ pr2*Theta.  Issue prefixes name the failing family.
Report check_theta_coherence(const LocalGeneralizedMorphism& m);

// Cartesian powers of a refinement map refine the nerve covers, and
// refine-then-pullback equals pullback-then-refine on cocycle data, degree by
// degree up to n.  The data must live over the objects of g.
Report simplicial_refinement_check(const FiniteGroupoid& g,
                                   const LocalTrivData& d, const Refinement& r,
                                   int n);

// The subgroupoid {(x1, x2) : f(x1) = f(x2)} of the pair groupoid.
FiniteGroupoid fibred_product_groupoid(const IndexedSet& x,
                                       const IndexedSet& y,
                                       const std::vector<int>& f);

struct DescentReport {
  Report report;
  int classesOnX = 0;  // equivalence classes of bibundles X x_Y X -> G
  int classesOnY = 0;  // isomorphism classes of G-bundles on Y
};

// Enumerates generalized morphisms X x_Y X -> G, checks the descent cocycle
// identity and the pullback-then-descend round trip, and compares class
// counts with an enumeration of bundles over Y.
DescentReport descent_roundtrip(const IndexedSet& x, const IndexedSet& y,
                                const std::vector<int>& f, const GroupTable& g,
                                Budget& budget);

}  // namespace cechg
