#pragma once

#include <random>

#include "cechg/morita.hpp"
#include "cechg/nerve.hpp"

namespace cechg {

// Deterministic generator; a fixed seed replays an instance exactly.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) {
    return static_cast<int>(eng() % static_cast<std::uint64_t>(n));
  }
  bool coin() { return (eng() & 1) != 0; }
};

IndexedSet named_set(const std::string& stem, int n);

// --- named fixtures ---------------------------------------------------

// Trivial group bundle over an n-point base.
PrincipalBundle trivial_group_bundle(const GroupTable& g, int basePoints);

// The bibundle (X x P, pr1, proj∘pr2) from the pair groupoid of the base to
// the gauge groupoid, with (x, y)·(y, p) = (x, p).
GeneralizedMorphism pair_to_gauge(const PrincipalBundle& p,
                                  const GaugeGroupoid& gauge);

// The same underlying bundle viewed from an action groupoid over the base:
// (g, x)·(x, p) = (g·x, p).
GeneralizedMorphism action_to_gauge(const ActionGroupoid& ag,
                                    const PrincipalBundle& p,
                                    const GaugeGroupoid& gauge);

// Z2-valued data over {m1,m2,m3} with sets {m1,m2}, {m2,m3} and the overlap
// transition given by the chosen element.
LocalTrivData z2_overlap_data(int overlapElement);

// Swap action of Z2 on a two-point set.
ActionGroupoid z2_swap_action();

// Two-set cover of an n-point base: a prefix and a suffix with one point of
// overlap (n >= 2).
Cover two_set_cover(const IndexedSet& base);

// --- randomized instances ---------------------------------------------

FiniteGroupoid random_groupoid(Rng& rng, int maxArrows);
Cover random_cover(Rng& rng, const IndexedSet& base, int maxSets);
LocalTrivData random_trivdata(Rng& rng, const Cover& cover,
                              const FiniteGroupoid& g);
SectionFamily random_sections(Rng& rng, const PrincipalBundle& p,
                              const Cover& cover);

// A strict morphism drawn from a small family, together with its bibundle.
GroupoidMorphism random_strict_morphism(Rng& rng, int maxArrows);

// A composable pair of bibundles with covers and sections for both factors.
struct ComposablePair {
  GeneralizedMorphism p;
  GeneralizedMorphism q;
  Cover coverU;
  SectionFamily sectionsP;
  Cover coverV;
  SectionFamily sectionsQ;
};

ComposablePair random_composable_pair(Rng& rng);

// Bibundles that are Morita equivalences, and ones that are provably not.
GeneralizedMorphism random_morita_bibundle(Rng& rng);
GeneralizedMorphism random_non_morita_bibundle(Rng& rng);

}  // namespace cechg
