#pragma once

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cechg/core.hpp"

namespace cechg {

// Finite groupoid given by explicit tables.
//
// Composition convention (fixed throughout, the opposite one is also common):
// comp(g1, g2) = g1·g2 is defined exactly when src(g1) = tgt(g2), and then
// src(g1·g2) = src(g2), tgt(g1·g2) = tgt(g1).  Arrows compose like functions.
struct FiniteGroupoid {
  IndexedSet objects;
  IndexedSet arrows;
  std::vector<int> src;   // arrow -> object
  std::vector<int> tgt;   // arrow -> object
  std::vector<int> unit;  // object -> arrow
  std::vector<int> inv;   // arrow -> arrow
  std::vector<int> comp;  // row-major [a * nArrows + b] = a·b, -1 undefined

  int nObjects() const { return objects.size(); }
  int nArrows() const { return arrows.size(); }

  bool composable(int a, int b) const { return src[a] == tgt[b]; }
  int composeOpt(int a, int b) const {
    return comp[static_cast<size_t>(a) * arrows.size() + b];
  }
  int compose(int a, int b) const;  // DomainError if undefined

  std::vector<int> arrowsFrom(int x) const;      // src == x, declared order
  std::vector<int> hom(int x, int y) const;      // src == x and tgt == y
  bool isGroup() const { return objects.size() == 1; }

  bool operator==(const FiniteGroupoid& o) const;
  bool operator!=(const FiniteGroupoid& o) const { return !(*this == o); }
};

// Fills the composition table from explicit entries; entries only for
// composable pairs, missing composable entries flagged by validate_groupoid.
FiniteGroupoid make_groupoid(IndexedSet objects, IndexedSet arrows,
                             std::vector<int> src, std::vector<int> tgt,
                             std::vector<int> unit, std::vector<int> inv,
                             const std::vector<std::array<int, 3>>& entries);

// Lists every violated axiom; empty report means valid.
Report validate_groupoid(const FiniteGroupoid& g);

// The product groupoid X x X of a finite set: arrows (x,y) with src (x,y)=y,
// tgt (x,y)=x and (x,y)(y,z)=(x,z).
FiniteGroupoid pair_groupoid(const std::vector<Id>& points);

// Group as multiplication table over named elements.
struct GroupTable {
  IndexedSet elements;
  std::vector<int> mul;  // row-major [a * n + b] = a·b
  int identity = -1;     // filled by validate/make

  int n() const { return elements.size(); }
  int times(int a, int b) const {
    return mul[static_cast<size_t>(a) * elements.size() + b];
  }
  int inverseOf(int a) const;
};

Report validate_group(const GroupTable& t);
int group_identity(const GroupTable& t);
GroupTable cyclic_group(int n);  // elements e, g, g2, ...
GroupTable symmetric_group_s3();

// One object "*"; arrows are the group elements.
FiniteGroupoid group_as_groupoid(const GroupTable& table);

// Left action of a finite group on a finite set.
struct FiniteGroupAction {
  GroupTable group;
  IndexedSet set;
  std::vector<int> act;  // row-major [g * |set| + x] = g·x

  int apply(int g, int x) const {
    return act[static_cast<size_t>(g) * set.size() + x];
  }
};

Report validate_group_action(const FiniteGroupAction& a);

// Action groupoid G |x X: arrows (g,x) with s(g,x)=x, t(g,x)=gx and
// (g1, g2 x)(g2, x) = (g1 g2, x).  Keeps the (g, x) decomposition of arrows.
struct ActionGroupoid {
  FiniteGroupoid groupoid;
  FiniteGroupAction action;
  std::vector<std::pair<int, int>> arrowParts;  // arrow -> (g, x)
  int arrowOf(int g, int x) const {
    return g * action.set.size() + x;
  }
};

ActionGroupoid action_groupoid(const FiniteGroupAction& a);

// Componentwise product; objects and arrows ordered row-major, so the pair
// (i, j) sits at index i * |right| + j on both levels.
FiniteGroupoid product_groupoid(const FiniteGroupoid& g,
                                const FiniteGroupoid& h);

// Re-namespaces identifiers with the given prefixes to avoid collisions.
FiniteGroupoid disjoint_union(const FiniteGroupoid& g, const FiniteGroupoid& h,
                              const std::string& prefixG = "L.",
                              const std::string& prefixH = "R.");

struct GroupoidMorphism {
  FiniteGroupoid domain;
  FiniteGroupoid codomain;
  std::vector<int> arrowMap;   // domain arrow -> codomain arrow
  std::vector<int> objectMap;  // domain object -> codomain object
};

Report validate_groupoid_morphism(const GroupoidMorphism& m);

GroupoidMorphism identity_morphism(const FiniteGroupoid& g);

// Arrows g with src(g) in srcObjects and tgt(g) in tgtObjects.
struct LocalComponent {
  std::vector<int> srcObjects;
  std::vector<int> tgtObjects;
  std::vector<int> arrowSubset;  // declared order
};

LocalComponent local_component(const FiniteGroupoid& g,
                               const std::vector<int>& srcObjects,
                               const std::vector<int>& tgtObjects);

// The A = B case of a local component, restricted to a groupoid in its own
// right; keeps original identifiers.
FiniteGroupoid restrict_to_subgroupoid(const FiniteGroupoid& g,
                                       const std::vector<int>& objectSubset);

// Inclusion of the restricted groupoid back into its parent.
GroupoidMorphism subgroupoid_inclusion(const FiniteGroupoid& g,
                                       const std::vector<int>& objectSubset);

// Groupoid action on a finite carrier set via an explicit table.
// Left actions: apply(g, p) defined exactly when src(g) = momentum(p), and
// momentum(g·p) = tgt(g).  Right actions: defined exactly when
// momentum(p) = tgt(g), and momentum(p·g) = src(g).
struct GroupoidAction {
  FiniteGroupoid actor;
  IndexedSet carrier;
  std::vector<int> momentum;  // carrier -> actor object
  bool leftSide = true;
  std::map<std::pair<int, int>, int> act;  // (arrow, carrier) -> carrier

  bool defined(int arrow, int carrier) const {
    return act.count({arrow, carrier}) > 0;
  }
  int apply(int arrow, int carrier) const;  // DomainError if undefined
};

Report validate_action(const GroupoidAction& a);

// Left G^2-action on the arrows of G: momentum g -> (tgt g, src g) and
// (g1,g2)·g3 = g1 g3 g2^{-1}, defined when s(g1)=t(g3) and s(g2)=s(g3).
// The actor is product_groupoid(g, g) with row-major object indexing.
GroupoidAction generalized_conjugation(const FiniteGroupoid& g);

// Right variant: g3·(g1,g2) = g1^{-1} g3 g2, defined when t(g1)=t(g3) and
// t(g2)=s(g3).
GroupoidAction generalized_conjugation_right(const FiniteGroupoid& g);

// Partition of objects, x ~ y iff some arrow joins them.  Blocks are sorted,
// listed by least member; labels() gives object -> block.
struct Components {
  std::vector<std::vector<int>> blocks;
  std::vector<int> label;  // object -> block index
};

Components connected_components(const FiniteGroupoid& g);

// Exhaustive search; returns the first isomorphism in object-bijection and
// arrow order, or nothing.
std::optional<GroupoidMorphism> find_groupoid_isomorphism(
    const FiniteGroupoid& g, const FiniteGroupoid& h);

}  // namespace cechg
