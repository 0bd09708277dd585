#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "cechg/groupoid.hpp"

namespace cechg {

// Right principal bundle with groupoid structure: surjection proj onto the
// base, momentum into the structure objects, and a right action that is free
// and transitive on each fiber.  The action table is defined exactly on pairs
// (p, g) with momentum(p) = tgt(g); then momentum(p·g) = src(g).
struct PrincipalBundle {
  IndexedSet total;
  IndexedSet base;
  std::vector<int> proj;      // total -> base
  std::vector<int> momentum;  // total -> structure object
  FiniteGroupoid structure;
  std::map<std::pair<int, int>, int> action;  // (p, g) -> p·g

  bool actDefined(int p, int g) const { return action.count({p, g}) > 0; }
  int act(int p, int g) const;  // DomainError if undefined
  std::vector<int> fiber(int m) const;

  bool operator==(const PrincipalBundle& o) const {
    return total == o.total && base == o.base && proj == o.proj &&
           momentum == o.momentum && structure == o.structure &&
           action == o.action;
  }
};

Report validate_bundle(const PrincipalBundle& p);

// The unique arrow with q = p·g; DomainError when proj(p) != proj(q), a
// bundle-invalid error when no or several arrows solve the equation.
int division(const PrincipalBundle& p, int pIdx, int qIdx);

// Full table over fiberwise pairs; built once, looked up afterwards.
struct DivisionTable {
  std::map<std::pair<int, int>, int> table;
  int at(int p, int q) const;
};

DivisionTable division_table(const PrincipalBundle& p);

// Total space = arrows, proj = tgt, momentum = src, right multiplication.
PrincipalBundle unit_bundle(const FiniteGroupoid& g);

// Total space {(m, p) : f(m) = proj(p)}; division agrees with the one of the
// original bundle on second components.
PrincipalBundle pullback_bundle(const PrincipalBundle& p, const IndexedSet& m,
                                const std::vector<int>& f);

// Pullback of the unit bundle along alpha : M -> objects.
PrincipalBundle trivial_bundle(const FiniteGroupoid& g, const IndexedSet& m,
                               const std::vector<int>& alpha);

// Total {(p, p') : proj = proj'} with structure product_groupoid(G, G').
PrincipalBundle fibred_product(const PrincipalBundle& p,
                               const PrincipalBundle& q);

// Exhaustive check of phi(p·g1, q·g2) = g1^{-1}·phi(p, q)·g2 over all
// fiberwise pairs and admissible arrow pairs.
Report check_division_equivariance(const PrincipalBundle& p);

struct BundleMorphism {
  PrincipalBundle source;
  PrincipalBundle target;
  std::vector<int> map;  // source total -> target total
};

// Fiber-preserving, momentum-preserving, equivariant, bijective.
Report validate_bundle_morphism(const BundleMorphism& m);

// Optional left actions to intertwine; both or neither must be supplied.
// With them the search also enforces map(g·p) = g·map(p).
struct LeftActionTables {
  const std::map<std::pair<int, int>, int>* source = nullptr;
  const std::map<std::pair<int, int>, int>* target = nullptr;
  const FiniteGroupoid* actor = nullptr;
};

// Exhaustive backtracking with propagation along both actions; returns the
// first assignment in total-set order, or nothing.  A complete decision
// procedure at this scale.
std::optional<std::vector<int>> find_equivariant_bijection(
    const PrincipalBundle& p, const PrincipalBundle& q,
    const LeftActionTables* left = nullptr);

std::optional<BundleMorphism> find_isomorphism(const PrincipalBundle& p,
                                               const PrincipalBundle& q);

// Gauge groupoid (P x P)/G of a bundle whose structure groupoid is a group.
// Arrows are canonical orbit representatives: the pair (p1·g, p2·g) whose
// first leg is least in the order of the total set.
struct GaugeGroupoid {
  FiniteGroupoid groupoid;
  std::vector<std::pair<int, int>> arrowReps;  // arrow -> (p1, p2)
  int classOf(int p1, int p2) const;           // lookup by any representative
  std::map<std::pair<int, int>, int> classIndex;
};

GaugeGroupoid gauge_groupoid(const PrincipalBundle& p);

}  // namespace cechg
