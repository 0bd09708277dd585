#include "cechg/groupoid.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace cechg {

namespace {

std::string pairName(const Id& a, const Id& b) { return "(" + a + "," + b + ")"; }

bool validIndex(int idx, int bound) { return idx >= 0 && idx < bound; }

}  // namespace

int FiniteGroupoid::compose(int a, int b) const {
  int r = composeOpt(a, b);
  if (r < 0) {
    throw DomainError("arrows not composable: " + arrows.name(a) + " after " +
                      arrows.name(b));
  }
  return r;
}

std::vector<int> FiniteGroupoid::arrowsFrom(int x) const {
  std::vector<int> out;
  for (int a = 0; a < nArrows(); ++a)
    if (src[a] == x) out.push_back(a);
  return out;
}

std::vector<int> FiniteGroupoid::hom(int x, int y) const {
  std::vector<int> out;
  for (int a = 0; a < nArrows(); ++a)
    if (src[a] == x && tgt[a] == y) out.push_back(a);
  return out;
}

bool FiniteGroupoid::operator==(const FiniteGroupoid& o) const {
  return objects == o.objects && arrows == o.arrows && src == o.src &&
         tgt == o.tgt && unit == o.unit && inv == o.inv && comp == o.comp;
}

FiniteGroupoid make_groupoid(IndexedSet objects, IndexedSet arrows,
                             std::vector<int> src, std::vector<int> tgt,
                             std::vector<int> unit, std::vector<int> inv,
                             const std::vector<std::array<int, 3>>& entries) {
  FiniteGroupoid g;
  g.objects = std::move(objects);
  g.arrows = std::move(arrows);
  g.src = std::move(src);
  g.tgt = std::move(tgt);
  g.unit = std::move(unit);
  g.inv = std::move(inv);
  g.comp.assign(static_cast<size_t>(g.nArrows()) * g.nArrows(), -1);
  for (const auto& e : entries) {
    size_t key = static_cast<size_t>(e[0]) * g.nArrows() + e[1];
    if (g.comp[key] != -1 && g.comp[key] != e[2]) {
      throw SchemaError("conflicting composition entries for " +
                        g.arrows.name(e[0]) + "·" + g.arrows.name(e[1]));
    }
    g.comp[key] = e[2];
  }
  return g;
}

Report validate_groupoid(const FiniteGroupoid& g) {
  Report r;
  const int nA = g.nArrows();
  const int nO = g.nObjects();

  // Structural totality first; later checks assume it.
  if (static_cast<int>(g.src.size()) != nA) r.fail("src map not total on arrows");
  if (static_cast<int>(g.tgt.size()) != nA) r.fail("tgt map not total on arrows");
  if (static_cast<int>(g.unit.size()) != nO) r.fail("unit map not total on objects");
  if (static_cast<int>(g.inv.size()) != nA) r.fail("inv map not total on arrows");
  if (g.comp.size() != static_cast<size_t>(nA) * nA)
    r.fail("composition table has wrong shape");
  if (!r.ok()) return r;

  for (int a = 0; a < nA; ++a) {
    if (!validIndex(g.src[a], nO))
      r.fail("unknown object in src at arrow " + g.arrows.name(a));
    if (!validIndex(g.tgt[a], nO))
      r.fail("unknown object in tgt at arrow " + g.arrows.name(a));
    if (!validIndex(g.inv[a], nA))
      r.fail("unknown arrow in inv at " + g.arrows.name(a));
  }
  for (int x = 0; x < nO; ++x) {
    if (!validIndex(g.unit[x], nA))
      r.fail("unknown arrow in unit at object " + g.objects.name(x));
  }
  for (size_t k = 0; k < g.comp.size(); ++k) {
    if (g.comp[k] != -1 && !validIndex(g.comp[k], nA)) {
      r.fail("unknown arrow in composition table entry " +
             g.arrows.name(static_cast<int>(k) / nA) + "·" +
             g.arrows.name(static_cast<int>(k) % nA));
    }
  }
  if (!r.ok()) return r;

  for (int x = 0; x < nO; ++x) {
    int u = g.unit[x];
    if (g.src[u] != x || g.tgt[u] != x)
      r.fail("unit axiom fails at object " + g.objects.name(x) +
             ": unit arrow " + g.arrows.name(u) + " is not a loop at it");
  }

  for (int a = 0; a < nA; ++a) {
    for (int b = 0; b < nA; ++b) {
      int c = g.composeOpt(a, b);
      bool shouldCompose = g.composable(a, b);
      if (shouldCompose && c < 0) {
        r.fail("composition undefined on composable pair " + g.arrows.name(a) +
               "·" + g.arrows.name(b));
      } else if (!shouldCompose && c >= 0) {
        r.fail("composition defined on non-composable pair " +
               g.arrows.name(a) + "·" + g.arrows.name(b));
      } else if (c >= 0) {
        if (g.src[c] != g.src[b] || g.tgt[c] != g.tgt[a]) {
          r.fail("composite " + g.arrows.name(a) + "·" + g.arrows.name(b) +
                 " has wrong endpoints");
        }
      }
    }
  }

  for (int a = 0; a < nA; ++a) {
    int ut = g.unit[g.tgt[a]];
    int us = g.unit[g.src[a]];
    if (g.composeOpt(ut, a) != a)
      r.fail("left unit law fails at " + g.arrows.name(a));
    if (g.composeOpt(a, us) != a)
      r.fail("right unit law fails at " + g.arrows.name(a));
    int i = g.inv[a];
    if (g.src[i] != g.tgt[a] || g.tgt[i] != g.src[a]) {
      r.fail("inverse axiom fails at " + g.arrows.name(a) +
             ": endpoints of the inverse do not swap");
    } else {
      if (g.composeOpt(a, i) != g.unit[g.tgt[a]])
        r.fail("inverse axiom fails at " + g.arrows.name(a) +
               ": g·inv(g) is not the unit at tgt(g)");
      if (g.composeOpt(i, a) != g.unit[g.src[a]])
        r.fail("inverse axiom fails at " + g.arrows.name(a) +
               ": inv(g)·g is not the unit at src(g)");
    }
  }

  for (int a = 0; a < nA; ++a) {
    for (int b = 0; b < nA; ++b) {
      if (!g.composable(a, b)) continue;
      int ab = g.composeOpt(a, b);
      if (ab < 0) continue;
      for (int c = 0; c < nA; ++c) {
        if (!g.composable(b, c)) continue;
        int bc = g.composeOpt(b, c);
        if (bc < 0) continue;
        if (g.composeOpt(ab, c) != g.composeOpt(a, bc)) {
          r.fail("associativity fails on (" + g.arrows.name(a) + "," +
                 g.arrows.name(b) + "," + g.arrows.name(c) + ")");
        }
      }
    }
  }
  return r;
}

FiniteGroupoid pair_groupoid(const std::vector<Id>& points) {
  if (points.empty()) throw DomainError("pair groupoid over an empty set");
  IndexedSet objects(points);
  const int n = objects.size();
  IndexedSet arrows;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      arrows.add(pairName(objects.name(x), objects.name(y)));

  auto idx = [n](int x, int y) { return x * n + y; };
  std::vector<int> src(n * n), tgt(n * n), unit(n), inv(n * n);
  std::vector<std::array<int, 3>> entries;
  for (int x = 0; x < n; ++x) {
    unit[x] = idx(x, x);
    for (int y = 0; y < n; ++y) {
      src[idx(x, y)] = y;
      tgt[idx(x, y)] = x;
      inv[idx(x, y)] = idx(y, x);
      for (int z = 0; z < n; ++z)
        entries.push_back({idx(x, y), idx(y, z), idx(x, z)});
    }
  }
  return make_groupoid(std::move(objects), std::move(arrows), std::move(src),
                       std::move(tgt), std::move(unit), std::move(inv),
                       entries);
}

int GroupTable::inverseOf(int a) const {
  for (int b = 0; b < n(); ++b)
    if (times(a, b) == identity) return b;
  throw DomainError("group element without inverse: " + elements.name(a));
}

int group_identity(const GroupTable& t) {
  for (int cand = 0; cand < t.n(); ++cand) {
    bool isId = true;
    for (int a = 0; a < t.n(); ++a)
      if (t.times(cand, a) != a || t.times(a, cand) != a) isId = false;
    if (isId) return cand;
  }
  throw DomainError("multiplication table has no identity");
}

Report validate_group(const GroupTable& t) {
  Report r;
  const int n = t.n();
  if (n == 0) {
    r.fail("empty element set");
    return r;
  }
  if (t.mul.size() != static_cast<size_t>(n) * n) {
    r.fail("multiplication table has wrong shape");
    return r;
  }
  for (size_t k = 0; k < t.mul.size(); ++k) {
    if (!validIndex(t.mul[k], n)) {
      r.fail("unknown element in table at " +
             t.elements.name(static_cast<int>(k) / n) + "·" +
             t.elements.name(static_cast<int>(k) % n));
      return r;
    }
  }
  int e = -1;
  for (int cand = 0; cand < n; ++cand) {
    bool isId = true;
    for (int a = 0; a < n; ++a)
      if (t.times(cand, a) != a || t.times(a, cand) != a) isId = false;
    if (isId) {
      e = cand;
      break;
    }
  }
  if (e < 0) {
    r.fail("no identity element");
    return r;
  }
  for (int a = 0; a < n; ++a) {
    bool hasInv = false;
    for (int b = 0; b < n; ++b)
      if (t.times(a, b) == e && t.times(b, a) == e) hasInv = true;
    if (!hasInv) r.fail("no inverse for " + t.elements.name(a));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (t.times(t.times(a, b), c) != t.times(a, t.times(b, c)))
          r.fail("associativity fails on (" + t.elements.name(a) + "," +
                 t.elements.name(b) + "," + t.elements.name(c) + ")");
  return r;
}

GroupTable cyclic_group(int n) {
  if (n <= 0) throw DomainError("cyclic group order must be positive");
  GroupTable t;
  for (int k = 0; k < n; ++k)
    t.elements.add(k == 0 ? "e" : (k == 1 ? "g" : "g" + std::to_string(k)));
  t.mul.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t.mul[static_cast<size_t>(a) * n + b] = (a + b) % n;
  t.identity = 0;
  return t;
}

GroupTable symmetric_group_s3() {
  // Permutations of {0,1,2} listed as one-line notation strings.
  std::vector<std::array<int, 3>> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                           {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
  GroupTable t;
  for (const auto& p : perms) {
    std::string name = "p";
    for (int v : p) name += std::to_string(v);
    t.elements.add(name);
  }
  const int n = static_cast<int>(perms.size());
  t.mul.resize(static_cast<size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::array<int, 3> c{};  // a after b
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      int idx = -1;
      for (int k = 0; k < n; ++k)
        if (perms[k] == c) idx = k;
      t.mul[static_cast<size_t>(a) * n + b] = idx;
    }
  }
  t.identity = 0;
  return t;
}

FiniteGroupoid group_as_groupoid(const GroupTable& table) {
  Report check = validate_group(table);
  if (!check.ok()) throw DomainError("not a group: " + check.str());
  GroupTable t = table;
  if (t.identity < 0) t.identity = group_identity(t);
  IndexedSet objects;
  objects.add("*");
  const int n = t.n();
  std::vector<int> src(n, 0), tgt(n, 0), unit{t.identity}, inv(n);
  std::vector<std::array<int, 3>> entries;
  for (int a = 0; a < n; ++a) {
    inv[a] = t.inverseOf(a);
    for (int b = 0; b < n; ++b) entries.push_back({a, b, t.times(a, b)});
  }
  return make_groupoid(std::move(objects), t.elements, std::move(src),
                       std::move(tgt), std::move(unit), std::move(inv),
                       entries);
}

Report validate_group_action(const FiniteGroupAction& a) {
  Report r = validate_group(a.group);
  if (!r.ok()) return r;
  const int n = a.group.n();
  const int m = a.set.size();
  if (a.act.size() != static_cast<size_t>(n) * m) {
    r.fail("action table has wrong shape");
    return r;
  }
  for (size_t k = 0; k < a.act.size(); ++k) {
    if (!validIndex(a.act[k], m)) {
      r.fail("unknown point in action table");
      return r;
    }
  }
  int e = a.group.identity;
  for (int x = 0; x < m; ++x)
    if (a.apply(e, x) != x)
      r.fail("identity does not fix " + a.set.name(x));
  for (int g1 = 0; g1 < n; ++g1)
    for (int g2 = 0; g2 < n; ++g2)
      for (int x = 0; x < m; ++x)
        if (a.apply(a.group.times(g1, g2), x) != a.apply(g1, a.apply(g2, x)))
          r.fail("action axiom fails at (" + a.group.elements.name(g1) + "," +
                 a.group.elements.name(g2) + "," + a.set.name(x) + ")");
  return r;
}

ActionGroupoid action_groupoid(const FiniteGroupAction& a) {
  Report check = validate_group_action(a);
  if (!check.ok()) throw DomainError("not a group action: " + check.str());
  FiniteGroupAction action = a;
  action.group.identity = group_identity(action.group);
  const int n = action.group.n();
  const int m = action.set.size();
  IndexedSet objects(action.set.names());
  IndexedSet arrows;
  std::vector<std::pair<int, int>> parts;
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < m; ++x) {
      arrows.add(pairName(action.group.elements.name(g), action.set.name(x)));
      parts.emplace_back(g, x);
    }

  auto idx = [m](int g, int x) { return g * m + x; };
  std::vector<int> src(n * m), tgt(n * m), unit(m), inv(n * m);
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < m; ++x) {
      src[idx(g, x)] = x;
      tgt[idx(g, x)] = action.apply(g, x);
      inv[idx(g, x)] = idx(action.group.inverseOf(g), action.apply(g, x));
    }
  for (int x = 0; x < m; ++x) unit[x] = idx(action.group.identity, x);

  std::vector<std::array<int, 3>> entries;
  for (int g1 = 0; g1 < n; ++g1)
    for (int g2 = 0; g2 < n; ++g2)
      for (int x = 0; x < m; ++x) {
        // (g1, g2·x)·(g2, x) = (g1 g2, x)
        entries.push_back({idx(g1, action.apply(g2, x)), idx(g2, x),
                           idx(action.group.times(g1, g2), x)});
      }

  ActionGroupoid out;
  out.groupoid = make_groupoid(std::move(objects), std::move(arrows),
                               std::move(src), std::move(tgt), std::move(unit),
                               std::move(inv), entries);
  out.action = std::move(action);
  out.arrowParts = std::move(parts);
  return out;
}

FiniteGroupoid product_groupoid(const FiniteGroupoid& g,
                                const FiniteGroupoid& h) {
  IndexedSet objects, arrows;
  for (int x = 0; x < g.nObjects(); ++x)
    for (int y = 0; y < h.nObjects(); ++y)
      objects.add(pairName(g.objects.name(x), h.objects.name(y)));
  for (int a = 0; a < g.nArrows(); ++a)
    for (int b = 0; b < h.nArrows(); ++b)
      arrows.add(pairName(g.arrows.name(a), h.arrows.name(b)));

  const int nHO = h.nObjects();
  const int nHA = h.nArrows();
  auto objIdx = [nHO](int x, int y) { return x * nHO + y; };
  auto arrIdx = [nHA](int a, int b) { return a * nHA + b; };

  std::vector<int> src(arrows.size()), tgt(arrows.size()), inv(arrows.size());
  std::vector<int> unit(objects.size());
  for (int a = 0; a < g.nArrows(); ++a)
    for (int b = 0; b < h.nArrows(); ++b) {
      src[arrIdx(a, b)] = objIdx(g.src[a], h.src[b]);
      tgt[arrIdx(a, b)] = objIdx(g.tgt[a], h.tgt[b]);
      inv[arrIdx(a, b)] = arrIdx(g.inv[a], h.inv[b]);
    }
  for (int x = 0; x < g.nObjects(); ++x)
    for (int y = 0; y < h.nObjects(); ++y)
      unit[objIdx(x, y)] = arrIdx(g.unit[x], h.unit[y]);

  std::vector<std::array<int, 3>> entries;
  for (int a1 = 0; a1 < g.nArrows(); ++a1)
    for (int a2 = 0; a2 < g.nArrows(); ++a2) {
      int ga = g.composeOpt(a1, a2);
      if (ga < 0) continue;
      for (int b1 = 0; b1 < h.nArrows(); ++b1)
        for (int b2 = 0; b2 < h.nArrows(); ++b2) {
          int hb = h.composeOpt(b1, b2);
          if (hb < 0) continue;
          entries.push_back({arrIdx(a1, b1), arrIdx(a2, b2), arrIdx(ga, hb)});
        }
    }
  return make_groupoid(std::move(objects), std::move(arrows), std::move(src),
                       std::move(tgt), std::move(unit), std::move(inv),
                       entries);
}

FiniteGroupoid disjoint_union(const FiniteGroupoid& g, const FiniteGroupoid& h,
                              const std::string& prefixG,
                              const std::string& prefixH) {
  IndexedSet objects, arrows;
  for (const auto& n : g.objects.names()) objects.add(prefixG + n);
  for (const auto& n : h.objects.names()) objects.add(prefixH + n);
  for (const auto& n : g.arrows.names()) arrows.add(prefixG + n);
  for (const auto& n : h.arrows.names()) arrows.add(prefixH + n);

  const int oShift = g.nObjects();
  const int aShift = g.nArrows();
  std::vector<int> src, tgt, unit, inv;
  src = g.src;
  tgt = g.tgt;
  inv = g.inv;
  unit = g.unit;
  for (int b = 0; b < h.nArrows(); ++b) {
    src.push_back(h.src[b] + oShift);
    tgt.push_back(h.tgt[b] + oShift);
    inv.push_back(h.inv[b] + aShift);
  }
  for (int y = 0; y < h.nObjects(); ++y) unit.push_back(h.unit[y] + aShift);

  std::vector<std::array<int, 3>> entries;
  for (int a1 = 0; a1 < g.nArrows(); ++a1)
    for (int a2 = 0; a2 < g.nArrows(); ++a2) {
      int c = g.composeOpt(a1, a2);
      if (c >= 0) entries.push_back({a1, a2, c});
    }
  for (int b1 = 0; b1 < h.nArrows(); ++b1)
    for (int b2 = 0; b2 < h.nArrows(); ++b2) {
      int c = h.composeOpt(b1, b2);
      if (c >= 0) entries.push_back({b1 + aShift, b2 + aShift, c + aShift});
    }
  return make_groupoid(std::move(objects), std::move(arrows), std::move(src),
                       std::move(tgt), std::move(unit), std::move(inv),
                       entries);
}

Report validate_groupoid_morphism(const GroupoidMorphism& m) {
  Report r;
  const auto& g = m.domain;
  const auto& h = m.codomain;
  if (static_cast<int>(m.arrowMap.size()) != g.nArrows())
    r.fail("arrow map not total");
  if (static_cast<int>(m.objectMap.size()) != g.nObjects())
    r.fail("object map not total");
  if (!r.ok()) return r;
  for (int a = 0; a < g.nArrows(); ++a)
    if (!validIndex(m.arrowMap[a], h.nArrows()))
      r.fail("unknown codomain arrow at " + g.arrows.name(a));
  for (int x = 0; x < g.nObjects(); ++x)
    if (!validIndex(m.objectMap[x], h.nObjects()))
      r.fail("unknown codomain object at " + g.objects.name(x));
  if (!r.ok()) return r;

  for (int a = 0; a < g.nArrows(); ++a) {
    if (h.src[m.arrowMap[a]] != m.objectMap[g.src[a]])
      r.fail("source diagram fails at " + g.arrows.name(a));
    if (h.tgt[m.arrowMap[a]] != m.objectMap[g.tgt[a]])
      r.fail("target diagram fails at " + g.arrows.name(a));
  }
  for (int x = 0; x < g.nObjects(); ++x)
    if (m.arrowMap[g.unit[x]] != h.unit[m.objectMap[x]])
      r.fail("unit diagram fails at " + g.objects.name(x));
  for (int a = 0; a < g.nArrows(); ++a)
    for (int b = 0; b < g.nArrows(); ++b) {
      int c = g.composeOpt(a, b);
      if (c < 0) continue;
      if (h.composeOpt(m.arrowMap[a], m.arrowMap[b]) != m.arrowMap[c])
        r.fail("homomorphism fails on " + g.arrows.name(a) + "·" +
               g.arrows.name(b));
    }
  return r;
}

GroupoidMorphism identity_morphism(const FiniteGroupoid& g) {
  GroupoidMorphism m;
  m.domain = g;
  m.codomain = g;
  m.arrowMap.resize(g.nArrows());
  m.objectMap.resize(g.nObjects());
  std::iota(m.arrowMap.begin(), m.arrowMap.end(), 0);
  std::iota(m.objectMap.begin(), m.objectMap.end(), 0);
  return m;
}

LocalComponent local_component(const FiniteGroupoid& g,
                               const std::vector<int>& srcObjects,
                               const std::vector<int>& tgtObjects) {
  LocalComponent c;
  c.srcObjects = srcObjects;
  c.tgtObjects = tgtObjects;
  std::vector<char> inSrc(g.nObjects(), 0), inTgt(g.nObjects(), 0);
  for (int x : srcObjects) inSrc.at(x) = 1;
  for (int x : tgtObjects) inTgt.at(x) = 1;
  for (int a = 0; a < g.nArrows(); ++a)
    if (inSrc[g.src[a]] && inTgt[g.tgt[a]]) c.arrowSubset.push_back(a);
  return c;
}

FiniteGroupoid restrict_to_subgroupoid(const FiniteGroupoid& g,
                                       const std::vector<int>& objectSubset) {
  LocalComponent c = local_component(g, objectSubset, objectSubset);
  IndexedSet objects, arrows;
  std::vector<int> objTo(g.nObjects(), -1), arrTo(g.nArrows(), -1);
  for (int x : objectSubset) {
    if (objTo[x] < 0) objTo[x] = objects.add(g.objects.name(x));
  }
  for (int a : c.arrowSubset) arrTo[a] = arrows.add(g.arrows.name(a));

  std::vector<int> src, tgt, unit(objects.size()), inv;
  for (int a : c.arrowSubset) {
    src.push_back(objTo[g.src[a]]);
    tgt.push_back(objTo[g.tgt[a]]);
    inv.push_back(arrTo[g.inv[a]]);
  }
  for (int x = 0; x < g.nObjects(); ++x)
    if (objTo[x] >= 0) unit[objTo[x]] = arrTo[g.unit[x]];

  std::vector<std::array<int, 3>> entries;
  for (int a : c.arrowSubset)
    for (int b : c.arrowSubset) {
      int cc = g.composeOpt(a, b);
      if (cc >= 0) entries.push_back({arrTo[a], arrTo[b], arrTo[cc]});
    }
  return make_groupoid(std::move(objects), std::move(arrows), std::move(src),
                       std::move(tgt), std::move(unit), std::move(inv),
                       entries);
}

GroupoidMorphism subgroupoid_inclusion(const FiniteGroupoid& g,
                                       const std::vector<int>& objectSubset) {
  GroupoidMorphism m;
  m.domain = restrict_to_subgroupoid(g, objectSubset);
  m.codomain = g;
  for (const auto& n : m.domain.arrows.names())
    m.arrowMap.push_back(g.arrows.at(n));
  for (const auto& n : m.domain.objects.names())
    m.objectMap.push_back(g.objects.at(n));
  return m;
}

int GroupoidAction::apply(int arrow, int carrier) const {
  auto it = act.find({arrow, carrier});
  if (it == act.end()) {
    throw DomainError("action undefined on (" + actor.arrows.name(arrow) +
                      ", " + this->carrier.name(carrier) + ")");
  }
  return it->second;
}

Report validate_action(const GroupoidAction& a) {
  Report r;
  const auto& g = a.actor;
  if (static_cast<int>(a.momentum.size()) != a.carrier.size()) {
    r.fail("momentum not total on carrier");
    return r;
  }
  for (int p = 0; p < a.carrier.size(); ++p)
    if (!validIndex(a.momentum[p], g.nObjects())) {
      r.fail("unknown object in momentum at " + a.carrier.name(p));
      return r;
    }

  auto definedWhen = [&](int arrow, int p) {
    return a.leftSide ? g.src[arrow] == a.momentum[p]
                      : g.tgt[arrow] == a.momentum[p];
  };
  for (int arrow = 0; arrow < g.nArrows(); ++arrow)
    for (int p = 0; p < a.carrier.size(); ++p) {
      bool want = definedWhen(arrow, p);
      bool have = a.defined(arrow, p);
      if (want && !have)
        r.fail("action undefined on admissible (" + g.arrows.name(arrow) +
               ", " + a.carrier.name(p) + ")");
      if (!want && have)
        r.fail("action defined outside its domain on (" +
               g.arrows.name(arrow) + ", " + a.carrier.name(p) + ")");
      if (want && have) {
        int q = a.act.at({arrow, p});
        int expected = a.leftSide ? g.tgt[arrow] : g.src[arrow];
        if (a.momentum[q] != expected)
          r.fail("momentum law fails on (" + g.arrows.name(arrow) + ", " +
                 a.carrier.name(p) + ")");
      }
    }
  if (!r.ok()) return r;

  for (int p = 0; p < a.carrier.size(); ++p) {
    int u = g.unit[a.momentum[p]];
    if (a.apply(u, p) != p)
      r.fail("unit does not act trivially on " + a.carrier.name(p));
  }

  for (int a1 = 0; a1 < g.nArrows(); ++a1)
    for (int a2 = 0; a2 < g.nArrows(); ++a2) {
      int c = g.composeOpt(a1, a2);
      if (c < 0) continue;
      for (int p = 0; p < a.carrier.size(); ++p) {
        if (a.leftSide) {
          // (a1·a2)·p = a1·(a2·p), a2 acting first
          if (!a.defined(a2, p)) continue;
          int q = a.act.at({a2, p});
          if (a.apply(c, p) != a.apply(a1, q))
            r.fail("associativity fails on (" + g.arrows.name(a1) + "," +
                   g.arrows.name(a2) + "," + a.carrier.name(p) + ")");
        } else {
          // p·(a1·a2) = (p·a1)·a2
          if (!a.defined(a1, p)) continue;
          int q = a.act.at({a1, p});
          if (a.apply(c, p) != a.apply(a2, q))
            r.fail("associativity fails on (" + a.carrier.name(p) + "," +
                   g.arrows.name(a1) + "," + g.arrows.name(a2) + ")");
        }
      }
    }
  return r;
}

GroupoidAction generalized_conjugation(const FiniteGroupoid& g) {
  GroupoidAction a;
  a.actor = product_groupoid(g, g);
  a.carrier = g.arrows;
  a.leftSide = true;
  const int nO = g.nObjects();
  a.momentum.resize(g.nArrows());
  for (int c = 0; c < g.nArrows(); ++c)
    a.momentum[c] = g.tgt[c] * nO + g.src[c];
  const int nA = g.nArrows();
  for (int g1 = 0; g1 < nA; ++g1)
    for (int g2 = 0; g2 < nA; ++g2) {
      int pairArrow = g1 * nA + g2;
      for (int g3 = 0; g3 < nA; ++g3) {
        if (g.src[g1] != g.tgt[g3] || g.src[g2] != g.src[g3]) continue;
        a.act[{pairArrow, g3}] = g.compose(g.compose(g1, g3), g.inv[g2]);
      }
    }
  return a;
}

GroupoidAction generalized_conjugation_right(const FiniteGroupoid& g) {
  GroupoidAction a;
  a.actor = product_groupoid(g, g);
  a.carrier = g.arrows;
  a.leftSide = false;
  const int nO = g.nObjects();
  a.momentum.resize(g.nArrows());
  for (int c = 0; c < g.nArrows(); ++c)
    a.momentum[c] = g.tgt[c] * nO + g.src[c];
  const int nA = g.nArrows();
  for (int g1 = 0; g1 < nA; ++g1)
    for (int g2 = 0; g2 < nA; ++g2) {
      int pairArrow = g1 * nA + g2;
      for (int g3 = 0; g3 < nA; ++g3) {
        if (g.tgt[g1] != g.tgt[g3] || g.tgt[g2] != g.src[g3]) continue;
        a.act[{pairArrow, g3}] = g.compose(g.compose(g.inv[g1], g3), g2);
      }
    }
  return a;
}

Components connected_components(const FiniteGroupoid& g) {
  std::vector<int> parent(g.nObjects());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> root = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int a = 0; a < g.nArrows(); ++a) {
    int rx = root(g.src[a]);
    int ry = root(g.tgt[a]);
    if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
  }
  Components out;
  out.label.assign(g.nObjects(), -1);
  for (int x = 0; x < g.nObjects(); ++x) {
    int r = root(x);
    if (out.label[r] < 0) {
      out.label[r] = static_cast<int>(out.blocks.size());
      out.blocks.push_back({});
    }
    out.label[x] = out.label[r];
    out.blocks[out.label[x]].push_back(x);
  }
  return out;
}

namespace {

struct IsoSearchState {
  std::vector<int> arrMap;    // domain arrow -> codomain arrow, -1 open
  std::vector<int> preimage;  // codomain arrow -> domain arrow, -1 open
  std::vector<int> trail;
};

// Forced-assignment propagation: an assignment a -> b forces inverses and
// every composite with an already-assigned arrow.  Returns false on clash.
bool isoAssign(const FiniteGroupoid& g, const FiniteGroupoid& h,
               const std::vector<int>& objMap, IsoSearchState& st, int a0,
               int b0) {
  std::vector<std::pair<int, int>> todo{{a0, b0}};
  while (!todo.empty()) {
    auto [a, b] = todo.back();
    todo.pop_back();
    if (b < 0) return false;
    if (st.arrMap[a] >= 0) {
      if (st.arrMap[a] != b) return false;
      continue;
    }
    if (st.preimage[b] >= 0) return false;
    if (h.src[b] != objMap[g.src[a]] || h.tgt[b] != objMap[g.tgt[a]])
      return false;
    st.arrMap[a] = b;
    st.preimage[b] = a;
    st.trail.push_back(a);
    todo.emplace_back(g.inv[a], h.inv[b]);
    for (int other = 0; other < g.nArrows(); ++other) {
      if (st.arrMap[other] < 0 && other != a) continue;
      int img = other == a ? b : st.arrMap[other];
      int c = g.composeOpt(a, other);
      if (c >= 0) todo.emplace_back(c, h.composeOpt(b, img));
      c = g.composeOpt(other, a);
      if (c >= 0) todo.emplace_back(c, h.composeOpt(img, b));
    }
  }
  return true;
}

void isoUndo(IsoSearchState& st, size_t mark) {
  while (st.trail.size() > mark) {
    int a = st.trail.back();
    st.trail.pop_back();
    st.preimage[st.arrMap[a]] = -1;
    st.arrMap[a] = -1;
  }
}

bool isoSearch(const FiniteGroupoid& g, const FiniteGroupoid& h,
               const std::vector<int>& objMap, IsoSearchState& st) {
  int open = -1;
  for (int a = 0; a < g.nArrows(); ++a)
    if (st.arrMap[a] < 0) {
      open = a;
      break;
    }
  if (open < 0) return true;
  for (int cand = 0; cand < h.nArrows(); ++cand) {
    if (st.preimage[cand] >= 0) continue;
    if (h.src[cand] != objMap[g.src[open]]) continue;
    if (h.tgt[cand] != objMap[g.tgt[open]]) continue;
    size_t mark = st.trail.size();
    if (isoAssign(g, h, objMap, st, open, cand) && isoSearch(g, h, objMap, st))
      return true;
    isoUndo(st, mark);
  }
  return false;
}

}  // namespace

std::optional<GroupoidMorphism> find_groupoid_isomorphism(
    const FiniteGroupoid& g, const FiniteGroupoid& h) {
  if (g.nObjects() != h.nObjects() || g.nArrows() != h.nArrows())
    return std::nullopt;
  std::vector<int> objMap(g.nObjects());
  std::iota(objMap.begin(), objMap.end(), 0);
  do {
    // Hom-set sizes must match under the object bijection.
    bool plausible = true;
    for (int x = 0; x < g.nObjects() && plausible; ++x)
      for (int y = 0; y < g.nObjects() && plausible; ++y)
        if (g.hom(x, y).size() != h.hom(objMap[x], objMap[y]).size())
          plausible = false;
    if (!plausible) continue;

    IsoSearchState st;
    st.arrMap.assign(g.nArrows(), -1);
    st.preimage.assign(h.nArrows(), -1);
    // Units are forced by the object bijection; seed them.
    bool seeded = true;
    for (int x = 0; x < g.nObjects() && seeded; ++x)
      seeded = isoAssign(g, h, objMap, st, g.unit[x], h.unit[objMap[x]]);
    if (seeded && isoSearch(g, h, objMap, st)) {
      GroupoidMorphism m;
      m.domain = g;
      m.codomain = h;
      m.arrowMap = st.arrMap;
      m.objectMap = objMap;
      if (validate_groupoid_morphism(m).ok()) return m;
    }
  } while (std::next_permutation(objMap.begin(), objMap.end()));
  return std::nullopt;
}

}  // namespace cechg
