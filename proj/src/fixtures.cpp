#include "cechg/fixtures.hpp"

#include <algorithm>
#include <numeric>

namespace cechg {

IndexedSet named_set(const std::string& stem, int n) {
  IndexedSet out;
  for (int i = 1; i <= n; ++i) out.add(stem + std::to_string(i));
  return out;
}

PrincipalBundle trivial_group_bundle(const GroupTable& g, int basePoints) {
  FiniteGroupoid grp = group_as_groupoid(g);
  IndexedSet base = named_set("m", basePoints);
  std::vector<int> alpha(basePoints, 0);
  return trivial_bundle(grp, base, alpha);
}

GeneralizedMorphism pair_to_gauge(const PrincipalBundle& p,
                                  const GaugeGroupoid& gauge) {
  GeneralizedMorphism out;
  out.source = pair_groupoid(p.base.names());
  out.bundle.base = p.base;
  out.bundle.structure = gauge.groupoid;

  // Total space X x P with pr1 as projection and the bundle projection of the
  // second leg as momentum.
  std::vector<std::pair<int, int>> elems;
  for (int x = 0; x < p.base.size(); ++x)
    for (int q = 0; q < p.total.size(); ++q) {
      out.bundle.total.add("(" + p.base.name(x) + "," + p.total.name(q) + ")");
      elems.emplace_back(x, q);
    }
  std::map<std::pair<int, int>, int> index;
  for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
  for (auto [x, q] : elems) {
    out.bundle.proj.push_back(x);
    out.bundle.momentum.push_back(p.proj[q]);
  }
  // (x, q)·[p1, p2] = (x, p2·phi(p1, q)) when proj(q) = proj(p1).
  DivisionTable div = division_table(p);
  for (size_t i = 0; i < elems.size(); ++i) {
    auto [x, q] = elems[i];
    for (int arr = 0; arr < gauge.groupoid.nArrows(); ++arr) {
      auto [p1, p2] = gauge.arrowReps[arr];
      if (p.proj[p1] != p.proj[q]) continue;
      int moved = p.act(p2, div.at(p1, q));
      out.bundle.action[{static_cast<int>(i), arr}] = index.at({x, moved});
    }
  }
  // (x, y)·(y, q) = (x, q).
  const auto& pairG = out.source;
  for (int arr = 0; arr < pairG.nArrows(); ++arr) {
    int y = pairG.src[arr];
    int x = pairG.tgt[arr];
    for (int q = 0; q < p.total.size(); ++q)
      out.left[{arr, index.at({y, q})}] = index.at({x, q});
  }
  return out;
}

GeneralizedMorphism action_to_gauge(const ActionGroupoid& ag,
                                    const PrincipalBundle& p,
                                    const GaugeGroupoid& gauge) {
  if (ag.groupoid.objects != p.base)
    throw DomainError("the action must move the bundle's base points");
  GeneralizedMorphism out = pair_to_gauge(p, gauge);
  out.source = ag.groupoid;
  out.left.clear();
  const int nP = p.total.size();
  for (int arr = 0; arr < ag.groupoid.nArrows(); ++arr) {
    int x = ag.groupoid.src[arr];
    int gx = ag.groupoid.tgt[arr];
    for (int q = 0; q < nP; ++q)
      out.left[{arr, x * nP + q}] = gx * nP + q;
  }
  return out;
}

LocalTrivData z2_overlap_data(int overlapElement) {
  FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
  if (overlapElement < 0 || overlapElement >= z2.nArrows())
    throw DomainError("unknown overlap element");
  LocalTrivData d;
  d.cover.base = named_set("m", 3);
  d.cover.indices.add("U1");
  d.cover.indices.add("U2");
  d.cover.sets = {{0, 1}, {1, 2}};
  d.structure = z2;
  d.momenta.resize(2);
  for (int m : d.cover.sets[0]) d.momenta[0][m] = 0;
  for (int m : d.cover.sets[1]) d.momenta[1][m] = 0;
  d.cocycle[{0, 0}] = {{0, 0}, {1, 0}};
  d.cocycle[{1, 1}] = {{1, 0}, {2, 0}};
  d.cocycle[{0, 1}] = {{1, overlapElement}};
  d.cocycle[{1, 0}] = {{1, z2.inv[overlapElement]}};
  return d;
}

ActionGroupoid z2_swap_action() {
  FiniteGroupAction a;
  a.group = cyclic_group(2);
  a.set.add("a");
  a.set.add("b");
  a.act = {0, 1, 1, 0};
  return action_groupoid(a);
}

Cover two_set_cover(const IndexedSet& base) {
  if (base.size() < 2) throw DomainError("base needs at least two points");
  Cover c;
  c.base = base;
  c.indices.add("U1");
  c.indices.add("U2");
  int half = base.size() / 2;
  std::vector<int> first, second;
  for (int m = 0; m <= half; ++m) first.push_back(m);
  for (int m = half; m < base.size(); ++m) second.push_back(m);
  c.sets = {first, second};
  return c;
}

FiniteGroupoid random_groupoid(Rng& rng, int maxArrows) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    switch (rng.below(5)) {
      case 0: {
        int n = 1 + rng.below(std::min(6, maxArrows));
        return group_as_groupoid(cyclic_group(n));
      }
      case 1: {
        int n = 1;
        while ((n + 1) * (n + 1) <= maxArrows && n < 3) ++n;
        n = 1 + rng.below(n);
        return pair_groupoid(named_set("x", n).names());
      }
      case 2: {
        // Z2 or Z3 acting on a small set by rotating one block.
        int order = 2 + rng.below(2);
        int extra = rng.below(2);
        int points = order + extra;
        if (order * points > maxArrows) break;
        FiniteGroupAction a;
        a.group = cyclic_group(order);
        a.set = named_set("x", points);
        a.act.assign(static_cast<size_t>(order) * points, 0);
        for (int g = 0; g < order; ++g)
          for (int x = 0; x < points; ++x)
            a.act[static_cast<size_t>(g) * points + x] =
                x < order ? (x + g) % order : x;
        return action_groupoid(a).groupoid;
      }
      case 3: {
        int n = 1 + rng.below(2);
        int m = 1 + rng.below(2);
        FiniteGroupoid g = group_as_groupoid(cyclic_group(n + 1));
        FiniteGroupoid h = pair_groupoid(named_set("y", m).names());
        if (g.nArrows() * h.nArrows() > maxArrows) break;
        return product_groupoid(g, h);
      }
      default: {
        int n = 1 + rng.below(3);
        int m = 1 + rng.below(3);
        if (n + m > maxArrows) break;
        return disjoint_union(group_as_groupoid(cyclic_group(n)),
                              group_as_groupoid(cyclic_group(m)));
      }
    }
  }
  return group_as_groupoid(cyclic_group(1));
}

Cover random_cover(Rng& rng, const IndexedSet& base, int maxSets) {
  Cover c;
  c.base = base;
  int nSets = 1 + rng.below(maxSets);
  for (int a = 0; a < nSets; ++a) {
    c.indices.add("U" + std::to_string(a + 1));
    std::vector<int> set;
    for (int m = 0; m < base.size(); ++m)
      if (rng.coin()) set.push_back(m);
    if (set.empty()) set.push_back(rng.below(base.size()));
    c.sets.push_back(std::move(set));
  }
  // Give every uncovered point a home.
  std::vector<char> hit(base.size(), 0);
  for (const auto& s : c.sets)
    for (int m : s) hit[m] = 1;
  for (int m = 0; m < base.size(); ++m) {
    if (hit[m]) continue;
    auto& s = c.sets[rng.below(nSets)];
    s.insert(std::lower_bound(s.begin(), s.end(), m), m);
  }
  return c;
}

LocalTrivData random_trivdata(Rng& rng, const Cover& cover,
                              const FiniteGroupoid& g) {
  LocalTrivData d;
  d.cover = cover;
  d.structure = g;
  d.momenta.resize(cover.indices.size());
  for (int m = 0; m < cover.base.size(); ++m) {
    auto members = cover.indicesContaining(m);
    // Pointwise recipe: a base object plus one out-arrow per covering index;
    // the least index carries the unit.
    int x = rng.below(g.nObjects());
    std::vector<int> from = g.arrowsFrom(x);
    std::vector<int> legs(members.size());
    legs[0] = g.unit[x];
    for (size_t k = 1; k < members.size(); ++k)
      legs[k] = from[rng.below(static_cast<int>(from.size()))];
    for (size_t k = 0; k < members.size(); ++k)
      d.momenta[members[k]][m] = g.tgt[legs[k]];
    for (size_t ka = 0; ka < members.size(); ++ka)
      for (size_t kb = 0; kb < members.size(); ++kb)
        d.cocycle[{members[ka], members[kb]}][m] =
            g.compose(legs[ka], g.inv[legs[kb]]);
  }
  return d;
}

SectionFamily random_sections(Rng& rng, const PrincipalBundle& p,
                              const Cover& cover) {
  SectionFamily out(cover.indices.size());
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int m : cover.sets[a]) {
      auto fib = p.fiber(m);
      if (fib.empty())
        throw DomainError("no section possible: empty fiber over " +
                          cover.base.name(m));
      out[a][m] = fib[rng.below(static_cast<int>(fib.size()))];
    }
  return out;
}

GroupoidMorphism random_strict_morphism(Rng& rng, int maxArrows) {
  switch (rng.below(4)) {
    case 0: {
      return identity_morphism(random_groupoid(rng, maxArrows));
    }
    case 1: {
      // Fold of a disjoint double onto one copy.
      int n = 1 + rng.below(3);
      FiniteGroupoid half = group_as_groupoid(cyclic_group(n));
      FiniteGroupoid dbl = disjoint_union(half, half);
      GroupoidMorphism m;
      m.domain = dbl;
      m.codomain = half;
      for (int a = 0; a < dbl.nArrows(); ++a)
        m.arrowMap.push_back(a % half.nArrows());
      for (int x = 0; x < dbl.nObjects(); ++x)
        m.objectMap.push_back(x % half.nObjects());
      return m;
    }
    case 2: {
      // Inclusion of a full subgroupoid on a nonempty object subset.
      FiniteGroupoid g = random_groupoid(rng, maxArrows);
      std::vector<int> subset;
      for (int x = 0; x < g.nObjects(); ++x)
        if (rng.coin()) subset.push_back(x);
      if (subset.empty()) subset.push_back(rng.below(g.nObjects()));
      return subgroupoid_inclusion(g, subset);
    }
    default: {
      // Projection of a product onto its first factor.
      FiniteGroupoid g = group_as_groupoid(cyclic_group(1 + rng.below(3)));
      FiniteGroupoid h = pair_groupoid(named_set("y", 1 + rng.below(2)).names());
      FiniteGroupoid prod = product_groupoid(g, h);
      GroupoidMorphism m;
      m.domain = prod;
      m.codomain = g;
      for (int a = 0; a < g.nArrows(); ++a)
        for (int b = 0; b < h.nArrows(); ++b) {
          (void)b;
          m.arrowMap.push_back(a);
        }
      for (int x = 0; x < g.nObjects(); ++x)
        for (int y = 0; y < h.nObjects(); ++y) {
          (void)y;
          m.objectMap.push_back(x);
        }
      return m;
    }
  }
}

ComposablePair random_composable_pair(Rng& rng) {
  ComposablePair out;
  if (rng.below(3) == 0) {
    // pair groupoid -> gauge groupoid -> group, through explicit fixtures.
    int order = 2 + rng.below(2);
    int basePoints = 1 + rng.below(2);
    PrincipalBundle p = trivial_group_bundle(cyclic_group(order), basePoints);
    GaugeGroupoid gauge = gauge_groupoid(p);
    out.p = pair_to_gauge(p, gauge);

    Cover cover = basePoints >= 2 ? two_set_cover(p.base)
                                  : singleton_cover(p.base);
    SectionFamily sections = random_sections(rng, p, cover);
    LocalMoritaEquivalence fixture =
        gauge_group_fixture(p, cover, sections, rng.below(p.total.size()));
    out.q = globalize(fixture.theta).gm;
  } else {
    GroupoidMorphism first = random_strict_morphism(rng, 8);
    // The second factor must start where the first one lands; draw another
    // morphism out of the middle groupoid when one is available, else fall
    // back to its identity.
    GroupoidMorphism second = identity_morphism(first.codomain);
    if (rng.coin()) {
      std::vector<int> subset;
      for (int x = 0; x < first.codomain.nObjects(); ++x) subset.push_back(x);
      GroupoidMorphism incl = subgroupoid_inclusion(first.codomain, subset);
      second = incl;  // full-subset inclusion, a relabelled identity
    }
    out.p = from_strict_morphism(first);
    out.q = from_strict_morphism(second);
  }
  out.coverU = random_cover(rng, out.p.bundle.base, 2);
  out.sectionsP = random_sections(rng, out.p.bundle, out.coverU);
  out.coverV = random_cover(rng, out.q.bundle.base, 2);
  out.sectionsQ = random_sections(rng, out.q.bundle, out.coverV);
  return out;
}

GeneralizedMorphism random_morita_bibundle(Rng& rng) {
  switch (rng.below(4)) {
    case 0:
      return unit_genmor(random_groupoid(rng, 10));
    case 1: {
      int order = 2 + rng.below(2);
      int basePoints = 1 + rng.below(3);
      PrincipalBundle p = trivial_group_bundle(cyclic_group(order), basePoints);
      GaugeGroupoid gauge = gauge_groupoid(p);
      return pair_to_gauge(p, gauge);
    }
    case 2: {
      int order = 2 + rng.below(2);
      PrincipalBundle p = trivial_group_bundle(cyclic_group(order), 2);
      GaugeGroupoid gauge = gauge_groupoid(p);
      return inverse_candidate(pair_to_gauge(p, gauge));
    }
    default: {
      ActionGroupoid swap = z2_swap_action();
      return unit_genmor(swap.groupoid);
    }
  }
}

GeneralizedMorphism random_non_morita_bibundle(Rng& rng) {
  switch (rng.below(3)) {
    case 0: {
      // Collapse of a cyclic group: the left action has a stabilizer.
      int n = 2 + rng.below(3);
      FiniteGroupoid dom = group_as_groupoid(cyclic_group(n));
      FiniteGroupoid cod = group_as_groupoid(cyclic_group(1));
      GroupoidMorphism m;
      m.domain = dom;
      m.codomain = cod;
      m.arrowMap.assign(dom.nArrows(), 0);
      m.objectMap.assign(1, 0);
      return from_strict_morphism(m);
    }
    case 1: {
      // Inclusion of the trivial group: the left action cannot sweep fibers.
      int n = 2 + rng.below(3);
      FiniteGroupoid dom = group_as_groupoid(cyclic_group(1));
      FiniteGroupoid cod = group_as_groupoid(cyclic_group(n));
      GroupoidMorphism m;
      m.domain = dom;
      m.codomain = cod;
      m.arrowMap.assign(1, cod.unit[0]);
      m.objectMap.assign(1, 0);
      return from_strict_morphism(m);
    }
    default: {
      // Fold of a disjoint double: momentum fibers span both components but
      // no arrow crosses them.
      int n = 1 + rng.below(3);
      FiniteGroupoid half = group_as_groupoid(cyclic_group(n));
      FiniteGroupoid dbl = disjoint_union(half, half);
      GroupoidMorphism m;
      m.domain = dbl;
      m.codomain = half;
      for (int a = 0; a < dbl.nArrows(); ++a)
        m.arrowMap.push_back(a % half.nArrows());
      for (int x = 0; x < dbl.nObjects(); ++x)
        m.objectMap.push_back(x % half.nObjects());
      return from_strict_morphism(m);
    }
  }
}

}  // namespace cechg
