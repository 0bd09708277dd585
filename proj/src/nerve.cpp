#include "cechg/nerve.hpp"

#include <algorithm>
#include <functional>

namespace cechg {

std::vector<int> NerveLevel::faceTuple(int k, const std::vector<int>& t) const {
  if (degree < 1 || k < 0 || k > degree)
    throw DomainError("face map index out of range");
  if (degree == 1) {
    // Face k drops the (k+1)-th endpoint, so face 0 evaluates the source and
    // face 1 the target; this is the assignment the simplicial identities
    // force.
    return k == 0 ? std::vector<int>{g.src[t[0]]}
                  : std::vector<int>{g.tgt[t[0]]};
  }
  std::vector<int> out;
  if (k == 0) {
    out.assign(t.begin() + 1, t.end());
  } else if (k == degree) {
    out.assign(t.begin(), t.end() - 1);
  } else {
    out.assign(t.begin(), t.end());
    out[k - 1] = g.compose(t[k - 1], t[k]);
    out.erase(out.begin() + k);
  }
  return out;
}

int NerveLevel::indexOf(const std::vector<int>& t) const {
  auto it = index.find(t);
  if (it == index.end())
    throw DomainError("tuple is not an element of the nerve level");
  return it->second;
}

NerveLevel nerve(const FiniteGroupoid& g, int n) {
  if (n < 0) throw DomainError("nerve degree must be nonnegative");
  NerveLevel out;
  out.g = g;
  out.degree = n;
  if (n == 0) {
    for (int x = 0; x < g.nObjects(); ++x) {
      out.tuples.push_back({x});
      out.index[{x}] = x;
      out.names.add(g.objects.name(x));
    }
    return out;
  }
  std::vector<int> current;
  // Lexicographic enumeration of composable tuples.
  std::function<void()> extend = [&]() {
    if (static_cast<int>(current.size()) == n) {
      std::string name = "(";
      for (size_t i = 0; i < current.size(); ++i) {
        if (i) name += ",";
        name += g.arrows.name(current[i]);
      }
      name += ")";
      out.index[current] = static_cast<int>(out.tuples.size());
      out.tuples.push_back(current);
      out.names.add(name);
      return;
    }
    for (int a = 0; a < g.nArrows(); ++a) {
      if (!current.empty() && g.src[current.back()] != g.tgt[a]) continue;
      current.push_back(a);
      extend();
      current.pop_back();
    }
  };
  extend();
  return out;
}

Report check_face_identities(const FiniteGroupoid& g) {
  Report r;
  for (int a = 0; a < g.nArrows(); ++a)
    for (int b = 0; b < g.nArrows(); ++b) {
      if (!g.composable(a, b)) continue;
      int c = g.composeOpt(a, b);
      if (g.tgt[c] != g.tgt[a])
        r.fail("tgt∘mu differs from tgt∘pr1 on (" + g.arrows.name(a) + "," +
               g.arrows.name(b) + ")");
      if (g.src[c] != g.src[b])
        r.fail("src∘mu differs from src∘pr2 on (" + g.arrows.name(a) + "," +
               g.arrows.name(b) + ")");
      if (g.tgt[b] != g.src[a])
        r.fail("tgt∘pr2 differs from src∘pr1 on (" + g.arrows.name(a) + "," +
               g.arrows.name(b) + ")");
    }
  return r;
}

namespace {

// Endpoint list of a degree-n tuple: tgt(g1), then the n-1 middle points,
// then src(gn); for degree 0 the single object itself.
std::vector<int> endpoints(const NerveLevel& level, const std::vector<int>& t) {
  std::vector<int> out;
  if (level.degree == 0) {
    out.push_back(t[0]);
    return out;
  }
  out.push_back(level.g.tgt[t[0]]);
  for (int i = 0; i < level.degree; ++i) out.push_back(level.g.src[t[i]]);
  return out;
}

// All (n+1)-tuples over the index set of the base cover, row-major.
std::vector<std::vector<int>> indexTuples(int nIndices, int length) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(length, 0);
  if (length == 0) return {{}};
  while (true) {
    out.push_back(current);
    int k = length - 1;
    while (k >= 0 && current[k] + 1 == nIndices) {
      current[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++current[k];
  }
  return out;
}

std::string tupleIndexName(const Cover& base, const std::vector<int>& idx) {
  std::string name = "(";
  for (size_t i = 0; i < idx.size(); ++i) {
    if (i) name += ",";
    name += base.indices.name(idx[i]);
  }
  return name + ")";
}

}  // namespace

Cover simplicial_cover(const Cover& base, const NerveLevel& level) {
  Cover out;
  out.base = level.names;
  for (const auto& idx : indexTuples(base.indices.size(), level.degree + 1)) {
    out.indices.add(tupleIndexName(base, idx));
    std::vector<int> set;
    for (size_t t = 0; t < level.tuples.size(); ++t) {
      auto ends = endpoints(level, level.tuples[t]);
      bool in = true;
      for (size_t k = 0; k < idx.size(); ++k)
        if (!base.memberOf(idx[k], ends[k])) in = false;
      if (in) set.push_back(static_cast<int>(t));
    }
    out.sets.push_back(std::move(set));
  }
  return out;
}

Report simplicial_cover_refines_faces(const Cover& base,
                                      const FiniteGroupoid& g, int n) {
  Report r;
  if (n < 1) {
    r.fail("face refinement needs degree at least 1");
    return r;
  }
  NerveLevel levelN = nerve(g, n);
  NerveLevel levelLow = nerve(g, n - 1);
  Cover coverN = simplicial_cover(base, levelN);
  Cover coverLow = simplicial_cover(base, levelLow);
  auto tuplesN = indexTuples(base.indices.size(), n + 1);

  for (int k = 0; k <= n; ++k) {
    for (size_t big = 0; big < tuplesN.size(); ++big) {
      std::vector<int> small = tuplesN[big];
      small.erase(small.begin() + k);
      // Locate the dropped-index set in the (n-1)-level cover.
      int lowIdx = 0;
      for (size_t pos = 0; pos < small.size(); ++pos)
        lowIdx = lowIdx * base.indices.size() + small[pos];
      for (int t : coverN.sets[big]) {
        auto face = levelN.faceTuple(k, levelN.tuples[t]);
        int faceIdx = levelLow.indexOf(face);
        if (!coverLow.memberOf(lowIdx, faceIdx))
          r.fail("degree-" + std::to_string(n) + " set " +
                 coverN.indices.name(static_cast<int>(big)) +
                 " escapes the face-" + std::to_string(k) + " pullback");
      }
    }
  }
  return r;
}

LocalTrivData pullback_cocycle(const LocalTrivData& d, const IndexedSet& w,
                               const std::vector<int>& m) {
  if (static_cast<int>(m.size()) != w.size())
    throw DomainError("pullback map not total");
  for (int v : m)
    if (v < 0 || v >= d.cover.base.size())
      throw DomainError("pullback map escapes the data's base");
  LocalTrivData out;
  out.structure = d.structure;
  out.cover.base = w;
  out.cover.indices = d.cover.indices;
  out.cover.sets.resize(d.cover.indices.size());
  for (int a = 0; a < d.cover.indices.size(); ++a)
    for (int x = 0; x < w.size(); ++x)
      if (d.cover.memberOf(a, m[x])) out.cover.sets[a].push_back(x);
  out.momenta.resize(d.cover.indices.size());
  for (int a = 0; a < d.cover.indices.size(); ++a)
    for (int x : out.cover.sets[a]) out.momenta[a][x] = d.momentumAt(a, m[x]);
  for (int a = 0; a < d.cover.indices.size(); ++a)
    for (int b = 0; b < d.cover.indices.size(); ++b) {
      auto ov = out.cover.overlap(a, b);
      if (ov.empty()) continue;
      auto& entries = out.cocycle[{a, b}];
      for (int x : ov) entries[x] = d.cocycleAt(a, b, m[x]);
    }
  return out;
}

Report check_theta_coherence(const LocalGeneralizedMorphism& m) {
  Report r = validate_trivdata(m.data);
  if (!r.ok()) return r;
  const auto& g = m.source;
  const auto& h = m.data.structure;
  const auto& cov = m.data.cover;
  if (cov.base != g.objects) {
    r.fail("cover does not live over the source objects");
    return r;
  }
  const int nIdx = cov.indices.size();

  // Structural totality of the component maps on the source-target covering.
  for (int b = 0; b < nIdx; ++b)
    for (int a = 0; a < nIdx; ++a)
      for (int arr = 0; arr < g.nArrows(); ++arr) {
        if (!cov.memberOf(a, g.src[arr]) || !cov.memberOf(b, g.tgt[arr]))
          continue;
        auto it = m.theta.find({b, a});
        if (it == m.theta.end() || !it->second.count(arr)) {
          r.fail("component map missing on (" + cov.indices.name(b) + ", " +
                 cov.indices.name(a) + ") at " + g.arrows.name(arr));
        }
      }
  if (!r.ok()) return r;

  // Family 1: the component family is a 0-cochain between the two pulled-back
  // momenta on the source-target covering.
  for (const auto& [ba, entry] : m.theta)
    for (const auto& [arr, img] : entry) {
      if (h.src[img] != m.data.momentumAt(ba.second, g.src[arr]))
        r.fail("momentum (degree 1): source cochain fails on (" +
               cov.indices.name(ba.first) + ", " +
               cov.indices.name(ba.second) + ") at " + g.arrows.name(arr));
      if (h.tgt[img] != m.data.momentumAt(ba.first, g.tgt[arr]))
        r.fail("momentum (degree 1): target cochain fails on (" +
               cov.indices.name(ba.first) + ", " +
               cov.indices.name(ba.second) + ") at " + g.arrows.name(arr));
    }

  // Family 2: the degree-1 coboundary relation between the source- and
  // target-pullbacks of the cocycle.
  for (int a = 0; a < nIdx; ++a)
    for (int b = 0; b < nIdx; ++b)
      for (int c = 0; c < nIdx; ++c)
        for (int dd = 0; dd < nIdx; ++dd)
          for (int arr = 0; arr < g.nArrows(); ++arr) {
            if (!cov.memberOf(a, g.src[arr]) || !cov.memberOf(b, g.tgt[arr]))
              continue;
            if (!cov.memberOf(c, g.src[arr]) || !cov.memberOf(dd, g.tgt[arr]))
              continue;
            int lhs = h.compose(
                h.compose(m.thetaAt(b, a, arr),
                          m.data.cocycleAt(a, c, g.src[arr])),
                h.inv[m.thetaAt(dd, c, arr)]);
            if (lhs != m.data.cocycleAt(b, dd, g.tgt[arr]))
              r.fail("coboundary (degree 1): fails at " + g.arrows.name(arr) +
                     " for index pairs (" + cov.indices.name(a) + "," +
                     cov.indices.name(b) + ") and (" + cov.indices.name(c) +
                     "," + cov.indices.name(dd) + ")");
          }

  // Families 3 and 4 live on the degree-2 covering: triples of indices
  // containing a composable pair.
  for (int g1 = 0; g1 < g.nArrows(); ++g1)
    for (int g2 = 0; g2 < g.nArrows(); ++g2) {
      if (!g.composable(g1, g2)) continue;
      int comp = g.composeOpt(g1, g2);
      auto lows = cov.indicesContaining(g.src[g2]);
      auto mids = cov.indicesContaining(g.src[g1]);
      auto tops = cov.indicesContaining(g.tgt[g1]);
      for (int a : lows)
        for (int b : mids)
          for (int c : tops) {
            int lhs = m.thetaAt(c, a, comp);
            int rhs = h.composeOpt(m.thetaAt(c, b, g1), m.thetaAt(b, a, g2));
            if (lhs != rhs)
              r.fail("cocycle (degree 2): fails at ((" + g.arrows.name(g1) +
                     "," + g.arrows.name(g2) + "), indices (" +
                     cov.indices.name(a) + "," + cov.indices.name(b) + "," +
                     cov.indices.name(c) + "))");
          }
      // Family 4: the three face pullbacks of the degree-1 coboundary
      // relation, one instance per pair of triple indices.
      for (int a : lows)
        for (int b : mids)
          for (int c : tops)
            for (int a2 : lows)
              for (int b2 : mids)
                for (int c2 : tops) {
                  struct FaceCase {
                    int arrow;
                    int lo, hi, lo2, hi2;
                    const char* name;
                  };
                  const FaceCase cases[] = {
                      {g2, a, b, a2, b2, "pr2"},
                      {g1, b, c, b2, c2, "pr1"},
                      {comp, a, c, a2, c2, "mu"},
                  };
                  for (const auto& fc : cases) {
                    int lhs = h.compose(
                        h.compose(m.thetaAt(fc.hi, fc.lo, fc.arrow),
                                  m.data.cocycleAt(fc.lo, fc.lo2,
                                                   g.src[fc.arrow])),
                        h.inv[m.thetaAt(fc.hi2, fc.lo2, fc.arrow)]);
                    if (lhs !=
                        m.data.cocycleAt(fc.hi, fc.hi2, g.tgt[fc.arrow]))
                      r.fail(std::string("pulled-back coboundary (degree 2): "
                                         "face ") +
                             fc.name + " fails at ((" + g.arrows.name(g1) +
                             "," + g.arrows.name(g2) + "))");
                  }
                }
    }

  // Family 5: the glued bundle-morphism identity mu* = pr1* ∘ pr2* over the
  // degree-2 nerve, with the action taken through canonical representatives.
  GluedBundle glued = glue_bundle(m.data);
  auto actOn = [&](int arrow, int p) {
    auto [alpha, x, hh] = glued.reps[p];
    (void)x;
    int bIdx = cov.leastIndexContaining(g.tgt[arrow]);
    return glued.classOf(bIdx, g.tgt[arrow],
                         h.compose(m.thetaAt(bIdx, alpha, arrow), hh));
  };
  for (int g1 = 0; g1 < g.nArrows(); ++g1)
    for (int g2 = 0; g2 < g.nArrows(); ++g2) {
      if (!g.composable(g1, g2)) continue;
      int comp = g.composeOpt(g1, g2);
      for (int p = 0; p < glued.bundle.total.size(); ++p) {
        if (glued.bundle.proj[p] != g.src[g2]) continue;
        if (actOn(comp, p) != actOn(g1, actOn(g2, p)))
          r.fail("descent composition (degree 2): fails at ((" +
                 g.arrows.name(g1) + "," + g.arrows.name(g2) + "), " +
                 glued.bundle.total.name(p) + ")");
      }
    }
  return r;
}

Report simplicial_refinement_check(const FiniteGroupoid& g,
                                   const LocalTrivData& d, const Refinement& r,
                                   int n) {
  Report out;
  Report rv = r.validate();
  if (!rv.ok()) {
    out.merge(rv, "refinement: ");
    return out;
  }
  if (r.coarse != d.cover) {
    out.fail("refinement does not start at the data's cover");
    return out;
  }
  if (d.cover.base != g.objects) {
    out.fail("data do not live over the groupoid objects");
    return out;
  }
  Report dv = validate_trivdata(d);
  if (!dv.ok()) {
    out.merge(dv, "data: ");
    return out;
  }

  const int nU = r.coarse.indices.size();
  const int nV = r.fine.indices.size();

  LocalTrivData dataU = d;
  LocalTrivData dataV = refine_data(d, r);
  NerveLevel below = nerve(g, 0);

  for (int degree = 1; degree <= n; ++degree) {
    NerveLevel level = nerve(g, degree);
    Cover coverUk = simplicial_cover(r.coarse, level);
    Cover coverVk = simplicial_cover(r.fine, level);
    auto tuplesU = indexTuples(nU, degree + 1);
    auto tuplesV = indexTuples(nV, degree + 1);

    // The componentwise power of the refinement map refines degree by degree.
    Refinement power;
    power.coarse = coverUk;
    power.fine = coverVk;
    for (const auto& idx : tuplesV) {
      int coarseIdx = 0;
      for (int v : idx) coarseIdx = coarseIdx * nU + r.map[v];
      power.map.push_back(coarseIdx);
    }
    Report pw = power.validate();
    out.merge(pw, "degree " + std::to_string(degree) + " refinement: ");
    if (!out.ok()) return out;

    // Face map as a point map between nerve levels.
    std::vector<std::vector<int>> faceMaps;
    for (int k = 0; k <= degree; ++k) {
      std::vector<int> face(level.tuples.size());
      for (size_t t = 0; t < level.tuples.size(); ++t)
        face[t] = below.indexOf(level.faceTuple(k, level.tuples[t]));
      faceMaps.push_back(std::move(face));
    }

    LocalTrivData nextU, nextV;
    for (int k = 0; k <= degree; ++k) {
      // Path B: pull back the coarse-side data along the face, restrict to
      // the coarse nerve cover, then refine down to the fine nerve cover.
      LocalTrivData pullU = pullback_cocycle(dataU, level.names, faceMaps[k]);
      Refinement dropU;
      dropU.coarse = pullU.cover;
      dropU.fine = coverUk;
      for (const auto& idx : tuplesU) {
        std::vector<int> small = idx;
        small.erase(small.begin() + k);
        int coarseIdx = 0;
        for (int v : small) coarseIdx = coarseIdx * nU + v;
        dropU.map.push_back(coarseIdx);
      }
      LocalTrivData onUk = refine_data(pullU, dropU);
      LocalTrivData viaU = refine_data(onUk, power);

      // Path A: refine first, then pull back along the same face.
      LocalTrivData pullV = pullback_cocycle(dataV, level.names, faceMaps[k]);
      Refinement dropV;
      dropV.coarse = pullV.cover;
      dropV.fine = coverVk;
      for (const auto& idx : tuplesV) {
        std::vector<int> small = idx;
        small.erase(small.begin() + k);
        int coarseIdx = 0;
        for (int v : small) coarseIdx = coarseIdx * nV + v;
        dropV.map.push_back(coarseIdx);
      }
      LocalTrivData onVk = refine_data(pullV, dropV);

      if (viaU != onVk)
        out.fail("degree " + std::to_string(degree) + ", face " +
                 std::to_string(k) +
                 ": refine-then-pullback differs from pullback-then-refine");
      if (k == 0) {
        nextU = onUk;
        nextV = onVk;
      }
    }
    dataU = nextU;
    dataV = nextV;
    below = level;
  }
  return out;
}

FiniteGroupoid fibred_product_groupoid(const IndexedSet& x,
                                       const IndexedSet& y,
                                       const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != x.size())
    throw DomainError("map not total");
  std::vector<char> hit(y.size(), 0);
  for (int v : f) {
    if (v < 0 || v >= y.size()) throw DomainError("map escapes the codomain");
    hit[v] = 1;
  }
  for (int m = 0; m < y.size(); ++m)
    if (!hit[m]) throw DomainError("map is not surjective onto " + y.name(m));

  IndexedSet objects(x.names());
  IndexedSet arrows;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < x.size(); ++a)
    for (int b = 0; b < x.size(); ++b)
      if (f[a] == f[b]) {
        arrows.add("(" + x.name(a) + "," + x.name(b) + ")");
        pairs.emplace_back(a, b);
      }
  std::map<std::pair<int, int>, int> index;
  for (size_t i = 0; i < pairs.size(); ++i) index[pairs[i]] = static_cast<int>(i);

  std::vector<int> src, tgt, inv, unit(x.size());
  for (auto [a, b] : pairs) {
    src.push_back(b);
    tgt.push_back(a);
    inv.push_back(index.at({b, a}));
  }
  for (int a = 0; a < x.size(); ++a) unit[a] = index.at({a, a});
  std::vector<std::array<int, 3>> entries;
  for (auto [a, b] : pairs)
    for (int c = 0; c < x.size(); ++c)
      if (f[b] == f[c])
        entries.push_back({index.at({a, b}), index.at({b, c}), index.at({a, c})});
  return make_groupoid(std::move(objects), std::move(arrows), std::move(src),
                       std::move(tgt), std::move(unit), std::move(inv),
                       entries);
}

namespace {

// All functors from the fibred product groupoid to a group: one group value
// per non-least fiber element, theta(x1, x2) = lambda(x1)·lambda(x2)^{-1}.
std::vector<std::vector<int>> enumerate_descent_functors(
    const IndexedSet& x, const std::vector<int>& f, const GroupTable& g,
    Budget& budget) {
  std::vector<std::vector<int>> fibers;  // per codomain point, ascending
  std::map<int, int> fiberOf;
  {
    std::map<int, std::vector<int>> byPoint;
    for (int a = 0; a < x.size(); ++a) byPoint[f[a]].push_back(a);
    for (auto& [y, fib] : byPoint) {
      (void)y;
      fibers.push_back(fib);
    }
  }
  (void)fiberOf;
  long long count = 1;
  for (const auto& fib : fibers)
    for (size_t i = 1; i < fib.size(); ++i) {
      count *= g.n();
      if (count > budget.limit())
        throw BudgetError("descent enumeration exceeds the budget");
    }

  // lambda : X -> G with the least element of each fiber pinned to e.
  std::vector<std::vector<int>> lambdas;
  std::vector<int> lambda(x.size(), g.identity);
  std::function<void(size_t, size_t)> extend = [&](size_t fi, size_t pos) {
    if (fi == fibers.size()) {
      budget.charge();
      lambdas.push_back(lambda);
      return;
    }
    const auto& fib = fibers[fi];
    if (pos == fib.size()) {
      extend(fi + 1, 1);
      return;
    }
    for (int v = 0; v < g.n(); ++v) {
      lambda[fib[pos]] = v;
      extend(fi, pos + 1);
    }
    lambda[fib[pos]] = g.identity;
  };
  extend(0, 1);
  return lambdas;
}

}  // namespace

DescentReport descent_roundtrip(const IndexedSet& x, const IndexedSet& y,
                                const std::vector<int>& f, const GroupTable& g,
                                Budget& budget) {
  DescentReport out;
  Report gv = validate_group(g);
  if (!gv.ok()) {
    out.report.merge(gv, "group: ");
    return out;
  }
  GroupTable group = g;
  if (group.identity < 0) group.identity = group_identity(group);

  FiniteGroupoid fibred = fibred_product_groupoid(x, y, f);
  FiniteGroupoid groupG = group_as_groupoid(group);

  auto arrowOf = [&](int a, int b) {
    return fibred.arrows.at("(" + x.name(a) + "," + x.name(b) + ")");
  };

  std::vector<std::vector<int>> lambdas =
      enumerate_descent_functors(x, f, group, budget);

  std::vector<GeneralizedMorphism> instances;
  for (const auto& lambda : lambdas) {
    GroupoidMorphism functor;
    functor.domain = fibred;
    functor.codomain = groupG;
    functor.objectMap.assign(x.size(), 0);
    functor.arrowMap.resize(fibred.nArrows());
    for (int arr = 0; arr < fibred.nArrows(); ++arr) {
      int a = fibred.tgt[arr];
      int b = fibred.src[arr];
      functor.arrowMap[arr] =
          group.times(lambda[a], group.inverseOf(lambda[b]));
    }
    Report fv = validate_groupoid_morphism(functor);
    if (!fv.ok()) {
      out.report.merge(fv, "functor: ");
      continue;
    }
    // Descent cocycle identity on the triple fibred product.
    for (int a = 0; a < x.size(); ++a)
      for (int b = 0; b < x.size(); ++b)
        for (int c = 0; c < x.size(); ++c) {
          if (f[a] != f[b] || f[b] != f[c]) continue;
          budget.charge();
          if (functor.arrowMap[arrowOf(a, c)] !=
              group.times(functor.arrowMap[arrowOf(a, b)],
                          functor.arrowMap[arrowOf(b, c)]))
            out.report.fail("descent cocycle identity fails at (" +
                            x.name(a) + "," + x.name(b) + "," + x.name(c) +
                            ")");
        }
    instances.push_back(from_strict_morphism(functor));
  }

  // Equivalence classes of the enumerated bibundles.
  std::vector<int> classRep;
  for (size_t i = 0; i < instances.size(); ++i) {
    bool placed = false;
    for (int rep : classRep)
      if (find_equivalence(instances[rep], instances[i])) {
        placed = true;
        break;
      }
    if (!placed) classRep.push_back(static_cast<int>(i));
  }
  out.classesOnX = static_cast<int>(classRep.size());

  // Pullback-then-descend round trip per instance.
  for (const auto& inst : instances) {
    const PrincipalBundle& q = inst.bundle;
    // Descend: take the fiber over the least preimage of each codomain point.
    std::vector<int> leastPre(y.size(), -1);
    for (int a = 0; a < x.size(); ++a)
      if (leastPre[f[a]] < 0) leastPre[f[a]] = a;
    PrincipalBundle d;
    d.base = y;
    d.structure = q.structure;
    std::vector<int> toQ;
    for (int yy = 0; yy < y.size(); ++yy)
      for (int e = 0; e < q.total.size(); ++e)
        if (q.proj[e] == leastPre[yy]) {
          d.total.add(q.total.name(e));
          d.proj.push_back(yy);
          d.momentum.push_back(q.momentum[e]);
          toQ.push_back(e);
        }
    std::map<int, int> fromQ;
    for (size_t i = 0; i < toQ.size(); ++i) fromQ[toQ[i]] = static_cast<int>(i);
    for (size_t i = 0; i < toQ.size(); ++i)
      for (int arr = 0; arr < q.structure.nArrows(); ++arr)
        if (q.actDefined(toQ[i], arr))
          d.action[{static_cast<int>(i), arr}] =
              fromQ.at(q.action.at({toQ[i], arr}));
    Report dv = validate_bundle(d);
    if (!dv.ok()) {
      out.report.merge(dv, "descended bundle: ");
      continue;
    }
    // The descent morphism identifies the pullback with the start.
    PrincipalBundle pulled = pullback_bundle(d, x, f);
    BundleMorphism iso;
    iso.source = pulled;
    iso.target = q;
    iso.map.resize(pulled.total.size());
    {
      // Pullback elements were enumerated base-point-major with the fiber of
      // d ascending; recover the pair (x point, d element) the same way.
      int next = 0;
      for (int a = 0; a < x.size(); ++a)
        for (int e = 0; e < d.total.size(); ++e) {
          if (d.proj[e] != f[a]) continue;
          int arrow = arrowOf(a, leastPre[f[a]]);
          iso.map[next++] = inst.left.at({arrow, toQ[e]});
        }
    }
    Report iv = validate_bundle_morphism(iso);
    out.report.merge(iv, "round trip: ");
  }

  // Bundles over the codomain, enumerated over a two-copy cover so the
  // comparison has actual cocycles to chew on.
  Cover coverY;
  coverY.base = y;
  coverY.indices.add("W1");
  coverY.indices.add("W2");
  std::vector<int> all(y.size());
  for (int m = 0; m < y.size(); ++m) all[m] = m;
  coverY.sets.push_back(all);
  coverY.sets.push_back(all);
  H1Result h1 = h1_at_cover(coverY, groupG, budget);
  out.classesOnY = static_cast<int>(h1.classes.size());

  if (out.classesOnX != out.classesOnY)
    out.report.fail("class counts differ: " + std::to_string(out.classesOnX) +
                    " on the domain vs " + std::to_string(out.classesOnY) +
                    " on the codomain");
  return out;
}

}  // namespace cechg
