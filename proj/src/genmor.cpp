#include "cechg/genmor.hpp"

#include <algorithm>

namespace cechg {

int GeneralizedMorphism::leftAct(int g, int p) const {
  auto it = left.find({g, p});
  if (it == left.end())
    throw DomainError("left action undefined on (" + source.arrows.name(g) +
                      ", " + bundle.total.name(p) + ")");
  return it->second;
}

Report validate_genmor(const GeneralizedMorphism& m) {
  Report r;
  const auto& g = m.source;
  const auto& b = m.bundle;
  if (b.base != g.objects)
    r.fail("bundle base differs from the source objects");
  Report rb = validate_bundle(b);
  r.merge(rb, "bundle: ");
  if (!r.ok()) return r;

  // Left action along proj: defined exactly when src(g) = proj(p).
  for (int a = 0; a < g.nArrows(); ++a)
    for (int p = 0; p < b.total.size(); ++p) {
      bool want = g.src[a] == b.proj[p];
      bool have = m.leftDefined(a, p);
      if (want && !have)
        r.fail("left action undefined on admissible (" + g.arrows.name(a) +
               ", " + b.total.name(p) + ")");
      if (!want && have)
        r.fail("left action defined outside its domain on (" +
               g.arrows.name(a) + ", " + b.total.name(p) + ")");
      if (want && have) {
        int q = m.left.at({a, p});
        if (q < 0 || q >= b.total.size()) {
          r.fail("unknown total element in left action");
          continue;
        }
        if (b.proj[q] != g.tgt[a])
          r.fail("left momentum law fails on (" + g.arrows.name(a) + ", " +
                 b.total.name(p) + ")");
        if (b.momentum[q] != b.momentum[p])
          r.fail("right momentum is not invariant on (" + g.arrows.name(a) +
                 ", " + b.total.name(p) + ")");
      }
    }
  if (!r.ok()) return r;

  for (int p = 0; p < b.total.size(); ++p) {
    int u = g.unit[b.proj[p]];
    if (m.leftAct(u, p) != p)
      r.fail("unit does not act trivially on " + b.total.name(p));
  }
  for (int a1 = 0; a1 < g.nArrows(); ++a1)
    for (int a2 = 0; a2 < g.nArrows(); ++a2) {
      int c = g.composeOpt(a1, a2);
      if (c < 0) continue;
      for (int p = 0; p < b.total.size(); ++p) {
        if (!m.leftDefined(a2, p)) continue;
        if (m.leftAct(c, p) != m.leftAct(a1, m.leftAct(a2, p)))
          r.fail("left associativity fails on (" + g.arrows.name(a1) + ", " +
                 g.arrows.name(a2) + ", " + b.total.name(p) + ")");
      }
    }
  // Compatibility (g·p)·h = g·(p·h).
  for (int a = 0; a < g.nArrows(); ++a)
    for (int p = 0; p < b.total.size(); ++p) {
      if (!m.leftDefined(a, p)) continue;
      int gp = m.left.at({a, p});
      for (int h = 0; h < b.structure.nArrows(); ++h) {
        if (!b.actDefined(p, h)) continue;
        if (!b.actDefined(gp, h)) {
          r.fail("compatibility undefined on (" + g.arrows.name(a) + ", " +
                 b.total.name(p) + ", " + b.structure.arrows.name(h) + ")");
          continue;
        }
        if (b.action.at({gp, h}) != m.leftAct(a, b.action.at({p, h})))
          r.fail("actions do not commute on (" + g.arrows.name(a) + ", " +
                 b.total.name(p) + ", " + b.structure.arrows.name(h) + ")");
      }
    }
  return r;
}

GeneralizedMorphism from_strict_morphism(const GroupoidMorphism& m) {
  Report check = validate_groupoid_morphism(m);
  if (!check.ok())
    throw DomainError("invalid groupoid morphism: " + check.str());
  GeneralizedMorphism out;
  out.source = m.domain;
  out.bundle =
      pullback_bundle(unit_bundle(m.codomain), m.domain.objects, m.objectMap);

  // The pullback elements are pairs (x, h) with phi(x) = tgt(h); recover the
  // pair from the construction order rather than parsing names.
  std::vector<std::pair<int, int>> parts;
  std::map<std::pair<int, int>, int> index;
  {
    const auto& h = m.codomain;
    int next = 0;
    for (int x = 0; x < m.domain.nObjects(); ++x)
      for (int arr = 0; arr < h.nArrows(); ++arr)
        if (h.tgt[arr] == m.objectMap[x]) {
          parts.emplace_back(x, arr);
          index[{x, arr}] = next++;
        }
  }
  const auto& h = m.codomain;
  for (int a = 0; a < m.domain.nArrows(); ++a)
    for (size_t i = 0; i < parts.size(); ++i) {
      auto [x, arr] = parts[i];
      if (m.domain.src[a] != x) continue;
      int moved = h.compose(m.arrowMap[a], arr);
      out.left[{a, static_cast<int>(i)}] =
          index.at({m.domain.tgt[a], moved});
    }

  // The canonical global section x -> (x, unit(phi(x))) intertwines the left
  // action with right multiplication through the arrow map.
  for (int a = 0; a < m.domain.nArrows(); ++a) {
    int sx = m.domain.src[a];
    int tx = m.domain.tgt[a];
    int secS = index.at({sx, h.unit[m.objectMap[sx]]});
    int secT = index.at({tx, h.unit[m.objectMap[tx]]});
    if (out.leftAct(a, secS) != out.bundle.act(secT, m.arrowMap[a]))
      throw DomainError("canonical section fails to intertwine at " +
                        m.domain.arrows.name(a));
  }
  return out;
}

GeneralizedMorphism unit_genmor(const FiniteGroupoid& g) {
  return from_strict_morphism(identity_morphism(g));
}

int LocalGeneralizedMorphism::thetaAt(int b, int a, int g) const {
  auto it = theta.find({b, a});
  if (it == theta.end())
    throw DomainError("no component map for (" + data.cover.indices.name(b) +
                      ", " + data.cover.indices.name(a) + ")");
  auto jt = it->second.find(g);
  if (jt == it->second.end())
    throw DomainError("component map undefined at arrow " +
                      source.arrows.name(g));
  return jt->second;
}

Report validate_local_genmor(const LocalGeneralizedMorphism& m) {
  Report r;
  const auto& g = m.source;
  const auto& h = m.data.structure;
  const auto& cov = m.data.cover;
  if (cov.base != g.objects)
    r.fail("cover does not live over the source objects");
  Report rd = validate_trivdata(m.data);
  r.merge(rd, "data: ");
  if (!r.ok()) return r;

  const int nIdx = cov.indices.size();
  // Domains: theta[(b, a)] defined exactly on the arrows of the (a, b)
  // component, with an entry present exactly when the component is nonempty.
  for (int b = 0; b < nIdx; ++b)
    for (int a = 0; a < nIdx; ++a) {
      std::vector<int> component;
      for (int arr = 0; arr < g.nArrows(); ++arr)
        if (cov.memberOf(a, g.src[arr]) && cov.memberOf(b, g.tgt[arr]))
          component.push_back(arr);
      bool have = m.theta.count({b, a}) > 0;
      if (!component.empty() && !have)
        r.fail("missing component map for (" + cov.indices.name(b) + ", " +
               cov.indices.name(a) + ")");
      if (component.empty() && have)
        r.fail("component map on an empty component (" + cov.indices.name(b) +
               ", " + cov.indices.name(a) + ")");
      if (!have || component.empty()) continue;
      const auto& entry = m.theta.at({b, a});
      for (int arr : component)
        if (!entry.count(arr))
          r.fail("component map (" + cov.indices.name(b) + ", " +
                 cov.indices.name(a) + ") undefined at " +
                 g.arrows.name(arr));
      for (const auto& [arr, img] : entry) {
        if (!cov.memberOf(a, g.src[arr]) || !cov.memberOf(b, g.tgt[arr]))
          r.fail("component map (" + cov.indices.name(b) + ", " +
                 cov.indices.name(a) + ") defined outside its component at " +
                 g.arrows.name(arr));
        if (img < 0 || img >= h.nArrows())
          r.fail("unknown target arrow at " + g.arrows.name(arr));
      }
    }
  if (!r.ok()) return r;

  // Momentum diagrams.
  for (const auto& [ba, entry] : m.theta)
    for (const auto& [arr, img] : entry) {
      if (h.src[img] != m.data.momentumAt(ba.second, g.src[arr]))
        r.fail("source diagram fails on (" + cov.indices.name(ba.first) +
               ", " + cov.indices.name(ba.second) + ") at " +
               g.arrows.name(arr));
      if (h.tgt[img] != m.data.momentumAt(ba.first, g.tgt[arr]))
        r.fail("target diagram fails on (" + cov.indices.name(ba.first) +
               ", " + cov.indices.name(ba.second) + ") at " +
               g.arrows.name(arr));
    }
  // Units: theta_aa(unit(x)) = unit(eps_a(x)).
  for (int a = 0; a < nIdx; ++a)
    for (int x : cov.sets[a]) {
      int u = g.unit[x];
      if (m.thetaAt(a, a, u) != h.unit[m.data.momentumAt(a, x)])
        r.fail("unit diagram fails at (" + cov.indices.name(a) + ", " +
               g.objects.name(x) + ")");
    }
  if (!r.ok()) return r;

  // Generalized homomorphism property over all index triples.
  for (int a = 0; a < nIdx; ++a)
    for (int b = 0; b < nIdx; ++b)
      for (int c = 0; c < nIdx; ++c) {
        for (int g1 = 0; g1 < g.nArrows(); ++g1) {
          if (!cov.memberOf(b, g.src[g1]) || !cov.memberOf(c, g.tgt[g1]))
            continue;
          for (int g2 = 0; g2 < g.nArrows(); ++g2) {
            if (!g.composable(g1, g2)) continue;
            if (!cov.memberOf(a, g.src[g2]) || !cov.memberOf(b, g.tgt[g2]))
              continue;
            int lhs = m.thetaAt(c, a, g.composeOpt(g1, g2));
            int rhs = h.composeOpt(m.thetaAt(c, b, g1), m.thetaAt(b, a, g2));
            if (lhs != rhs)
              r.fail("generalized homomorphism fails on (" +
                     g.arrows.name(g1) + "·" + g.arrows.name(g2) +
                     ") with indices (" + cov.indices.name(a) + "," +
                     cov.indices.name(b) + "," + cov.indices.name(c) + ")");
          }
        }
      }
  // Transition compatibility over all index quadruples.
  for (int a = 0; a < nIdx; ++a)
    for (int b = 0; b < nIdx; ++b)
      for (int c = 0; c < nIdx; ++c)
        for (int dd = 0; dd < nIdx; ++dd) {
          for (int arr = 0; arr < g.nArrows(); ++arr) {
            if (!cov.memberOf(a, g.src[arr]) || !cov.memberOf(b, g.tgt[arr]))
              continue;
            if (!cov.memberOf(c, g.src[arr]) || !cov.memberOf(dd, g.tgt[arr]))
              continue;
            int lhs = m.thetaAt(b, a, arr);
            int rhs = h.compose(
                h.compose(m.data.cocycleAt(b, dd, g.tgt[arr]),
                          m.thetaAt(dd, c, arr)),
                m.data.cocycleAt(c, a, g.src[arr]));
            if (lhs != rhs)
              r.fail("transition compatibility fails at " +
                     g.arrows.name(arr) + " with indices (" +
                     cov.indices.name(a) + "," + cov.indices.name(b) + "," +
                     cov.indices.name(c) + "," + cov.indices.name(dd) + ")");
          }
        }
  return r;
}

LocalGeneralizedMorphism localize(const GeneralizedMorphism& m,
                                  const Cover& cover,
                                  const SectionFamily& sections) {
  Report check = validate_sections(m.bundle, cover, sections);
  if (!check.ok()) throw DomainError("bad section family: " + check.str());
  LocalGeneralizedMorphism out;
  out.source = m.source;
  out.data = extract_trivdata(m.bundle, cover, sections);
  const auto& g = m.source;
  for (int b = 0; b < cover.indices.size(); ++b)
    for (int a = 0; a < cover.indices.size(); ++a) {
      std::map<int, int> entry;
      for (int arr = 0; arr < g.nArrows(); ++arr) {
        if (!cover.memberOf(a, g.src[arr]) || !cover.memberOf(b, g.tgt[arr]))
          continue;
        int moved = m.leftAct(arr, sections[a].at(g.src[arr]));
        entry[arr] = division(m.bundle, sections[b].at(g.tgt[arr]), moved);
      }
      if (!entry.empty()) out.theta[{b, a}] = std::move(entry);
    }
  return out;
}

Globalized globalize(const LocalGeneralizedMorphism& m) {
  Report check = validate_local_genmor(m);
  if (!check.ok())
    throw DomainError("invalid local generalized morphism: " + check.str());
  Globalized out;
  out.glued = glue_bundle(m.data);
  out.gm.source = m.source;
  out.gm.bundle = out.glued.bundle;

  const auto& g = m.source;
  const auto& h = m.data.structure;
  const auto& cov = m.data.cover;
  for (int arr = 0; arr < g.nArrows(); ++arr) {
    int bIdx = cov.leastIndexContaining(g.tgt[arr]);
    for (int p = 0; p < out.glued.bundle.total.size(); ++p) {
      auto [alpha, x, hArr] = out.glued.reps[p];
      if (x != g.src[arr]) continue;
      int img = out.glued.classOf(bIdx, g.tgt[arr],
                                  h.compose(m.thetaAt(bIdx, alpha, arr), hArr));
      out.gm.left[{arr, p}] = img;
    }
  }

  // The paper proves independence of the representative and of the index
  // choice; re-check both rather than assuming them.
  for (int arr = 0; arr < g.nArrows(); ++arr)
    for (int p = 0; p < out.glued.bundle.total.size(); ++p) {
      auto [alpha, x, hArr] = out.glued.reps[p];
      if (x != g.src[arr]) continue;
      int expected = out.gm.left.at({arr, p});
      for (int a2 : cov.indicesContaining(x)) {
        int hArr2 = h.compose(m.data.cocycleAt(a2, alpha, x), hArr);
        for (int b2 : cov.indicesContaining(g.tgt[arr])) {
          int img = out.glued.classOf(
              b2, g.tgt[arr], h.compose(m.thetaAt(b2, a2, arr), hArr2));
          if (img != expected)
            throw DomainError(
                "left action is not well-defined across choices at (" +
                g.arrows.name(arr) + ", " +
                out.glued.bundle.total.name(p) + ")");
        }
      }
    }

  Report rv = validate_genmor(out.gm);
  if (!rv.ok())
    throw DomainError("globalization produced an invalid bibundle: " +
                      rv.str());
  return out;
}

Report validate_genmor_equivalence(const GenMorEquivalence& e) {
  Report r;
  if (e.source.source != e.target.source)
    r.fail("bibundles have different source groupoids");
  BundleMorphism bm{e.source.bundle, e.target.bundle, e.map};
  Report rb = validate_bundle_morphism(bm);
  r.merge(rb, "bundle morphism: ");
  if (!r.ok()) return r;
  for (int a = 0; a < e.source.source.nArrows(); ++a)
    for (int p = 0; p < e.source.bundle.total.size(); ++p) {
      if (!e.source.leftDefined(a, p)) continue;
      if (!e.target.leftDefined(a, e.map[p])) {
        r.fail("left equivariance undefined at (" +
               e.source.source.arrows.name(a) + ", " +
               e.source.bundle.total.name(p) + ")");
        continue;
      }
      if (e.map[e.source.left.at({a, p})] !=
          e.target.left.at({a, e.map[p]}))
        r.fail("left equivariance fails at (" +
               e.source.source.arrows.name(a) + ", " +
               e.source.bundle.total.name(p) + ")");
    }
  return r;
}

std::optional<GenMorEquivalence> find_equivalence(
    const GeneralizedMorphism& a, const GeneralizedMorphism& b) {
  if (a.source != b.source) return std::nullopt;
  LeftActionTables left;
  left.source = &a.left;
  left.target = &b.left;
  left.actor = &a.source;
  auto assign = find_equivariant_bijection(a.bundle, b.bundle, &left);
  if (!assign) return std::nullopt;
  GenMorEquivalence e{a, b, *assign};
  Report check = validate_genmor_equivalence(e);
  if (!check.ok()) return std::nullopt;
  return e;
}

Report validate_local_equivalence(const LocalEquivalence& e) {
  Report r;
  Report r1 = validate_local_genmor(e.from);
  Report r2 = validate_local_genmor(e.to);
  r.merge(r1, "from: ");
  r.merge(r2, "to: ");
  if (e.from.data.cover != e.to.data.cover)
    r.fail("local morphisms live over different covers");
  if (e.from.source != e.to.source) r.fail("source groupoids differ");
  if (e.from.data.structure != e.to.data.structure)
    r.fail("target groupoids differ");
  if (!r.ok()) return r;

  // Conditions a) and b) are those of a local morphism of the trivializing
  // data; c) ties the two component families together.
  LocalMorphismData lm{e.from.data, e.to.data, e.sigma};
  Report rm = validate_local_morphism(lm);
  r.merge(rm, "cochain: ");
  if (!r.ok()) return r;

  const auto& g = e.from.source;
  const auto& h = e.from.data.structure;
  const auto& cov = e.from.data.cover;
  for (const auto& [ba, entry] : e.from.theta)
    for (const auto& [arr, img] : entry) {
      int rhs = h.compose(
          h.compose(h.inv[e.sigma[ba.first].at(g.tgt[arr])],
                    e.to.thetaAt(ba.first, ba.second, arr)),
          e.sigma[ba.second].at(g.src[arr]));
      if (img != rhs)
        r.fail("component coboundary fails on (" +
               cov.indices.name(ba.first) + ", " +
               cov.indices.name(ba.second) + ") at " + g.arrows.name(arr));
    }
  return r;
}

LocalEquivalence localize_equivalence(const GenMorEquivalence& e,
                                      const Cover& cover,
                                      const SectionFamily& sectionsSource,
                                      const SectionFamily& sectionsTarget) {
  Report check = validate_genmor_equivalence(e);
  if (!check.ok()) throw DomainError("invalid equivalence: " + check.str());
  LocalEquivalence out;
  out.from = localize(e.source, cover, sectionsSource);
  out.to = localize(e.target, cover, sectionsTarget);
  out.sigma.resize(cover.indices.size());
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int m : cover.sets[a]) {
      int moved = e.map[sectionsSource[a].at(m)];
      out.sigma[a][m] =
          division(e.target.bundle, sectionsTarget[a].at(m), moved);
    }
  return out;
}

GenMorEquivalence globalize_equivalence(const LocalEquivalence& e) {
  Report check = validate_local_equivalence(e);
  if (!check.ok())
    throw DomainError("invalid local equivalence: " + check.str());
  Globalized src = globalize(e.from);
  Globalized dst = globalize(e.to);
  const auto& h = e.from.data.structure;
  GenMorEquivalence out;
  out.source = src.gm;
  out.target = dst.gm;
  out.map.resize(src.gm.bundle.total.size());
  for (int p = 0; p < src.gm.bundle.total.size(); ++p) {
    auto [alpha, x, arr] = src.glued.reps[p];
    out.map[p] = dst.glued.classOf(alpha, x,
                                   h.compose(e.sigma[alpha].at(x), arr));
  }
  Report rv = validate_genmor_equivalence(out);
  if (!rv.ok())
    throw DomainError("globalized equivalence is invalid: " + rv.str());
  return out;
}

Report classify_equivariant(const LocalGeneralizedMorphism& m,
                            const ActionGroupoid& src,
                            const ActionGroupoid& dst) {
  Report r = validate_local_genmor(m);
  if (!r.ok()) return r;
  if (m.source != src.groupoid)
    r.fail("source groupoid is not the given action groupoid");
  if (m.data.structure != dst.groupoid)
    r.fail("values do not land in the given action groupoid");
  if (!r.ok()) return r;

  const auto& cov = m.data.cover;
  const auto& G = src.action;  // acting group on the source side
  const auto& H = dst.action;

  // Split the transition cocycle and the component maps into their group and
  // point parts; validate_local_genmor already pinned the point parts, so
  // what is left are the three split identities.
  auto thetaH = [&](int b, int a, int arr) {
    return dst.arrowParts[m.thetaAt(b, a, arr)].first;
  };
  auto phiH = [&](int a, int b, int x) {
    return dst.arrowParts[m.data.cocycleAt(a, b, x)].first;
  };

  // Unit lifts.
  for (int a = 0; a < cov.indices.size(); ++a)
    for (int x : cov.sets[a]) {
      int u = src.groupoid.unit[x];
      if (thetaH(a, a, u) != H.group.identity)
        r.fail("unit lift fails at (" + cov.indices.name(a) + ", " +
               src.groupoid.objects.name(x) + ")");
    }

  // Lifted homomorphism identity for the group parts.
  const auto& g = src.groupoid;
  for (int g1 = 0; g1 < g.nArrows(); ++g1)
    for (int g2 = 0; g2 < g.nArrows(); ++g2) {
      if (!g.composable(g1, g2)) continue;
      int x = g.src[g2];
      int mid = g.tgt[g2];
      int top = g.tgt[g1];
      for (int a : cov.indicesContaining(x))
        for (int b : cov.indicesContaining(mid))
          for (int c : cov.indicesContaining(top)) {
            int lhs = thetaH(c, a, g.composeOpt(g1, g2));
            int rhs = H.group.times(thetaH(c, b, g1), thetaH(b, a, g2));
            if (lhs != rhs)
              r.fail("lift homomorphism fails on " + g.arrows.name(g1) + "·" +
                     g.arrows.name(g2));
          }
    }

  // Relation to the bundle cocycle.
  for (int arr = 0; arr < g.nArrows(); ++arr) {
    int x = g.src[arr];
    int y = g.tgt[arr];
    for (int a : cov.indicesContaining(x))
      for (int b : cov.indicesContaining(y))
        for (int c : cov.indicesContaining(x))
          for (int dd : cov.indicesContaining(y)) {
            int lhs = thetaH(b, a, arr);
            int rhs = H.group.times(
                H.group.times(phiH(b, dd, y), thetaH(dd, c, arr)),
                phiH(c, a, x));
            if (lhs != rhs)
              r.fail("lift-cocycle relation fails at " + g.arrows.name(arr));
          }
  }

  // Equivariance of the glued section: eps_b(g·x) = theta^H_ba(g)·eps_a(x).
  for (int arr = 0; arr < g.nArrows(); ++arr) {
    int x = g.src[arr];
    int y = g.tgt[arr];
    for (int a : cov.indicesContaining(x))
      for (int b : cov.indicesContaining(y)) {
        int lhs = m.data.momentumAt(b, y);
        int rhs = H.apply(thetaH(b, a, arr), m.data.momentumAt(a, x));
        if (lhs != rhs)
          r.fail("section equivariance fails at " + g.arrows.name(arr));
      }
  }
  (void)G;
  return r;
}

}  // namespace cechg
