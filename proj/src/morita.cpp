#include "cechg/morita.hpp"

#include <algorithm>
#include <functional>

namespace cechg {

int MoritaEquivalence::leftAt(int p, int q) const {
  auto it = leftDiv.find({p, q});
  if (it == leftDiv.end())
    throw DomainError("left division undefined for the given pair");
  return it->second;
}

int MoritaEquivalence::rightAt(int p, int q) const {
  auto it = rightDiv.find({p, q});
  if (it == rightDiv.end())
    throw DomainError("right division undefined for the given pair");
  return it->second;
}

int left_division(const GeneralizedMorphism& m, int p, int q) {
  const auto& b = m.bundle;
  if (b.momentum[p] != b.momentum[q])
    throw DomainError("left division of points with different momenta: " +
                      b.total.name(p) + ", " + b.total.name(q));
  int found = -1;
  for (int g = 0; g < m.source.nArrows(); ++g) {
    if (!m.leftDefined(g, q)) continue;
    if (m.left.at({g, q}) == p) {
      if (found >= 0)
        throw DomainError("not left principal: several arrows solve p = g·q "
                          "for (" + b.total.name(p) + ", " + b.total.name(q) +
                          ")");
      found = g;
    }
  }
  if (found < 0)
    throw DomainError("not left principal: no arrow solves p = g·q for (" +
                      b.total.name(p) + ", " + b.total.name(q) + ")");
  return found;
}

Report validate_morita(const GeneralizedMorphism& m) {
  Report r = validate_genmor(m);
  if (!r.ok()) return r;
  const auto& b = m.bundle;
  const auto& g = m.source;
  const auto& h = b.structure;

  std::vector<char> hit(h.nObjects(), 0);
  for (int p = 0; p < b.total.size(); ++p) hit[b.momentum[p]] = 1;
  for (int x = 0; x < h.nObjects(); ++x)
    if (!hit[x]) r.fail("momentum misses object " + h.objects.name(x));

  // Left principality: g -> g·q sweeps each momentum fiber freely and
  // transitively.
  for (int q = 0; q < b.total.size(); ++q) {
    std::map<int, int> reached;
    for (int a = 0; a < g.nArrows(); ++a) {
      if (!m.leftDefined(a, q)) continue;
      int p = m.left.at({a, q});
      auto [it, inserted] = reached.emplace(p, a);
      if (!inserted)
        r.fail("left freeness fails at " + b.total.name(q) + ": arrows " +
               g.arrows.name(it->second) + " and " + g.arrows.name(a) +
               " reach " + b.total.name(p));
    }
    for (int p = 0; p < b.total.size(); ++p) {
      if (b.momentum[p] != b.momentum[q]) continue;
      if (!reached.count(p))
        r.fail("left transitivity fails on momentum pair (" +
               b.total.name(p) + ", " + b.total.name(q) + ")");
    }
  }
  if (!r.ok()) return r;

  std::map<std::pair<int, int>, int> leftDiv;
  for (int p = 0; p < b.total.size(); ++p)
    for (int q = 0; q < b.total.size(); ++q)
      if (b.momentum[p] == b.momentum[q])
        leftDiv[{p, q}] = left_division(m, p, q);
  DivisionTable rightDiv = division_table(b);

  // Division-map laws for the left table.
  for (const auto& [pq, arr] : leftDiv) {
    auto [p, q] = pq;
    if (g.tgt[arr] != b.proj[p] || g.src[arr] != b.proj[q])
      r.fail("left division endpoints wrong at (" + b.total.name(p) + ", " +
             b.total.name(q) + ")");
    if (p == q && arr != g.unit[b.proj[p]])
      r.fail("left division is not the unit on the diagonal at " +
             b.total.name(p));
    if (leftDiv.at({q, p}) != g.inv[arr])
      r.fail("left division inverse law fails at (" + b.total.name(p) + ", " +
             b.total.name(q) + ")");
  }
  // Equivariance under the left generalized conjugation:
  // phi^L(g1·p, g2·q) = g1 · phi^L(p, q) · g2^{-1}.
  for (const auto& [pq, arr] : leftDiv) {
    auto [p, q] = pq;
    for (int g1 = 0; g1 < g.nArrows(); ++g1) {
      if (!m.leftDefined(g1, p)) continue;
      int p2 = m.left.at({g1, p});
      for (int g2 = 0; g2 < g.nArrows(); ++g2) {
        if (!m.leftDefined(g2, q)) continue;
        int q2 = m.left.at({g2, q});
        int expected = g.compose(g.compose(g1, arr), g.inv[g2]);
        if (leftDiv.at({p2, q2}) != expected)
          r.fail("left division equivariance fails on (" + b.total.name(p) +
                 ", " + b.total.name(q) + ", " + g.arrows.name(g1) + ", " +
                 g.arrows.name(g2) + ")");
      }
    }
  }
  // H-invariance of phi^L and G-invariance of phi^R.
  for (const auto& [pq, arr] : leftDiv) {
    auto [p, q] = pq;
    for (int hh = 0; hh < h.nArrows(); ++hh) {
      if (!b.actDefined(p, hh) || !b.actDefined(q, hh)) continue;
      if (leftDiv.at({b.action.at({p, hh}), b.action.at({q, hh})}) != arr)
        r.fail("H-invariance of the left division fails on (" +
               b.total.name(p) + ", " + b.total.name(q) + ", " +
               h.arrows.name(hh) + ")");
    }
  }
  for (const auto& [pq, arr] : rightDiv.table) {
    auto [p, q] = pq;
    for (int a = 0; a < g.nArrows(); ++a) {
      if (!m.leftDefined(a, p) || !m.leftDefined(a, q)) continue;
      if (rightDiv.at(m.left.at({a, p}), m.left.at({a, q})) != arr)
        r.fail("G-invariance of the right division fails on (" +
               b.total.name(p) + ", " + b.total.name(q) + ", " +
               g.arrows.name(a) + ")");
    }
  }
  if (!r.ok()) return r;

  // Twisted injectivity of the localized component maps over the single-set
  // cover with canonical sections.
  Cover cover = singleton_cover(b.base);
  SectionFamily sections = canonical_sections(b, cover);
  LocalGeneralizedMorphism theta = localize(m, cover, sections);
  auto sec = [&](int x) { return sections[0].at(x); };
  for (int g1 = 0; g1 < g.nArrows(); ++g1)
    for (int g2 = 0; g2 < g.nArrows(); ++g2) {
      bool same = theta.thetaAt(0, 0, g1) == theta.thetaAt(0, 0, g2);
      bool twisted = false;
      int pt1 = sec(g.tgt[g1]);
      int pt2 = sec(g.tgt[g2]);
      int ps1 = sec(g.src[g1]);
      int ps2 = sec(g.src[g2]);
      if (b.momentum[pt1] == b.momentum[pt2] &&
          b.momentum[ps1] == b.momentum[ps2]) {
        int lhs = g.compose(leftDiv.at({pt2, pt1}), g1);
        int rhs = g.compose(g2, leftDiv.at({ps2, ps1}));
        twisted = lhs == rhs;
      }
      if (same != twisted)
        r.fail("twisted injectivity fails on (" + g.arrows.name(g1) + ", " +
               g.arrows.name(g2) + ")");
    }
  return r;
}

MoritaEquivalence make_morita(const GeneralizedMorphism& m) {
  Report check = validate_morita(m);
  if (!check.ok())
    throw DomainError("not a Morita equivalence: " + check.str());
  MoritaEquivalence out;
  out.gm = m;
  for (int p = 0; p < m.bundle.total.size(); ++p)
    for (int q = 0; q < m.bundle.total.size(); ++q) {
      if (m.bundle.momentum[p] == m.bundle.momentum[q])
        out.leftDiv[{p, q}] = left_division(m, p, q);
      if (m.bundle.proj[p] == m.bundle.proj[q])
        out.rightDiv[{p, q}] = division(m.bundle, p, q);
    }
  return out;
}

GeneralizedMorphism inverse_candidate(const GeneralizedMorphism& m) {
  GeneralizedMorphism out;
  out.source = m.bundle.structure;  // H
  out.bundle.total = m.bundle.total;
  out.bundle.base = m.bundle.structure.objects;
  out.bundle.proj = m.bundle.momentum;
  out.bundle.momentum = m.bundle.proj;
  out.bundle.structure = m.source;  // G
  // p·g := g^{-1}·p, defined when momentum(p) = proj_old(p) = tgt(g).
  for (int p = 0; p < m.bundle.total.size(); ++p)
    for (int a = 0; a < m.source.nArrows(); ++a) {
      int ia = m.source.inv[a];
      if (!m.leftDefined(ia, p)) continue;
      out.bundle.action[{p, a}] = m.left.at({ia, p});
    }
  // h·p := p·h^{-1}, defined when src(h) = eps_old(p).
  for (int p = 0; p < m.bundle.total.size(); ++p)
    for (int hh = 0; hh < m.bundle.structure.nArrows(); ++hh) {
      int ih = m.bundle.structure.inv[hh];
      if (!m.bundle.actDefined(p, ih)) continue;
      out.left[{hh, p}] = m.bundle.action.at({p, ih});
    }
  return out;
}

MoritaEquivalence inverse_morita(const MoritaEquivalence& m) {
  GeneralizedMorphism inv = inverse_candidate(m.gm);
  MoritaEquivalence out = make_morita(inv);
  // The division maps must swap exactly.
  if (out.leftDiv != m.rightDiv || out.rightDiv != m.leftDiv)
    throw DomainError("inverse division maps do not swap as expected");
  return out;
}

namespace {

// Checks that a class-wise map on a composite is constant along each orbit
// and assembles its values on representatives.
Report verify_orbit_constant(
    const ComposedGenMor& c,
    const std::function<int(int, int)>& valueOnPairs,
    std::vector<int>& valuesOut, const std::string& what) {
  Report r;
  valuesOut.assign(c.reps.size(), -1);
  for (size_t i = 0; i < c.reps.size(); ++i)
    valuesOut[i] = valueOnPairs(c.reps[i].first, c.reps[i].second);
  for (const auto& [pq, cls] : c.classIndex) {
    if (valueOnPairs(pq.first, pq.second) != valuesOut[cls])
      r.fail(what + " is not constant on the class of (" +
             std::to_string(pq.first) + ", " + std::to_string(pq.second) +
             ")");
  }
  return r;
}

}  // namespace

UnitIsos canonical_unit_iso(const MoritaEquivalence& m) {
  GeneralizedMorphism inv = inverse_candidate(m.gm);
  UnitIsos out;
  // P∘P^{-1}: first the inverse (H -> G), then P (G -> H).
  out.compositePPinv = compose_global(inv, m.gm);
  // P^{-1}∘P: first P (G -> H), then the inverse (H -> G).
  out.compositePinvP = compose_global(m.gm, inv);

  Report r;
  std::vector<int> toH;
  Report r1 = verify_orbit_constant(
      out.compositePPinv,
      [&](int p1, int p2) { return m.rightAt(p1, p2); }, toH,
      "right division");
  r.merge(r1);
  std::vector<int> toG;
  Report r2 = verify_orbit_constant(
      out.compositePinvP,
      [&](int p1, int p2) { return m.leftAt(p1, p2); }, toG,
      "left division");
  r.merge(r2);
  if (!r.ok())
    throw DomainError("canonical maps are not class functions: " + r.str());

  out.toUnitH =
      GenMorEquivalence{out.compositePPinv.gm,
                        unit_genmor(m.gm.bundle.structure), toH};
  out.toUnitG =
      GenMorEquivalence{out.compositePinvP.gm, unit_genmor(m.gm.source), toG};
  Report v1 = validate_genmor_equivalence(out.toUnitH);
  Report v2 = validate_genmor_equivalence(out.toUnitG);
  if (!v1.ok())
    throw DomainError("canonical map to the H unit bundle fails: " + v1.str());
  if (!v2.ok())
    throw DomainError("canonical map to the G unit bundle fails: " + v2.str());
  return out;
}

Report factorization_check(const MoritaEquivalence& m) {
  Report r;
  const auto& b = m.gm.bundle;
  const auto& g = m.gm.source;
  const auto& h = b.structure;
  const int n = b.total.size();
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2) {
      if (b.proj[p1] != b.proj[p2]) continue;
      for (int q1 = 0; q1 < n; ++q1) {
        if (b.momentum[q1] != b.momentum[p1]) continue;
        for (int q2 = 0; q2 < n; ++q2) {
          if (b.proj[q2] != b.proj[q1]) continue;
          // phi^R(p2, phi^L(p1, q1)·q2) = phi^R(p2, p1)·phi^R(q1, q2)
          int lhs = m.rightAt(p2, m.gm.leftAct(m.leftAt(p1, q1), q2));
          int rhs = h.compose(m.rightAt(p2, p1), m.rightAt(q1, q2));
          if (lhs != rhs)
            r.fail("first factorization identity fails on (" +
                   b.total.name(p1) + ", " + b.total.name(p2) + ", " +
                   b.total.name(q1) + ", " + b.total.name(q2) + ")");
        }
      }
    }
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2) {
      if (b.momentum[p1] != b.momentum[p2]) continue;
      for (int q1 = 0; q1 < n; ++q1) {
        if (b.proj[q1] != b.proj[p1]) continue;
        for (int q2 = 0; q2 < n; ++q2) {
          if (b.momentum[q2] != b.momentum[q1]) continue;
          // phi^L(p2·phi^R(p1, q1), q2) = phi^L(p2, p1)·phi^L(q1, q2)
          int lhs = m.leftAt(b.act(p2, m.rightAt(p1, q1)), q2);
          int rhs = g.compose(m.leftAt(p2, p1), m.leftAt(q1, q2));
          if (lhs != rhs)
            r.fail("second factorization identity fails on (" +
                   b.total.name(p1) + ", " + b.total.name(p2) + ", " +
                   b.total.name(q1) + ", " + b.total.name(q2) + ")");
        }
      }
    }
  return r;
}

Report validate_twisted(const TwistedEquivariantMap& t) {
  Report r;
  const auto& p = t.source;
  const auto& q = t.target;
  if (q.source != p.bundle.structure)
    r.fail("target source groupoid must be the source's structure groupoid");
  if (q.bundle.structure != p.source)
    r.fail("target structure groupoid must be the source's source groupoid");
  if (static_cast<int>(t.map.size()) != p.bundle.total.size())
    r.fail("map not total");
  if (!r.ok()) return r;

  for (int e = 0; e < p.bundle.total.size(); ++e) {
    int img = t.map[e];
    if (img < 0 || img >= q.bundle.total.size()) {
      r.fail("unknown target element at " + p.bundle.total.name(e));
      return r;
    }
    if (q.bundle.proj[img] != p.bundle.momentum[e])
      r.fail("projection/momentum exchange fails at " +
             p.bundle.total.name(e));
    if (q.bundle.momentum[img] != p.bundle.proj[e])
      r.fail("momentum/projection exchange fails at " +
             p.bundle.total.name(e));
  }
  const auto& g = p.source;
  const auto& h = p.bundle.structure;
  for (int e = 0; e < p.bundle.total.size(); ++e) {
    for (int hh = 0; hh < h.nArrows(); ++hh) {
      if (!p.bundle.actDefined(e, hh)) continue;
      int lhs = t.map[p.bundle.action.at({e, hh})];
      if (!q.leftDefined(h.inv[hh], t.map[e])) {
        r.fail("twisted H-equivariance undefined at " + p.bundle.total.name(e));
        continue;
      }
      if (lhs != q.left.at({h.inv[hh], t.map[e]}))
        r.fail("twisted H-equivariance fails at (" + p.bundle.total.name(e) +
               ", " + h.arrows.name(hh) + ")");
    }
    for (int a = 0; a < g.nArrows(); ++a) {
      if (!p.leftDefined(a, e)) continue;
      int lhs = t.map[p.left.at({a, e})];
      if (!q.bundle.actDefined(t.map[e], g.inv[a])) {
        r.fail("twisted G-equivariance undefined at " + p.bundle.total.name(e));
        continue;
      }
      if (lhs != q.bundle.action.at({t.map[e], g.inv[a]}))
        r.fail("twisted G-equivariance fails at (" + p.bundle.total.name(e) +
               ", " + g.arrows.name(a) + ")");
    }
  }
  return r;
}

CriterionResult morita_criterion(const GeneralizedMorphism& p,
                                 const GeneralizedMorphism& q) {
  CriterionResult out;
  Report pv = validate_genmor(p);
  if (!pv.ok()) {
    out.report.fail("first bibundle invalid");
    out.report.merge(pv, "  ");
    return out;
  }
  Report qv = validate_genmor(q);
  if (!qv.ok()) {
    out.report.fail("companion bibundle invalid");
    out.report.merge(qv, "  ");
    return out;
  }
  if (q.source != p.bundle.structure || q.bundle.structure != p.source) {
    out.report.fail("companion does not run in the opposite direction");
    return out;
  }

  const auto& g = p.source;
  const auto& h = p.bundle.structure;
  ComposedGenMor qp = compose_global(p, q);  // Q∘P : G -> G
  ComposedGenMor pq = compose_global(q, p);  // P∘Q : H -> H
  auto iso1 = find_equivalence(qp.gm, unit_genmor(g));
  if (!iso1) {
    out.report.fail("no equivalence from Q∘P to the unit bundle found "
                    "(complete search)");
    return out;
  }
  auto iso2 = find_equivalence(pq.gm, unit_genmor(h));
  if (!iso2) {
    out.report.fail("no equivalence from P∘Q to the unit bundle found "
                    "(complete search)");
    return out;
  }

  // Left division through the composite: phi^L(p1, p2) = Phi1([p1, q])·
  // Phi1([p2, q])^{-1}, independent of the q-choice.
  bool consistent = true;
  for (int p1 = 0; p1 < p.bundle.total.size(); ++p1)
    for (int p2 = 0; p2 < p.bundle.total.size(); ++p2) {
      if (p.bundle.momentum[p1] != p.bundle.momentum[p2]) continue;
      int value = -1;
      for (int qe = 0; qe < q.bundle.total.size(); ++qe) {
        if (q.bundle.proj[qe] != p.bundle.momentum[p1]) continue;
        int c1 = iso1->map[qp.classOf(p1, qe)];
        int c2 = iso1->map[qp.classOf(p2, qe)];
        int arr = g.compose(c1, g.inv[c2]);
        if (value < 0) value = arr;
        if (arr != value) {
          out.report.fail("left division depends on the companion choice at "
                          "(" + p.bundle.total.name(p1) + ", " +
                          p.bundle.total.name(p2) + ")");
          consistent = false;
        }
      }
      if (value < 0) {
        out.report.fail("no companion element over momentum of " +
                        p.bundle.total.name(p1));
        consistent = false;
        continue;
      }
      out.leftDiv[{p1, p2}] = value;
    }
  if (!consistent) return out;

  // Verify the constructed table solves p1 = g·p2.
  for (const auto& [pp, arr] : out.leftDiv) {
    if (!p.leftDefined(arr, pp.second) ||
        p.left.at({arr, pp.second}) != pp.first)
      out.report.fail("constructed left division does not divide at (" +
                      p.bundle.total.name(pp.first) + ", " +
                      p.bundle.total.name(pp.second) + ")");
  }

  // Twisted maps from the unit-bundle identifications.
  out.psi1.assign(p.bundle.total.size(), -1);
  for (int e = 0; e < p.bundle.total.size(); ++e) {
    int wanted = g.unit[p.bundle.proj[e]];
    for (int qe = 0; qe < q.bundle.total.size(); ++qe) {
      if (q.bundle.proj[qe] != p.bundle.momentum[e]) continue;
      if (iso1->map[qp.classOf(e, qe)] == wanted) {
        if (out.psi1[e] >= 0 && out.psi1[e] != qe)
          out.report.fail("twisted map to the companion is not unique at " +
                          p.bundle.total.name(e));
        out.psi1[e] = qe;
      }
    }
    if (out.psi1[e] < 0)
      out.report.fail("no twisted image for " + p.bundle.total.name(e));
  }
  out.psi2.assign(q.bundle.total.size(), -1);
  for (int e = 0; e < q.bundle.total.size(); ++e) {
    int wanted = h.unit[q.bundle.proj[e]];
    for (int pe = 0; pe < p.bundle.total.size(); ++pe) {
      if (p.bundle.proj[pe] != q.bundle.momentum[e]) continue;
      if (iso2->map[pq.classOf(e, pe)] == wanted) {
        if (out.psi2[e] >= 0 && out.psi2[e] != pe)
          out.report.fail("twisted map from the companion is not unique at " +
                          q.bundle.total.name(e));
        out.psi2[e] = pe;
      }
    }
    if (out.psi2[e] < 0)
      out.report.fail("no twisted image for " + q.bundle.total.name(e));
  }
  if (!out.report.ok()) return out;

  TwistedEquivariantMap t1{p, q, out.psi1};
  Report tv1 = validate_twisted(t1);
  out.report.merge(tv1, "psi1: ");
  TwistedEquivariantMap t2{q, p, out.psi2};
  Report tv2 = validate_twisted(t2);
  out.report.merge(tv2, "psi2: ");

  // psi2∘psi1 is a gauge transformation of P: a self-equivalence.
  std::vector<int> round(p.bundle.total.size());
  for (int e = 0; e < p.bundle.total.size(); ++e)
    round[e] = out.psi2[out.psi1[e]];
  GenMorEquivalence gauge{p, p, round};
  Report gv = validate_genmor_equivalence(gauge);
  out.report.merge(gv, "psi2∘psi1: ");

  out.certified = out.report.ok();
  return out;
}

CriterionResult morita_criterion(const GeneralizedMorphism& p) {
  GeneralizedMorphism candidate = inverse_candidate(p);
  Report cv = validate_genmor(candidate);
  if (!cv.ok()) {
    CriterionResult out;
    out.report.fail("formal inverse is not a bibundle, so no companion "
                    "exists");
    out.report.merge(cv, "  ");
    return out;
  }
  return morita_criterion(p, candidate);
}

Report validate_local_morita(const LocalMoritaEquivalence& m) {
  Report r;
  Report rt = validate_local_genmor(m.theta);
  Report re = validate_local_genmor(m.eta);
  r.merge(rt, "theta: ");
  r.merge(re, "eta: ");
  if (!r.ok()) return r;
  if (m.theta.data.structure != m.eta.source)
    r.fail("theta's values are not eta's source");
  if (m.eta.data.structure != m.theta.source)
    r.fail("eta's values are not theta's source");
  if (!r.ok()) return r;

  const auto& g = m.theta.source;           // G
  const auto& h = m.eta.source;             // H
  Birefinement birU;
  LocalGeneralizedMorphism etaTheta = compose_local(m.theta, m.eta, &birU);
  Birefinement birV;
  LocalGeneralizedMorphism thetaEta = compose_local(m.eta, m.theta, &birV);

  const auto& coverU = m.theta.data.cover;
  const auto& coverV = m.eta.data.cover;

  // The coboundary families must be keyed by exactly the nonempty birefined
  // sets.
  auto checkKeys = [&r](const std::map<std::pair<int, int>, std::map<int, int>>&
                            family,
                        const Birefinement& bir, const std::string& side) {
    std::map<std::pair<int, int>, int> fineOf;
    for (int k = 0; k < bir.fine.indices.size(); ++k)
      fineOf[{bir.toAlpha[k], bir.toI[k]}] = k;
    for (const auto& [key, entry] : family) {
      (void)entry;
      if (!fineOf.count(key))
        r.fail(side + " family keyed by a pair without a birefined set");
    }
    for (const auto& [key, k] : fineOf)
      if (!family.count(key))
        r.fail(side + " family misses the birefined set " +
               bir.fine.indices.name(k));
    return fineOf;
  };
  auto fineU = checkKeys(m.phiTheta, birU, "theta coboundary");
  auto fineV = checkKeys(m.phiEta, birV, "eta coboundary");
  if (!r.ok()) return r;

  auto phiThetaAt = [&](int k, int x) {
    return m.phiTheta.at({birU.toAlpha[k], birU.toI[k]}).at(x);
  };
  auto phiEtaAt = [&](int k, int y) {
    return m.phiEta.at({birV.toAlpha[k], birV.toI[k]}).at(y);
  };
  (void)fineU;
  (void)fineV;

  // a) endpoints of the coboundaries.
  for (int k = 0; k < birU.fine.indices.size(); ++k) {
    int a = birU.toAlpha[k];
    int i = birU.toI[k];
    for (int x : birU.fine.sets[k]) {
      auto it = m.phiTheta.at({a, i}).find(x);
      if (it == m.phiTheta.at({a, i}).end()) {
        r.fail("theta coboundary undefined at (" +
               birU.fine.indices.name(k) + ", " + coverU.base.name(x) + ")");
        continue;
      }
      int arr = it->second;
      if (g.tgt[arr] != x)
        r.fail("theta coboundary target is not the identity at " +
               coverU.base.name(x));
      if (g.src[arr] !=
          m.eta.data.momentumAt(i, m.theta.data.momentumAt(a, x)))
        r.fail("theta coboundary source misses the composite momentum at " +
               coverU.base.name(x));
    }
  }
  for (int k = 0; k < birV.fine.indices.size(); ++k) {
    int i = birV.toAlpha[k];
    int a = birV.toI[k];
    for (int y : birV.fine.sets[k]) {
      auto it = m.phiEta.at({i, a}).find(y);
      if (it == m.phiEta.at({i, a}).end()) {
        r.fail("eta coboundary undefined at (" + birV.fine.indices.name(k) +
               ", " + coverV.base.name(y) + ")");
        continue;
      }
      int arr = it->second;
      if (h.tgt[arr] != y)
        r.fail("eta coboundary target is not the identity at " +
               coverV.base.name(y));
      if (h.src[arr] !=
          m.theta.data.momentumAt(a, m.eta.data.momentumAt(i, y)))
        r.fail("eta coboundary source misses the composite momentum at " +
               coverV.base.name(y));
    }
  }
  if (!r.ok()) return r;

  // b) coboundary relation against the composite transition maps.
  for (int k1 = 0; k1 < birU.fine.indices.size(); ++k1)
    for (int k2 = 0; k2 < birU.fine.indices.size(); ++k2) {
      auto ov = birU.fine.overlap(k1, k2);
      for (int x : ov) {
        int lhs = phiThetaAt(k1, x);
        int rhs = g.compose(phiThetaAt(k2, x),
                            etaTheta.data.cocycleAt(k2, k1, x));
        if (lhs != rhs)
          r.fail("theta coboundary relation fails at (" +
                 birU.fine.indices.name(k1) + ", " +
                 birU.fine.indices.name(k2) + ", " + coverU.base.name(x) +
                 ")");
      }
    }
  for (int k1 = 0; k1 < birV.fine.indices.size(); ++k1)
    for (int k2 = 0; k2 < birV.fine.indices.size(); ++k2) {
      auto ov = birV.fine.overlap(k1, k2);
      for (int y : ov) {
        int lhs = phiEtaAt(k1, y);
        int rhs = h.compose(phiEtaAt(k2, y),
                            thetaEta.data.cocycleAt(k2, k1, y));
        if (lhs != rhs)
          r.fail("eta coboundary relation fails at (" +
                 birV.fine.indices.name(k1) + ", " +
                 birV.fine.indices.name(k2) + ", " + coverV.base.name(y) +
                 ")");
      }
    }

  // c) the composites are cohomologous to the identity morphisms.
  for (const auto& [ba, entry] : etaTheta.theta)
    for (const auto& [arr, img] : entry) {
      int rhs = g.compose(
          g.compose(g.inv[phiThetaAt(ba.first, g.tgt[arr])], arr),
          phiThetaAt(ba.second, g.src[arr]));
      if (img != rhs)
        r.fail("composite differs from the twisted identity on G at " +
               g.arrows.name(arr));
    }
  for (const auto& [ba, entry] : thetaEta.theta)
    for (const auto& [arr, img] : entry) {
      int rhs = h.compose(
          h.compose(h.inv[phiEtaAt(ba.first, h.tgt[arr])], arr),
          phiEtaAt(ba.second, h.src[arr]));
      if (img != rhs)
        r.fail("composite differs from the twisted identity on H at " +
               h.arrows.name(arr));
    }
  return r;
}

LocalToGlobal local_to_global(const LocalMoritaEquivalence& m) {
  LocalToGlobal out;
  Report check = validate_local_morita(m);
  if (!check.ok())
    throw DomainError("invalid local Morita equivalence: " + check.str());

  Globalized pTheta = globalize(m.theta);
  Globalized pEta = globalize(m.eta);

  CriterionResult forward = morita_criterion(pTheta.gm, pEta.gm);
  CriterionResult backward = morita_criterion(pEta.gm, pTheta.gm);
  out.report.merge(forward.report, "forward: ");
  out.report.merge(backward.report, "backward: ");
  if (!forward.certified) out.report.fail("forward direction not certified");
  if (!backward.certified) out.report.fail("backward direction not certified");
  if (!out.report.ok()) return out;

  out.forward = make_morita(pTheta.gm);
  out.backward = make_morita(pEta.gm);
  // The criterion's left division must agree with the direct table.
  if (out.forward.leftDiv != forward.leftDiv)
    out.report.fail("forward left division differs from the criterion's");
  if (out.backward.leftDiv != backward.leftDiv)
    out.report.fail("backward left division differs from the criterion's");
  return out;
}

LocalMoritaEquivalence gauge_group_fixture(const PrincipalBundle& p,
                                           const Cover& cover,
                                           const SectionFamily& sections,
                                           int basePoint) {
  Report pv = validate_bundle(p);
  if (!pv.ok()) throw DomainError("invalid bundle: " + pv.str());
  if (!p.structure.isGroup())
    throw DomainError("the fixture needs a group bundle");
  Report sv = validate_sections(p, cover, sections);
  if (!sv.ok()) throw DomainError("bad section family: " + sv.str());
  if (basePoint < 0 || basePoint >= p.total.size())
    throw DomainError("unknown base point element");

  GaugeGroupoid gauge = gauge_groupoid(p);
  const auto& gg = gauge.groupoid;  // G(P)
  const auto& h = p.structure;      // the group
  const int x0 = p.proj[basePoint];

  LocalMoritaEquivalence out;

  // Theta : G(P) -> group, over the cover of the base.
  out.theta.source = gg;
  out.theta.data.cover = cover;
  out.theta.data.structure = h;
  out.theta.data.momenta.resize(cover.indices.size());
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int m : cover.sets[a]) out.theta.data.momenta[a][m] = 0;
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int b = 0; b < cover.indices.size(); ++b) {
      auto ov = cover.overlap(a, b);
      if (ov.empty()) continue;
      auto& entries = out.theta.data.cocycle[{a, b}];
      for (int m : ov)
        entries[m] = division(p, sections[a].at(m), sections[b].at(m));
    }
  for (int b = 0; b < cover.indices.size(); ++b)
    for (int a = 0; a < cover.indices.size(); ++a) {
      std::map<int, int> entry;
      for (int arr = 0; arr < gg.nArrows(); ++arr) {
        auto [p1, p2] = gauge.arrowReps[arr];
        if (!cover.memberOf(a, p.proj[p2]) || !cover.memberOf(b, p.proj[p1]))
          continue;
        int first = division(p, sections[b].at(p.proj[p1]), p1);
        int second = division(p, p2, sections[a].at(p.proj[p2]));
        entry[arr] = h.compose(first, second);
      }
      if (!entry.empty()) out.theta.theta[{b, a}] = std::move(entry);
    }

  // Eta : group -> G(P), over the one-point cover of the single object.
  out.eta.source = h;
  out.eta.data.cover = singleton_cover(h.objects, "V");
  out.eta.data.structure = gg;
  out.eta.data.momenta.resize(1);
  out.eta.data.momenta[0][0] = x0;
  out.eta.data.cocycle[{0, 0}][0] = gg.unit[x0];
  {
    std::map<int, int> entry;
    for (int arr = 0; arr < h.nArrows(); ++arr)
      entry[arr] = gauge.classOf(basePoint, p.act(basePoint, h.inv[arr]));
    out.eta.theta[{0, 0}] = std::move(entry);
  }

  // Coboundary families on the two birefinements.
  for (int a = 0; a < cover.indices.size(); ++a) {
    auto& entry = out.phiTheta[{a, 0}];
    for (int m : cover.sets[a])
      entry[m] = gauge.classOf(sections[a].at(m), basePoint);
  }
  for (int a = 0; a < cover.indices.size(); ++a) {
    if (!cover.memberOf(a, x0)) continue;
    out.phiEta[{0, a}][0] = division(p, basePoint, sections[a].at(x0));
  }
  return out;
}

}  // namespace cechg
