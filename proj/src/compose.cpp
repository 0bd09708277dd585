#include "cechg/compose.hpp"

#include <algorithm>

namespace cechg {

int ComposedGenMor::classOf(int p, int q) const {
  auto it = classIndex.find({p, q});
  if (it == classIndex.end())
    throw DomainError("pair is not an element of the composite bibundle");
  return it->second;
}

ComposedGenMor compose_global(const GeneralizedMorphism& p,
                              const GeneralizedMorphism& q) {
  if (p.bundle.structure != q.source)
    throw DomainError("middle groupoid mismatch: codomain of the first factor "
                      "differs from the domain of the second");
  const auto& mid = q.source;
  const int nP = p.bundle.total.size();
  const int nQ = q.bundle.total.size();

  ComposedGenMor out;
  out.gm.source = p.source;
  out.gm.bundle.base = p.bundle.base;
  out.gm.bundle.structure = q.bundle.structure;

  std::vector<int> canonical(static_cast<size_t>(nP) * nQ, -1);
  for (int a = 0; a < nP; ++a)
    for (int b = 0; b < nQ; ++b) {
      if (p.bundle.momentum[a] != q.bundle.proj[b]) continue;
      if (canonical[static_cast<size_t>(a) * nQ + b] >= 0) continue;
      // Orbit under (p, q) ~ (p·g, g^{-1}·q), tgt(g) = momentum(p).
      std::vector<std::pair<int, int>> orbit;
      std::pair<int, int> best{nP, nQ};
      for (int g = 0; g < mid.nArrows(); ++g) {
        if (!p.bundle.actDefined(a, g)) continue;
        std::pair<int, int> moved{p.bundle.action.at({a, g}),
                                  q.leftAct(mid.inv[g], b)};
        orbit.push_back(moved);
        best = std::min(best, moved);
      }
      int idx = out.gm.bundle.total.add(
          "[" + p.bundle.total.name(best.first) + "," +
          q.bundle.total.name(best.second) + "]");
      out.reps.push_back(best);
      out.gm.bundle.proj.push_back(p.bundle.proj[best.first]);
      out.gm.bundle.momentum.push_back(q.bundle.momentum[best.second]);
      for (auto& mv : orbit)
        canonical[static_cast<size_t>(mv.first) * nQ + mv.second] = idx;
    }
  for (int a = 0; a < nP; ++a)
    for (int b = 0; b < nQ; ++b)
      if (canonical[static_cast<size_t>(a) * nQ + b] >= 0)
        out.classIndex[{a, b}] = canonical[static_cast<size_t>(a) * nQ + b];

  // Right H-action on the second leg, left F-action on the first.
  const auto& h = q.bundle.structure;
  for (size_t i = 0; i < out.reps.size(); ++i) {
    auto [a, b] = out.reps[i];
    for (int arr = 0; arr < h.nArrows(); ++arr)
      if (q.bundle.actDefined(b, arr))
        out.gm.bundle.action[{static_cast<int>(i), arr}] =
            out.classOf(a, q.bundle.action.at({b, arr}));
    for (int f = 0; f < p.source.nArrows(); ++f)
      if (p.leftDefined(f, a))
        out.gm.left[{f, static_cast<int>(i)}] =
            out.classOf(p.left.at({f, a}), b);
  }
  return out;
}

int composite_division(const ComposedGenMor& c, const GeneralizedMorphism& p,
                       const GeneralizedMorphism& q, int class1, int class2) {
  auto [p1, q1] = c.reps[class1];
  auto [p2, q2] = c.reps[class2];
  if (p.bundle.proj[p1] != p.bundle.proj[p2])
    throw DomainError("classes do not lie in the same fiber");
  int mid = division(p.bundle, p1, p2);
  int moved = q.leftAct(mid, q2);
  return division(q.bundle, q1, moved);
}

Refinement Birefinement::asRefinement() const {
  Refinement r;
  r.coarse = coarse;
  r.fine = fine;
  r.map = toAlpha;
  return r;
}

Birefinement birefine(const Cover& coverU,
                      const std::vector<std::map<int, int>>& momenta,
                      const Cover& coverV) {
  Report cu = coverU.validate();
  if (!cu.ok()) throw DomainError("invalid first cover: " + cu.str());
  Report cv = coverV.validate();
  if (!cv.ok()) throw DomainError("invalid second cover: " + cv.str());
  if (momenta.size() != static_cast<size_t>(coverU.indices.size()))
    throw DomainError("one momentum map per cover index required");

  Birefinement out;
  out.coarse = coverU;
  out.coverV = coverV;
  out.fine.base = coverU.base;
  for (int a = 0; a < coverU.indices.size(); ++a)
    for (int i = 0; i < coverV.indices.size(); ++i) {
      std::vector<int> set;
      for (int m : coverU.sets[a])
        if (coverV.memberOf(i, momenta[a].at(m))) set.push_back(m);
      if (set.empty()) continue;  // only nonempty fine sets are kept
      out.fine.indices.add(coverU.indices.name(a) + "_" +
                           coverV.indices.name(i));
      out.fine.sets.push_back(std::move(set));
      out.toAlpha.push_back(a);
      out.toI.push_back(i);
    }
  Report fineOk = out.fine.validate();
  if (!fineOk.ok())
    throw DomainError("birefinement does not cover the base: " +
                      fineOk.str());
  return out;
}

LocalGeneralizedMorphism refine_local_genmor(const LocalGeneralizedMorphism& m,
                                             const Birefinement& b) {
  if (b.coarse != m.data.cover)
    throw DomainError("birefinement does not start at the data's cover");
  LocalGeneralizedMorphism out;
  out.source = m.source;
  out.data = refine_data(m.data, b.asRefinement());
  const auto& g = m.source;
  const auto& fine = b.fine;
  for (int bj = 0; bj < fine.indices.size(); ++bj)
    for (int ai = 0; ai < fine.indices.size(); ++ai) {
      std::map<int, int> entry;
      for (int arr = 0; arr < g.nArrows(); ++arr) {
        if (!fine.memberOf(ai, g.src[arr]) || !fine.memberOf(bj, g.tgt[arr]))
          continue;
        entry[arr] = m.thetaAt(b.toAlpha[bj], b.toAlpha[ai], arr);
      }
      if (!entry.empty()) out.theta[{bj, ai}] = std::move(entry);
    }
  return out;
}

LocalGeneralizedMorphism compose_local(const LocalGeneralizedMorphism& theta,
                                       const LocalGeneralizedMorphism& eta,
                                       Birefinement* birOut) {
  if (theta.data.structure != eta.source)
    throw DomainError("middle groupoid mismatch between the local morphisms");
  if (eta.data.cover.base != eta.source.objects)
    throw DomainError("second factor's cover does not live over its source");

  Birefinement bir =
      birefine(theta.data.cover, theta.data.momenta, eta.data.cover);
  LocalGeneralizedMorphism thetaFine = refine_local_genmor(theta, bir);

  LocalGeneralizedMorphism out;
  out.source = theta.source;
  out.data.cover = bir.fine;
  out.data.structure = eta.data.structure;
  out.data.momenta.resize(bir.fine.indices.size());
  for (int k = 0; k < bir.fine.indices.size(); ++k) {
    int i = bir.toI[k];
    for (int m : bir.fine.sets[k])
      out.data.momenta[k][m] =
          eta.data.momentumAt(i, thetaFine.data.momentumAt(k, m));
  }
  for (int k1 = 0; k1 < bir.fine.indices.size(); ++k1)
    for (int k2 = 0; k2 < bir.fine.indices.size(); ++k2) {
      auto ov = bir.fine.overlap(k1, k2);
      if (ov.empty()) continue;
      auto& entries = out.data.cocycle[{k1, k2}];
      for (int m : ov)
        entries[m] = eta.thetaAt(bir.toI[k1], bir.toI[k2],
                                 thetaFine.data.cocycleAt(k1, k2, m));
    }
  for (const auto& [ba, entry] : thetaFine.theta) {
    std::map<int, int> composed;
    for (const auto& [arr, img] : entry)
      composed[arr] = eta.thetaAt(bir.toI[ba.first], bir.toI[ba.second], img);
    out.theta[ba] = std::move(composed);
  }

  Report check = validate_local_genmor(out);
  if (!check.ok())
    throw DomainError("local composition is invalid: " + check.str());
  if (birOut != nullptr) *birOut = bir;
  return out;
}

Report check_local_global_compat(const GeneralizedMorphism& p,
                                 const GeneralizedMorphism& q,
                                 const Cover& coverU,
                                 const SectionFamily& sectionsP,
                                 const Cover& coverV,
                                 const SectionFamily& sectionsQ) {
  Report r;
  LocalGeneralizedMorphism thetaP = localize(p, coverU, sectionsP);
  LocalGeneralizedMorphism thetaQ = localize(q, coverV, sectionsQ);

  Birefinement bir;
  LocalGeneralizedMorphism localComposite = compose_local(thetaP, thetaQ, &bir);

  ComposedGenMor global = compose_global(p, q);

  // Canonical sections of the composite over the birefined cover.
  SectionFamily sections(bir.fine.indices.size());
  for (int k = 0; k < bir.fine.indices.size(); ++k) {
    int a = bir.toAlpha[k];
    int i = bir.toI[k];
    for (int m : bir.fine.sets[k]) {
      int pElem = sectionsP[a].at(m);
      int qElem = sectionsQ[i].at(p.bundle.momentum[pElem]);
      sections[k][m] = global.classOf(pElem, qElem);
    }
  }
  LocalGeneralizedMorphism fromGlobal =
      localize(global.gm, bir.fine, sections);

  if (fromGlobal.data.momenta != localComposite.data.momenta)
    r.fail("composite momenta differ from the locally composed ones");
  if (fromGlobal.data.cocycle != localComposite.data.cocycle)
    r.fail("composite transition maps differ from the locally composed ones");
  if (fromGlobal.theta != localComposite.theta)
    r.fail("composite component maps differ from the locally composed ones");
  return r;
}

}  // namespace cechg
