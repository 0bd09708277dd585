#include "cechg/cech.hpp"

#include <algorithm>

namespace cechg {

namespace {

std::string point3(const Id& a, const Id& b, const Id& c, const Id& m) {
  return "(" + a + "," + b + "," + c + "," + m + ")";
}

}  // namespace

bool Cover::memberOf(int idx, int m) const {
  const auto& s = sets[idx];
  return std::binary_search(s.begin(), s.end(), m);
}

std::vector<int> Cover::overlap(int a, int b) const {
  std::vector<int> out;
  std::set_intersection(sets[a].begin(), sets[a].end(), sets[b].begin(),
                        sets[b].end(), std::back_inserter(out));
  return out;
}

std::vector<int> Cover::indicesContaining(int m) const {
  std::vector<int> out;
  for (int a = 0; a < indices.size(); ++a)
    if (memberOf(a, m)) out.push_back(a);
  return out;
}

int Cover::leastIndexContaining(int m) const {
  for (int a = 0; a < indices.size(); ++a)
    if (memberOf(a, m)) return a;
  throw DomainError("cover does not contain base point " + base.name(m));
}

Report Cover::validate() const {
  Report r;
  if (static_cast<int>(sets.size()) != indices.size()) {
    r.fail("one set per index required");
    return r;
  }
  for (int a = 0; a < indices.size(); ++a) {
    const auto& s = sets[a];
    if (!std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end())
      r.fail("set " + indices.name(a) + " is not a sorted, duplicate-free list");
    for (int m : s)
      if (m < 0 || m >= base.size())
        r.fail("set " + indices.name(a) + " mentions an unknown base point");
  }
  if (!r.ok()) return r;
  std::vector<char> hit(base.size(), 0);
  for (const auto& s : sets)
    for (int m : s) hit[m] = 1;
  for (int m = 0; m < base.size(); ++m)
    if (!hit[m]) r.fail("cover misses base point " + base.name(m));
  return r;
}

Cover singleton_cover(const IndexedSet& base, const Id& name) {
  Cover c;
  c.base = base;
  c.indices.add(name);
  std::vector<int> all(base.size());
  for (int m = 0; m < base.size(); ++m) all[m] = m;
  c.sets.push_back(all);
  return c;
}

Report Refinement::validate() const {
  Report r;
  if (coarse.base != fine.base) r.fail("covers live over different bases");
  Report rc = coarse.validate();
  Report rf = fine.validate();
  r.merge(rc, "coarse: ");
  r.merge(rf, "fine: ");
  if (static_cast<int>(map.size()) != fine.indices.size())
    r.fail("refinement map not total");
  if (!r.ok()) return r;
  for (int j = 0; j < fine.indices.size(); ++j) {
    if (map[j] < 0 || map[j] >= coarse.indices.size()) {
      r.fail("refinement map hits an unknown coarse index at " +
             fine.indices.name(j));
      continue;
    }
    for (int m : fine.sets[j])
      if (!coarse.memberOf(map[j], m))
        r.fail("fine set " + fine.indices.name(j) + " escapes coarse set " +
               coarse.indices.name(map[j]));
  }
  return r;
}

int LocalTrivData::momentumAt(int idx, int m) const {
  const auto& mm = momenta.at(static_cast<size_t>(idx));
  auto it = mm.find(m);
  if (it == mm.end())
    throw DomainError("momentum undefined at (" + cover.indices.name(idx) +
                      ", " + cover.base.name(m) + ")");
  return it->second;
}

int LocalTrivData::cocycleAt(int a, int b, int m) const {
  auto it = cocycle.find({a, b});
  if (it == cocycle.end())
    throw DomainError("no cocycle entry for (" + cover.indices.name(a) + ", " +
                      cover.indices.name(b) + ")");
  auto jt = it->second.find(m);
  if (jt == it->second.end())
    throw DomainError("cocycle undefined at point " + cover.base.name(m));
  return jt->second;
}

std::vector<int> LocalTrivData::orderKey() const {
  std::vector<int> key;
  for (const auto& mm : momenta)
    for (const auto& [m, x] : mm) {
      key.push_back(m);
      key.push_back(x);
    }
  for (const auto& [ab, entries] : cocycle) {
    key.push_back(ab.first);
    key.push_back(ab.second);
    for (const auto& [m, g] : entries) {
      key.push_back(m);
      key.push_back(g);
    }
  }
  return key;
}

Report validate_trivdata(const LocalTrivData& d) {
  Report r = d.cover.validate();
  if (!r.ok()) return r;
  const auto& g = d.structure;
  const auto& cov = d.cover;
  const int nIdx = cov.indices.size();

  if (static_cast<int>(d.momenta.size()) != nIdx) {
    r.fail("one momentum map per cover index required");
    return r;
  }
  for (int a = 0; a < nIdx; ++a) {
    for (int m : cov.sets[a])
      if (!d.momenta[a].count(m))
        r.fail("momentum undefined at (" + cov.indices.name(a) + ", " +
               cov.base.name(m) + ")");
    for (const auto& [m, x] : d.momenta[a]) {
      if (!cov.memberOf(a, m))
        r.fail("momentum defined outside " + cov.indices.name(a) + " at " +
               cov.base.name(m));
      if (x < 0 || x >= g.nObjects())
        r.fail("unknown object in momentum at (" + cov.indices.name(a) + ", " +
               cov.base.name(m) + ")");
    }
  }
  if (!r.ok()) return r;

  for (int a = 0; a < nIdx; ++a)
    for (int b = 0; b < nIdx; ++b) {
      auto ov = cov.overlap(a, b);
      bool have = d.cocycle.count({a, b}) > 0;
      if (!ov.empty() && !have)
        r.fail("missing cocycle entry for nonempty overlap (" +
               cov.indices.name(a) + ", " + cov.indices.name(b) + ")");
      if (ov.empty() && have)
        r.fail("cocycle entry for empty overlap (" + cov.indices.name(a) +
               ", " + cov.indices.name(b) + ")");
      if (ov.empty() || !have) continue;
      const auto& entries = d.cocycle.at({a, b});
      for (int m : ov)
        if (!entries.count(m))
          r.fail("cocycle undefined at (" + cov.indices.name(a) + ", " +
                 cov.indices.name(b) + ", " + cov.base.name(m) + ")");
      for (const auto& [m, arr] : entries) {
        if (!std::binary_search(ov.begin(), ov.end(), m))
          r.fail("cocycle defined outside the overlap (" +
                 cov.indices.name(a) + ", " + cov.indices.name(b) + ") at " +
                 cov.base.name(m));
        if (arr < 0 || arr >= g.nArrows())
          r.fail("unknown arrow in cocycle at (" + cov.indices.name(a) + ", " +
                 cov.indices.name(b) + ", " + cov.base.name(m) + ")");
      }
    }
  if (!r.ok()) return r;

  for (int a = 0; a < nIdx; ++a)
    for (int b = 0; b < nIdx; ++b) {
      if (!d.cocycle.count({a, b})) continue;
      for (const auto& [m, arr] : d.cocycle.at({a, b})) {
        if (g.tgt[arr] != d.momentumAt(a, m))
          r.fail("target of cocycle mismatches momentum at (" +
                 cov.indices.name(a) + ", " + cov.indices.name(b) + ", " +
                 cov.base.name(m) + ")");
        if (g.src[arr] != d.momentumAt(b, m))
          r.fail("source of cocycle mismatches momentum at (" +
                 cov.indices.name(a) + ", " + cov.indices.name(b) + ", " +
                 cov.base.name(m) + ")");
      }
    }
  for (int a = 0; a < nIdx; ++a) {
    if (!d.cocycle.count({a, a})) continue;
    for (const auto& [m, arr] : d.cocycle.at({a, a}))
      if (arr != g.unit[d.momentumAt(a, m)])
        r.fail("diagonal cocycle is not the unit at (" + cov.indices.name(a) +
               ", " + cov.base.name(m) + ")");
  }
  if (!r.ok()) return r;

  // Nonabelian cocycle identity on triple overlaps.
  for (int a = 0; a < nIdx; ++a)
    for (int b = 0; b < nIdx; ++b)
      for (int c = 0; c < nIdx; ++c) {
        if (!d.cocycle.count({a, b}) || !d.cocycle.count({b, c}) ||
            !d.cocycle.count({a, c}))
          continue;
        for (int m : cov.overlap(a, b)) {
          if (!cov.memberOf(c, m)) continue;
          int lhs = d.cocycleAt(a, c, m);
          int rhs =
              g.composeOpt(d.cocycleAt(a, b, m), d.cocycleAt(b, c, m));
          if (lhs != rhs)
            r.fail("cocycle identity fails at " +
                   point3(cov.indices.name(a), cov.indices.name(b),
                          cov.indices.name(c), cov.base.name(m)));
        }
      }
  return r;
}

int GluedBundle::classOf(int alpha, int m, int g) const {
  int least = data.cover.leastIndexContaining(m);
  int arrow = g;
  if (least != alpha)
    arrow = data.structure.compose(data.cocycleAt(least, alpha, m), g);
  auto it = canon.find({least, m, arrow});
  if (it == canon.end())
    throw DomainError("triple is not an element of the glued bundle");
  return it->second;
}

GluedBundle glue_bundle(const LocalTrivData& d) {
  Report check = validate_trivdata(d);
  if (!check.ok())
    throw DomainError("cannot glue invalid data: " + check.str());
  GluedBundle gb;
  gb.data = d;
  const auto& g = d.structure;
  PrincipalBundle& b = gb.bundle;
  b.base = d.cover.base;
  b.structure = g;
  for (int m = 0; m < d.cover.base.size(); ++m) {
    int alpha = d.cover.leastIndexContaining(m);
    int x = d.momentumAt(alpha, m);
    for (int arr = 0; arr < g.nArrows(); ++arr) {
      if (g.tgt[arr] != x) continue;
      int idx = b.total.add("[" + d.cover.indices.name(alpha) + "," +
                            d.cover.base.name(m) + "," + g.arrows.name(arr) +
                            "]");
      gb.reps.emplace_back(alpha, m, arr);
      gb.canon[{alpha, m, arr}] = idx;
      b.proj.push_back(m);
      b.momentum.push_back(g.src[arr]);
    }
  }
  for (int p = 0; p < b.total.size(); ++p) {
    auto [alpha, m, arr] = gb.reps[p];
    for (int h = 0; h < g.nArrows(); ++h) {
      if (!g.composable(arr, h)) continue;
      b.action[{p, h}] = gb.canon.at({alpha, m, g.composeOpt(arr, h)});
    }
  }
  return gb;
}

SectionFamily canonical_glued_sections(const GluedBundle& gb) {
  const auto& d = gb.data;
  SectionFamily out(d.cover.indices.size());
  for (int a = 0; a < d.cover.indices.size(); ++a)
    for (int m : d.cover.sets[a]) {
      int u = d.structure.unit[d.momentumAt(a, m)];
      out[a][m] = gb.classOf(a, m, u);
    }
  return out;
}

SectionFamily canonical_sections(const PrincipalBundle& p, const Cover& cover) {
  SectionFamily out(cover.indices.size());
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int m : cover.sets[a]) {
      auto fib = p.fiber(m);
      if (fib.empty())
        throw DomainError("no section possible: empty fiber over " +
                          cover.base.name(m));
      out[a][m] = fib.front();
    }
  return out;
}

Report validate_sections(const PrincipalBundle& p, const Cover& cover,
                         const SectionFamily& sections) {
  Report r;
  if (cover.base != p.base) r.fail("cover base differs from bundle base");
  if (sections.size() != static_cast<size_t>(cover.indices.size()))
    r.fail("one section per cover index required");
  if (!r.ok()) return r;
  for (int a = 0; a < cover.indices.size(); ++a) {
    for (int m : cover.sets[a]) {
      auto it = sections[a].find(m);
      if (it == sections[a].end()) {
        r.fail("section " + cover.indices.name(a) + " undefined at " +
               cover.base.name(m));
        continue;
      }
      if (it->second < 0 || it->second >= p.total.size()) {
        r.fail("section " + cover.indices.name(a) + " hits an unknown element");
        continue;
      }
      if (p.proj[it->second] != m)
        r.fail("not a section at (" + cover.indices.name(a) + ", " +
               cover.base.name(m) + "): projection moves the point");
    }
    for (const auto& [m, q] : sections[a])
      if (!cover.memberOf(a, m))
        r.fail("section " + cover.indices.name(a) + " defined outside its set");
  }
  return r;
}

LocalTrivData extract_trivdata(const PrincipalBundle& p, const Cover& cover,
                               const SectionFamily& sections) {
  Report check = validate_sections(p, cover, sections);
  if (!check.ok())
    throw DomainError("bad section family: " + check.str());
  LocalTrivData d;
  d.cover = cover;
  d.structure = p.structure;
  d.momenta.resize(cover.indices.size());
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int m : cover.sets[a]) d.momenta[a][m] = p.momentum[sections[a].at(m)];
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int b = 0; b < cover.indices.size(); ++b) {
      auto ov = cover.overlap(a, b);
      if (ov.empty()) continue;
      auto& entry = d.cocycle[{a, b}];
      for (int m : ov)
        entry[m] = division(p, sections[a].at(m), sections[b].at(m));
    }
  return d;
}

Report validate_local_morphism(const LocalMorphismData& m) {
  Report r;
  if (m.from.cover != m.to.cover) r.fail("data live over different covers");
  if (m.from.structure != m.to.structure)
    r.fail("data take values in different groupoids");
  Report r1 = validate_trivdata(m.from);
  Report r2 = validate_trivdata(m.to);
  r.merge(r1, "from: ");
  r.merge(r2, "to: ");
  const auto& cov = m.from.cover;
  if (m.sigma.size() != static_cast<size_t>(cov.indices.size()))
    r.fail("one cochain per cover index required");
  if (!r.ok()) return r;

  const auto& g = m.from.structure;
  for (int a = 0; a < cov.indices.size(); ++a) {
    for (int p : cov.sets[a]) {
      auto it = m.sigma[a].find(p);
      if (it == m.sigma[a].end()) {
        r.fail("cochain undefined at (" + cov.indices.name(a) + ", " +
               cov.base.name(p) + ")");
        continue;
      }
      int arr = it->second;
      if (arr < 0 || arr >= g.nArrows()) {
        r.fail("unknown arrow in cochain at (" + cov.indices.name(a) + ", " +
               cov.base.name(p) + ")");
        continue;
      }
      if (g.src[arr] != m.from.momentumAt(a, p))
        r.fail("cochain source mismatches first momenta at (" +
               cov.indices.name(a) + ", " + cov.base.name(p) + ")");
      if (g.tgt[arr] != m.to.momentumAt(a, p))
        r.fail("cochain target mismatches second momenta at (" +
               cov.indices.name(a) + ", " + cov.base.name(p) + ")");
    }
  }
  if (!r.ok()) return r;

  // Sigma_b(x) = Phi2_ba(x) · Sigma_a(x) · Phi1_ab(x) on overlaps.
  for (int a = 0; a < cov.indices.size(); ++a)
    for (int b = 0; b < cov.indices.size(); ++b) {
      auto ov = cov.overlap(a, b);
      for (int x : ov) {
        int lhs = m.sigma[b].at(x);
        int rhs = g.compose(
            g.compose(m.to.cocycleAt(b, a, x), m.sigma[a].at(x)),
            m.from.cocycleAt(a, b, x));
        if (lhs != rhs)
          r.fail("coboundary relation fails at (" + cov.indices.name(a) +
                 ", " + cov.indices.name(b) + ", " + cov.base.name(x) + ")");
      }
    }
  return r;
}

LocalTrivData apply_coboundary(const SigmaFamily& sigma,
                               const LocalTrivData& d) {
  const auto& g = d.structure;
  const auto& cov = d.cover;
  if (sigma.size() != static_cast<size_t>(cov.indices.size()))
    throw DomainError("one cochain per cover index required");
  LocalTrivData out;
  out.cover = cov;
  out.structure = g;
  out.momenta.resize(cov.indices.size());
  for (int a = 0; a < cov.indices.size(); ++a)
    for (int m : cov.sets[a]) {
      auto it = sigma[a].find(m);
      if (it == sigma[a].end())
        throw DomainError("cochain undefined at (" + cov.indices.name(a) +
                          ", " + cov.base.name(m) + ")");
      int arr = it->second;
      if (g.src[arr] != d.momentumAt(a, m))
        throw DomainError("cochain source mismatches momenta at (" +
                          cov.indices.name(a) + ", " + cov.base.name(m) + ")");
      out.momenta[a][m] = g.tgt[arr];
    }
  for (const auto& [ab, entries] : d.cocycle) {
    auto& outEntries = out.cocycle[ab];
    for (const auto& [m, arr] : entries) {
      int lhs = g.compose(sigma[ab.first].at(m), arr);
      outEntries[m] = g.compose(lhs, g.inv[sigma[ab.second].at(m)]);
    }
  }
  return out;
}

SigmaFamily unit_sigma(const LocalTrivData& d) {
  SigmaFamily out(d.cover.indices.size());
  for (int a = 0; a < d.cover.indices.size(); ++a)
    for (int m : d.cover.sets[a])
      out[a][m] = d.structure.unit[d.momentumAt(a, m)];
  return out;
}

SigmaFamily compose_sigma(const LocalTrivData& base, const SigmaFamily& first,
                          const SigmaFamily& second) {
  SigmaFamily out(base.cover.indices.size());
  for (int a = 0; a < base.cover.indices.size(); ++a)
    for (int m : base.cover.sets[a])
      out[a][m] = base.structure.compose(second[a].at(m), first[a].at(m));
  return out;
}

std::optional<LocalMorphismData> are_cohomologous(const LocalTrivData& d1,
                                                  const LocalTrivData& d2) {
  if (d1.cover != d2.cover || d1.structure != d2.structure)
    throw DomainError("cohomology comparison needs matching cover and values");
  const auto& g = d1.structure;
  const auto& cov = d1.cover;

  SigmaFamily sigma(cov.indices.size());
  for (int m = 0; m < cov.base.size(); ++m) {
    int least = cov.leastIndexContaining(m);
    auto hom = g.hom(d1.momentumAt(least, m), d2.momentumAt(least, m));
    if (hom.empty()) return std::nullopt;  // component obstruction
    int pick = hom.front();
    sigma[least][m] = pick;
    // The overlap relations force every other index pointwise; the cocycle
    // identities make the forced values mutually consistent.
    for (int a : cov.indicesContaining(m)) {
      if (a == least) continue;
      sigma[a][m] = g.compose(g.compose(d2.cocycleAt(a, least, m), pick),
                              d1.cocycleAt(least, a, m));
    }
  }
  LocalMorphismData out{d1, d2, sigma};
  Report check = validate_local_morphism(out);
  if (!check.ok()) return std::nullopt;
  return out;
}

BundleMorphism build_bundle_morphism(const LocalMorphismData& m) {
  Report check = validate_local_morphism(m);
  if (!check.ok())
    throw DomainError("invalid local morphism: " + check.str());
  GluedBundle src = glue_bundle(m.from);
  GluedBundle dst = glue_bundle(m.to);
  BundleMorphism out;
  out.source = src.bundle;
  out.target = dst.bundle;
  const auto& g = m.from.structure;
  out.map.resize(src.bundle.total.size());
  for (int p = 0; p < src.bundle.total.size(); ++p) {
    auto [alpha, x, arr] = src.reps[p];
    out.map[p] = dst.classOf(alpha, x, g.compose(m.sigma[alpha].at(x), arr));
  }
  return out;
}

LocalTrivData refine_data(const LocalTrivData& d, const Refinement& r) {
  Report check = r.validate();
  if (!check.ok()) throw DomainError("invalid refinement: " + check.str());
  if (r.coarse != d.cover)
    throw DomainError("refinement does not start at the data's cover");
  LocalTrivData out;
  out.cover = r.fine;
  out.structure = d.structure;
  out.momenta.resize(r.fine.indices.size());
  for (int j = 0; j < r.fine.indices.size(); ++j)
    for (int m : r.fine.sets[j])
      out.momenta[j][m] = d.momentumAt(r.map[j], m);
  for (int j0 = 0; j0 < r.fine.indices.size(); ++j0)
    for (int j1 = 0; j1 < r.fine.indices.size(); ++j1) {
      auto ov = r.fine.overlap(j0, j1);
      if (ov.empty()) continue;
      auto& entries = out.cocycle[{j0, j1}];
      for (int m : ov) entries[m] = d.cocycleAt(r.map[j0], r.map[j1], m);
    }
  return out;
}

LocalMorphismData refinement_independence_witness(const LocalTrivData& d,
                                                  const Refinement& rf,
                                                  const Refinement& rg) {
  if (rf.fine != rg.fine || rf.coarse != rg.coarse)
    throw DomainError("the two refinement maps must share their covers");
  LocalTrivData fStar = refine_data(d, rf);
  LocalTrivData gStar = refine_data(d, rg);
  SigmaFamily sigma(rf.fine.indices.size());
  for (int j = 0; j < rf.fine.indices.size(); ++j)
    for (int m : rf.fine.sets[j])
      sigma[j][m] = d.cocycleAt(rf.map[j], rg.map[j], m);
  return LocalMorphismData{gStar, fStar, sigma};
}

namespace {

// Pointwise choice behind a valid datum: an object x at the least covering
// index plus one arrow out of x per other covering index.
struct PointChoice {
  int point;
  std::vector<int> members;  // covering indices, least first
  // Each option: arrows g_a indexed like members, with g_least = unit(x).
  std::vector<std::vector<int>> options;
};

}  // namespace

H1Result h1_at_cover(const Cover& cover, const FiniteGroupoid& g,
                     Budget& budget) {
  Report cv = cover.validate();
  if (!cv.ok()) throw DomainError("invalid cover: " + cv.str());

  std::vector<PointChoice> perPoint;
  long long totalCount = 1;
  for (int m = 0; m < cover.base.size(); ++m) {
    PointChoice pc;
    pc.point = m;
    pc.members = cover.indicesContaining(m);
    const int extra = static_cast<int>(pc.members.size()) - 1;
    for (int x = 0; x < g.nObjects(); ++x) {
      std::vector<int> from = g.arrowsFrom(x);
      // Cartesian power of the out-arrows of x, one factor per extra index.
      std::vector<int> pick(extra, 0);
      while (true) {
        std::vector<int> option;
        option.push_back(g.unit[x]);
        for (int k = 0; k < extra; ++k) option.push_back(from[pick[k]]);
        pc.options.push_back(std::move(option));
        int k = extra - 1;
        while (k >= 0 && pick[k] + 1 == static_cast<int>(from.size())) {
          pick[k] = 0;
          --k;
        }
        if (k < 0) break;
        ++pick[k];
      }
    }
    if (pc.options.empty())
      throw DomainError("structure groupoid has no objects");
    if (totalCount > (budget.limit() / static_cast<long long>(pc.options.size())) + 1)
      totalCount = budget.limit() + 1;
    else
      totalCount *= static_cast<long long>(pc.options.size());
    perPoint.push_back(std::move(pc));
  }
  if (totalCount > budget.limit())
    throw BudgetError("cocycle enumeration needs " + std::to_string(totalCount) +
                      " instances, limit " + std::to_string(budget.limit()));

  H1Result result;
  std::vector<int> choice(perPoint.size(), 0);
  while (true) {
    budget.charge();
    LocalTrivData d;
    d.cover = cover;
    d.structure = g;
    d.momenta.resize(cover.indices.size());
    for (size_t k = 0; k < perPoint.size(); ++k) {
      const auto& pc = perPoint[k];
      const auto& option = pc.options[choice[k]];
      for (size_t pos = 0; pos < pc.members.size(); ++pos) {
        int a = pc.members[pos];
        d.momenta[a][pc.point] = g.tgt[option[pos]];
      }
      for (size_t pa = 0; pa < pc.members.size(); ++pa)
        for (size_t pb = 0; pb < pc.members.size(); ++pb) {
          int a = pc.members[pa];
          int b = pc.members[pb];
          d.cocycle[{a, b}][pc.point] =
              g.compose(option[pa], g.inv[option[pb]]);
        }
    }
    result.cocycleCount += 1;

    bool placed = false;
    for (auto& cls : result.classes) {
      if (are_cohomologous(cls.front(), d)) {
        cls.push_back(d);
        placed = true;
        break;
      }
    }
    if (!placed) result.classes.push_back({d});

    size_t k = perPoint.size();
    while (k > 0 &&
           choice[k - 1] + 1 == static_cast<int>(perPoint[k - 1].options.size())) {
      choice[k - 1] = 0;
      --k;
    }
    if (k == 0) break;
    ++choice[k - 1];
  }

  for (auto& cls : result.classes) {
    std::sort(cls.begin(), cls.end(),
              [](const LocalTrivData& a, const LocalTrivData& b) {
                return a.orderKey() < b.orderKey();
              });
    result.representatives.push_back(cls.front());
  }
  return result;
}

Report classify_group_data(const LocalTrivData& d) {
  Report r = validate_trivdata(d);
  if (!r.ok()) return r;
  if (!d.structure.isGroup()) {
    r.fail("structure groupoid is not a group");
    return r;
  }
  // Momenta land in the unique object; the cocycle identity is the classical
  // group cocycle condition, which validate_trivdata already enforced.
  for (int a = 0; a < d.cover.indices.size(); ++a)
    for (const auto& [m, x] : d.momenta[a])
      if (x != 0)
        r.fail("momentum escapes the unique object at (" +
               d.cover.indices.name(a) + ", " + d.cover.base.name(m) + ")");
  return r;
}

ActionClassification classify_action_data(const LocalTrivData& d,
                                          const ActionGroupoid& ag) {
  ActionClassification out;
  out.report = validate_trivdata(d);
  if (!out.report.ok()) return out;
  if (d.structure != ag.groupoid) {
    out.report.fail("data do not take values in the given action groupoid");
    return out;
  }
  const auto& cov = d.cover;
  FiniteGroupoid groupG = group_as_groupoid(ag.action.group);

  out.groupCocycle.cover = cov;
  out.groupCocycle.structure = groupG;
  out.groupCocycle.momenta.resize(cov.indices.size());
  out.section.resize(cov.indices.size());
  for (int a = 0; a < cov.indices.size(); ++a)
    for (int m : cov.sets[a]) {
      out.groupCocycle.momenta[a][m] = 0;
      out.section[a][m] = d.momentumAt(a, m);
    }
  for (const auto& [ab, entries] : d.cocycle) {
    auto& ge = out.groupCocycle.cocycle[ab];
    for (const auto& [m, arr] : entries) {
      auto [gElem, xElem] = ag.arrowParts[arr];
      ge[m] = gElem;  // group groupoid arrows are the elements, same order
      // X component must equal the source momentum.
      if (xElem != d.momentumAt(ab.second, m))
        out.report.fail("X component of the cocycle differs from the source "
                        "momentum at (" + cov.indices.name(ab.first) + ", " +
                        cov.indices.name(ab.second) + ", " + cov.base.name(m) +
                        ")");
      // Momenta are intertwined by the group component.
      if (ag.action.apply(gElem, d.momentumAt(ab.second, m)) !=
          d.momentumAt(ab.first, m))
        out.report.fail("group component does not carry the source momentum "
                        "to the target momentum at (" +
                        cov.indices.name(ab.first) + ", " +
                        cov.indices.name(ab.second) + ", " + cov.base.name(m) +
                        ")");
    }
  }
  if (!out.report.ok()) return out;

  // Classical cocycle condition for the group component on triple overlaps.
  for (int a = 0; a < cov.indices.size(); ++a)
    for (int b = 0; b < cov.indices.size(); ++b)
      for (int c = 0; c < cov.indices.size(); ++c) {
        if (!out.groupCocycle.cocycle.count({a, b}) ||
            !out.groupCocycle.cocycle.count({b, c}) ||
            !out.groupCocycle.cocycle.count({a, c}))
          continue;
        for (int m : cov.overlap(a, b)) {
          if (!cov.memberOf(c, m)) continue;
          int lhs = out.groupCocycle.cocycleAt(a, c, m);
          int rhs = ag.action.group.times(out.groupCocycle.cocycleAt(a, b, m),
                                          out.groupCocycle.cocycleAt(b, c, m));
          if (lhs != rhs)
            out.report.fail("group cocycle condition fails at " +
                            point3(cov.indices.name(a), cov.indices.name(b),
                                   cov.indices.name(c), cov.base.name(m)));
        }
      }
  Report gc = validate_trivdata(out.groupCocycle);
  out.report.merge(gc, "group cocycle: ");
  return out;
}

int AssociatedBundle::classOf(int p, int x) const {
  auto it = classIndex.find({p, x});
  if (it == classIndex.end())
    throw DomainError("pair is not an element of the associated bundle");
  return it->second;
}

AssociatedBundle associated_bundle(const PrincipalBundle& p,
                                   const FiniteGroupAction& x) {
  if (!p.structure.isGroup())
    throw DomainError("associated bundle needs a group structure groupoid");
  if (x.group.elements != p.structure.arrows)
    throw DomainError("the acting group must match the structure group");
  AssociatedBundle out;
  out.base = p.base;
  const int n = p.total.size();
  const int m = x.set.size();
  std::vector<int> canonical(static_cast<size_t>(n) * m, -1);
  GroupTable group = x.group;
  if (group.identity < 0) group.identity = group_identity(group);
  for (int pi = 0; pi < n; ++pi)
    for (int xi = 0; xi < m; ++xi) {
      if (canonical[static_cast<size_t>(pi) * m + xi] >= 0) continue;
      std::vector<std::pair<int, int>> orbit;
      std::pair<int, int> best{n, m};
      for (int g = 0; g < group.n(); ++g) {
        // (p, x)·g = (p·g, g^{-1}·x)
        std::pair<int, int> moved{p.act(pi, g),
                                  x.apply(group.inverseOf(g), xi)};
        orbit.push_back(moved);
        best = std::min(best, moved);
      }
      int idx = static_cast<int>(out.reps.size());
      out.reps.push_back(best);
      out.total.add("[" + p.total.name(best.first) + "," +
                    x.set.name(best.second) + "]");
      out.proj.push_back(p.proj[best.first]);
      for (auto& mv : orbit)
        canonical[static_cast<size_t>(mv.first) * m + mv.second] = idx;
    }
  for (int pi = 0; pi < n; ++pi)
    for (int xi = 0; xi < m; ++xi)
      out.classIndex[{pi, xi}] = canonical[static_cast<size_t>(pi) * m + xi];
  return out;
}

std::optional<std::vector<int>> associated_section(
    const AssociatedBundle& ab, const PrincipalBundle& p, const Cover& cover,
    const SectionFamily& sections, const std::vector<std::map<int, int>>& eps,
    const FiniteGroupAction& x) {
  (void)p;
  (void)x;
  std::vector<int> section(cover.base.size(), -1);
  for (int m = 0; m < cover.base.size(); ++m) {
    int value = -1;
    for (int a : cover.indicesContaining(m)) {
      int cls = ab.classOf(sections[a].at(m), eps[a].at(m));
      if (value < 0) value = cls;
      if (cls != value) return std::nullopt;  // local values do not glue
    }
    section[m] = value;
    if (ab.proj[value] != m) return std::nullopt;
  }
  return section;
}

GaugeTransformationFamily gauge_tau_identity(const PrincipalBundle& p,
                                             const Cover& cover) {
  GaugeTransformationFamily tau;
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int b = 0; b < cover.indices.size(); ++b) {
      auto ov = cover.overlap(a, b);
      if (ov.empty()) continue;
      auto& entry = tau.maps[{b, a}];
      for (int m : ov)
        for (int q : p.fiber(m)) entry[q] = q;
    }
  return tau;
}

GaugeTransformationFamily gauge_tau_from_transitions(
    const PrincipalBundle& p, const Cover& cover,
    const SectionFamily& sections) {
  Report check = validate_sections(p, cover, sections);
  if (!check.ok()) throw DomainError("bad section family: " + check.str());
  GaugeTransformationFamily tau;
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int b = 0; b < cover.indices.size(); ++b) {
      auto ov = cover.overlap(a, b);
      if (ov.empty()) continue;
      auto& entry = tau.maps[{b, a}];
      for (int m : ov)
        for (int q : p.fiber(m)) {
          // tau_ba = phi_b^{-1} ∘ phi_a: q = sigma_a(m)·g goes to sigma_b(m)·g.
          int g = division(p, sections[a].at(m), q);
          entry[q] = p.act(sections[b].at(m), g);
        }
    }
  return tau;
}

LocalTrivData gauge_cocycles(const PrincipalBundle& p, const Cover& cover,
                             const SectionFamily& sections,
                             const GaugeTransformationFamily& tau,
                             const GaugeGroupoid& gauge) {
  Report check = validate_sections(p, cover, sections);
  if (!check.ok()) throw DomainError("bad section family: " + check.str());
  if (cover.base != p.base)
    throw DomainError("cover must live over the bundle base");

  // Precondition: each tau_ba is an equivariant fiber map over the overlap,
  // the family satisfies the cocycle rule, and the diagonal is the identity.
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int b = 0; b < cover.indices.size(); ++b) {
      auto ov = cover.overlap(a, b);
      if (ov.empty()) continue;
      auto it = tau.maps.find({b, a});
      if (it == tau.maps.end())
        throw DomainError("gauge family misses overlap (" +
                          cover.indices.name(b) + ", " +
                          cover.indices.name(a) + ")");
      for (int m : ov)
        for (int q : p.fiber(m)) {
          auto jt = it->second.find(q);
          if (jt == it->second.end())
            throw DomainError("gauge map undefined at " + p.total.name(q));
          if (p.proj[jt->second] != m)
            throw DomainError("gauge map does not preserve fibers at " +
                              p.total.name(q));
          if (a == b && jt->second != q)
            throw DomainError("diagonal gauge map is not the identity at " +
                              p.total.name(q));
          for (int g = 0; g < p.structure.nArrows(); ++g) {
            if (!p.actDefined(q, g)) continue;
            if (it->second.at(p.act(q, g)) != p.act(jt->second, g))
              throw DomainError("gauge map is not equivariant at " +
                                p.total.name(q));
          }
        }
      for (int c = 0; c < cover.indices.size(); ++c) {
        for (int m : ov) {
          if (!cover.memberOf(c, m)) continue;
          for (int q : p.fiber(m)) {
            int viaB = tau.maps.at({c, b}).at(tau.maps.at({b, a}).at(q));
            if (viaB != tau.maps.at({c, a}).at(q))
              throw DomainError("gauge family violates the cocycle rule at " +
                                p.total.name(q));
          }
        }
      }
    }

  LocalTrivData d;
  d.cover = cover;
  d.structure = gauge.groupoid;
  d.momenta.resize(cover.indices.size());
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int m : cover.sets[a]) d.momenta[a][m] = m;  // inclusion momenta
  for (int a = 0; a < cover.indices.size(); ++a)
    for (int b = 0; b < cover.indices.size(); ++b) {
      auto ov = cover.overlap(a, b);
      if (ov.empty()) continue;
      auto& entries = d.cocycle[{a, b}];
      for (int m : ov) {
        int s = sections[a].at(m);
        entries[m] = gauge.classOf(s, tau.maps.at({b, a}).at(s));
      }
    }
  return d;
}

}  // namespace cechg
