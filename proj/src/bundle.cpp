#include "cechg/bundle.hpp"

#include <algorithm>

namespace cechg {

int PrincipalBundle::act(int p, int g) const {
  auto it = action.find({p, g});
  if (it == action.end()) {
    throw DomainError("action undefined on (" + total.name(p) + ", " +
                      structure.arrows.name(g) + ")");
  }
  return it->second;
}

std::vector<int> PrincipalBundle::fiber(int m) const {
  std::vector<int> out;
  for (int p = 0; p < total.size(); ++p)
    if (proj[p] == m) out.push_back(p);
  return out;
}

Report validate_bundle(const PrincipalBundle& b) {
  Report r;
  const auto& g = b.structure;
  if (static_cast<int>(b.proj.size()) != b.total.size())
    r.fail("projection not total");
  if (static_cast<int>(b.momentum.size()) != b.total.size())
    r.fail("momentum not total");
  if (!r.ok()) return r;
  for (int p = 0; p < b.total.size(); ++p) {
    if (b.proj[p] < 0 || b.proj[p] >= b.base.size())
      r.fail("unknown base point in projection at " + b.total.name(p));
    if (b.momentum[p] < 0 || b.momentum[p] >= g.nObjects())
      r.fail("unknown object in momentum at " + b.total.name(p));
  }
  if (!r.ok()) return r;

  if (b.base.size() == 0 && b.total.size() > 0)
    r.fail("nonempty total space over the empty base");
  std::vector<char> hit(b.base.size(), 0);
  for (int p = 0; p < b.total.size(); ++p) hit[b.proj[p]] = 1;
  for (int m = 0; m < b.base.size(); ++m)
    if (!hit[m]) r.fail("projection misses base point " + b.base.name(m));

  // Action defined exactly when momentum(p) = tgt(g).
  for (int p = 0; p < b.total.size(); ++p)
    for (int a = 0; a < g.nArrows(); ++a) {
      bool want = b.momentum[p] == g.tgt[a];
      bool have = b.actDefined(p, a);
      if (want && !have)
        r.fail("action undefined on admissible (" + b.total.name(p) + ", " +
               g.arrows.name(a) + ")");
      if (!want && have)
        r.fail("action defined outside its domain on (" + b.total.name(p) +
               ", " + g.arrows.name(a) + ")");
      if (want && have) {
        int q = b.action.at({p, a});
        if (q < 0 || q >= b.total.size()) {
          r.fail("unknown total element in action at (" + b.total.name(p) +
                 ", " + g.arrows.name(a) + ")");
          continue;
        }
        if (b.momentum[q] != g.src[a])
          r.fail("momentum law fails on (" + b.total.name(p) + ", " +
                 g.arrows.name(a) + ")");
        if (b.proj[q] != b.proj[p])
          r.fail("projection is not invariant on (" + b.total.name(p) + ", " +
                 g.arrows.name(a) + ")");
      }
    }
  if (!r.ok()) return r;

  for (int p = 0; p < b.total.size(); ++p) {
    int u = g.unit[b.momentum[p]];
    if (b.act(p, u) != p)
      r.fail("unit does not act trivially on " + b.total.name(p));
  }
  for (int p = 0; p < b.total.size(); ++p)
    for (int a1 = 0; a1 < g.nArrows(); ++a1) {
      if (!b.actDefined(p, a1)) continue;
      int q = b.action.at({p, a1});
      for (int a2 = 0; a2 < g.nArrows(); ++a2) {
        int c = g.composeOpt(a1, a2);
        if (c < 0) continue;
        if (b.act(p, c) != b.act(q, a2))
          r.fail("action associativity fails on (" + b.total.name(p) + ", " +
                 g.arrows.name(a1) + ", " + g.arrows.name(a2) + ")");
      }
    }

  // Freeness and fiberwise transitivity: (p, g) -> (p, p·g) bijects the
  // admissible pairs onto the fiberwise pairs.
  for (int p = 0; p < b.total.size(); ++p) {
    std::map<int, int> reached;  // q -> witness arrow
    for (int a = 0; a < g.nArrows(); ++a) {
      if (!b.actDefined(p, a)) continue;
      int q = b.action.at({p, a});
      auto [it, inserted] = reached.emplace(q, a);
      if (!inserted)
        r.fail("freeness fails at " + b.total.name(p) + ": arrows " +
               g.arrows.name(it->second) + " and " + g.arrows.name(a) +
               " reach " + b.total.name(q));
    }
    for (int q = 0; q < b.total.size(); ++q) {
      if (b.proj[q] != b.proj[p]) continue;
      if (!reached.count(q))
        r.fail("transitivity fails on fiber pair (" + b.total.name(p) + ", " +
               b.total.name(q) + ")");
    }
  }
  return r;
}

int division(const PrincipalBundle& b, int pIdx, int qIdx) {
  if (b.proj[pIdx] != b.proj[qIdx])
    throw DomainError("division of points in different fibers: " +
                      b.total.name(pIdx) + ", " + b.total.name(qIdx));
  int found = -1;
  for (int a = 0; a < b.structure.nArrows(); ++a) {
    if (!b.actDefined(pIdx, a)) continue;
    if (b.action.at({pIdx, a}) == qIdx) {
      if (found >= 0)
        throw DomainError("bundle invalid: several arrows divide (" +
                          b.total.name(pIdx) + ", " + b.total.name(qIdx) + ")");
      found = a;
    }
  }
  if (found < 0)
    throw DomainError("bundle invalid: no arrow divides (" +
                      b.total.name(pIdx) + ", " + b.total.name(qIdx) + ")");
  return found;
}

int DivisionTable::at(int p, int q) const {
  auto it = table.find({p, q});
  if (it == table.end())
    throw DomainError("division table has no entry for the given pair");
  return it->second;
}

DivisionTable division_table(const PrincipalBundle& b) {
  DivisionTable t;
  for (int p = 0; p < b.total.size(); ++p)
    for (int q = 0; q < b.total.size(); ++q)
      if (b.proj[p] == b.proj[q]) t.table[{p, q}] = division(b, p, q);
  return t;
}

PrincipalBundle unit_bundle(const FiniteGroupoid& g) {
  PrincipalBundle b;
  b.total = g.arrows;
  b.base = g.objects;
  b.proj = g.tgt;
  b.momentum = g.src;
  b.structure = g;
  for (int p = 0; p < g.nArrows(); ++p)
    for (int a = 0; a < g.nArrows(); ++a)
      if (g.composable(p, a)) b.action[{p, a}] = g.composeOpt(p, a);
  return b;
}

PrincipalBundle pullback_bundle(const PrincipalBundle& p, const IndexedSet& m,
                                const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != m.size())
    throw DomainError("pullback map not total");
  PrincipalBundle out;
  out.base = m;
  out.structure = p.structure;
  std::vector<std::pair<int, int>> elems;  // (mIdx, pIdx)
  for (int x = 0; x < m.size(); ++x)
    for (int q = 0; q < p.total.size(); ++q)
      if (p.proj[q] == f[x]) {
        out.total.add("(" + m.name(x) + "," + p.total.name(q) + ")");
        elems.emplace_back(x, q);
      }
  std::map<std::pair<int, int>, int> index;
  for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
  for (size_t i = 0; i < elems.size(); ++i) {
    out.proj.push_back(elems[i].first);
    out.momentum.push_back(p.momentum[elems[i].second]);
  }
  for (size_t i = 0; i < elems.size(); ++i)
    for (int a = 0; a < p.structure.nArrows(); ++a)
      if (p.actDefined(elems[i].second, a)) {
        int moved = p.action.at({elems[i].second, a});
        out.action[{static_cast<int>(i), a}] = index.at({elems[i].first, moved});
      }
  return out;
}

PrincipalBundle trivial_bundle(const FiniteGroupoid& g, const IndexedSet& m,
                               const std::vector<int>& alpha) {
  return pullback_bundle(unit_bundle(g), m, alpha);
}

PrincipalBundle fibred_product(const PrincipalBundle& p,
                               const PrincipalBundle& q) {
  if (p.base != q.base)
    throw DomainError("fibred product needs bundles over the same base");
  PrincipalBundle out;
  out.base = p.base;
  out.structure = product_groupoid(p.structure, q.structure);
  std::vector<std::pair<int, int>> elems;
  for (int a = 0; a < p.total.size(); ++a)
    for (int b = 0; b < q.total.size(); ++b)
      if (p.proj[a] == q.proj[b]) {
        out.total.add("(" + p.total.name(a) + "," + q.total.name(b) + ")");
        elems.emplace_back(a, b);
      }
  std::map<std::pair<int, int>, int> index;
  for (size_t i = 0; i < elems.size(); ++i) index[elems[i]] = static_cast<int>(i);
  const int nHO = q.structure.nObjects();
  const int nHA = q.structure.nArrows();
  for (auto [a, b] : elems) {
    out.proj.push_back(p.proj[a]);
    out.momentum.push_back(p.momentum[a] * nHO + q.momentum[b]);
  }
  for (size_t i = 0; i < elems.size(); ++i) {
    auto [a, b] = elems[i];
    for (int g1 = 0; g1 < p.structure.nArrows(); ++g1) {
      if (!p.actDefined(a, g1)) continue;
      int a2 = p.action.at({a, g1});
      for (int g2 = 0; g2 < q.structure.nArrows(); ++g2) {
        if (!q.actDefined(b, g2)) continue;
        int b2 = q.action.at({b, g2});
        out.action[{static_cast<int>(i), g1 * nHA + g2}] = index.at({a2, b2});
      }
    }
  }
  return out;
}

Report check_division_equivariance(const PrincipalBundle& b) {
  Report r;
  const auto& g = b.structure;
  DivisionTable t = division_table(b);
  for (const auto& [pq, phi] : t.table) {
    auto [p, q] = pq;
    for (int g1 = 0; g1 < g.nArrows(); ++g1) {
      if (!b.actDefined(p, g1)) continue;
      int p2 = b.action.at({p, g1});
      for (int g2 = 0; g2 < g.nArrows(); ++g2) {
        if (!b.actDefined(q, g2)) continue;
        int q2 = b.action.at({q, g2});
        int lhs = t.at(p2, q2);
        int rhs = g.compose(g.compose(g.inv[g1], phi), g2);
        if (lhs != rhs)
          r.fail("division equivariance fails on (" + b.total.name(p) + ", " +
                 b.total.name(q) + ", " + g.arrows.name(g1) + ", " +
                 g.arrows.name(g2) + ")");
      }
    }
  }
  return r;
}

Report validate_bundle_morphism(const BundleMorphism& m) {
  Report r;
  const auto& s = m.source;
  const auto& t = m.target;
  if (s.base != t.base) r.fail("bundles live over different bases");
  if (s.structure != t.structure) r.fail("structure groupoids differ");
  if (static_cast<int>(m.map.size()) != s.total.size())
    r.fail("morphism not total");
  if (!r.ok()) return r;
  for (int p = 0; p < s.total.size(); ++p) {
    int q = m.map[p];
    if (q < 0 || q >= t.total.size()) {
      r.fail("unknown target element at " + s.total.name(p));
      return r;
    }
    if (t.proj[q] != s.proj[p])
      r.fail("fiber preservation fails at " + s.total.name(p));
    if (t.momentum[q] != s.momentum[p])
      r.fail("momentum preservation fails at " + s.total.name(p));
  }
  for (int p = 0; p < s.total.size(); ++p)
    for (int a = 0; a < s.structure.nArrows(); ++a) {
      if (!s.actDefined(p, a)) continue;
      int lhs = m.map[s.action.at({p, a})];
      if (!t.actDefined(m.map[p], a)) {
        r.fail("equivariance undefined at (" + s.total.name(p) + ", " +
               s.structure.arrows.name(a) + ")");
        continue;
      }
      if (lhs != t.action.at({m.map[p], a}))
        r.fail("equivariance fails at (" + s.total.name(p) + ", " +
               s.structure.arrows.name(a) + ")");
    }
  // Morphisms of principal bundles are automatically invertible; check it.
  std::vector<char> hit(t.total.size(), 0);
  for (int p = 0; p < s.total.size(); ++p) {
    if (hit[m.map[p]]) r.fail("morphism is not injective at " + s.total.name(p));
    hit[m.map[p]] = 1;
  }
  if (s.total.size() != t.total.size()) r.fail("total spaces differ in size");
  return r;
}

namespace {

struct SearchState {
  std::vector<int> assign;            // source total -> target total, -1 open
  std::vector<int> preimage;          // target total -> source total, -1 open
  std::vector<int> trail;             // assigned source elements, in order
};

// Returns false on contradiction.  Propagates forced images through the right
// action and, when given, the left action.
bool assignAndPropagate(const PrincipalBundle& p, const PrincipalBundle& q,
                        const LeftActionTables* left, SearchState& st,
                        int sElem, int tElem) {
  std::vector<std::pair<int, int>> todo{{sElem, tElem}};
  while (!todo.empty()) {
    auto [a, b] = todo.back();
    todo.pop_back();
    if (st.assign[a] >= 0) {
      if (st.assign[a] != b) return false;
      continue;
    }
    if (st.preimage[b] >= 0) return false;
    if (q.proj[b] != p.proj[a] || q.momentum[b] != p.momentum[a]) return false;
    st.assign[a] = b;
    st.preimage[b] = a;
    st.trail.push_back(a);
    for (int g = 0; g < p.structure.nArrows(); ++g) {
      if (!p.actDefined(a, g)) continue;
      if (!q.actDefined(b, g)) return false;
      todo.emplace_back(p.action.at({a, g}), q.action.at({b, g}));
    }
    if (left != nullptr) {
      for (int g = 0; g < left->actor->nArrows(); ++g) {
        auto itP = left->source->find({g, a});
        if (itP == left->source->end()) continue;
        auto itQ = left->target->find({g, b});
        if (itQ == left->target->end()) return false;
        todo.emplace_back(itP->second, itQ->second);
      }
    }
  }
  return true;
}

void undoTo(SearchState& st, size_t mark) {
  while (st.trail.size() > mark) {
    int a = st.trail.back();
    st.trail.pop_back();
    st.preimage[st.assign[a]] = -1;
    st.assign[a] = -1;
  }
}

bool search(const PrincipalBundle& p, const PrincipalBundle& q,
            const LeftActionTables* left, SearchState& st) {
  int open = -1;
  for (int a = 0; a < p.total.size(); ++a)
    if (st.assign[a] < 0) {
      open = a;
      break;
    }
  if (open < 0) return true;
  for (int b = 0; b < q.total.size(); ++b) {
    if (st.preimage[b] >= 0) continue;
    if (q.proj[b] != p.proj[open] || q.momentum[b] != p.momentum[open])
      continue;
    size_t mark = st.trail.size();
    if (assignAndPropagate(p, q, left, st, open, b) &&
        search(p, q, left, st))
      return true;
    undoTo(st, mark);
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> find_equivariant_bijection(
    const PrincipalBundle& p, const PrincipalBundle& q,
    const LeftActionTables* left) {
  if (p.base != q.base || p.structure != q.structure) return std::nullopt;
  if (p.total.size() != q.total.size()) return std::nullopt;
  SearchState st;
  st.assign.assign(p.total.size(), -1);
  st.preimage.assign(q.total.size(), -1);
  if (!search(p, q, left, st)) return std::nullopt;
  return st.assign;
}

std::optional<BundleMorphism> find_isomorphism(const PrincipalBundle& p,
                                               const PrincipalBundle& q) {
  auto assign = find_equivariant_bijection(p, q);
  if (!assign) return std::nullopt;
  BundleMorphism m;
  m.source = p;
  m.target = q;
  m.map = *assign;
  return m;
}

int GaugeGroupoid::classOf(int p1, int p2) const {
  auto it = classIndex.find({p1, p2});
  if (it == classIndex.end())
    throw DomainError("pair is not an arrow of the gauge groupoid");
  return it->second;
}

GaugeGroupoid gauge_groupoid(const PrincipalBundle& b) {
  if (!b.structure.isGroup())
    throw DomainError("gauge groupoid needs a group structure groupoid");
  Report check = validate_bundle(b);
  if (!check.ok()) throw DomainError("gauge groupoid of an invalid bundle: " +
                                     check.str());

  const int n = b.total.size();
  const int nG = b.structure.nArrows();
  GaugeGroupoid out;
  std::vector<int> canonical(static_cast<size_t>(n) * n, -1);

  // Orbit of (p1, p2) under the diagonal right action; representative is the
  // pair whose first leg is least.
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2) {
      if (canonical[static_cast<size_t>(p1) * n + p2] >= 0) continue;
      std::vector<std::pair<int, int>> orbit;
      std::pair<int, int> best{n, n};
      for (int g = 0; g < nG; ++g) {
        std::pair<int, int> moved{b.act(p1, g), b.act(p2, g)};
        orbit.push_back(moved);
        best = std::min(best, moved);
      }
      int idx = static_cast<int>(out.arrowReps.size());
      out.arrowReps.push_back(best);
      for (auto& mv : orbit)
        canonical[static_cast<size_t>(mv.first) * n + mv.second] = idx;
    }
  for (int p1 = 0; p1 < n; ++p1)
    for (int p2 = 0; p2 < n; ++p2)
      out.classIndex[{p1, p2}] = canonical[static_cast<size_t>(p1) * n + p2];

  FiniteGroupoid g;
  g.objects = b.base;
  for (const auto& rep : out.arrowReps)
    g.arrows.add("[" + b.total.name(rep.first) + "," +
                 b.total.name(rep.second) + "]");
  const int nArr = g.arrows.size();
  g.src.resize(nArr);
  g.tgt.resize(nArr);
  g.inv.resize(nArr);
  g.unit.resize(g.objects.size());
  for (int a = 0; a < nArr; ++a) {
    auto [p1, p2] = out.arrowReps[a];
    g.src[a] = b.proj[p2];
    g.tgt[a] = b.proj[p1];
    g.inv[a] = out.classOf(p2, p1);
  }
  for (int m = 0; m < b.base.size(); ++m) {
    int p = b.fiber(m).at(0);
    g.unit[m] = out.classOf(p, p);
  }
  g.comp.assign(static_cast<size_t>(nArr) * nArr, -1);
  DivisionTable div = division_table(b);
  for (int a1 = 0; a1 < nArr; ++a1)
    for (int a2 = 0; a2 < nArr; ++a2) {
      auto [p1, p2] = out.arrowReps[a1];
      auto [q1, q2] = out.arrowReps[a2];
      if (b.proj[p2] != b.proj[q1]) continue;
      // [p1,p2][q1,q2] = [p1·phi(p2,q1), q2]
      int moved = b.act(p1, div.at(p2, q1));
      g.comp[static_cast<size_t>(a1) * nArr + a2] = out.classOf(moved, q2);
    }
  out.groupoid = std::move(g);
  return out;
}

}  // namespace cechg
