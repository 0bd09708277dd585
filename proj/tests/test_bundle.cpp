#include <doctest.h>

#include <algorithm>
#include <functional>

#include "cechg/cech.hpp"
#include "cechg/fixtures.hpp"

using namespace cechg;

namespace {

// Independent oracle: enumerate every fiber- and momentum-preserving
// equivariant map by brute force over raw assignments.
std::vector<std::vector<int>> all_bundle_morphisms(const PrincipalBundle& p,
                                                   const PrincipalBundle& q) {
  std::vector<std::vector<int>> found;
  std::vector<int> assign(p.total.size(), -1);
  std::function<void(int)> extend = [&](int next) {
    if (next == p.total.size()) {
      BundleMorphism m{p, q, assign};
      if (validate_bundle_morphism(m).ok()) found.push_back(assign);
      return;
    }
    for (int cand = 0; cand < q.total.size(); ++cand) {
      if (q.proj[cand] != p.proj[next] || q.momentum[cand] != p.momentum[next])
        continue;
      assign[next] = cand;
      extend(next + 1);
      assign[next] = -1;
    }
  };
  extend(0);
  return found;
}

}  // namespace

TEST_CASE("unit bundles are principal") {
  for (int n : {1, 2, 3}) {
    FiniteGroupoid g = group_as_groupoid(cyclic_group(n));
    PrincipalBundle b = unit_bundle(g);
    CHECK(b.total.size() == n);
    CHECK(b.base.size() == 1);
    CHECK(validate_bundle(b).ok());
  }
  PrincipalBundle b = unit_bundle(pair_groupoid({"x", "y"}));
  CHECK(b.total.size() == 4);
  CHECK(b.base.size() == 2);
  CHECK(validate_bundle(b).ok());
}

TEST_CASE("validator finds forced freeness violations") {
  PrincipalBundle b = unit_bundle(group_as_groupoid(cyclic_group(2)));
  // Make sigma fix everything: a fixed point of a non-unit arrow.
  b.action[{0, 1}] = 0;
  b.action[{1, 1}] = 1;
  Report r = validate_bundle(b);
  REQUIRE_FALSE(r.ok());
  bool freeness = false;
  for (const auto& issue : r.issues)
    if (issue.find("freeness fails") != std::string::npos) freeness = true;
  CHECK(freeness);
}

TEST_CASE("division maps") {
  SUBCASE("unit bundle of Z2") {
    PrincipalBundle b = unit_bundle(group_as_groupoid(cyclic_group(2)));
    CHECK(division(b, 1, 1) == 0);  // phi(sigma, sigma) = e
  }
  SUBCASE("unit bundle of a pair groupoid divides as g1^{-1} g2") {
    FiniteGroupoid p3 = pair_groupoid({"x", "y", "z"});
    PrincipalBundle b = unit_bundle(p3);
    int xy = p3.arrows.at("(x,y)");
    int xz = p3.arrows.at("(x,z)");
    CHECK(division(b, xy, xz) == p3.arrows.at("(y,z)"));
    // The general law on the whole unit bundle.
    DivisionTable t = division_table(b);
    for (const auto& [pq, arr] : t.table)
      CHECK(arr == p3.composeOpt(p3.inv[pq.first], pq.second));
  }
  SUBCASE("trivial bundle divides on the group leg") {
    FiniteGroupoid z3 = group_as_groupoid(cyclic_group(3));
    IndexedSet base = named_set("m", 2);
    PrincipalBundle b = trivial_bundle(z3, base, {0, 0});
    // Elements are pairs (m, g) in construction order: m-major, g ascending.
    for (int m = 0; m < 2; ++m)
      for (int g1 = 0; g1 < 3; ++g1)
        for (int g2 = 0; g2 < 3; ++g2)
          CHECK(division(b, m * 3 + g1, m * 3 + g2) ==
                z3.composeOpt(z3.inv[g1], g2));
  }
  SUBCASE("different fibers are a domain error") {
    PrincipalBundle b = trivial_group_bundle(cyclic_group(2), 2);
    CHECK_THROWS_AS(division(b, 0, 2), DomainError);
  }
}

TEST_CASE("division laws hold exhaustively on glued random bundles") {
  Rng rng(555);
  for (int trial = 0; trial < 15; ++trial) {
    FiniteGroupoid g = random_groupoid(rng, 10);
    IndexedSet base = named_set("m", 1 + rng.below(4));
    Cover cover = random_cover(rng, base, 3);
    LocalTrivData d = random_trivdata(rng, cover, g);
    REQUIRE(validate_trivdata(d).ok());
    GluedBundle gb = glue_bundle(d);
    REQUIRE(validate_bundle(gb.bundle).ok());
    const auto& b = gb.bundle;
    DivisionTable t = division_table(b);
    for (const auto& [pq, arr] : t.table) {
      auto [p, q] = pq;
      // q = p·phi(p, q); endpoints; diagonal; antisymmetry.
      CHECK(b.action.at({p, arr}) == q);
      CHECK(g.tgt[arr] == b.momentum[p]);
      CHECK(g.src[arr] == b.momentum[q]);
      if (p == q) CHECK(arr == g.unit[b.momentum[p]]);
      CHECK(t.at(q, p) == g.inv[arr]);
    }
    CHECK(check_division_equivariance(b).ok());
  }
}

TEST_CASE("pullback bundles") {
  FiniteGroupoid p3 = pair_groupoid({"x", "y", "z"});
  PrincipalBundle u = unit_bundle(p3);
  SUBCASE("pullback along the identity is isomorphic to the original") {
    std::vector<int> id{0, 1};
    PrincipalBundle b = pullback_bundle(trivial_group_bundle(cyclic_group(2), 2),
                                        named_set("m", 2), id);
    auto iso =
        find_isomorphism(b, trivial_group_bundle(cyclic_group(2), 2));
    CHECK(iso.has_value());
  }
  SUBCASE("constant map collapses to one fiber copied over the base") {
    IndexedSet m = named_set("w", 3);
    PrincipalBundle b = pullback_bundle(u, m, {0, 0, 0});
    CHECK(b.total.size() == 3 * 3);  // |M| x |fiber(x)|
    CHECK(validate_bundle(b).ok());
  }
  SUBCASE("trivial bundle over a point is the arrows arriving there") {
    IndexedSet pt = named_set("p", 1);
    PrincipalBundle b = trivial_bundle(p3, pt, {p3.objects.at("y")});
    CHECK(b.total.size() == 3);
    for (int e = 0; e < b.total.size(); ++e) CHECK(b.proj[e] == 0);
  }
  SUBCASE("division of a pullback happens on second components") {
    IndexedSet m = named_set("w", 2);
    PrincipalBundle b = pullback_bundle(u, m, {0, 0});
    // Elements (w, arrow-with-tgt-x) in construction order.
    std::vector<std::pair<int, int>> parts;
    for (int w = 0; w < 2; ++w)
      for (int a = 0; a < p3.nArrows(); ++a)
        if (p3.tgt[a] == 0) parts.emplace_back(w, a);
    for (size_t i = 0; i < parts.size(); ++i)
      for (size_t j = 0; j < parts.size(); ++j) {
        if (parts[i].first != parts[j].first) continue;
        CHECK(division(b, static_cast<int>(i), static_cast<int>(j)) ==
              division(u, parts[i].second, parts[j].second));
      }
  }
}

TEST_CASE("trivial bundles with a group recover the product") {
  FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
  IndexedSet base = named_set("m", 3);
  PrincipalBundle b = trivial_bundle(z2, base, {0, 0, 0});
  CHECK(b.total.size() == 6);
  CHECK(validate_bundle(b).ok());
}

TEST_CASE("momentum components obstruct triviality") {
  // Two trivial bundles over a point into different components.
  FiniteGroupoid two = disjoint_union(group_as_groupoid(cyclic_group(2)),
                                      group_as_groupoid(cyclic_group(2)));
  IndexedSet pt = named_set("p", 1);
  PrincipalBundle left = trivial_bundle(two, pt, {0});
  PrincipalBundle right = trivial_bundle(two, pt, {1});
  CHECK_FALSE(find_isomorphism(left, right).has_value());
  // The exhaustive oracle agrees.
  CHECK(all_bundle_morphisms(left, right).empty());
}

TEST_CASE("fibred products carry the product structure groupoid") {
  PrincipalBundle u = unit_bundle(group_as_groupoid(cyclic_group(2)));
  PrincipalBundle prod = fibred_product(u, u);
  CHECK(prod.total.size() == 4);
  CHECK(prod.structure.nArrows() == 4);
  CHECK(validate_bundle(prod).ok());

  // The diagonal of the fibred product divides through the original table.
  DivisionTable t = division_table(u);
  DivisionTable tp = division_table(prod);
  // Elements of prod are pairs in construction order.
  std::vector<std::pair<int, int>> parts;
  for (int a = 0; a < u.total.size(); ++a)
    for (int b = 0; b < u.total.size(); ++b)
      if (u.proj[a] == u.proj[b]) parts.emplace_back(a, b);
  for (size_t i = 0; i < parts.size(); ++i)
    for (size_t j = 0; j < parts.size(); ++j) {
      if (prod.proj[i] != prod.proj[j]) continue;
      int pairArrow = tp.at(static_cast<int>(i), static_cast<int>(j));
      int first = pairArrow / u.structure.nArrows();
      int second = pairArrow % u.structure.nArrows();
      CHECK(first == t.at(parts[i].first, parts[j].first));
      CHECK(second == t.at(parts[i].second, parts[j].second));
    }
}

TEST_CASE("corrupted actions fail the equivariance check") {
  PrincipalBundle b = trivial_group_bundle(cyclic_group(2), 2);
  REQUIRE(check_division_equivariance(b).ok());
  std::swap(b.action.at({0, 1}), b.action.at({2, 1}));
  bool caught = !validate_bundle(b).ok() || !check_division_equivariance(b).ok();
  CHECK(caught);
}

TEST_CASE("isomorphism search matches the brute-force oracle") {
  SUBCASE("identity is found") {
    PrincipalBundle b = trivial_group_bundle(cyclic_group(2), 2);
    auto iso = find_isomorphism(b, b);
    REQUIRE(iso.has_value());
    CHECK(validate_bundle_morphism(*iso).ok());
  }
  SUBCASE("glued Z2 data with transitions e and sigma are isomorphic") {
    GluedBundle p0 = glue_bundle(z2_overlap_data(0));
    GluedBundle p1 = glue_bundle(z2_overlap_data(1));
    CHECK(p1.bundle.total.size() == 6);
    auto iso = find_isomorphism(p0.bundle, p1.bundle);
    REQUIRE(iso.has_value());
    CHECK(validate_bundle_morphism(*iso).ok());
    CHECK_FALSE(all_bundle_morphisms(p0.bundle, p1.bundle).empty());
  }
  SUBCASE("search verdicts agree with the oracle on random pairs") {
    Rng rng(808);
    for (int trial = 0; trial < 10; ++trial) {
      FiniteGroupoid g = random_groupoid(rng, 8);
      IndexedSet base = named_set("m", 1 + rng.below(3));
      Cover c1 = random_cover(rng, base, 2);
      Cover c2 = random_cover(rng, base, 2);
      PrincipalBundle b1 = glue_bundle(random_trivdata(rng, c1, g)).bundle;
      PrincipalBundle b2 = glue_bundle(random_trivdata(rng, c2, g)).bundle;
      auto fast = find_isomorphism(b1, b2);
      auto oracle = all_bundle_morphisms(b1, b2);
      CHECK(fast.has_value() == !oracle.empty());
      if (fast) CHECK(validate_bundle_morphism(*fast).ok());
    }
  }
}

TEST_CASE("every bundle morphism is bijective") {
  Rng rng(9090);
  for (int trial = 0; trial < 10; ++trial) {
    FiniteGroupoid g = random_groupoid(rng, 8);
    IndexedSet base = named_set("m", 1 + rng.below(3));
    Cover c = random_cover(rng, base, 2);
    LocalTrivData d = random_trivdata(rng, c, g);
    PrincipalBundle b = glue_bundle(d).bundle;
    auto maps = all_bundle_morphisms(b, b);
    for (const auto& map : maps) {
      std::vector<char> hit(b.total.size(), 0);
      for (int v : map) hit[v] = 1;
      CHECK(std::count(hit.begin(), hit.end(), 1) == b.total.size());
    }
  }
}

TEST_CASE("empty bundle over the empty base is allowed") {
  PrincipalBundle b;
  b.structure = group_as_groupoid(cyclic_group(2));
  CHECK(validate_bundle(b).ok());

  PrincipalBundle bad = b;
  bad.total.add("p");
  bad.proj.push_back(0);
  bad.momentum.push_back(0);
  CHECK_FALSE(validate_bundle(bad).ok());
}
