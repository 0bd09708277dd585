#include <doctest.h>

#include "cechg/bundle.hpp"
#include "cechg/fixtures.hpp"
#include "cechg/groupoid.hpp"

using namespace cechg;

TEST_CASE("cyclic and permutation groups validate") {
  CHECK(validate_group(cyclic_group(2)).ok());
  CHECK(validate_group(cyclic_group(1)).ok());
  CHECK(validate_group(symmetric_group_s3()).ok());

  FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
  CHECK(z2.nObjects() == 1);
  CHECK(z2.nArrows() == 2);
  CHECK(validate_groupoid(z2).ok());

  FiniteGroupoid s3 = group_as_groupoid(symmetric_group_s3());
  CHECK(s3.nArrows() == 6);
  CHECK(validate_groupoid(s3).ok());

  FiniteGroupoid z1 = group_as_groupoid(cyclic_group(1));
  CHECK(z1.nArrows() == 1);
  CHECK(validate_groupoid(z1).ok());
}

TEST_CASE("validator reports a forced inverse violation") {
  FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
  z2.inv[1] = 0;  // inv(sigma) = e
  Report r = validate_groupoid(z2);
  REQUIRE_FALSE(r.ok());
  bool mentions = false;
  for (const auto& issue : r.issues)
    if (issue.find("inverse axiom fails at g") != std::string::npos)
      mentions = true;
  CHECK(mentions);
}

TEST_CASE("pair groupoids") {
  CHECK(pair_groupoid({"x"}).nArrows() == 1);

  FiniteGroupoid p2 = pair_groupoid({"x", "y"});
  CHECK(p2.nArrows() == 4);
  CHECK(validate_groupoid(p2).ok());

  FiniteGroupoid p3 = pair_groupoid({"x", "y", "z"});
  CHECK(p3.nArrows() == 9);
  CHECK(validate_groupoid(p3).ok());

  // (x,y)(y,z) = (x,z), src (x,y) = y, tgt = x.
  int xy = p3.arrows.at("(x,y)");
  int yz = p3.arrows.at("(y,z)");
  CHECK(p3.src[xy] == p3.objects.at("y"));
  CHECK(p3.tgt[xy] == p3.objects.at("x"));
  CHECK(p3.composeOpt(xy, yz) == p3.arrows.at("(x,z)"));

  CHECK_THROWS_AS(pair_groupoid({}), DomainError);
}

TEST_CASE("action groupoid of the swap action") {
  ActionGroupoid swap = z2_swap_action();
  CHECK(swap.groupoid.nArrows() == 4);
  CHECK(validate_groupoid(swap.groupoid).ok());
  // t(sigma, a) = b.
  int arr = swap.arrowOf(1, swap.action.set.at("a"));
  CHECK(swap.groupoid.tgt[arr] == swap.action.set.at("b"));

  SUBCASE("trivial action on a point") {
    FiniteGroupAction a;
    a.group = cyclic_group(2);
    a.set.add("a");
    a.act = {0, 0};
    ActionGroupoid ag = action_groupoid(a);
    CHECK(ag.groupoid.nArrows() == 2);
    for (int arr = 0; arr < 2; ++arr) {
      CHECK(ag.groupoid.src[arr] == 0);
      CHECK(ag.groupoid.tgt[arr] == 0);
    }
  }

  SUBCASE("rotation of three points by Z3") {
    FiniteGroupAction a;
    a.group = cyclic_group(3);
    a.set = named_set("x", 3);
    a.act.resize(9);
    for (int g = 0; g < 3; ++g)
      for (int x = 0; x < 3; ++x) a.act[g * 3 + x] = (x + g) % 3;
    ActionGroupoid ag = action_groupoid(a);
    CHECK(ag.groupoid.nArrows() == 9);
    CHECK(validate_groupoid(ag.groupoid).ok());
  }

  SUBCASE("broken action is rejected with a witness") {
    FiniteGroupAction a;
    a.group = cyclic_group(2);
    a.set.add("a");
    a.set.add("b");
    a.act = {0, 1, 0, 0};  // sigma is not invertible on points
    CHECK_THROWS_AS(action_groupoid(a), DomainError);
  }
}

TEST_CASE("gauge groupoid sizes") {
  SUBCASE("trivial Z2-bundle over two points has 8 arrows over 2 objects") {
    PrincipalBundle p = trivial_group_bundle(cyclic_group(2), 2);
    GaugeGroupoid gauge = gauge_groupoid(p);
    CHECK(gauge.groupoid.nObjects() == 2);
    CHECK(gauge.groupoid.nArrows() == 8);
    CHECK(validate_groupoid(gauge.groupoid).ok());
  }
  SUBCASE("over a point the gauge groupoid is the group") {
    PrincipalBundle p = trivial_group_bundle(cyclic_group(3), 1);
    GaugeGroupoid gauge = gauge_groupoid(p);
    CHECK(gauge.groupoid.nObjects() == 1);
    CHECK(gauge.groupoid.nArrows() == 3);
    auto iso = find_groupoid_isomorphism(gauge.groupoid,
                                         group_as_groupoid(cyclic_group(3)));
    CHECK(iso.has_value());
  }
  SUBCASE("trivial Z2-bundle over three points has 18 arrows") {
    PrincipalBundle p = trivial_group_bundle(cyclic_group(2), 3);
    GaugeGroupoid gauge = gauge_groupoid(p);
    CHECK(gauge.groupoid.nArrows() == 18);
    CHECK(validate_groupoid(gauge.groupoid).ok());
  }
}

TEST_CASE("gauge groupoid of a trivial bundle is pair times group") {
  for (int m = 1; m <= 3; ++m)
    for (int n : {2, 3, 6}) {
      PrincipalBundle p = trivial_group_bundle(cyclic_group(n), m);
      GaugeGroupoid gauge = gauge_groupoid(p);
      FiniteGroupoid expected = product_groupoid(
          pair_groupoid(named_set("m", m).names()),
          group_as_groupoid(cyclic_group(n)));
      auto iso = find_groupoid_isomorphism(gauge.groupoid, expected);
      CHECK(iso.has_value());
    }
}

TEST_CASE("product groupoid sizes") {
  FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
  CHECK(product_groupoid(z2, z2).nArrows() == 4);
  CHECK(validate_groupoid(product_groupoid(z2, z2)).ok());

  FiniteGroupoid p2 = pair_groupoid({"x", "y"});
  CHECK(product_groupoid(p2, z2).nArrows() == 8);
  CHECK(validate_groupoid(product_groupoid(p2, z2)).ok());

  FiniteGroupoid z1 = group_as_groupoid(cyclic_group(1));
  auto iso = find_groupoid_isomorphism(product_groupoid(z2, z1), z2);
  CHECK(iso.has_value());
}

TEST_CASE("generalized conjugation") {
  SUBCASE("abelian conjugation is trivial") {
    FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
    GroupoidAction conj = generalized_conjugation(z2);
    CHECK(validate_action(conj).ok());
    // Psi(sigma, sigma; e) = sigma·e·sigma^{-1} = e.
    int sigma = 1, e = 0;
    int pairArrow = sigma * 2 + sigma;
    CHECK(conj.apply(pairArrow, e) == e);
  }
  SUBCASE("pair groupoid conjugation composes endpoints") {
    FiniteGroupoid p4 = pair_groupoid({"a", "b", "c", "d"});
    GroupoidAction conj = generalized_conjugation(p4);
    int ab = p4.arrows.at("(a,b)");
    int cd = p4.arrows.at("(c,d)");
    int bd = p4.arrows.at("(b,d)");
    int ac = p4.arrows.at("(a,c)");
    CHECK(conj.apply(ab * p4.nArrows() + cd, bd) == ac);
  }
  SUBCASE("unit pairs act trivially") {
    FiniteGroupoid p2 = pair_groupoid({"x", "y"});
    GroupoidAction conj = generalized_conjugation(p2);
    for (int g = 0; g < p2.nArrows(); ++g) {
      int u1 = p2.unit[p2.tgt[g]];
      int u2 = p2.unit[p2.src[g]];
      CHECK(conj.apply(u1 * p2.nArrows() + u2, g) == g);
    }
  }
  SUBCASE("action axioms hold on random groupoids") {
    Rng rng(20240513);
    for (int trial = 0; trial < 25; ++trial) {
      FiniteGroupoid g = random_groupoid(rng, 12);
      REQUIRE(validate_groupoid(g).ok());
      CHECK(validate_action(generalized_conjugation(g)).ok());
      CHECK(validate_action(generalized_conjugation_right(g)).ok());
    }
  }
}

TEST_CASE("local components and restriction") {
  FiniteGroupoid p2 = pair_groupoid({"x", "y"});
  SUBCASE("single-object slices") {
    LocalComponent c = local_component(p2, {p2.objects.at("x")},
                                       {p2.objects.at("y")});
    REQUIRE(c.arrowSubset.size() == 1);
    CHECK(c.arrowSubset[0] == p2.arrows.at("(y,x)"));
  }
  SUBCASE("full component keeps every arrow") {
    LocalComponent c = local_component(p2, {0, 1}, {0, 1});
    CHECK(c.arrowSubset.size() == 4);
  }
  SUBCASE("empty slice") {
    LocalComponent c = local_component(p2, {}, {0, 1});
    CHECK(c.arrowSubset.empty());
  }
  SUBCASE("restrictions validate for every object subset") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
      FiniteGroupoid g = random_groupoid(rng, 12);
      for (int mask = 1; mask < (1 << std::min(4, g.nObjects())); ++mask) {
        std::vector<int> subset;
        for (int x = 0; x < std::min(4, g.nObjects()); ++x)
          if (mask & (1 << x)) subset.push_back(x);
        CHECK(validate_groupoid(restrict_to_subgroupoid(g, subset)).ok());
      }
    }
  }
}

TEST_CASE("connected components") {
  CHECK(connected_components(pair_groupoid({"x", "y", "z"})).blocks.size() ==
        1);
  FiniteGroupoid mixed = disjoint_union(group_as_groupoid(cyclic_group(2)),
                                        pair_groupoid({"x", "y"}));
  CHECK(connected_components(mixed).blocks.size() == 2);
  // A discrete groupoid: three isolated objects.
  FiniteGroupoid z1 = group_as_groupoid(cyclic_group(1));
  FiniteGroupoid discrete =
      disjoint_union(disjoint_union(z1, z1), z1, "A.", "B.");
  CHECK(connected_components(discrete).blocks.size() == 3);
}

TEST_CASE("validator soundness on random groupoids") {
  Rng rng(4242);
  for (int trial = 0; trial < 30; ++trial) {
    FiniteGroupoid g = random_groupoid(rng, 14);
    CHECK(validate_groupoid(g).ok());
  }
}

TEST_CASE("disjoint unions re-namespace identifiers") {
  FiniteGroupoid z2 = group_as_groupoid(cyclic_group(2));
  FiniteGroupoid u = disjoint_union(z2, z2);
  CHECK(u.objects.contains("L.*"));
  CHECK(u.objects.contains("R.*"));
  CHECK(validate_groupoid(u).ok());
}
