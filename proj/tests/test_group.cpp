#include <doctest.h>

#include <random>
#include <set>

#include "banach/error.hpp"
#include "banach/group.hpp"
#include "oracles.hpp"

using namespace banach;

namespace {

bool throws_kind(ErrorKind kind, auto&& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_SUITE("group") {
  TEST_CASE("make_group orders and validation") {
    CHECK(make_group(GroupSpec::finite({6})).order() == 6);
    CHECK(make_group(GroupSpec::finite({2, 3})).order() == 6);
    CHECK(make_group(GroupSpec::lattice(2)).rank() == 2);
    CHECK(make_group(GroupSpec::rational_torus()).describe() == "Q/Z");
    CHECK(make_group(GroupSpec::finite({2, 3})).describe() == "Z_2xZ_3");
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { make_group(GroupSpec::finite({0})); }));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { make_group(GroupSpec::finite({})); }));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { make_group(GroupSpec::lattice(0)); }));
  }

  TEST_CASE("element addition examples") {
    const Group z6 = make_group(GroupSpec::finite({6}));
    CHECK(z6.add(Element::of({4}), Element::of({5})) == Element::of({3}));
    const Group z2 = make_group(GroupSpec::lattice(2));
    CHECK(z2.add(Element::of({1, 2}), Element::of({3, -4})) == Element::of({4, -2}));
    const Group t = make_group(GroupSpec::rational_torus());
    CHECK(t.add(Element::frac(1, 2), Element::frac(2, 3)) == Element::frac(1, 6));
    CHECK(t.neg(Element::frac(1, 3)) == Element::frac(2, 3));
    CHECK(t.neg(t.zero()) == t.zero());
    CHECK(t.zero() == Element::frac(0, 1));
  }

  TEST_CASE("non-canonical or foreign elements are domain errors") {
    const Group z6 = make_group(GroupSpec::finite({6}));
    CHECK(throws_kind(ErrorKind::Domain, [&] { z6.add(Element::of({6}), Element::of({1})); }));
    CHECK(throws_kind(ErrorKind::Domain, [&] { z6.add(Element::of({1, 1}), Element::of({1})); }));
    CHECK(throws_kind(ErrorKind::Domain, [&] { z6.require(Element::frac(1, 2)); }));
    const Group t = make_group(GroupSpec::rational_torus());
    CHECK(throws_kind(ErrorKind::Domain, [&] { t.require(Element::frac(2, 4)); }));
    CHECK(throws_kind(ErrorKind::Domain, [&] { t.require(Element::frac(3, 2)); }));
    CHECK(t.canonicalize(Element::frac(10, 4)) == Element::frac(1, 2));
    CHECK(t.canonicalize(Element::frac(-1, 3)) == Element::frac(2, 3));
    CHECK(z6.canonicalize(Element::of({-1})) == Element::of({5}));
  }

  TEST_CASE("group axioms exhaustively on small finite groups") {
    for (const auto& spec : {GroupSpec::finite({6}), GroupSpec::finite({2, 4}), GroupSpec::finite({3, 3}),
                             GroupSpec::finite({2, 2, 2})}) {
      const Group g = make_group(spec);
      const auto all = g.elements();
      REQUIRE(static_cast<std::int64_t>(all.size()) == g.order());
      CHECK(all.front() == g.zero());
      for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(g.index_of(all[i]) == i);
        CHECK(g.element_at(i) == all[i]);
        if (i) CHECK(all[i - 1] < all[i]);
      }
      for (const auto& a : all) {
        CHECK(g.add(a, g.zero()) == a);
        CHECK(g.add(a, g.neg(a)) == g.zero());
        for (const auto& b : all) {
          CHECK(g.add(a, b) == g.add(b, a));
          for (const auto& c : all) CHECK(g.add(g.add(a, b), c) == g.add(a, g.add(b, c)));
        }
      }
    }
  }

  TEST_CASE("group axioms on random Z^2 and Q/Z elements") {
    std::mt19937_64 rng(7);
    const Group z2 = make_group(GroupSpec::lattice(2));
    const Group t = make_group(GroupSpec::rational_torus());
    auto ri = [&](std::int64_t lo, std::int64_t hi) {
      return lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
    };
    auto rf = [&] {
      const auto q = ri(1, 40);
      return t.canonicalize(Element::frac(ri(0, q - 1), q));
    };
    for (int i = 0; i < 500; ++i) {
      const auto a = Element::of({ri(-50, 50), ri(-50, 50)});
      const auto b = Element::of({ri(-50, 50), ri(-50, 50)});
      const auto c = Element::of({ri(-50, 50), ri(-50, 50)});
      CHECK(z2.add(z2.add(a, b), c) == z2.add(a, z2.add(b, c)));
      CHECK(z2.sub(a, a) == z2.zero());
      const auto x = rf(), y = rf(), z = rf();
      CHECK(t.add(t.add(x, y), z) == t.add(x, t.add(y, z)));
      CHECK(t.add(x, t.neg(x)) == t.zero());
      CHECK(t.is_canonical(t.add(x, y)));
    }
  }

  TEST_CASE("farey_subgroup examples") {
    CHECK(farey_subgroup(1) == std::vector<Element>{Element::frac(0, 1)});
    CHECK(farey_subgroup(3) ==
          std::vector<Element>{Element::frac(0, 1), Element::frac(1, 3), Element::frac(1, 2), Element::frac(2, 3)});
    CHECK(farey_subgroup(4).size() == 6);
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { farey_subgroup(0); }));
  }

  TEST_CASE("farey_subgroup sizes against an independent totient sieve") {
    const auto phi = oracle::totient_sieve(200);
    std::int64_t running = 0;
    for (std::int64_t n = 1; n <= 200; ++n) {
      running += phi[static_cast<std::size_t>(n)];
      CHECK(totient(n) == phi[static_cast<std::size_t>(n)]);
      if (n <= 60 || n % 20 == 0) CHECK(static_cast<std::int64_t>(farey_subgroup(n).size()) == running);
    }
    CHECK(oracle::farey_size(24) == 180);
    CHECK(oracle::farey_size(100) == 3044);
  }

  TEST_CASE("farey_subgroup is exactly the reduced fractions, in value order") {
    for (std::int64_t n = 1; n <= 30; ++n) {
      const auto h = farey_subgroup(n);
      std::set<std::pair<std::int64_t, std::int64_t>> got;
      for (std::size_t i = 0; i < h.size(); ++i) {
        got.insert({h[i].numerator(), h[i].denominator()});
        if (i) CHECK(h[i - 1].numerator() * h[i].denominator() < h[i].numerator() * h[i - 1].denominator());
      }
      CHECK(got == oracle::farey_pairs(n));
    }
  }

  TEST_CASE("farey truncations are closed under negation; under addition only for n <= 2") {
    const Group t = make_group(GroupSpec::rational_torus());
    for (std::int64_t n = 1; n <= 30; ++n) {
      const auto h = farey_subgroup(n);
      const std::set<Element> hs(h.begin(), h.end());
      bool closed_add = true;
      for (const auto& a : h) {
        CHECK(hs.count(t.neg(a)) == 1);
        for (const auto& b : h)
          if (!hs.count(t.add(a, b))) closed_add = false;
      }
      CHECK(closed_add == (n <= 2));
    }
    // The smallest escape: 1/2 + 1/3 = 5/6 has denominator 6 > 3.
    CHECK(t.add(Element::frac(1, 2), Element::frac(1, 3)) == Element::frac(5, 6));
  }
}
