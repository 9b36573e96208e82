#include <doctest.h>

#include <random>

#include "banach/covering.hpp"
#include "banach/error.hpp"
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

std::vector<Element> ints(std::initializer_list<std::int64_t> xs) {
  std::vector<Element> out;
  for (auto x : xs) out.push_back(Element::of({x}));
  return out;
}

bool all_of_cert(const CoverCertificate& c) { return c.verified && c.packing && c.maximal && c.within_bound; }

}  // namespace

TEST_SUITE("covering") {
  TEST_CASE("small finite examples") {
    const Group z6 = make_group(GroupSpec::finite({6}));
    const auto c = greedy_packing_complement(z6, SetSpec::explicit_set(ints({0, 1})));
    CHECK(c.translates == ints({0, 2, 4}));
    CHECK(c.density_used == Rational(1, 3));
    CHECK(c.bound == 3);
    CHECK(all_of_cert(c));
    CHECK(c.scope_note == "group");

    const auto whole = greedy_packing_complement(z6, SetSpec::explicit_set(z6.elements()));
    CHECK(whole.translates == ints({0}));
    CHECK(whole.bound == 1);

    const Group z3 = make_group(GroupSpec::finite({3}));
    const auto point = greedy_packing_complement(z3, SetSpec::explicit_set(ints({0})));
    CHECK(point.translates == z3.elements());
    CHECK(point.bound == 3);
    CHECK(all_of_cert(point));
  }

  TEST_CASE("direct cover checks") {
    const Group z6 = make_group(GroupSpec::finite({6}));
    const auto d = SetSpec::explicit_set(ints({0, 1, 5}));
    CHECK(verify_translates_cover(z6, d, ints({0, 3}), z6.elements()));
    CHECK_FALSE(verify_translates_cover(z6, d, ints({0, 2}), z6.elements()));
    CHECK(verify_translates_cover(z6, d, ints({0}), ints({0, 1, 5})));
    CHECK(verify_translates_cover(z6, d, {}, {}));
  }

  TEST_CASE("syndetic certificates on Z") {
    const Group z = make_group(GroupSpec::lattice(1));
    const auto a = syndetic_certificate(z, SetSpec::periodic({4}, {{0}, {1}}));
    CHECK(a.translates == ints({0, 2}));
    CHECK(a.scope == GroupSpec::finite({4}));
    CHECK(a.scope_note == "quotient of Z^d by the period lattice");
    CHECK(all_of_cert(a));

    const auto b = syndetic_certificate(z, SetSpec::periodic({10}, {{0}, {1}, {3}}));
    CHECK(b.translates == ints({0, 4}));
    CHECK(b.bound == 3);
    CHECK(all_of_cert(b));

    const Group z2 = make_group(GroupSpec::lattice(2));
    const auto c = syndetic_certificate(z2, SetSpec::periodic({2, 2}, {{0, 0}, {1, 1}}));
    CHECK(c.translates == std::vector<Element>{Element::of({0, 0}), Element::of({0, 1})});
    CHECK(all_of_cert(c));
  }

  TEST_CASE("gap statistics") {
    const auto three = gap_statistics(SetSpec::periodic({3}, {{0}}), 30);
    CHECK(three.differences == std::vector<std::int64_t>{3, 6, 9, 12, 15, 18, 21, 24, 27, 30});
    CHECK(three.max_gap == 3);

    const auto a = gap_statistics(SetSpec::periodic({10}, {{0}, {1}, {3}}), 23);
    CHECK(a.differences == std::vector<std::int64_t>{1, 2, 3, 7, 8, 9, 10, 11, 12, 13, 17, 18, 19, 20, 21, 22, 23});
    CHECK(a.max_gap == 4);

    const auto all = gap_statistics(SetSpec::periodic({1}, {{0}}), 10);
    CHECK(all.max_gap == 1);
    CHECK(all.gaps == std::vector<std::int64_t>(9, 1));
  }

  TEST_CASE("errors") {
    const Group z = make_group(GroupSpec::lattice(1));
    const Group z6 = make_group(GroupSpec::finite({6}));
    CHECK(throws_kind(ErrorKind::Precondition, [&] { greedy_packing_complement(z6, SetSpec::empty()); }));
    CHECK(throws_kind(ErrorKind::Unsupported, [&] { greedy_packing_complement(z, SetSpec::explicit_set(ints({0}))); }));
    CHECK(throws_kind(ErrorKind::Precondition, [&] { syndetic_certificate(z, SetSpec::periodic({3}, {})); }));
    CHECK(throws_kind(ErrorKind::Unsupported, [] {
      greedy_packing_complement(make_group(GroupSpec::rational_torus()), SetSpec::farey_bands({{0, 3}}));
    }));
    CHECK(throws_kind(ErrorKind::Domain, [] { gap_statistics(SetSpec::explicit_set(ints({0})), 10); }));
    CHECK(throws_kind(ErrorKind::Precondition, [] { gap_statistics(SetSpec::periodic({4}, {}), 10); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { gap_statistics(SetSpec::periodic({4}, {{0}}), 3); }));
  }

  TEST_CASE("every subset of Z_n for n <= 9 gets a certified cover within 1/density") {
    for (std::int64_t n = 1; n <= 9; ++n) {
      const Group g = make_group(GroupSpec::finite({n}));
      for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::int64_t> a;
        for (std::int64_t i = 0; i < n; ++i)
          if (mask >> i & 1) a.push_back(i);
        std::vector<Element> ae;
        for (auto x : a) ae.push_back(Element::of({x}));
        const auto c = greedy_packing_complement(g, SetSpec::explicit_set(ae));
        CHECK(all_of_cert(c));
        CHECK(c.bound * static_cast<std::int64_t>(a.size()) <= n);
        // Independent recheck with plain modular arithmetic.
        const auto diff = oracle::differences_mod(a, n);
        std::vector<char> hit(static_cast<std::size_t>(n), 0);
        for (const auto& b : c.translates)
          for (auto d : diff) hit[static_cast<std::size_t>(oracle::mod(d + b.coords[0], n))] = 1;
        CHECK(std::count(hit.begin(), hit.end(), 1) == n);
      }
    }
  }

  TEST_CASE("gaps of A - A are bounded by the span of the cover") {
    std::mt19937_64 rng(5);
    const Group z = make_group(GroupSpec::lattice(1));
    for (int trial = 0; trial < 60; ++trial) {
      const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 20);
      std::vector<std::vector<std::int64_t>> res;
      for (std::int64_t i = 0; i < m; ++i)
        if (rng() % 3 == 0) res.push_back({i});
      if (res.empty()) res.push_back({static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m))});
      const auto a = SetSpec::periodic({m}, res);
      const auto c = syndetic_certificate(z, a);
      REQUIRE(all_of_cert(c));
      const std::int64_t span = c.translates.back().coords[0] - c.translates.front().coords[0];
      CHECK(gap_statistics(a, 4 * m).max_gap <= span + 1);
    }
  }
}
