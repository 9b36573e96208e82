#include <doctest.h>

#include <random>
#include <set>

#include "banach/error.hpp"
#include "banach/sets.hpp"
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

std::set<std::vector<std::int64_t>> residue_set(const SetSpec& s) {
  const auto& p = std::get<PeriodicSet>(s.variant());
  return {p.residues().begin(), p.residues().end()};
}

}  // namespace

TEST_SUITE("sets") {
  TEST_CASE("membership examples") {
    const Group z = make_group(GroupSpec::lattice(1));
    CHECK(contains(z, SetSpec::periodic({4}, {{0}, {1}}), Element::of({9})));
    CHECK_FALSE(contains(z, SetSpec::periodic({4}, {{0}, {1}}), Element::of({-2})));
    CHECK(contains(z, SetSpec::periodic({4}, {{0}, {1}}), Element::of({-3})));
    const Group t = make_group(GroupSpec::rational_torus());
    CHECK(contains(t, SetSpec::farey_bands({{2, 24}}), Element::frac(1, 3)));
    CHECK_FALSE(contains(t, SetSpec::farey_bands({{2, 24}}), Element::frac(1, 2)));
    CHECK_FALSE(contains(t, SetSpec::farey_bands({{2, 24}}), Element::frac(1, 25)));
    const Group z6 = make_group(GroupSpec::finite({6}));
    CHECK_FALSE(contains(z6, SetSpec::explicit_set(ints({0, 3})), Element::of({2})));
  }

  TEST_CASE("enumerate_in_window examples") {
    const Group z = make_group(GroupSpec::lattice(1));
    const auto w = ints({0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(enumerate_in_window(z, SetSpec::periodic({2}, {{0}}), w) == ints({0, 2, 4, 6, 8}));
    CHECK(enumerate_in_window(z, SetSpec::empty(), w).empty());
    const Group t = make_group(GroupSpec::rational_torus());
    const auto got = enumerate_in_window(t, SetSpec::farey_bands({{2, 24}}), farey_subgroup(4));
    const std::set<Element> as_set(got.begin(), got.end());
    CHECK(as_set == std::set<Element>{Element::frac(1, 3), Element::frac(2, 3), Element::frac(1, 4), Element::frac(3, 4)});
  }

  TEST_CASE("difference_set examples") {
    const Group z10 = make_group(GroupSpec::finite({10}));
    CHECK(difference_set(z10, SetSpec::explicit_set(ints({0, 1, 3}))) ==
          SetSpec::explicit_set(ints({0, 1, 2, 3, 7, 8, 9})));
    CHECK(difference_set(z10, SetSpec::explicit_set(ints({0}))) == SetSpec::explicit_set(ints({0})));
    const Group z = make_group(GroupSpec::lattice(1));
    CHECK(difference_set(z, SetSpec::periodic({3}, {{0}})) == SetSpec::periodic({3}, {{0}}));
    const Group t = make_group(GroupSpec::rational_torus());
    CHECK(throws_kind(ErrorKind::Unsupported, [&] { difference_set(t, SetSpec::farey_bands({{2, 24}})); }));
  }

  TEST_CASE("periodic difference sets match explicit ones on two periods") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t d = trial % 3 == 0 ? 2 : 1;
      std::vector<std::int64_t> m(d);
      for (auto& x : m) x = 1 + static_cast<std::int64_t>(rng() % (d == 1 ? 12 : 5));
      std::vector<std::vector<std::int64_t>> res;
      const PeriodicSet probe(m, {});
      for (std::int64_t i = 0; i < probe.cell_size(); ++i)
        if (rng() % 3 == 0) res.push_back(probe.residue_at(static_cast<std::size_t>(i)));
      if (res.empty()) res.push_back(std::vector<std::int64_t>(d, 0));
      const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(d)));
      const auto s = SetSpec::periodic(m, res);

      // Explicit points of two periods per side, differences reduced mod m.
      std::vector<std::vector<std::int64_t>> pts;
      const std::set<std::vector<std::int64_t>> rs(res.begin(), res.end());
      for (std::int64_t a = 0; a < 2 * m[0]; ++a)
        for (std::int64_t b = 0; b < (d == 2 ? 2 * m[1] : 1); ++b) {
          std::vector<std::int64_t> x = d == 2 ? std::vector<std::int64_t>{a, b} : std::vector<std::int64_t>{a};
          std::vector<std::int64_t> r(d);
          for (std::size_t i = 0; i < d; ++i) r[i] = oracle::mod(x[i], m[i]);
          if (rs.count(r)) pts.push_back(x);
        }
      std::set<std::vector<std::int64_t>> expect;
      for (const auto& x : pts)
        for (const auto& y : pts) {
          std::vector<std::int64_t> r(d);
          for (std::size_t i = 0; i < d; ++i) r[i] = oracle::mod(x[i] - y[i], m[i]);
          expect.insert(r);
        }
      const auto got = difference_set(g, s);
      CHECK(residue_set(got) == expect);
      // 0 in A - A and A - A = -(A - A).
      CHECK(contains(g, got, g.zero()));
      for (const auto& r : expect) {
        std::vector<std::int64_t> neg(d);
        for (std::size_t i = 0; i < d; ++i) neg[i] = -r[i];
        CHECK(contains(g, got, Element::of(neg)));
      }
    }
  }

  TEST_CASE("explicit difference sets are symmetric and contain 0") {
    std::mt19937_64 rng(5);
    const Group g = make_group(GroupSpec::finite({3, 4}));
    const auto all = g.elements();
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Element> a;
      for (const auto& x : all)
        if (rng() % 3 == 0) a.push_back(x);
      if (a.empty()) a.push_back(all[rng() % all.size()]);
      const auto d = difference_set(g, SetSpec::explicit_set(a));
      CHECK(contains(g, d, g.zero()));
      for (const auto& x : std::get<SetSpec::Explicit>(d.variant()).elements) CHECK(contains(g, d, g.neg(x)));
    }
  }

  TEST_CASE("union membership is the disjunction of its members") {
    std::mt19937_64 rng(3);
    const Group z = make_group(GroupSpec::lattice(1));
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<SetSpec> members;
      const int k = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < k; ++j) {
        if (rng() % 2) {
          const std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 7);
          members.push_back(SetSpec::periodic({m}, {{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(m))}}));
        } else {
          members.push_back(SetSpec::explicit_set(ints({static_cast<std::int64_t>(rng() % 20) - 10})));
        }
      }
      const auto u = SetSpec::union_of(members);
      for (std::int64_t x = -15; x <= 15; ++x) {
        bool any = false;
        for (const auto& m : members) any = any || contains(z, m, Element::of({x}));
        CHECK(contains(z, u, Element::of({x})) == any);
      }
    }
  }

  TEST_CASE("unions of periodic sets collapse to one period") {
    const auto u = SetSpec::union_of({SetSpec::periodic({2}, {{0}}), SetSpec::periodic({3}, {{0}})});
    const auto p = as_periodic(u);
    REQUIRE(p);
    CHECK(p->period() == std::vector<std::int64_t>{6});
    CHECK(p->density() == Rational(4, 6));
  }

  TEST_CASE("validation rejects sets foreign to the group") {
    const Group z = make_group(GroupSpec::lattice(1));
    const Group z6 = make_group(GroupSpec::finite({6}));
    const Group z2 = make_group(GroupSpec::lattice(2));
    CHECK(throws_kind(ErrorKind::Domain, [&] { validate(z, SetSpec::farey_bands({{2, 24}})); }));
    CHECK(throws_kind(ErrorKind::Domain, [&] { validate(z6, SetSpec::periodic({3}, {{0}})); }));
    CHECK(throws_kind(ErrorKind::Domain, [&] { validate(z2, SetSpec::periodic({3}, {{0}})); }));
    CHECK(throws_kind(ErrorKind::Domain, [&] { validate(z6, SetSpec::explicit_set(ints({7}))); }));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { SetSpec::periodic({4}, {{4}}); }));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { SetSpec::periodic({0}, {}); }));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { SetSpec::farey_bands({{2, 10}, {5, 12}}); }));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { SetSpec::farey_bands({{5, 5}}); }));
  }

  TEST_CASE("translate shifts membership") {
    const Group z = make_group(GroupSpec::lattice(1));
    const auto s = SetSpec::periodic({5}, {{0}, {2}});
    const auto t = translate(z, s, Element::of({3}));
    for (std::int64_t x = -10; x <= 10; ++x)
      CHECK(contains(z, t, Element::of({x})) == contains(z, s, Element::of({x - 3})));
  }

  TEST_CASE("measures: trace and counting agree, point masses merge") {
    const Group z6 = make_group(GroupSpec::finite({6}));
    const auto a = SetSpec::explicit_set(ints({0, 3, 4}));
    const auto w = ints({0, 1, 3});
    CHECK(mass(z6, MeasureSpec::trace(a), w) == Rational(2));
    CHECK(mass(z6, MeasureSpec::counting(a), w) == Rational(2));
    const auto pm = MeasureSpec::point_masses({{Element::of({1}), Rational(1, 2)},
                                               {Element::of({1}), Rational(1, 3)},
                                               {Element::of({2}), Rational(0)}});
    const auto& masses = std::get<MeasureSpec::PointMasses>(pm.variant()).masses;
    REQUIRE(masses.size() == 1);
    CHECK(masses[0].second == Rational(5, 6));
    CHECK(mass(z6, pm, w) == Rational(5, 6));
    const auto weights = point_weights(z6, pm);
    CHECK(weights[1] == Rational(5, 6));
    CHECK(weights[0] == Rational(0));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [] { MeasureSpec::point_masses({{Element::of({0}), Rational(-1)}}); }));
  }
}
