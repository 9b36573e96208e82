#include <doctest.h>

#include <random>

#include "banach/density.hpp"
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

// Plain inf-sup over bitmask subsets: for each C, the sup over V of
// ν(V) / #(C + V). Independent of the library's dynamic programme.
Rational naive_inf_sup(const Group& g, const std::vector<Rational>& w) {
  const auto all = g.elements();
  const std::size_t n = all.size();
  std::optional<Rational> inf;
  for (std::uint32_t c = 1; c < (1u << n); ++c) {
    std::optional<Rational> sup;
    for (std::uint32_t v = 1; v < (1u << n); ++v) {
      Rational m;
      std::uint32_t sum = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (!(v >> i & 1)) continue;
        m += w[i];
        for (std::size_t j = 0; j < n; ++j)
          if (c >> j & 1) sum |= 1u << g.index_of(g.add(all[i], all[j]));
      }
      const Rational r = m / Rational(std::popcount(sum));
      if (!sup || r > *sup) sup = r;
    }
    if (!inf || *sup < *inf) inf = sup;
  }
  return *inf;
}

PeriodicSet random_set(std::mt19937_64& rng, std::size_t d, std::int64_t max_m) {
  std::vector<std::int64_t> m(d);
  for (auto& x : m) x = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(max_m));
  const PeriodicSet probe(m, {});
  std::vector<std::vector<std::int64_t>> res;
  for (std::int64_t i = 0; i < probe.cell_size(); ++i)
    if (rng() % 2) res.push_back(probe.residue_at(static_cast<std::size_t>(i)));
  if (res.empty()) res.push_back(probe.residue_at(0));
  return PeriodicSet(m, res);
}

}  // namespace

TEST_SUITE("density") {
  TEST_CASE("Farey chain ratios") {
    const auto rep = farey_upper_density(SetSpec::farey_bands({{2, 24}}), 2, 24);
    CHECK(rep.records.front().scale == 2);
    CHECK(rep.records.front().ratio == Rational(0));
    CHECK(rep.records.front().window_size == 2);
    CHECK(rep.records.back().ratio == Rational(178, 180));
    CHECK(rep.records.back().window_size == oracle::farey_size(24));
    CHECK(rep.max_ratio == Rational(178, 180));

    const Group t = make_group(GroupSpec::rational_torus());
    std::vector<SubgroupTerm> chain;
    for (std::int64_t n = 1; n <= 10; ++n) chain.push_back({n, farey_subgroup(n)});
    const auto whole = upper_density_sequence(t, SetSpec::farey_bands({{0, 10}}), chain);
    for (const auto& r : whole.records) CHECK(r.ratio == Rational(1));
    const auto none = upper_density_sequence(t, SetSpec::empty(), chain);
    for (const auto& r : none.records) CHECK(r.ratio == Rational(0));
  }

  TEST_CASE("Farey ratios match totient sums for a band") {
    const auto phi = oracle::totient_sieve(80);
    const auto rep = farey_upper_density(SetSpec::farey_bands({{5, 30}}), 1, 80);
    std::int64_t hits = 0, size = 0;
    for (std::int64_t n = 1; n <= 80; ++n) {
      size += phi[static_cast<std::size_t>(n)];
      if (n > 5 && n <= 30) hits += phi[static_cast<std::size_t>(n)];
      CHECK(rep.records[static_cast<std::size_t>(n - 1)].ratio == Rational(hits, size));
    }
  }

  TEST_CASE("sequence chains must be increasing and nonempty") {
    const Group t = make_group(GroupSpec::rational_torus());
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] {
      upper_density_sequence(t, SetSpec::empty(), {{1, farey_subgroup(3)}, {2, farey_subgroup(2)}});
    }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { upper_density_sequence(t, SetSpec::empty(), {{1, {}}}); }));
    CHECK(throws_kind(ErrorKind::InvalidArgument, [] { farey_upper_density(SetSpec::empty(), 0, 3); }));
  }

  TEST_CASE("window densities of periodic sets") {
    const Group z = make_group(GroupSpec::lattice(1));
    const auto a = SetSpec::periodic({4}, {{0}, {1}});
    const auto rep = uniform_upper_density_windows(z, MeasureSpec::trace(a), {WindowShape::box(), {4, 8, 12, 16}, FullPeriod{}});
    for (const auto& r : rep.records) {
      CHECK(r.ratio == Rational(1, 2));
      CHECK(r.mass / Rational(r.window_size) == r.ratio);
    }
    CHECK(rep.tail_max_ratio == Rational(1, 2));
    REQUIRE(rep.exact_value);
    CHECK(*rep.exact_value == Rational(1, 2));

    // Odd scales overshoot: a box of 5 points can hold 3 of {0,1} mod 4.
    const auto odd = uniform_upper_density_windows(z, MeasureSpec::trace(a), {WindowShape::box(), {5}, FullPeriod{}});
    CHECK(odd.records[0].ratio == Rational(3, 5));
    CHECK(odd.records[0].mass == Rational(oracle::count_in_interval({0, 1}, 4, -2 + odd.records[0].witness->coords[0],
                                                                    2 + odd.records[0].witness->coords[0])));

    const auto lambda = SetSpec::periodic({5}, {{0}});
    const auto big = uniform_upper_density_windows(z, MeasureSpec::counting(lambda),
                                                   {WindowShape::cross_polytope(), {10, 50, 100, 200}, FullPeriod{}});
    CHECK(big.records.back().ratio >= Rational(1, 5));
    CHECK(big.records.back().ratio - Rational(1, 5) < Rational(1, 200));

    const auto all = uniform_upper_density_windows(z, MeasureSpec::trace(SetSpec::periodic({1}, {{0}})),
                                                   {WindowShape::box(), {1, 2, 3, 7}, FullPeriod{}});
    for (const auto& r : all.records) CHECK(r.ratio == Rational(1));
  }

  TEST_CASE("bounded translate search finds the least maximizing translate") {
    const Group z = make_group(GroupSpec::lattice(1));
    std::vector<Element> pts;
    for (std::int64_t x = 0; x < 10; ++x) pts.push_back(Element::of({x}));
    const auto a = SetSpec::explicit_set(pts);
    const auto rep = uniform_upper_density_windows(z, MeasureSpec::counting(a),
                                                   {WindowShape::box(), {10, 20}, BoundedRange{{-30}, {30}}});
    CHECK(rep.records[0].ratio == Rational(1));
    REQUIRE(rep.records[0].witness);
    CHECK(*rep.records[0].witness == Element::of({5}));  // box of 10 is -5..4
    CHECK(rep.records[1].ratio == Rational(1, 2));
    CHECK(*rep.records[1].witness == Element::of({0}));  // -10..9 is the first window holding all ten
    CHECK_FALSE(rep.exact_value);
  }

  TEST_CASE("window search errors") {
    const Group z = make_group(GroupSpec::lattice(1));
    const auto pts = SetSpec::explicit_set({Element::of({0})});
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] {
      uniform_upper_density_windows(z, MeasureSpec::counting(pts), {WindowShape::box(), {4}, FullPeriod{}});
    }));
    CHECK(throws_kind(ErrorKind::Domain, [&] {
      uniform_upper_density_windows(z, MeasureSpec::counting(SetSpec::farey_bands({{2, 24}})),
                                    {WindowShape::box(), {4}, FullPeriod{}});
    }));
    CHECK(throws_kind(ErrorKind::InvalidSpec, [&] {
      uniform_upper_density_windows(z, MeasureSpec::counting(pts), {WindowShape::box(), {4, 4}, BoundedRange{{0}, {1}}});
    }));
    const Group z6 = make_group(GroupSpec::finite({6}));
    CHECK(throws_kind(ErrorKind::Domain, [&] {
      uniform_upper_density_windows(z6, MeasureSpec::counting(pts), {WindowShape::box(), {4}, BoundedRange{{0}, {1}}});
    }));
  }

  TEST_CASE("brute-force densities on finite groups") {
    const Group z6 = make_group(GroupSpec::finite({6}));
    const auto a = MeasureSpec::trace(SetSpec::explicit_set({Element::of({0}), Element::of({3})}));
    CHECK(density_def1_finite_group(z6, a) == Rational(1, 3));
    CHECK(density_def2_finite_group(z6, a) == Rational(1, 3));
    const Group z5 = make_group(GroupSpec::finite({5}));
    const auto b = MeasureSpec::trace(SetSpec::explicit_set({Element::of({0}), Element::of({1}), Element::of({2})}));
    CHECK(density_def1_finite_group(z5, b) == Rational(3, 5));
    CHECK(density_def2_finite_group(z5, b) == Rational(3, 5));
    CHECK(density_def1_finite_group(z5, MeasureSpec::trace(SetSpec::empty())) == Rational(0));
    CHECK(density_def2_finite_group(z5, MeasureSpec::trace(SetSpec::explicit_set(z5.elements()))) == Rational(1));
    const Group z13 = make_group(GroupSpec::finite({13}));
    CHECK(throws_kind(ErrorKind::Resource, [&] { density_def1_finite_group(z13, MeasureSpec::trace(SetSpec::empty())); }));
    CHECK(throws_kind(ErrorKind::Resource, [&] { density_def2_finite_group(z13, MeasureSpec::trace(SetSpec::empty()), 21); }));
    CHECK(throws_kind(ErrorKind::Unsupported, [] {
      density_def1_finite_group(make_group(GroupSpec::lattice(1)), MeasureSpec::trace(SetSpec::empty()));
    }));
  }

  TEST_CASE("brute-force densities agree with a naive inf-sup on weighted measures") {
    std::mt19937_64 rng(21);
    for (const auto& spec : {GroupSpec::finite({4}), GroupSpec::finite({2, 2}), GroupSpec::finite({5})}) {
      const Group g = make_group(spec);
      for (int trial = 0; trial < 6; ++trial) {
        std::vector<Rational> w;
        Rational total;
        for (std::int64_t i = 0; i < g.order(); ++i) {
          w.emplace_back(static_cast<std::int64_t>(rng() % 5), static_cast<std::int64_t>(1 + rng() % 3));
          total += w.back();
        }
        const Rational naive = naive_inf_sup(g, w);
        CHECK(naive == total / Rational(g.order()));
        CHECK(density_def1_finite_group(g, w) == naive);
        CHECK(density_def2_finite_group(g, w) == naive);
      }
    }
  }

  TEST_CASE("periodic oracle examples") {
    const Group z = make_group(GroupSpec::lattice(1));
    const auto o = periodic_banach_oracle(z, SetSpec::periodic({4}, {{0}, {1}}));
    CHECK(o.density == Rational(1, 2));
    CHECK(o.consistent);
    const Group z2 = make_group(GroupSpec::lattice(2));
    std::vector<std::vector<std::int64_t>> cube;
    for (std::int64_t a = 0; a < 3; ++a)
      for (std::int64_t b = 0; b < 2; ++b) cube.push_back({a, b});
    CHECK(periodic_banach_oracle(z2, SetSpec::periodic({3, 2}, cube)).density == Rational(1));
    const auto even = periodic_banach_oracle(z2, SetSpec::periodic({2, 2}, {{0, 0}, {1, 1}}));
    CHECK(even.density == Rational(1, 2));
    CHECK(even.window_scan == Rational(1, 2));
    CHECK(throws_kind(ErrorKind::Domain, [&] { periodic_banach_oracle(z, SetSpec::explicit_set({Element::of({0})})); }));
  }

  TEST_CASE("translation leaves window ratios unchanged") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t d = trial % 2 ? 2 : 1;
      const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(d)));
      const auto a = SetSpec::periodic(random_set(rng, d, 6));
      std::vector<std::int64_t> t(d);
      for (auto& x : t) x = static_cast<std::int64_t>(rng() % 41) - 20;
      const auto b = translate(g, a, Element::of(t));
      for (const auto& shape : {WindowShape::box(), WindowShape::cross_polytope()}) {
        const WindowFamily f{shape, {3, 7, 12}, FullPeriod{}};
        const auto ra = uniform_upper_density_windows(g, MeasureSpec::trace(a), f);
        const auto rb = uniform_upper_density_windows(g, MeasureSpec::trace(b), f);
        for (std::size_t i = 0; i < ra.records.size(); ++i) CHECK(ra.records[i].ratio == rb.records[i].ratio);
      }
    }
  }

  TEST_CASE("window ratios are monotone in the set") {
    std::mt19937_64 rng(9);
    const Group z = make_group(GroupSpec::lattice(1));
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = random_set(rng, 1, 10);
      std::vector<std::vector<std::int64_t>> sub;
      for (const auto& r : p.residues())
        if (rng() % 2) sub.push_back(r);
      const auto big = SetSpec::periodic(p);
      const auto small = SetSpec::periodic(p.period(), sub);
      const WindowFamily f{WindowShape::cross_polytope(), {1, 2, 5, 9, 16}, FullPeriod{}};
      const auto rb = uniform_upper_density_windows(z, MeasureSpec::trace(big), f);
      const auto rs = uniform_upper_density_windows(z, MeasureSpec::trace(small), f);
      for (std::size_t i = 0; i < rb.records.size(); ++i) CHECK(rs.records[i].ratio <= rb.records[i].ratio);
    }
  }

  TEST_CASE("shape invariance including a hexagon hull") {
    std::mt19937_64 rng(12);
    const WindowShape hex = WindowShape::hull({{Rational(1), Rational(0)},
                                               {Rational(1, 2), Rational(1)},
                                               {Rational(-1, 2), Rational(1)},
                                               {Rational(-1), Rational(0)},
                                               {Rational(-1, 2), Rational(-1)},
                                               {Rational(1, 2), Rational(-1)}});
    const Group z2 = make_group(GroupSpec::lattice(2));
    for (int trial = 0; trial < 8; ++trial) {
      const auto p = random_set(rng, 2, 8);
      const auto a = SetSpec::periodic(p);
      const auto scales = period_aligned_scales(p.period(), 64);
      const Rational tol(1, scales.back());
      const Rational oracle = periodic_banach_oracle(z2, a).density;
      for (const auto& shape : {WindowShape::box(), WindowShape::cross_polytope(), hex}) {
        const auto rep = uniform_upper_density_windows(z2, MeasureSpec::trace(a), {shape, scales, FullPeriod{}});
        const Rational err = rep.tail_max_ratio - oracle;
        CHECK(err >= Rational(0));
        CHECK(err <= tol);
      }
    }
  }

  TEST_CASE("restricted relaxations: more windows never lower the sup, more translate sets never raise the inf") {
    const Group z = make_group(GroupSpec::lattice(1));
    const auto nu = MeasureSpec::trace(SetSpec::periodic({3}, {{0}}));
    auto interval = [](std::int64_t lo, std::int64_t hi) {
      std::vector<Element> out;
      for (std::int64_t x = lo; x <= hi; ++x) out.push_back(Element::of({x}));
      return out;
    };
    const std::vector<std::vector<Element>> cs_narrow = {interval(0, 2)};
    const std::vector<std::vector<Element>> cs_wide = {interval(0, 2), interval(0, 5), {Element::of({0})}};
    const std::vector<std::vector<Element>> vs_narrow = {interval(0, 8)};
    const std::vector<std::vector<Element>> vs_wide = {interval(0, 8), interval(0, 29), {Element::of({0})}};
    const Rational a = inf_sup_relaxation(z, nu, cs_narrow, vs_narrow);
    CHECK(a == Rational(3, 11));
    CHECK(inf_sup_relaxation(z, nu, cs_narrow, vs_wide) >= a);
    CHECK(inf_sup_relaxation(z, nu, cs_wide, vs_narrow) <= a);
    // The singleton window {0} reaches ratio 1 against C = {0}.
    CHECK(inf_sup_relaxation(z, nu, {{Element::of({0})}}, vs_wide) == Rational(1));
  }

  TEST_CASE("period-aligned scales") {
    CHECK(period_aligned_scales({4}, 16) == std::vector<std::int64_t>{4, 8, 12, 16});
    CHECK(period_aligned_scales({2, 3}, 13) == std::vector<std::int64_t>{6, 12, 18});
    CHECK(period_aligned_scales({5}, 1) == std::vector<std::int64_t>{5});
  }
}
