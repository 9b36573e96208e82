#include "banach/verifier.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "banach/error.hpp"
#include "banach/json_io.hpp"

namespace banach {

namespace {

constexpr std::size_t kMaxListed = 25;

// Collects failures, keeping the first few in full.
class Recorder {
 public:
  explicit Recorder(std::string name) { result_.name = std::move(name); }
  void instance() { ++result_.instances_run; }
  void add_instances(std::int64_t n) { result_.instances_run += n; }
  void failure(const Json& input, std::string expected, std::string observed) {
    ++total_;
    if (result_.failures.size() < kMaxListed)
      result_.failures.push_back({input.dump(), std::move(expected), std::move(observed)});
  }
  void note(std::string n) { result_.notes.push_back(std::move(n)); }
  std::int64_t failures() const noexcept { return total_; }
  CheckResult finish() {
    if (total_ > static_cast<std::int64_t>(result_.failures.size()))
      note(std::to_string(total_) + " failures in total; the first " + std::to_string(result_.failures.size()) +
           " are listed");
    return std::move(result_);
  }

 private:
  CheckResult result_;
  std::int64_t total_ = 0;
};

std::vector<Element> subset(const std::vector<Element>& all, std::uint64_t mask) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (mask >> i & 1) out.push_back(all[i]);
  return out;
}

Json repro(const GroupSpec& g, const SetSpec& s) { return Json{{"group", to_json(g)}, {"set", to_json(s)}}; }

std::vector<Element> cell_points(const std::vector<std::int64_t>& period) {
  const PeriodicSet cell(period, {});
  std::vector<Element> out;
  for (std::int64_t i = 0; i < cell.cell_size(); ++i) out.push_back(Element::of(cell.residue_at(static_cast<std::size_t>(i))));
  return out;
}

// Does d lie in P - P? Scans residues directly.
bool in_difference(const PeriodicSet& p, std::span<const std::int64_t> d) {
  std::vector<std::int64_t> t(d.size());
  for (const auto& r : p.residues()) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = r[i] + d[i];
    if (p.contains(t)) return true;
  }
  return false;
}

std::vector<Element> random_symmetric_window(Rng& rng, std::size_t dim, std::int64_t reach, std::int64_t extra) {
  std::set<Element> q{Element::of(std::vector<std::int64_t>(dim, 0))};
  for (std::int64_t k = 0; k < extra; ++k) {
    std::vector<std::int64_t> x(dim), y(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      x[i] = uniform_int(rng, -reach, reach);
      y[i] = -x[i];
    }
    q.insert(Element::of(x));
    q.insert(Element::of(y));
  }
  return {q.begin(), q.end()};
}

GroupSpec random_small_group(Rng& rng) {
  static const std::vector<GroupSpec> pool = {
      GroupSpec::finite({1}),    GroupSpec::finite({2}),    GroupSpec::finite({3}),    GroupSpec::finite({4}),
      GroupSpec::finite({5}),    GroupSpec::finite({6}),    GroupSpec::finite({2, 2}), GroupSpec::finite({2, 3}),
      GroupSpec::finite({3, 2}),
  };
  return pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
}

MeasureSpec random_finite_measure(Rng& rng, const Group& g) {
  const auto all = g.elements();
  const auto n = static_cast<int>(all.size());
  if (uniform_int(rng, 0, 2) == 0) {
    std::vector<std::pair<Element, Rational>> masses;
    for (const auto& x : all)
      if (uniform_int(rng, 0, 2) != 0) masses.emplace_back(x, Rational(uniform_int(rng, 0, 6), uniform_int(rng, 1, 4)));
    return MeasureSpec::point_masses(std::move(masses));
  }
  const auto mask = static_cast<std::uint64_t>(uniform_int(rng, 0, (std::int64_t{1} << n) - 1));
  auto a = SetSpec::explicit_set(subset(all, mask));
  return uniform_int(rng, 0, 1) ? MeasureSpec::trace(std::move(a)) : MeasureSpec::counting(std::move(a));
}

// Corpus shared by the packing and fattening suites.
std::vector<PeriodicSet> packing_corpus(const VerifyOptions& opt, std::int64_t set_count) {
  Rng rng(opt.seed ^ 0x7061636bULL);
  std::vector<PeriodicSet> out;
  for (std::int64_t i = 0; i < set_count; ++i) {
    const std::size_t dim = i % 5 == 4 ? 2 : 1;
    out.push_back(random_periodic_set(rng, dim, 12, 12));
  }
  return out;
}

std::int64_t cell_span(const Group& g, const std::vector<Element>& b) {
  if (b.empty() || g.rank() != 1) return 0;
  std::int64_t lo = b.front().coords[0], hi = lo;
  for (const auto& x : b) {
    lo = std::min(lo, x.coords[0]);
    hi = std::max(hi, x.coords[0]);
  }
  return hi - lo;
}

}  // namespace

std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  const auto width = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(rng() % width);
}

PeriodicSet random_periodic_set(Rng& rng, std::size_t dim, std::int64_t max_period, std::int64_t max_cell) {
  std::vector<std::int64_t> period(dim);
  std::int64_t cell = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    const std::int64_t room = std::max<std::int64_t>(1, std::min(max_period, max_cell / cell));
    period[i] = uniform_int(rng, 1, room);
    cell *= period[i];
  }
  const PeriodicSet probe(period, {});
  const std::int64_t keep = uniform_int(rng, 1, 3);
  std::vector<std::vector<std::int64_t>> residues;
  for (std::int64_t i = 0; i < cell; ++i)
    if (uniform_int(rng, 0, 3) < keep) residues.push_back(probe.residue_at(static_cast<std::size_t>(i)));
  if (residues.empty()) residues.push_back(probe.residue_at(static_cast<std::size_t>(uniform_int(rng, 0, cell - 1))));
  return PeriodicSet(period, std::move(residues));
}

CheckResult check_finite_exactness(const std::vector<GroupSpec>& groups, std::int64_t cap) {
  Recorder rec("finite-exactness");
  for (const auto& spec : groups) {
    const Group g = make_group(spec);
    if (g.order() > cap) {
      rec.note("skipped " + g.describe() + ": order above cap " + std::to_string(cap));
      continue;
    }
    const auto all = g.elements();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << all.size()); ++mask) {
      rec.instance();
      const auto a = SetSpec::explicit_set(subset(all, mask));
      const auto nu = MeasureSpec::trace(a);
      const Rational expect(static_cast<std::int64_t>(std::popcount(mask)), g.order());
      const Rational d1 = density_def1_finite_group(g, nu, cap);
      const Rational d2 = density_def2_finite_group(g, nu, cap);
      if (d1 != expect || d2 != expect)
        rec.failure(repro(spec, a), "D = Delta = " + expect.to_string(),
                    "D = " + d1.to_string() + ", Delta = " + d2.to_string());
    }
  }
  return rec.finish();
}

CheckResult check_delta_ge_D(const VerifyOptions& opt) {
  Recorder rec("delta-ge-D");
  auto compare = [&](const Group& g, const MeasureSpec& nu) {
    rec.instance();
    const Rational d1 = density_def1_finite_group(g, nu, opt.cap);
    const Rational d2 = density_def2_finite_group(g, nu, opt.cap);
    if (d2 < d1) {
      rec.failure(Json{{"group", to_json(g.spec())}, {"measure", to_json(nu)}}, "Delta >= D",
                  "D = " + d1.to_string() + ", Delta = " + d2.to_string());
    } else if (d2 != d1) {
      rec.failure(Json{{"group", to_json(g.spec())}, {"measure", to_json(nu)}}, "Delta = D on a discrete group",
                  "D = " + d1.to_string() + ", Delta = " + d2.to_string());
    }
  };
  const Group z6 = make_group(GroupSpec::finite({6}));
  const auto all = z6.elements();
  for (std::uint64_t mask = 0; mask < 64; ++mask) compare(z6, MeasureSpec::trace(SetSpec::explicit_set(subset(all, mask))));
  Rng rng(opt.seed ^ 0x64656c74ULL);
  const Group z23 = make_group(GroupSpec::finite({2, 3}));
  for (int i = 0; i < 20; ++i) {
    std::vector<std::pair<Element, Rational>> masses;
    for (const auto& x : z23.elements()) masses.emplace_back(x, Rational(uniform_int(rng, 0, 9), uniform_int(rng, 1, 5)));
    compare(z23, MeasureSpec::point_masses(std::move(masses)));
  }
  return rec.finish();
}

CheckResult check_cover_exhaustive(std::int64_t n_max) {
  Recorder rec("cover");
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const Group g = make_group(GroupSpec::finite({n}));
    const auto all = g.elements();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
      rec.instance();
      const auto pts = subset(all, mask);
      const auto a = SetSpec::explicit_set(pts);
      const auto cert = greedy_packing_complement(g, a);
      const auto size = static_cast<std::int64_t>(pts.size());
      // Recompute everything from scratch on Z_n.
      std::vector<char> diff(static_cast<std::size_t>(n), 0);
      for (const auto& x : pts)
        for (const auto& y : pts) diff[static_cast<std::size_t>(((x.coords[0] - y.coords[0]) % n + n) % n)] = 1;
      std::vector<char> covered(static_cast<std::size_t>(n), 0);
      for (const auto& b : cert.translates)
        for (std::int64_t d = 0; d < n; ++d)
          if (diff[static_cast<std::size_t>(d)]) covered[static_cast<std::size_t>((d + b.coords[0]) % n)] = 1;
      const bool covers = std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
      bool packing = true;
      for (const auto& b : cert.translates)
        for (const auto& c : cert.translates)
          if (b != c && diff[static_cast<std::size_t>(((b.coords[0] - c.coords[0]) % n + n) % n)]) packing = false;
      const auto k = static_cast<std::int64_t>(cert.translates.size());
      const std::int64_t bound = n / size;
      std::string problem;
      if (!cert.verified || !covers) problem += " cover";
      if (!cert.packing || !packing) problem += " packing";
      if (!cert.maximal) problem += " maximality";
      if (k > bound || cert.bound != bound) problem += " size-bound";
      if (cert.density_used != Rational(size, n)) problem += " density";
      if (!problem.empty())
        rec.failure(repro(g.spec(), a), "verified maximal packing cover with #B <= " + std::to_string(bound),
                    "#B = " + std::to_string(k) + ", failed:" + problem);
    }
  }
  return rec.finish();
}

CheckResult check_erdos_sarkozy(const VerifyOptions& opt, std::int64_t count) {
  Recorder rec("erdos-sarkozy");
  Rng rng(opt.seed ^ 0x65726473ULL);
  const Group z = make_group(GroupSpec::lattice(1));
  for (std::int64_t i = 0; i < count; ++i) {
    rec.instance();
    const PeriodicSet p = random_periodic_set(rng, 1, 20, 20);
    const auto a = SetSpec::periodic(p);
    const std::int64_t m = p.period()[0];
    const auto stats = gap_statistics(a, 4 * m);
    const auto cert = syndetic_certificate(z, a);
    std::vector<std::int64_t> naive;
    for (std::int64_t d = 1; d <= 4 * m; ++d)
      if (in_difference(p, std::vector<std::int64_t>{d})) naive.push_back(d);
    const std::int64_t span = cell_span(z, cert.translates);
    if (stats.differences != naive)
      rec.failure(repro(z.spec(), a), "positive differences match direct enumeration", "mismatch");
    else if (stats.max_gap > span + 1 || !cert.verified)
      rec.failure(repro(z.spec(), a), "max_gap <= span(B) + 1 = " + std::to_string(span + 1),
                  "max_gap = " + std::to_string(stats.max_gap));
  }
  return rec.finish();
}

CheckResult check_shape_invariance(const VerifyOptions& opt, std::int64_t count) {
  Recorder rec("shape-invariance");
  Rng rng(opt.seed ^ 0x73686170ULL);
  for (std::int64_t i = 0; i < count; ++i) {
    rec.instance();
    const std::size_t dim = i % 2 == 0 ? 1 : 2;
    const PeriodicSet p = random_periodic_set(rng, dim, 8, 64);
    const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(dim)));
    const auto a = SetSpec::periodic(p);
    const Rational oracle = periodic_banach_oracle(g, a).density;
    const auto scales = period_aligned_scales(p.period(), opt.min_top_scale);
    const Rational tol(1, scales.back());
    for (const auto& shape : {WindowShape::box(), WindowShape::cross_polytope()}) {
      const auto rep = uniform_upper_density_windows(g, MeasureSpec::counting(a), {shape, scales, FullPeriod{}});
      Rational err = rep.tail_max_ratio - oracle;
      if (err < Rational(0)) err = -err;
      if (!(err <= tol))
        rec.failure(repro(g.spec(), a),
                    std::string(to_string(shape.kind)) + " tail-max within 1/" + std::to_string(scales.back()) +
                        " of " + oracle.to_string(),
                    "tail-max " + rep.tail_max_ratio.to_string());
      if (shape.kind == ShapeKind::Box)
        for (const auto& r : rep.records)
          if (r.ratio != oracle)
            rec.failure(repro(g.spec(), a), "box ratio at aligned scale " + std::to_string(r.scale) + " = " + oracle.to_string(),
                        r.ratio.to_string());
    }
  }
  return rec.finish();
}

CheckResult check_packing_bound(const VerifyOptions& opt, std::int64_t set_count) {
  Recorder rec("packing");
  std::int64_t admissible = 0;
  for (const auto& p : packing_corpus(opt, set_count)) {
    const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(p.dimension())));
    const auto s = SetSpec::periodic(p);
    const auto domain = cell_points(p.period());
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << domain.size()); ++mask) {
      rec.instance();
      const auto h = subset(domain, mask);
      bool naive_ok = true;
      for (std::size_t a = 0; a < h.size() && naive_ok; ++a)
        for (std::size_t b = 0; b < h.size() && naive_ok; ++b) {
          if (a == b) continue;
          std::vector<std::int64_t> d(p.dimension());
          for (std::size_t i = 0; i < d.size(); ++i) d[i] = h[a].coords[i] - h[b].coords[i];
          if (in_difference(p, d)) naive_ok = false;
        }
      const auto c = check_packing(g, s, h);
      if (c.admissible != naive_ok) {
        rec.failure(Json{{"group", to_json(g.spec())}, {"set", to_json(s)}, {"H", to_json(h)}},
                    naive_ok ? "admissible" : "not admissible", c.admissible ? "admissible" : "not admissible");
        continue;
      }
      if (!naive_ok) continue;
      ++admissible;
      if (Rational(static_cast<std::int64_t>(h.size())) * p.density() > Rational(1))
        rec.failure(Json{{"group", to_json(g.spec())}, {"set", to_json(s)}, {"H", to_json(h)}},
                    "#H <= 1/rho = " + (Rational(1) / p.density()).to_string(), "#H = " + std::to_string(h.size()));
    }
  }
  rec.note(std::to_string(admissible) + " admissible pairs checked against #H <= 1/rho");
  return rec.finish();
}

namespace {

// Shared walk for the two fattening suites: `hypothesis` selects H, then the
// exact density of S + (H - H) is compared with ρ #(H - H).
CheckResult fattening_walk(const VerifyOptions& opt, std::int64_t set_count, const std::string& name,
                           bool disjoint_translates) {
  Recorder rec(name);
  std::int64_t eligible = 0, equal = 0;
  for (const auto& p : packing_corpus(opt, set_count)) {
    const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(p.dimension())));
    const auto s = SetSpec::periodic(p);
    const auto domain = cell_points(p.period());
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << domain.size()); ++mask) {
      rec.instance();
      const auto h = subset(domain, mask);
      const auto q = difference_points(g, h);
      const auto probe = disjoint_translates ? difference_points(g, q) : q;
      bool ok = true;
      for (const auto& d : probe)
        if (d != g.zero() && in_difference(p, d.coords)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      ++eligible;
      const auto fat = fatten(g, s, h);
      const Rational nominal = p.density() * Rational(static_cast<std::int64_t>(q.size()));
      // Independent count of S + Q on one period cell.
      std::int64_t hits = 0;
      for (const auto& x : domain) {
        bool in = false;
        for (const auto& d : q) {
          std::vector<std::int64_t> t(x.coords);
          for (std::size_t i = 0; i < t.size(); ++i) t[i] -= d.coords[i];
          if (p.contains(t)) {
            in = true;
            break;
          }
        }
        hits += in ? 1 : 0;
      }
      const Rational observed(hits, p.cell_size());
      if (!fat.density || *fat.density != observed) {
        rec.failure(Json{{"group", to_json(g.spec())}, {"set", to_json(s)}, {"H", to_json(h)}},
                    "fatten density matches direct count " + observed.to_string(), "mismatch");
        continue;
      }
      if (observed == nominal) ++equal;
      if (observed < nominal)
        rec.failure(Json{{"group", to_json(g.spec())}, {"set", to_json(s)}, {"H", to_json(h)}},
                    "density(S + (H - H)) >= rho #(H - H) = " + nominal.to_string(), observed.to_string());
      else if (disjoint_translates && observed != nominal)
        rec.failure(Json{{"group", to_json(g.spec())}, {"set", to_json(s)}, {"H", to_json(h)}},
                    "equality under disjoint translates: " + nominal.to_string(), observed.to_string());
    }
  }
  rec.note(std::to_string(eligible) + " pairs met the hypothesis; equality in " + std::to_string(equal));
  return rec.finish();
}

}  // namespace

CheckResult check_fattening(const VerifyOptions& opt, std::int64_t set_count) {
  return fattening_walk(opt, set_count, "fattening", false);
}

CheckResult check_fattening_disjoint(const VerifyOptions& opt, std::int64_t set_count) {
  return fattening_walk(opt, set_count, "fattening-disjoint", true);
}

CheckResult check_partition(const VerifyOptions& opt, std::int64_t count) {
  Recorder rec("partition");
  Rng rng(opt.seed ^ 0x70617274ULL);
  for (std::int64_t i = 0; i < count; ++i) {
    rec.instance();
    const std::size_t dim = i % 3 == 2 ? 2 : 1;
    const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(dim)));
    const auto q = random_symmetric_window(rng, dim, dim == 1 ? 4 : 2, uniform_int(rng, 0, 3));
    SetSpec s = SetSpec::empty();
    Scope scope = PeriodScope{};
    std::vector<Element> pts;
    std::vector<std::int64_t> cell;
    if (i % 2 == 0) {
      s = SetSpec::periodic(random_periodic_set(rng, dim, 6, 36));
    } else {
      // Explicit set drawn from a window; the scope is that window.
      const std::int64_t side = dim == 1 ? 40 : 8;
      std::vector<Element> window, chosen;
      for (std::int64_t a = 0; a < side; ++a)
        for (std::int64_t b = 0; b < (dim == 1 ? 1 : side); ++b) {
          auto x = dim == 1 ? Element::of({a}) : Element::of({a, b});
          if (uniform_int(rng, 0, 1)) chosen.push_back(x);
          window.push_back(std::move(x));
        }
      s = SetSpec::explicit_set(chosen);
      scope = WindowScope{window};
    }
    const Json input{{"group", to_json(g.spec())}, {"set", to_json(s)}, {"Q", to_json(q)}};
    const auto cert = greedy_partition(g, s, q, scope);
    pts = std::holds_alternative<WindowScope>(scope) ? std::get<WindowScope>(scope).points : cell_points(cert.working_period);
    // Independent checks.
    std::string problem;
    if (!cert.verified) problem += " certificate";
    const std::int64_t k = local_count(g, s, q, scope);
    if (static_cast<std::int64_t>(cert.parts.size()) > k || cert.k_local != k) problem += " part-count";
    for (const auto& x : pts) {
      int owners = 0;
      for (const auto& part : cert.parts) owners += contains(g, part, x) ? 1 : 0;
      if (owners != (contains(g, s, x) ? 1 : 0)) {
        problem += " cover-or-overlap at " + to_string(x);
        break;
      }
    }
    for (std::size_t j = 0; j < cert.parts.size(); ++j) {
      const auto members = enumerate_in_window(g, cert.parts[j], pts);
      for (const auto& x : members)
        for (const auto& d : q)
          if (d != g.zero() && contains(g, cert.parts[j], g.add(x, d))) {
            problem += " part " + std::to_string(j) + " meets Q at " + to_string(x);
            goto next_part;
          }
    next_part:;
    }
    if (!problem.empty())
      rec.failure(input, "(S_j - S_j) ∩ Q = {0}, disjoint parts covering S, #parts <= local count",
                  "failed:" + problem);
  }
  return rec.finish();
}

CheckResult check_folner(const VerifyOptions& opt, std::int64_t count) {
  Recorder rec("folner");
  Rng rng(opt.seed ^ 0x666f6c6eULL);
  static const std::vector<Rational> eps1 = {Rational(1, 2), Rational(1, 3), Rational(1, 5), Rational(1, 10)};
  static const std::vector<Rational> eps2 = {Rational(1), Rational(1, 2), Rational(1, 3), Rational(1, 4)};
  for (std::int64_t i = 0; i < count; ++i) {
    rec.instance();
    const std::size_t dim = i % 2 == 0 ? 1 : 2;
    const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(dim)));
    std::set<Element> cset;
    const auto n = uniform_int(rng, 1, 6);
    for (std::int64_t k = 0; k < n; ++k) {
      std::vector<std::int64_t> x(dim);
      for (auto& v : x) v = uniform_int(rng, -4, 4);
      cset.insert(Element::of(x));
    }
    const std::vector<Element> c(cset.begin(), cset.end());
    const auto& pool = dim == 1 ? eps1 : eps2;
    const Rational eps = pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
    const auto w = folner_box(g, c, eps);
    std::set<Element> sum;
    for (const auto& a : c)
      for (const auto& b : w.points) sum.insert(g.add(a, b));
    const auto v = static_cast<std::int64_t>(w.points.size());
    const auto side = 2 * w.half_width + 1;
    std::int64_t expect_v = 1;
    for (std::size_t k = 0; k < dim; ++k) expect_v *= side;
    const auto cs = static_cast<std::int64_t>(sum.size());
    if (v != expect_v || cs != w.sumset_size || !(Rational(cs) < (Rational(1) + eps) * Rational(v)))
      rec.failure(Json{{"group", to_json(g.spec())}, {"C", to_json(c)}, {"epsilon", to_json(eps)}},
                  "#(C + V) < (1 + eps) #V for a centred box V",
                  "#V = " + std::to_string(v) + ", #(C + V) = " + std::to_string(cs));
  }
  return rec.finish();
}

CheckResult check_subadditivity(const Group& g, const std::vector<MeasureSpec>& nus, std::int64_t cap) {
  Recorder rec("subadditivity");
  rec.instance();
  if (nus.empty()) fail(ErrorKind::InvalidArgument, "subadditivity needs at least one measure");
  for (const auto& nu : nus) validate(g, nu);
  Json input{{"group", to_json(g.spec())}, {"measures", Json::array()}};
  for (const auto& nu : nus) input["measures"].push_back(to_json(nu));

  Rational total, sum_of;
  if (g.is_finite()) {
    std::vector<Rational> w(static_cast<std::size_t>(g.order()));
    for (const auto& nu : nus) {
      const auto wj = point_weights(g, nu);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += wj[i];
      sum_of += density_def1_finite_group(g, wj, cap);
    }
    total = density_def1_finite_group(g, w, cap);
  } else if (g.kind() == GroupKind::LatticeZd) {
    std::vector<PeriodicSet> sets;
    for (const auto& nu : nus) {
      const SetSpec* s = nu.underlying_set();
      const auto p = s ? as_periodic(*s) : std::nullopt;
      if (!p) fail(ErrorKind::Unsupported, "subadditivity on Z^d needs traces of periodic sets");
      sum_of += periodic_banach_oracle(g, SetSpec::periodic(*p)).density;
      sets.push_back(*p);
    }
    // ν_0 is periodic with the common period; its density is the cell mean.
    std::vector<std::int64_t> period = sets.front().period();
    for (const auto& p : sets) period = lcm_period(period, p.period());
    const auto cell = cell_points(period);
    std::int64_t hits = 0;
    for (const auto& x : cell)
      for (const auto& p : sets) hits += p.contains(x.coords) ? 1 : 0;
    total = Rational(hits, static_cast<std::int64_t>(cell.size()));
  } else {
    fail(ErrorKind::Unsupported, "subadditivity runs on finite groups or Z^d");
  }
  if (total > sum_of) rec.failure(input, "D(sum) <= " + sum_of.to_string(), total.to_string());
  return rec.finish();
}

CheckResult check_subadditivity_random(const VerifyOptions& opt, std::int64_t count) {
  Recorder rec("subadditivity");
  Rng rng(opt.seed ^ 0x73756261ULL);
  for (std::int64_t i = 0; i < count; ++i) {
    const Group g = make_group(random_small_group(rng));
    std::vector<MeasureSpec> nus;
    const auto n = uniform_int(rng, 2, 4);
    for (std::int64_t k = 0; k < n; ++k) nus.push_back(random_finite_measure(rng, g));
    auto one = check_subadditivity(g, nus, opt.cap);
    rec.instance();
    for (auto& f : one.failures) rec.failure(parse_json_text(f.input, "reproducer"), f.expected, f.observed);
  }
  return rec.finish();
}

PipelineResult syndetic_pipeline(const Group& g, const SetSpec& s, std::span<const Element> h) {
  auto stage = [](const char* name, auto&& body) -> decltype(body()) {
    try {
      return body();
    } catch (const Error& e) {
      fail(e.kind(), std::string("pipeline stage '") + name + "': " + e.what());
    }
  };
  PipelineResult out;
  out.group = g.spec();
  out.s = s;
  out.h.assign(h.begin(), h.end());

  std::optional<PeriodicSet> periodic;
  stage("input", [&] {
    validate(g, s);
    if (h.empty()) fail(ErrorKind::InvalidArgument, "H must be nonempty");
    for (const auto& x : h) g.require(x);
    if (g.is_finite()) {
      out.density = Rational(static_cast<std::int64_t>(enumerate_in_window(g, s, g.elements()).size()), g.order());
    } else {
      periodic = as_periodic(s);
      if (g.kind() != GroupKind::LatticeZd || !periodic)
        fail(ErrorKind::Unsupported, "the pipeline runs on finite groups or periodic subsets of Z^d");
      out.density = periodic->density();
    }
    if (out.density.is_zero()) fail(ErrorKind::Precondition, "S has zero density");
    return 0;
  });
  out.q = difference_points(g, h);

  out.partition = stage("partition", [&] {
    auto cert = greedy_partition(g, s, out.q, PeriodScope{});
    if (!cert.verified) fail(ErrorKind::Precondition, "partition certificate does not verify");
    return cert;
  });

  stage("selection", [&] {
    const auto n = static_cast<std::int64_t>(out.partition.parts.size());
    for (std::size_t j = 0; j < out.partition.parts.size(); ++j) {
      const auto& part = out.partition.parts[j];
      const Rational rho = g.is_finite()
                               ? Rational(static_cast<std::int64_t>(enumerate_in_window(g, part, g.elements()).size()), g.order())
                               : as_periodic(part)->density();
      if (j == 0 || rho > out.chosen_density) {
        out.chosen = j;
        out.chosen_density = rho;
      }
    }
    if (n == 0 || out.chosen_density < out.density / Rational(n))
      fail(ErrorKind::Precondition, "no part reaches density rho/n");
    return 0;
  });

  out.fattened = stage("fattening", [&] { return fatten(g, out.partition.parts[out.chosen], h); });

  out.cover = stage("cover", [&] {
    auto cert = greedy_packing_complement(g, out.fattened.fattened);
    if (!cert.verified) fail(ErrorKind::Precondition, "cover certificate does not verify");
    return cert;
  });

  stage("final-check", [&] {
    std::set<Element> t;
    for (const auto& b : out.cover.translates)
      for (const auto& x : out.q)
        for (const auto& y : out.q) t.insert(g.add(g.add(b, x), y));
    out.final_translates.assign(t.begin(), t.end());
    std::vector<Element> scope;
    if (g.is_finite()) {
      out.scope = g.spec();
      scope = g.elements();
    } else {
      auto period = out.partition.working_period;
      period = lcm_period(period, out.cover.scope.moduli);
      out.scope = GroupSpec::finite(period);
      scope = cell_points(period);
    }
    // x is covered when x - t lies in S - S for some translate t.
    const SetSpec diff = difference_set(g, s);
    out.final_verified = std::all_of(scope.begin(), scope.end(), [&](const Element& x) {
      return std::any_of(out.final_translates.begin(), out.final_translates.end(),
                         [&](const Element& y) { return contains(g, diff, g.sub(x, y)); });
    });
    if (!out.final_verified) fail(ErrorKind::Precondition, "B + Q + Q + (S - S) misses part of the scope");
    return 0;
  });
  return out;
}

CheckResult check_pipeline(const VerifyOptions& opt, std::int64_t count) {
  Recorder rec("pipeline");
  auto run = [&](const Group& g, const SetSpec& s, const std::vector<Element>& h) {
    rec.instance();
    const Json input{{"group", to_json(g.spec())}, {"set", to_json(s)}, {"H", to_json(h)}};
    try {
      const auto r = syndetic_pipeline(g, s, h);
      if (!r.final_verified) rec.failure(input, "final cover verified", "not verified");
    } catch (const Error& e) {
      rec.failure(input, "pipeline completes", e.what());
    }
  };
  const Group z = make_group(GroupSpec::lattice(1));
  run(z, SetSpec::periodic({5}, {{0}, {1}}), {Element::of({0}), Element::of({1})});
  run(z, SetSpec::periodic({1}, {{0}}), {Element::of({0})});
  run(z, SetSpec::periodic({10}, {{0}, {1}, {3}}), {Element::of({0})});
  Rng rng(opt.seed ^ 0x7069706cULL);
  for (std::int64_t i = 0; i < count; ++i) {
    const std::size_t dim = i % 4 == 3 ? 2 : 1;
    const Group g = make_group(GroupSpec::lattice(static_cast<std::int64_t>(dim)));
    const auto p = random_periodic_set(rng, dim, dim == 1 ? 12 : 5, 25);
    std::set<Element> hs;
    const auto n = uniform_int(rng, 1, 3);
    for (std::int64_t k = 0; k < n; ++k) {
      std::vector<std::int64_t> x(dim);
      for (auto& v : x) v = uniform_int(rng, 0, 2);
      hs.insert(Element::of(x));
    }
    run(g, SetSpec::periodic(p), {hs.begin(), hs.end()});
  }
  return rec.finish();
}

CheckResult check_counterexamples(const VerifyOptions& opt) {
  Recorder rec("counterexamples");
  const auto ratio_at = [](const DensityReport& rep, std::int64_t n) { return rep.records.at(static_cast<std::size_t>(n - 1)).ratio; };

  rec.instance();
  const auto one = SetSpec::farey_bands({{2, 24}});
  const auto rep = farey_upper_density(one, 1, 24);
  if (ratio_at(rep, 2) != Rational(0) || ratio_at(rep, 24) != Rational(178, 180))
    rec.failure(Json{{"set", to_json(one)}}, "ratio(2) = 0 and ratio(24) = 89/90",
                ratio_at(rep, 2).to_string() + ", " + ratio_at(rep, 24).to_string());
  if (!(ratio_at(rep, 24) > opt.high_threshold))
    rec.failure(Json{{"set", to_json(one)}}, "ratio(24) above " + opt.high_threshold.to_string(),
                ratio_at(rep, 24).to_string());

  rec.instance();
  const std::int64_t far = std::max<std::int64_t>(opt.far_band, 25);
  const auto two = SetSpec::farey_bands({{2, 24}, {far, 2 * far}});
  const auto rep2 = farey_upper_density(two, 1, 2 * far);
  std::optional<std::int64_t> low_at, high_at;
  for (std::int64_t n = 25; n <= far && !low_at; ++n)
    if (ratio_at(rep2, n) < opt.low_threshold) low_at = n;
  for (std::int64_t n = 1; n <= 2 * far && !high_at; ++n)
    if (ratio_at(rep2, n) > opt.high_threshold) high_at = n;
  if (!low_at || !high_at)
    rec.failure(Json{{"set", to_json(two)}},
                "ratio below " + opt.low_threshold.to_string() + " at some n and above " +
                    opt.high_threshold.to_string() + " at another",
                std::string(low_at ? "" : "no low point") + (high_at ? "" : " no high point"));
  else
    rec.note("two bands: ratio(" + std::to_string(*high_at) + ") = " + ratio_at(rep2, *high_at).to_string() +
             ", ratio(" + std::to_string(*low_at) + ") = " + ratio_at(rep2, *low_at).to_string());

  rec.instance();
  const auto none = farey_upper_density(SetSpec::farey_bands({}), 1, 24);
  if (none.max_ratio != Rational(0)) rec.failure(Json{{"set", to_json(SetSpec::farey_bands({}))}}, "all ratios 0",
                                                 none.max_ratio.to_string());
  rec.note("the real-line example {n + 1/n} ∪ N lives in a continuous group and is not checked here");
  return rec.finish();
}

const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> all = {
      {"finite-exactness", true,
       [](const VerifyOptions& o) {
         std::vector<GroupSpec> gs;
         for (std::int64_t n = 1; n <= 8; ++n) gs.push_back(GroupSpec::finite({n}));
         gs.push_back(GroupSpec::finite({2, 2}));
         gs.push_back(GroupSpec::finite({2, 3}));
         gs.push_back(GroupSpec::finite({2, 4}));
         return check_finite_exactness(gs, o.cap);
       }},
      {"delta-ge-D", true, [](const VerifyOptions& o) { return check_delta_ge_D(o); }},
      {"cover", true, [](const VerifyOptions& o) { return check_cover_exhaustive(std::min<std::int64_t>(10, o.cap)); }},
      {"erdos-sarkozy", true, [](const VerifyOptions& o) { return check_erdos_sarkozy(o, 40); }},
      {"shape-invariance", true, [](const VerifyOptions& o) { return check_shape_invariance(o, 50); }},
      {"packing", true, [](const VerifyOptions& o) { return check_packing_bound(o, 60); }},
      {"fattening", false, [](const VerifyOptions& o) { return check_fattening(o, 60); }},
      {"fattening-disjoint", true, [](const VerifyOptions& o) { return check_fattening_disjoint(o, 60); }},
      {"partition", true, [](const VerifyOptions& o) { return check_partition(o, 100); }},
      {"folner", true, [](const VerifyOptions& o) { return check_folner(o, 20); }},
      {"subadditivity", true, [](const VerifyOptions& o) { return check_subadditivity_random(o, 100); }},
      {"pipeline", true, [](const VerifyOptions& o) { return check_pipeline(o, 20); }},
      {"counterexamples", true, [](const VerifyOptions& o) { return check_counterexamples(o); }},
  };
  return all;
}

std::vector<CheckResult> run_suites(const std::string& name, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  for (const auto& s : suites())
    if (name == s.name || (name == "all" && s.in_all)) out.push_back(s.run(opt));
  if (out.empty()) {
    std::string known;
    for (const auto& s : suites()) known += " " + s.name;
    fail(ErrorKind::InvalidArgument, "unknown suite '" + name + "'; known: all" + known);
  }
  return out;
}

}  // namespace banach
