#include "banach/density.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "banach/error.hpp"

namespace banach {

namespace {

constexpr std::int64_t kHardCap = 20;

struct ScaledWeights {
  std::vector<std::int64_t> mass;  // mass of each bitmask subset, times `scale`
  std::int64_t scale = 1;
};

ScaledWeights scaled_subset_masses(std::span<const Rational> weights) {
  ScaledWeights out;
  for (const auto& w : weights) {
    if (w < Rational(0)) fail(ErrorKind::InvalidSpec, "negative point weight");
    out.scale = std::lcm(out.scale, w.den());
  }
  std::vector<std::int64_t> ints;
  for (const auto& w : weights) ints.push_back((w * Rational(out.scale)).num());
  const std::size_t full = std::size_t{1} << weights.size();
  out.mass.assign(full, 0);
  for (std::size_t s = 1; s < full; ++s) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (s >> i & 1) total += ints[i];
    out.mass[s] = total;
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> addition_table(const Group& g) {
  const auto elems = g.elements();
  const std::size_t n = elems.size();
  std::vector<std::vector<std::uint32_t>> table(n, std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = static_cast<std::uint32_t>(g.index_of(g.add(elems[i], elems[j])));
  return table;
}

void check_cap(const Group& g, std::int64_t cap) {
  if (!g.is_finite()) fail(ErrorKind::Unsupported, "brute-force densities need a finite group");
  if (cap > kHardCap) fail(ErrorKind::Resource, "brute-force cap above " + std::to_string(kHardCap));
  if (g.order() > cap)
    fail(ErrorKind::Resource, "group order " + std::to_string(g.order()) + " exceeds brute-force cap " + std::to_string(cap));
}

}  // namespace

void validate(const Group& g, const WindowFamily& family) {
  if (g.kind() != GroupKind::LatticeZd) fail(ErrorKind::Domain, "window families live on Z^d");
  if (family.scales.empty()) fail(ErrorKind::InvalidSpec, "window family needs at least one scale");
  for (std::size_t i = 0; i < family.scales.size(); ++i) {
    if (family.scales[i] < 1) fail(ErrorKind::InvalidSpec, "scales must be positive");
    if (i > 0 && family.scales[i] <= family.scales[i - 1]) fail(ErrorKind::InvalidSpec, "scales must be increasing");
  }
  if (const auto* r = std::get_if<BoundedRange>(&family.translates)) {
    if (r->lo.size() != g.rank() || r->hi.size() != g.rank())
      fail(ErrorKind::InvalidSpec, "translate range dimension mismatch");
    for (std::size_t i = 0; i < r->lo.size(); ++i)
      if (r->lo[i] > r->hi[i]) fail(ErrorKind::InvalidSpec, "translate range is empty");
  }
  LatticeShape(family.shape, g.rank());
}

void summarize(DensityReport& report) {
  report.max_ratio = Rational(0);
  report.tail_max_ratio = Rational(0);
  const std::size_t n = report.records.size();
  for (std::size_t i = 0; i < n; ++i) {
    report.max_ratio = std::max(report.max_ratio, report.records[i].ratio);
    if (i >= n / 2) report.tail_max_ratio = std::max(report.tail_max_ratio, report.records[i].ratio);
  }
}

DensityReport upper_density_sequence(const Group& g, const SetSpec& a, const std::vector<SubgroupTerm>& chain) {
  validate(g, a);
  DensityReport report;
  report.translate_search = "none";
  std::vector<Element> previous;
  for (const auto& term : chain) {
    if (term.elements.empty()) fail(ErrorKind::InvalidArgument, "empty term in subgroup chain");
    std::vector<Element> sorted = term.elements;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (!std::includes(sorted.begin(), sorted.end(), previous.begin(), previous.end()))
      fail(ErrorKind::InvalidArgument, "subgroup chain is not increasing at term " + std::to_string(term.label));
    const auto hits = static_cast<std::int64_t>(enumerate_in_window(g, a, sorted).size());
    const auto size = static_cast<std::int64_t>(sorted.size());
    report.records.push_back({term.label, size, std::nullopt, Rational(hits), Rational(hits, size)});
    previous = std::move(sorted);
  }
  summarize(report);
  return report;
}

DensityReport farey_upper_density(const SetSpec& a, std::int64_t n_lo, std::int64_t n_hi) {
  if (n_lo < 1 || n_hi < n_lo) fail(ErrorKind::InvalidArgument, "Farey range needs 1 <= n_lo <= n_hi");
  const Group torus(GroupSpec::rational_torus());
  std::vector<SubgroupTerm> chain;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) chain.push_back({n, farey_subgroup(n)});
  return upper_density_sequence(torus, a, chain);
}

DensityReport uniform_upper_density_windows(const Group& g, const MeasureSpec& nu, const WindowFamily& family) {
  validate(g, family);
  validate(g, nu);
  const SetSpec* set = nu.underlying_set();
  if (set && uses_farey_bands(*set)) fail(ErrorKind::Domain, "Farey bands are not subsets of Z^d");
  const std::size_t d = g.rank();
  const LatticeShape shape(family.shape, d);
  const std::optional<PeriodicSet> periodic = set ? as_periodic(*set) : std::nullopt;

  DensityReport report;
  report.exactness = Exactness::Estimate;
  if (periodic) report.exact_value = periodic->density();

  if (std::holds_alternative<FullPeriod>(family.translates)) {
    if (!periodic)
      fail(ErrorKind::InvalidArgument,
           "full-period translate search needs a periodic set; specify a bounded translate range");
    report.translate_search = "full-period";
    const auto cell = static_cast<std::size_t>(periodic->cell_size());
    std::vector<std::vector<std::int64_t>> residue(cell);
    for (std::size_t i = 0; i < cell; ++i) residue[i] = periodic->residue_at(i);
    std::vector<std::int64_t> hist(cell);
    std::vector<std::int64_t> shifted(d);
    for (const auto r : family.scales) {
      std::fill(hist.begin(), hist.end(), 0);
      std::int64_t size = 0;
      shape.for_each_point(r, [&](std::span<const std::int64_t> x) {
        ++hist[periodic->residue_index(x)];
        ++size;
      });
      std::int64_t best = -1;
      std::size_t best_x = 0;
      for (std::size_t x = 0; x < cell; ++x) {
        std::int64_t count = 0;
        for (std::size_t b = 0; b < cell; ++b) {
          if (hist[b] == 0) continue;
          for (std::size_t i = 0; i < d; ++i) shifted[i] = residue[b][i] + residue[x][i];
          if (periodic->contains(shifted)) count += hist[b];
        }
        if (count > best) {
          best = count;
          best_x = x;
        }
      }
      report.records.push_back({r, size, Element::of(residue[best_x]), Rational(best), Rational(best, size)});
    }
  } else {
    const auto& range = std::get<BoundedRange>(family.translates);
    report.translate_search = "bounded";
    for (std::size_t i = 0; i < d; ++i)
      report.translate_search += (i ? "x" : " ") + std::string("[") + std::to_string(range.lo[i]) + "," +
                                 std::to_string(range.hi[i]) + "]";
    for (const auto r : family.scales) {
      const auto window = shape.points(r);
      const auto size = static_cast<std::int64_t>(window.size());
      std::optional<Rational> best;
      Element best_x;
      std::vector<std::int64_t> x = range.lo;
      std::vector<Element> moved(window.size());
      while (true) {
        const Element t = Element::of(x);
        for (std::size_t k = 0; k < window.size(); ++k) moved[k] = g.add(window[k], t);
        const Rational m = mass(g, nu, moved);
        if (!best || m > *best) {
          best = m;
          best_x = t;
        }
        std::size_t i = d;
        while (i-- > 0) {
          if (x[i] < range.hi[i]) {
            ++x[i];
            break;
          }
          x[i] = range.lo[i];
        }
        if (i == static_cast<std::size_t>(-1)) break;
      }
      report.records.push_back({r, size, best_x, *best, *best / Rational(size)});
    }
  }
  summarize(report);
  return report;
}

Rational density_def1_finite_group(const Group& g, const MeasureSpec& nu, std::int64_t cap) {
  check_cap(g, cap);
  const auto w = point_weights(g, nu);
  return density_def1_finite_group(g, w, cap);
}

Rational density_def1_finite_group(const Group& g, std::span<const Rational> weights, std::int64_t cap) {
  check_cap(g, cap);
  const std::size_t n = static_cast<std::size_t>(g.order());
  if (weights.size() != n) fail(ErrorKind::InvalidArgument, "weight vector does not match group order");
  const auto table = addition_table(g);
  const auto sw = scaled_subset_masses(weights);
  const std::size_t full = std::size_t{1} << n;

  // best_*[C] tracks sup over V seen so far of mass(V) / #(C+V).
  std::vector<std::int64_t> best_mass(full, -1), best_size(full, 1);
  std::vector<std::uint32_t> translated(n), sumset(full);
  for (std::size_t v = 1; v < full; ++v) {
    for (std::size_t c = 0; c < n; ++c) {
      std::uint32_t t = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (v >> i & 1) t |= std::uint32_t{1} << table[i][c];
      translated[c] = t;
    }
    const std::int64_t mv = sw.mass[v];
    sumset[0] = 0;
    for (std::size_t c = 1; c < full; ++c) {
      sumset[c] = sumset[c & (c - 1)] | translated[static_cast<std::size_t>(std::countr_zero(c))];
      const std::int64_t k = std::popcount(sumset[c]);
      if (compare_fractions(mv, k, best_mass[c], best_size[c]) > 0) {
        best_mass[c] = mv;
        best_size[c] = k;
      }
    }
  }
  std::size_t arg = 1;
  for (std::size_t c = 2; c < full; ++c)
    if (compare_fractions(best_mass[c], best_size[c], best_mass[arg], best_size[arg]) < 0) arg = c;
  return Rational(best_mass[arg], best_size[arg]) / Rational(sw.scale);
}

Rational density_def2_finite_group(const Group& g, const MeasureSpec& nu, std::int64_t cap) {
  check_cap(g, cap);
  const auto w = point_weights(g, nu);
  return density_def2_finite_group(g, w, cap);
}

Rational density_def2_finite_group(const Group& g, std::span<const Rational> weights, std::int64_t cap) {
  check_cap(g, cap);
  const std::size_t n = static_cast<std::size_t>(g.order());
  if (weights.size() != n) fail(ErrorKind::InvalidArgument, "weight vector does not match group order");
  const auto table = addition_table(g);
  const auto sw = scaled_subset_masses(weights);
  const std::size_t full = std::size_t{1} << n;

  std::optional<std::pair<std::int64_t, std::int64_t>> inf;
  std::vector<std::uint32_t> point_plus_f(n), sumset(full);
  for (std::size_t f = 1; f < full; ++f) {
    // F + v for each single point v.
    for (std::size_t v = 0; v < n; ++v) {
      std::uint32_t t = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (f >> j & 1) t |= std::uint32_t{1} << table[v][j];
      point_plus_f[v] = t;
    }
    std::int64_t sup_mass = -1, sup_size = 1;
    sumset[0] = 0;
    for (std::size_t v = 1; v < full; ++v) {
      sumset[v] = sumset[v & (v - 1)] | point_plus_f[static_cast<std::size_t>(std::countr_zero(v))];
      const std::int64_t k = std::popcount(sumset[v]);
      if (compare_fractions(sw.mass[v], k, sup_mass, sup_size) > 0) {
        sup_mass = sw.mass[v];
        sup_size = k;
      }
    }
    if (!inf || compare_fractions(sup_mass, sup_size, inf->first, inf->second) < 0) inf = {sup_mass, sup_size};
  }
  return Rational(inf->first, inf->second) / Rational(sw.scale);
}

OracleResult periodic_banach_oracle(const Group& g, const SetSpec& a) {
  validate(g, a);
  const auto p = as_periodic(a);
  if (!p) fail(ErrorKind::Domain, "periodic oracle needs a periodic set");
  OracleResult out;
  out.density = p->density();

  const std::size_t d = p->dimension();
  std::vector<std::int64_t> side(d);
  std::int64_t window = 1;
  for (std::size_t i = 0; i < d; ++i) {
    side[i] = 3 * p->period()[i];
    window *= side[i];
  }
  std::int64_t best = -1;
  std::vector<std::int64_t> pt(d);
  for (std::int64_t x = 0; x < p->cell_size(); ++x) {
    const auto shift = p->residue_at(static_cast<std::size_t>(x));
    std::int64_t count = 0;
    for (std::int64_t w = 0; w < window; ++w) {
      auto rest = w;
      for (std::size_t i = d; i-- > 0;) {
        pt[i] = rest % side[i] + shift[i];
        rest /= side[i];
      }
      count += p->contains(pt) ? 1 : 0;
    }
    best = std::max(best, count);
  }
  out.window_scan = Rational(best, window);
  out.consistent = out.window_scan == out.density;
  return out;
}

Rational inf_sup_relaxation(const Group& g, const MeasureSpec& nu, const std::vector<std::vector<Element>>& cs,
                            const std::vector<std::vector<Element>>& vs) {
  if (cs.empty() || vs.empty()) fail(ErrorKind::InvalidArgument, "relaxation needs nonempty families");
  std::optional<Rational> inf;
  for (const auto& c : cs) {
    if (c.empty()) fail(ErrorKind::InvalidArgument, "empty translate set");
    std::optional<Rational> sup;
    for (const auto& v : vs) {
      if (v.empty()) fail(ErrorKind::InvalidArgument, "empty window");
      std::set<Element> sum;
      for (const auto& x : c)
        for (const auto& y : v) sum.insert(g.add(x, y));
      std::vector<Element> vv(v.begin(), v.end());
      std::sort(vv.begin(), vv.end());
      vv.erase(std::unique(vv.begin(), vv.end()), vv.end());
      const Rational ratio = mass(g, nu, vv) / Rational(static_cast<std::int64_t>(sum.size()));
      if (!sup || ratio > *sup) sup = ratio;
    }
    if (!inf || *sup < *inf) inf = sup;
  }
  return *inf;
}

std::vector<std::int64_t> period_aligned_scales(const std::vector<std::int64_t>& period, std::int64_t min_top) {
  std::int64_t l = 1;
  for (auto m : period) l = std::lcm(l, m);
  std::vector<std::int64_t> out;
  for (std::int64_t r = l;; r += l) {
    out.push_back(r);
    if (r >= min_top) break;
  }
  return out;
}

}  // namespace banach
