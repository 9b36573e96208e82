#include "banach/sets.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "banach/error.hpp"

namespace banach {

namespace {

constexpr std::int64_t kMaxCellSize = std::int64_t{1} << 24;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Element> pairwise_differences(const Group& g, const std::vector<Element>& pts) {
  std::set<Element> out;
  for (const auto& a : pts)
    for (const auto& b : pts) out.insert(g.sub(a, b));
  return {out.begin(), out.end()};
}

}  // namespace

PeriodicSet::PeriodicSet(std::vector<std::int64_t> period, std::vector<std::vector<std::int64_t>> residues)
    : period_(std::move(period)), residues_(std::move(residues)) {
  if (period_.empty()) fail(ErrorKind::InvalidSpec, "periodic set needs a period vector");
  for (auto m : period_) {
    if (m < 1) fail(ErrorKind::InvalidSpec, "period entries must be >= 1");
    if (__builtin_mul_overflow(cell_size_, m, &cell_size_) || cell_size_ > kMaxCellSize)
      fail(ErrorKind::Resource, "period cell too large");
  }
  for (const auto& r : residues_) {
    if (r.size() != period_.size()) fail(ErrorKind::InvalidSpec, "residue arity does not match period");
    for (std::size_t i = 0; i < r.size(); ++i)
      if (r[i] < 0 || r[i] >= period_[i]) fail(ErrorKind::InvalidSpec, "residue not reduced modulo the period");
  }
  std::sort(residues_.begin(), residues_.end());
  residues_.erase(std::unique(residues_.begin(), residues_.end()), residues_.end());
  member_.assign(static_cast<std::size_t>(cell_size_), 0);
  for (const auto& r : residues_) member_[residue_index(r)] = 1;
}

std::size_t PeriodicSet::residue_index(std::span<const std::int64_t> x) const {
  if (x.size() != period_.size()) fail(ErrorKind::Domain, "point arity does not match period");
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) idx = idx * period_[i] + floor_mod(x[i], period_[i]);
  return static_cast<std::size_t>(idx);
}

std::vector<std::int64_t> PeriodicSet::residue_at(std::size_t index) const {
  std::vector<std::int64_t> r(period_.size());
  auto rest = static_cast<std::int64_t>(index);
  for (std::size_t i = r.size(); i-- > 0;) {
    r[i] = rest % period_[i];
    rest /= period_[i];
  }
  return r;
}

PeriodicSet PeriodicSet::refined(const std::vector<std::int64_t>& new_period) const {
  if (new_period.size() != period_.size()) fail(ErrorKind::InvalidArgument, "refined period has wrong arity");
  for (std::size_t i = 0; i < period_.size(); ++i)
    if (new_period[i] < 1 || new_period[i] % period_[i] != 0)
      fail(ErrorKind::InvalidArgument, "refined period must be a multiple of the original");
  if (new_period == period_) return *this;
  PeriodicSet probe(new_period, {});
  std::vector<std::vector<std::int64_t>> res;
  for (std::int64_t i = 0; i < probe.cell_size(); ++i) {
    auto r = probe.residue_at(static_cast<std::size_t>(i));
    if (contains(r)) res.push_back(std::move(r));
  }
  return PeriodicSet(new_period, std::move(res));
}

SetSpec SetSpec::explicit_set(std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  return SetSpec(Explicit{std::move(elements)});
}

SetSpec SetSpec::periodic(std::vector<std::int64_t> period, std::vector<std::vector<std::int64_t>> residues) {
  return SetSpec(PeriodicSet(std::move(period), std::move(residues)));
}

SetSpec SetSpec::periodic(PeriodicSet set) { return SetSpec(std::move(set)); }

SetSpec SetSpec::farey_bands(std::vector<Band> bands) {
  std::sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < bands.size(); ++i) {
    if (bands[i].lo < 0 || bands[i].lo >= bands[i].hi) fail(ErrorKind::InvalidSpec, "band needs 0 <= lo < hi");
    if (i > 0 && bands[i].lo < bands[i - 1].hi) fail(ErrorKind::InvalidSpec, "Farey bands overlap");
  }
  return SetSpec(FareyBands{std::move(bands)});
}

SetSpec SetSpec::union_of(std::vector<SetSpec> members) { return SetSpec(Union{std::move(members)}); }

void validate(const Group& g, const SetSpec& a) {
  std::visit(overloaded{
                 [&](const SetSpec::Explicit& e) {
                   for (const auto& x : e.elements) g.require(x);
                 },
                 [&](const PeriodicSet& p) {
                   if (g.kind() != GroupKind::LatticeZd || p.dimension() != g.rank())
                     fail(ErrorKind::Domain, "periodic residues are only valid on Z^d of matching dimension");
                 },
                 [&](const SetSpec::FareyBands&) {
                   if (g.kind() != GroupKind::RationalTorus)
                     fail(ErrorKind::Domain, "Farey bands are only valid on Q/Z, not " + g.describe());
                 },
                 [&](const SetSpec::Union& u) {
                   for (const auto& m : u.members) validate(g, m);
                 },
             },
             a.variant());
}

bool contains(const Group& g, const SetSpec& a, const Element& x) {
  g.require(x);
  return std::visit(overloaded{
                        [&](const SetSpec::Explicit& e) {
                          return std::binary_search(e.elements.begin(), e.elements.end(), x);
                        },
                        [&](const PeriodicSet& p) {
                          if (p.dimension() != x.coords.size())
                            fail(ErrorKind::Domain, "element arity does not match periodic set");
                          return p.contains(x.coords);
                        },
                        [&](const SetSpec::FareyBands& f) {
                          if (!x.fraction) fail(ErrorKind::Domain, "Farey bands need an element of Q/Z");
                          const auto q = x.denominator();
                          return std::any_of(f.bands.begin(), f.bands.end(),
                                             [q](const Band& b) { return b.lo < q && q <= b.hi; });
                        },
                        [&](const SetSpec::Union& u) {
                          return std::any_of(u.members.begin(), u.members.end(),
                                             [&](const SetSpec& m) { return contains(g, m, x); });
                        },
                    },
                    a.variant());
}

std::vector<Element> enumerate_in_window(const Group& g, const SetSpec& a, std::span<const Element> window) {
  std::vector<Element> out;
  for (const auto& x : window)
    if (contains(g, a, x)) out.push_back(x);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool uses_farey_bands(const SetSpec& a) {
  return std::visit(overloaded{
                        [](const SetSpec::FareyBands&) { return true; },
                        [](const SetSpec::Union& u) {
                          return std::any_of(u.members.begin(), u.members.end(), uses_farey_bands);
                        },
                        [](const auto&) { return false; },
                    },
                    a.variant());
}

std::vector<std::int64_t> lcm_period(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
  if (a.size() != b.size()) fail(ErrorKind::Domain, "periods of different dimension");
  std::vector<std::int64_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::lcm(a[i], b[i]);
  return out;
}

std::optional<PeriodicSet> as_periodic(const SetSpec& a) {
  if (const auto* p = std::get_if<PeriodicSet>(&a.variant())) return *p;
  const auto* u = std::get_if<SetSpec::Union>(&a.variant());
  if (!u || u->members.empty()) return std::nullopt;
  std::vector<PeriodicSet> parts;
  for (const auto& m : u->members) {
    auto p = as_periodic(m);
    if (!p) return std::nullopt;
    parts.push_back(std::move(*p));
  }
  auto period = parts.front().period();
  for (const auto& p : parts) period = lcm_period(period, p.period());
  std::set<std::vector<std::int64_t>> res;
  for (const auto& p : parts) {
    const auto r = p.refined(period);
    res.insert(r.residues().begin(), r.residues().end());
  }
  return PeriodicSet(period, {res.begin(), res.end()});
}

namespace {

std::optional<std::vector<Element>> explicit_points(const SetSpec& a) {
  if (const auto* e = std::get_if<SetSpec::Explicit>(&a.variant())) return e->elements;
  const auto* u = std::get_if<SetSpec::Union>(&a.variant());
  if (!u) return std::nullopt;
  std::set<Element> all;
  for (const auto& m : u->members) {
    auto pts = explicit_points(m);
    if (!pts) return std::nullopt;
    all.insert(pts->begin(), pts->end());
  }
  return std::vector<Element>(all.begin(), all.end());
}

SetSpec periodic_difference(const PeriodicSet& p) {
  std::set<std::vector<std::int64_t>> diffs;
  for (const auto& r : p.residues())
    for (const auto& s : p.residues()) {
      std::vector<std::int64_t> d(r.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = floor_mod(r[i] - s[i], p.period()[i]);
      diffs.insert(std::move(d));
    }
  return SetSpec::periodic(p.period(), {diffs.begin(), diffs.end()});
}

}  // namespace

SetSpec difference_set(const Group& g, const SetSpec& a) {
  validate(g, a);
  if (uses_farey_bands(a)) fail(ErrorKind::Unsupported, "difference set of Farey bands is not supported");
  if (auto p = as_periodic(a)) return periodic_difference(*p);
  if (auto pts = explicit_points(a)) return SetSpec::explicit_set(pairwise_differences(g, *pts));
  fail(ErrorKind::Unsupported, "difference set of a mixed union needs a finite scope");
}

SetSpec difference_set(const Group& g, const SetSpec& a, std::span<const Element> scope) {
  validate(g, a);
  if (uses_farey_bands(a)) fail(ErrorKind::Unsupported, "difference set of Farey bands is not supported");
  if (auto p = as_periodic(a)) return periodic_difference(*p);
  return SetSpec::explicit_set(pairwise_differences(g, enumerate_in_window(g, a, scope)));
}

SetSpec translate(const Group& g, const SetSpec& a, const Element& t) {
  g.require(t);
  return std::visit(overloaded{
                        [&](const SetSpec::Explicit& e) {
                          std::vector<Element> out;
                          out.reserve(e.elements.size());
                          for (const auto& x : e.elements) out.push_back(g.add(x, t));
                          return SetSpec::explicit_set(std::move(out));
                        },
                        [&](const PeriodicSet& p) {
                          std::vector<std::vector<std::int64_t>> res;
                          for (auto r : p.residues()) {
                            for (std::size_t i = 0; i < r.size(); ++i) r[i] = floor_mod(r[i] + t.coords[i], p.period()[i]);
                            res.push_back(std::move(r));
                          }
                          return SetSpec::periodic(p.period(), std::move(res));
                        },
                        [&](const SetSpec::FareyBands&) -> SetSpec {
                          fail(ErrorKind::Unsupported, "translates of Farey bands are not supported");
                        },
                        [&](const SetSpec::Union& u) {
                          std::vector<SetSpec> out;
                          for (const auto& m : u.members) out.push_back(translate(g, m, t));
                          return SetSpec::union_of(std::move(out));
                        },
                    },
                    a.variant());
}

MeasureSpec MeasureSpec::point_masses(std::vector<std::pair<Element, Rational>> masses) {
  std::sort(masses.begin(), masses.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<Element, Rational>> merged;
  for (auto& [x, w] : masses) {
    if (w < Rational(0)) fail(ErrorKind::InvalidSpec, "point mass weights must be nonnegative");
    if (!merged.empty() && merged.back().first == x)
      merged.back().second += w;
    else
      merged.emplace_back(std::move(x), w);
  }
  std::erase_if(merged, [](const auto& p) { return p.second.is_zero(); });
  return MeasureSpec(PointMasses{std::move(merged)});
}

const SetSpec* MeasureSpec::underlying_set() const noexcept {
  if (const auto* t = std::get_if<TraceOfHaar>(&v_)) return &t->set;
  if (const auto* c = std::get_if<CountingOnSet>(&v_)) return &c->set;
  return nullptr;
}

void validate(const Group& g, const MeasureSpec& nu) {
  if (const auto* s = nu.underlying_set()) return validate(g, *s);
  for (const auto& [x, w] : std::get<MeasureSpec::PointMasses>(nu.variant()).masses) g.require(x);
}

Rational mass(const Group& g, const MeasureSpec& nu, std::span<const Element> window) {
  if (const auto* s = nu.underlying_set()) {
    std::int64_t count = 0;
    for (const auto& x : window) count += contains(g, *s, x) ? 1 : 0;
    return Rational(count);
  }
  const auto& masses = std::get<MeasureSpec::PointMasses>(nu.variant()).masses;
  Rational total;
  for (const auto& x : window) {
    g.require(x);
    auto it = std::lower_bound(masses.begin(), masses.end(), x,
                               [](const auto& p, const Element& e) { return p.first < e; });
    if (it != masses.end() && it->first == x) total += it->second;
  }
  return total;
}

std::vector<Rational> point_weights(const Group& g, const MeasureSpec& nu) {
  validate(g, nu);
  const auto n = static_cast<std::size_t>(g.order());
  std::vector<Rational> w(n);
  if (const auto* s = nu.underlying_set()) {
    for (std::size_t i = 0; i < n; ++i)
      if (contains(g, *s, g.element_at(i))) w[i] = Rational(1);
    return w;
  }
  for (const auto& [x, weight] : std::get<MeasureSpec::PointMasses>(nu.variant()).masses) w[g.index_of(x)] += weight;
  return w;
}

}  // namespace banach
