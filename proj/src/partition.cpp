#include "banach/partition.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "banach/error.hpp"

namespace banach {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::vector<Element> nonzero(const Group& g, std::span<const Element> q) {
  std::vector<Element> out;
  const Element z = g.zero();
  for (const auto& x : q)
    if (x != z) out.push_back(x);
  return out;
}

// Period of the working quotient: least multiple of m_i above 2 max|q_i|.
std::vector<std::int64_t> working_period(const PeriodicSet& p, std::span<const Element> q) {
  std::vector<std::int64_t> out = p.period();
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::int64_t reach = 0;
    for (const auto& x : q) reach = std::max(reach, x.coords[i] < 0 ? -x.coords[i] : x.coords[i]);
    const std::int64_t need = 2 * reach + 1;
    const std::int64_t m = p.period()[i];
    out[i] = ((need + m - 1) / m) * m;
  }
  return out;
}

// Points of the scope that S restricted to; in period mode, one cell of `period`.
std::vector<Element> scope_points(const Group& g, const Scope& scope, const std::vector<std::int64_t>& period) {
  if (const auto* w = std::get_if<WindowScope>(&scope)) {
    std::vector<Element> pts = w->points;
    for (const auto& x : pts) g.require(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }
  if (g.is_finite()) return g.elements();
  const PeriodicSet cell(period, {});
  std::vector<Element> pts;
  for (std::int64_t i = 0; i < cell.cell_size(); ++i) pts.push_back(Element::of(cell.residue_at(static_cast<std::size_t>(i))));
  return pts;
}

PeriodicSet require_periodic(const std::optional<PeriodicSet>& p, const char* what) {
  if (!p) fail(ErrorKind::Unsupported, std::string(what) + " in period mode needs a periodic set");
  return *p;
}

}  // namespace

void require_symmetric_neighborhood(const Group& g, std::span<const Element> q) {
  std::set<Element> pts;
  for (const auto& x : q) {
    g.require(x);
    pts.insert(x);
  }
  if (!pts.count(g.zero())) fail(ErrorKind::InvalidArgument, "Q must contain 0");
  for (const auto& x : pts)
    if (!pts.count(g.neg(x))) fail(ErrorKind::InvalidArgument, "Q must be symmetric; missing -" + to_string(x));
}

std::int64_t local_count(const Group& g, const SetSpec& s, std::span<const Element> q, const Scope& scope) {
  validate(g, s);
  require_symmetric_neighborhood(g, q);
  std::vector<std::int64_t> period;
  if (std::holds_alternative<PeriodScope>(scope) && !g.is_finite())
    period = require_periodic(as_periodic(s), "local_count").period();
  std::int64_t best = 0;
  for (const auto& x : scope_points(g, scope, period)) {
    if (!contains(g, s, x)) continue;
    std::int64_t k = 0;
    for (const auto& d : q) k += contains(g, s, g.add(x, d)) ? 1 : 0;
    best = std::max(best, k);
  }
  return best;
}

PartitionCertificate greedy_partition(const Group& g, const SetSpec& s, std::span<const Element> q,
                                      const Scope& scope) {
  validate(g, s);
  require_symmetric_neighborhood(g, q);
  PartitionCertificate cert;
  cert.q.assign(q.begin(), q.end());
  std::sort(cert.q.begin(), cert.q.end());
  cert.q.erase(std::unique(cert.q.begin(), cert.q.end()), cert.q.end());
  const auto steps = nonzero(g, cert.q);

  if (std::holds_alternative<PeriodScope>(scope) && !g.is_finite()) {
    const PeriodicSet p = require_periodic(as_periodic(s), "greedy_partition");
    cert.working_period = working_period(p, cert.q);
    const PeriodicSet work = p.refined(cert.working_period);
    const SetSpec work_set = SetSpec::periodic(work);
    cert.k_local = local_count(g, work_set, cert.q, PeriodScope{});

    const auto cell = static_cast<std::size_t>(work.cell_size());
    std::vector<int> colour(cell, -1);
    std::vector<std::vector<std::vector<std::int64_t>>> classes;
    std::vector<std::int64_t> t(work.dimension());
    for (const auto& r : work.residues()) {
      std::vector<char> used(classes.size() + 1, 0);
      for (const auto& d : steps) {
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = r[i] + d.coords[i];
        const auto idx = work.residue_index(t);
        if (colour[idx] >= 0) used[static_cast<std::size_t>(colour[idx])] = 1;
      }
      const auto c = static_cast<std::size_t>(std::find(used.begin(), used.end(), 0) - used.begin());
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(r);
      colour[work.residue_index(r)] = static_cast<int>(c);
    }
    for (auto& cls : classes) cert.parts.push_back(SetSpec::periodic(cert.working_period, std::move(cls)));
    cert.scope_note = "period cell";
  } else {
    cert.k_local = local_count(g, s, cert.q, scope);
    const auto pts = enumerate_in_window(g, s, scope_points(g, scope, {}));
    std::map<Element, std::size_t> colour;
    std::vector<std::vector<Element>> classes;
    for (const auto& x : pts) {
      std::vector<char> used(classes.size() + 1, 0);
      for (const auto& d : steps) {
        auto it = colour.find(g.add(x, d));
        if (it != colour.end()) used[it->second] = 1;
      }
      const auto c = static_cast<std::size_t>(std::find(used.begin(), used.end(), 0) - used.begin());
      if (c == classes.size()) classes.emplace_back();
      classes[c].push_back(x);
      colour.emplace(x, c);
    }
    for (auto& cls : classes) cert.parts.push_back(SetSpec::explicit_set(std::move(cls)));
    cert.scope_note = g.is_finite() && std::holds_alternative<PeriodScope>(scope)
                          ? "whole group"
                          : "window of " + std::to_string(pts.size()) + " set points";
  }
  cert.verified = verify_partition(g, s, cert, scope);
  return cert;
}

bool verify_partition(const Group& g, const SetSpec& s, const PartitionCertificate& cert, const Scope& scope) {
  if (static_cast<std::int64_t>(cert.parts.size()) > cert.k_local) return false;
  const auto pts = scope_points(g, scope, cert.working_period);
  for (const auto& x : pts) {
    int owners = 0;
    for (const auto& part : cert.parts) owners += contains(g, part, x) ? 1 : 0;
    if (owners != (contains(g, s, x) ? 1 : 0)) return false;
  }
  const auto steps = nonzero(g, cert.q);
  for (const auto& part : cert.parts) {
    const SetSpec diff = difference_set(g, part);
    for (const auto& d : steps)
      if (contains(g, diff, d)) return false;
  }
  return true;
}

std::int64_t sumset_size(const Group& g, std::span<const Element> c, std::span<const Element> v) {
  if (g.kind() != GroupKind::LatticeZd) fail(ErrorKind::Domain, "sumset_size works on Z^d");
  if (c.empty() || v.empty()) return 0;
  const std::size_t d = g.rank();
  std::vector<std::int64_t> lo(d);
  std::vector<std::int64_t> clo(d, INT64_MAX), chi(d, INT64_MIN), vlo(d, INT64_MAX), vhi(d, INT64_MIN);
  for (const auto& x : c)
    for (std::size_t i = 0; i < d; ++i) {
      clo[i] = std::min(clo[i], x.coords[i]);
      chi[i] = std::max(chi[i], x.coords[i]);
    }
  for (const auto& x : v)
    for (std::size_t i = 0; i < d; ++i) {
      vlo[i] = std::min(vlo[i], x.coords[i]);
      vhi[i] = std::max(vhi[i], x.coords[i]);
    }
  std::vector<std::int64_t> extent(d);
  std::size_t cells = 1;
  for (std::size_t i = 0; i < d; ++i) {
    lo[i] = clo[i] + vlo[i];
    extent[i] = chi[i] + vhi[i] - lo[i] + 1;
    cells *= static_cast<std::size_t>(extent[i]);
  }
  std::vector<char> mark(cells, 0);
  std::int64_t count = 0;
  for (const auto& a : c)
    for (const auto& b : v) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < d; ++i)
        idx = idx * static_cast<std::size_t>(extent[i]) + static_cast<std::size_t>(a.coords[i] + b.coords[i] - lo[i]);
      if (!mark[idx]) {
        mark[idx] = 1;
        ++count;
      }
    }
  return count;
}

FolnerWindow folner_box(const Group& g, std::span<const Element> c, const Rational& epsilon) {
  if (g.kind() != GroupKind::LatticeZd) fail(ErrorKind::Domain, "folner_box works on Z^d");
  if (c.empty()) fail(ErrorKind::InvalidArgument, "folner_box needs a nonempty C");
  if (epsilon <= Rational(0)) fail(ErrorKind::InvalidArgument, "folner_box needs epsilon > 0");
  for (const auto& x : c) g.require(x);
  const std::size_t d = g.rank();
  for (std::int64_t h = 0;; ++h) {
    FolnerWindow w;
    w.half_width = h;
    std::vector<std::int64_t> x(d, -h);
    while (true) {
      w.points.push_back(Element::of(x));
      std::size_t i = d;
      while (i-- > 0) {
        if (x[i] < h) {
          ++x[i];
          break;
        }
        x[i] = -h;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
    w.sumset_size = sumset_size(g, c, w.points);
    const auto size = static_cast<std::int64_t>(w.points.size());
    if (Rational(w.sumset_size) < (Rational(1) + epsilon) * Rational(size)) return w;
  }
}

PartitionCertificate folner_partition(const Group& g, const SetSpec& s, const Rational& epsilon) {
  validate(g, s);
  const PeriodicSet p = require_periodic(as_periodic(s), "folner_partition");
  std::vector<Element> c;
  {
    std::vector<std::int64_t> lo(p.dimension()), hi(p.dimension());
    for (std::size_t i = 0; i < p.dimension(); ++i) {
      lo[i] = -(p.period()[i] - 1);
      hi[i] = p.period()[i] - 1;
    }
    std::vector<std::int64_t> x = lo;
    while (true) {
      c.push_back(Element::of(x));
      std::size_t i = x.size();
      while (i-- > 0) {
        if (x[i] < hi[i]) {
          ++x[i];
          break;
        }
        x[i] = lo[i];
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  }
  const auto box = folner_box(g, c, epsilon);
  PartitionCertificate cert = greedy_partition(g, s, box.points, PeriodScope{});
  const Rational bound = (Rational(1) + epsilon) * p.density() * Rational(static_cast<std::int64_t>(box.points.size()));
  cert.sharp_bound = bound.floor();
  cert.sharp_bound_holds = cert.k_local <= *cert.sharp_bound;
  return cert;
}

std::vector<Element> difference_points(const Group& g, std::span<const Element> h) {
  std::set<Element> out;
  for (const auto& a : h)
    for (const auto& b : h) out.insert(g.sub(a, b));
  return {out.begin(), out.end()};
}

namespace {

std::vector<Element> scope_of(const Group& g, const SetSpec& s) {
  if (g.is_finite()) return g.elements();
  if (const auto* e = std::get_if<SetSpec::Explicit>(&s.variant())) return e->elements;
  return {};
}

// First q in Q \ {0} lying in S - S, with a witnessing pair from S.
std::optional<std::string> packing_violation(const Group& g, const SetSpec& s, std::span<const Element> h) {
  const auto q = difference_points(g, h);
  const SetSpec diff = difference_set(g, s);
  const Element z = g.zero();
  for (const auto& d : q) {
    if (d == z || !contains(g, diff, d)) continue;
    std::string pair;
    for (const auto& a : h)
      for (const auto& b : h)
        if (pair.empty() && g.sub(a, b) == d) pair = "h=" + to_string(a) + ", h'=" + to_string(b);
    std::string spair;
    if (const auto p = as_periodic(s)) {
      for (const auto& r : p->residues()) {
        std::vector<std::int64_t> t(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) t[i] = r[i] + d.coords[i];
        if (p->contains(t)) {
          spair = "s=" + to_string(Element::of(t)) + ", s'=" + to_string(Element::of(r));
          break;
        }
      }
    } else {
      for (const auto& a : enumerate_in_window(g, s, scope_of(g, s)))
        if (spair.empty() && contains(g, s, g.add(a, d)))
          spair = "s=" + to_string(g.add(a, d)) + ", s'=" + to_string(a);
    }
    return "s - s' = h - h' = " + to_string(d) + " with " + spair + "; " + pair;
  }
  return std::nullopt;
}

std::optional<Rational> exact_density(const Group& g, const SetSpec& s) {
  if (const auto p = as_periodic(s)) return p->density();
  if (g.is_finite()) {
    const auto elems = g.elements();
    return Rational(static_cast<std::int64_t>(enumerate_in_window(g, s, elems).size()), g.order());
  }
  return std::nullopt;
}

}  // namespace

FattenResult fatten(const Group& g, const SetSpec& s, std::span<const Element> h) {
  validate(g, s);
  if (h.empty()) fail(ErrorKind::InvalidArgument, "fatten needs a nonempty H");
  for (const auto& x : h) g.require(x);
  if (auto bad = packing_violation(g, s, h))
    fail(ErrorKind::Precondition, "packing condition (S-S)∩(H-H)={0} fails: " + *bad);

  FattenResult out;
  out.q = difference_points(g, h);
  if (const auto p = as_periodic(s)) {
    std::set<std::vector<std::int64_t>> res;
    for (const auto& r : p->residues())
      for (const auto& d : out.q) {
        std::vector<std::int64_t> t(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) t[i] = floor_mod(r[i] + d.coords[i], p->period()[i]);
        res.insert(std::move(t));
      }
    out.fattened = SetSpec::periodic(p->period(), {res.begin(), res.end()});
  } else if (const auto* e = std::get_if<SetSpec::Explicit>(&s.variant())) {
    std::vector<Element> pts;
    for (const auto& x : e->elements)
      for (const auto& d : out.q) pts.push_back(g.add(x, d));
    out.fattened = SetSpec::explicit_set(std::move(pts));
  } else {
    fail(ErrorKind::Unsupported, "fatten needs a periodic or explicit set");
  }
  out.density = exact_density(g, out.fattened);
  if (const auto rho = exact_density(g, s)) out.nominal = *rho * Rational(static_cast<std::int64_t>(out.q.size()));
  return out;
}

PackingCheck check_packing(const Group& g, const SetSpec& s, std::span<const Element> h) {
  validate(g, s);
  for (const auto& x : h) g.require(x);
  PackingCheck out;
  const auto rho = exact_density(g, s);
  if (!rho || rho->is_zero()) fail(ErrorKind::Precondition, "packing bound needs S with exact positive density");
  out.density = *rho;
  std::set<Element> distinct(h.begin(), h.end());
  out.size = static_cast<std::int64_t>(distinct.size());
  const auto bad = packing_violation(g, s, h);
  out.admissible = !bad;
  if (bad) out.violation = *bad;
  out.bound_holds = Rational(out.size) * out.density <= Rational(1);
  return out;
}

bool packing_bound_check(const Group& g, const SetSpec& s, std::span<const Element> h) {
  const auto c = check_packing(g, s, h);
  if (!c.admissible) return false;
  if (!c.bound_holds)
    throw std::logic_error("packing bound violated: #H = " + std::to_string(c.size) + " > 1/" +
                           c.density.to_string());
  return true;
}

}  // namespace banach
