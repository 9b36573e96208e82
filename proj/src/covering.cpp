#include "banach/covering.hpp"

#include <algorithm>

#include "banach/error.hpp"

namespace banach {

namespace {

struct QuotientProblem {
  Group group;
  std::vector<char> member;  // A, indexed by group index
  bool lifted = false;       // true when `group` is a period quotient of Z^d
};

QuotientProblem reduce(const Group& g, const SetSpec& a) {
  validate(g, a);
  if (g.is_finite()) {
    QuotientProblem q{g, std::vector<char>(static_cast<std::size_t>(g.order()), 0), false};
    for (std::size_t i = 0; i < q.member.size(); ++i) q.member[i] = contains(g, a, g.element_at(i)) ? 1 : 0;
    return q;
  }
  if (g.kind() == GroupKind::LatticeZd) {
    const auto p = as_periodic(a);
    if (!p) fail(ErrorKind::Unsupported, "covering on Z^d needs a periodic set");
    Group quotient(GroupSpec::finite(p->period()));
    QuotientProblem q{quotient, std::vector<char>(static_cast<std::size_t>(quotient.order()), 0), true};
    for (std::size_t i = 0; i < q.member.size(); ++i) q.member[i] = p->contains_index(i) ? 1 : 0;
    return q;
  }
  fail(ErrorKind::Unsupported, "covering needs a finite group or a periodic subset of Z^d");
}

}  // namespace

CoverCertificate greedy_packing_complement(const Group& g, const SetSpec& a) {
  const QuotientProblem q = reduce(g, a);
  const Group& h = q.group;
  const auto n = static_cast<std::size_t>(h.order());
  const auto elems = h.elements();

  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < n; ++i)
    if (q.member[i]) members.push_back(i);
  if (members.empty()) fail(ErrorKind::Precondition, "A is empty, so it has no positive density");

  std::vector<char> diff(n, 0);
  for (auto i : members)
    for (auto j : members) diff[h.index_of(h.sub(elems[i], elems[j]))] = 1;

  std::vector<std::size_t> chosen;
  for (std::size_t c = 0; c < n; ++c) {
    const bool ok = std::none_of(chosen.begin(), chosen.end(),
                                 [&](std::size_t b) { return diff[h.index_of(h.sub(elems[c], elems[b]))] != 0; });
    if (ok) chosen.push_back(c);
  }

  CoverCertificate cert;
  cert.density_used = Rational(static_cast<std::int64_t>(members.size()), static_cast<std::int64_t>(n));
  cert.bound = (Rational(1) / cert.density_used).floor();
  cert.within_bound = static_cast<std::int64_t>(chosen.size()) <= cert.bound;
  cert.scope = h.spec();
  cert.scope_note = q.lifted ? "quotient of Z^d by the period lattice" : "group";

  // Packing and maximality are rechecked from scratch.
  cert.packing = true;
  for (auto b1 : chosen)
    for (auto b2 : chosen)
      if (b1 != b2 && diff[h.index_of(h.sub(elems[b1], elems[b2]))]) cert.packing = false;
  cert.maximal = true;
  for (std::size_t c = 0; c < n; ++c) {
    if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
    const bool addable = std::none_of(chosen.begin(), chosen.end(), [&](std::size_t b) {
      return diff[h.index_of(h.sub(elems[c], elems[b]))] || diff[h.index_of(h.sub(elems[b], elems[c]))];
    });
    if (addable) cert.maximal = false;
  }

  std::vector<Element> diff_elems;
  for (std::size_t i = 0; i < n; ++i)
    if (diff[i]) diff_elems.push_back(elems[i]);
  for (auto b : chosen) cert.translates.push_back(elems[b]);

  if (q.lifted) {
    // Check in Z^d itself: D is periodic, so covering one period cell suffices.
    const auto& period = h.spec().moduli;
    std::vector<std::vector<std::int64_t>> residues;
    for (const auto& e : diff_elems) residues.push_back(e.coords);
    const SetSpec d = SetSpec::periodic(period, residues);
    std::vector<Element> cell = elems;  // residue coordinates double as Z^d points
    cert.verified = cert.packing && verify_translates_cover(g, d, cert.translates, cell);
  } else {
    const SetSpec d = SetSpec::explicit_set(diff_elems);
    cert.verified = cert.packing && verify_translates_cover(h, d, cert.translates, elems);
  }
  return cert;
}

bool verify_translates_cover(const Group& g, const SetSpec& d, std::span<const Element> translates,
                             std::span<const Element> scope) {
  for (const auto& x : scope) {
    const bool hit = std::any_of(translates.begin(), translates.end(),
                                 [&](const Element& b) { return contains(g, d, g.sub(x, b)); });
    if (!hit) return false;
  }
  return true;
}

CoverCertificate syndetic_certificate(const Group& g, const SetSpec& s) {
  validate(g, s);
  if (g.kind() == GroupKind::LatticeZd) {
    const auto p = as_periodic(s);
    if (!p) fail(ErrorKind::Unsupported, "syndeticity certificates on Z^d need a periodic set");
    if (p->empty()) fail(ErrorKind::Precondition, "S has zero density");
  }
  return greedy_packing_complement(g, s);
}

GapStatistics gap_statistics(const SetSpec& a, std::int64_t range_max) {
  const auto p = as_periodic(a);
  if (!p || p->dimension() != 1) fail(ErrorKind::Domain, "gap statistics need a periodic subset of Z");
  if (p->empty()) fail(ErrorKind::Precondition, "A has zero density, so gaps are unbounded");
  const auto m = p->period()[0];
  if (range_max < m) fail(ErrorKind::InvalidArgument, "range_max must cover at least one period");

  const Group z(GroupSpec::lattice(1));
  const SetSpec diff = difference_set(z, SetSpec::periodic(*p));
  const auto& dp = std::get<PeriodicSet>(diff.variant());
  GapStatistics out;
  for (std::int64_t x = 1; x <= range_max; ++x) {
    const std::int64_t c[1] = {x};
    if (dp.contains(c)) out.differences.push_back(x);
  }
  for (std::size_t i = 1; i < out.differences.size(); ++i) {
    out.gaps.push_back(out.differences[i] - out.differences[i - 1]);
    out.max_gap = std::max(out.max_gap, out.gaps.back());
  }
  return out;
}

}  // namespace banach
