#include "banach/group.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "banach/error.hpp"

namespace banach {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) fail(ErrorKind::Resource, "integer overflow in group arithmetic");
  return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) fail(ErrorKind::Resource, "integer overflow in group arithmetic");
  return out;
}

}  // namespace

GroupSpec GroupSpec::finite(std::vector<std::int64_t> moduli) {
  GroupSpec s;
  s.kind = GroupKind::FiniteCyclicProduct;
  s.moduli = std::move(moduli);
  return s;
}

GroupSpec GroupSpec::lattice(std::int64_t dimension) {
  GroupSpec s;
  s.kind = GroupKind::LatticeZd;
  s.dimension = dimension;
  return s;
}

GroupSpec GroupSpec::rational_torus() {
  GroupSpec s;
  s.kind = GroupKind::RationalTorus;
  return s;
}

std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept {
  if (a.fraction != b.fraction) return a.fraction ? std::strong_ordering::greater : std::strong_ordering::less;
  if (a.fraction && a.coords.size() == 2 && b.coords.size() == 2) {
    const __int128 lhs = static_cast<__int128>(a.coords[0]) * b.coords[1];
    const __int128 rhs = static_cast<__int128>(b.coords[0]) * a.coords[1];
    if (auto c = lhs <=> rhs; c != 0) return c;
    return a.coords[1] <=> b.coords[1];
  }
  return a.coords <=> b.coords;
}

std::string to_string(const Element& e) {
  if (e.fraction) return std::to_string(e.coords.at(0)) + "/" + std::to_string(e.coords.at(1));
  if (e.coords.size() == 1) return std::to_string(e.coords[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(e.coords[i]);
  }
  return out + ")";
}

Group::Group(GroupSpec spec) : spec_(std::move(spec)) {
  switch (spec_.kind) {
    case GroupKind::FiniteCyclicProduct: {
      if (spec_.moduli.empty()) fail(ErrorKind::InvalidSpec, "finite group needs at least one modulus");
      order_ = 1;
      for (auto m : spec_.moduli) {
        if (m < 1) fail(ErrorKind::InvalidSpec, "modulus must be >= 1, got " + std::to_string(m));
        if (__builtin_mul_overflow(order_, m, &order_)) fail(ErrorKind::InvalidSpec, "group order overflows");
      }
      break;
    }
    case GroupKind::LatticeZd:
      if (spec_.dimension < 1) fail(ErrorKind::InvalidSpec, "dimension must be >= 1");
      break;
    case GroupKind::RationalTorus:
      break;
  }
}

std::size_t Group::rank() const noexcept {
  switch (spec_.kind) {
    case GroupKind::FiniteCyclicProduct: return spec_.moduli.size();
    case GroupKind::LatticeZd: return static_cast<std::size_t>(spec_.dimension);
    case GroupKind::RationalTorus: return 2;
  }
  return 0;
}

std::int64_t Group::order() const {
  if (!is_finite()) fail(ErrorKind::Unsupported, "order() on an infinite group");
  return order_;
}

Element Group::zero() const {
  if (kind() == GroupKind::RationalTorus) return Element::frac(0, 1);
  return Element::of(std::vector<std::int64_t>(rank(), 0));
}

bool Group::is_canonical(const Element& e) const noexcept {
  switch (spec_.kind) {
    case GroupKind::FiniteCyclicProduct:
      if (e.fraction || e.coords.size() != spec_.moduli.size()) return false;
      for (std::size_t i = 0; i < e.coords.size(); ++i)
        if (e.coords[i] < 0 || e.coords[i] >= spec_.moduli[i]) return false;
      return true;
    case GroupKind::LatticeZd:
      return !e.fraction && e.coords.size() == static_cast<std::size_t>(spec_.dimension);
    case GroupKind::RationalTorus: {
      if (!e.fraction || e.coords.size() != 2) return false;
      const auto p = e.coords[0], q = e.coords[1];
      return q >= 1 && p >= 0 && p < q && std::gcd(p, q) == 1;
    }
  }
  return false;
}

void Group::require(const Element& e) const {
  if (!is_canonical(e))
    fail(ErrorKind::Domain, "element " + to_string(e) + " is not a canonical element of " + describe());
}

Element Group::canonicalize(Element raw) const {
  switch (spec_.kind) {
    case GroupKind::FiniteCyclicProduct:
      if (raw.coords.size() != spec_.moduli.size())
        fail(ErrorKind::Domain, "element arity does not match " + describe());
      for (std::size_t i = 0; i < raw.coords.size(); ++i) raw.coords[i] = floor_mod(raw.coords[i], spec_.moduli[i]);
      raw.fraction = false;
      return raw;
    case GroupKind::LatticeZd:
      if (raw.coords.size() != static_cast<std::size_t>(spec_.dimension))
        fail(ErrorKind::Domain, "element arity does not match " + describe());
      raw.fraction = false;
      return raw;
    case GroupKind::RationalTorus: {
      if (raw.coords.size() != 2 || raw.coords[1] == 0) fail(ErrorKind::Domain, "fraction needs p and nonzero q");
      auto p = raw.coords[0], q = raw.coords[1];
      if (q < 0) {
        p = -p;
        q = -q;
      }
      p = floor_mod(p, q);
      const auto g = std::gcd(p, q);
      return Element::frac(p / g, q / g);
    }
  }
  return raw;
}

Element Group::add(const Element& a, const Element& b) const {
  require(a);
  require(b);
  switch (spec_.kind) {
    case GroupKind::FiniteCyclicProduct: {
      Element out = a;
      for (std::size_t i = 0; i < out.coords.size(); ++i) {
        out.coords[i] += b.coords[i];
        if (out.coords[i] >= spec_.moduli[i]) out.coords[i] -= spec_.moduli[i];
      }
      return out;
    }
    case GroupKind::LatticeZd: {
      Element out = a;
      for (std::size_t i = 0; i < out.coords.size(); ++i) out.coords[i] = checked_add(out.coords[i], b.coords[i]);
      return out;
    }
    case GroupKind::RationalTorus: {
      const auto q1 = a.coords[1], q2 = b.coords[1];
      const auto g = std::gcd(q1, q2);
      const auto l = checked_mul(q1 / g, q2);
      const auto p = checked_add(checked_mul(a.coords[0], l / q1), checked_mul(b.coords[0], l / q2));
      return canonicalize(Element::frac(p, l));
    }
  }
  return a;
}

Element Group::neg(const Element& a) const {
  require(a);
  switch (spec_.kind) {
    case GroupKind::FiniteCyclicProduct: {
      Element out = a;
      for (std::size_t i = 0; i < out.coords.size(); ++i)
        if (out.coords[i] != 0) out.coords[i] = spec_.moduli[i] - out.coords[i];
      return out;
    }
    case GroupKind::LatticeZd: {
      Element out = a;
      for (auto& c : out.coords) {
        if (c == std::numeric_limits<std::int64_t>::min()) fail(ErrorKind::Resource, "integer overflow in negation");
        c = -c;
      }
      return out;
    }
    case GroupKind::RationalTorus:
      if (a.coords[0] == 0) return a;
      return Element::frac(a.coords[1] - a.coords[0], a.coords[1]);
  }
  return a;
}

std::vector<Element> Group::elements() const {
  const auto n = order();
  std::vector<Element> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(element_at(static_cast<std::size_t>(i)));
  return out;
}

std::size_t Group::index_of(const Element& e) const {
  if (!is_finite()) fail(ErrorKind::Unsupported, "index_of on an infinite group");
  require(e);
  std::int64_t idx = 0;
  for (std::size_t i = 0; i < e.coords.size(); ++i) idx = idx * spec_.moduli[i] + e.coords[i];
  return static_cast<std::size_t>(idx);
}

Element Group::element_at(std::size_t index) const {
  const auto n = order();
  if (static_cast<std::int64_t>(index) >= n) fail(ErrorKind::InvalidArgument, "element index out of range");
  std::vector<std::int64_t> c(spec_.moduli.size());
  auto rest = static_cast<std::int64_t>(index);
  for (std::size_t i = c.size(); i-- > 0;) {
    c[i] = rest % spec_.moduli[i];
    rest /= spec_.moduli[i];
  }
  return Element::of(std::move(c));
}

std::string Group::describe() const {
  switch (spec_.kind) {
    case GroupKind::FiniteCyclicProduct: {
      std::string out;
      for (std::size_t i = 0; i < spec_.moduli.size(); ++i) {
        if (i) out += "x";
        out += "Z_" + std::to_string(spec_.moduli[i]);
      }
      return out;
    }
    case GroupKind::LatticeZd: return "Z^" + std::to_string(spec_.dimension);
    case GroupKind::RationalTorus: return "Q/Z";
  }
  return "?";
}

Group make_group(const GroupSpec& spec) { return Group(spec); }

std::vector<Element> farey_subgroup(std::int64_t n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "farey_subgroup needs n >= 1");
  std::vector<Element> out;
  for (std::int64_t q = 1; q <= n; ++q)
    for (std::int64_t p = 0; p < q; ++p)
      if (std::gcd(p, q) == 1) out.push_back(Element::frac(p, q));
  std::sort(out.begin(), out.end());
  return out;
}

std::int64_t totient(std::int64_t n) {
  if (n < 1) fail(ErrorKind::InvalidArgument, "totient needs n >= 1");
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

}  // namespace banach
