#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace banach {

enum class GroupKind { FiniteCyclicProduct, LatticeZd, RationalTorus };

/// Description of a discrete abelian group. Haar measure is always counting
/// measure.
struct GroupSpec {
  GroupKind kind = GroupKind::FiniteCyclicProduct;
  std::vector<std::int64_t> moduli;  // FiniteCyclicProduct only
  std::int64_t dimension = 0;        // LatticeZd only

  static GroupSpec finite(std::vector<std::int64_t> moduli);
  static GroupSpec lattice(std::int64_t dimension);
  static GroupSpec rational_torus();

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// A group element in canonical form.
///
/// Coordinates are reduced into [0, m_i) for finite products and are plain
/// integers on Z^d. On Q/Z the element is the reduced fraction
/// coords = {p, q} with 0 <= p < q, and `fraction` is set.
///
/// Ordering is lexicographic on coordinates; fractions compare by value.
struct Element {
  std::vector<std::int64_t> coords;
  bool fraction = false;

  static Element of(std::initializer_list<std::int64_t> c) { return Element{std::vector<std::int64_t>(c), false}; }
  static Element of(std::vector<std::int64_t> c) { return Element{std::move(c), false}; }
  static Element frac(std::int64_t p, std::int64_t q) { return Element{{p, q}, true}; }

  std::int64_t numerator() const { return coords.at(0); }
  std::int64_t denominator() const { return coords.at(1); }

  friend bool operator==(const Element&, const Element&) = default;
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) noexcept;
};

std::string to_string(const Element& e);

/// Immutable handle for a group: element arithmetic, canonicalization and,
/// for finite groups, enumeration in canonical order.
class Group {
 public:
  explicit Group(GroupSpec spec);

  const GroupSpec& spec() const noexcept { return spec_; }
  GroupKind kind() const noexcept { return spec_.kind; }
  bool is_finite() const noexcept { return spec_.kind == GroupKind::FiniteCyclicProduct; }

  /// Number of integer coordinates of a (non-fraction) element.
  std::size_t rank() const noexcept;

  /// Group order; finite groups only.
  std::int64_t order() const;

  Element zero() const;
  Element add(const Element& a, const Element& b) const;
  Element neg(const Element& a) const;
  Element sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

  bool is_canonical(const Element& e) const noexcept;
  /// Throws a domain error unless `e` is a canonical element of this group.
  void require(const Element& e) const;
  /// Reduces raw coordinates (or an unreduced fraction) to canonical form.
  Element canonicalize(Element raw) const;

  /// Finite groups: all elements in canonical order; index 0 is zero.
  std::vector<Element> elements() const;
  std::size_t index_of(const Element& e) const;
  Element element_at(std::size_t index) const;

  std::string describe() const;

  friend bool operator==(const Group& a, const Group& b) { return a.spec_ == b.spec_; }

 private:
  GroupSpec spec_;
  std::int64_t order_ = 0;
};

/// Validating constructor; throws invalid-spec on modulus 0 or dimension 0.
Group make_group(const GroupSpec& spec);

/// Elements of Q/Z with denominator at most n, in value order.
std::vector<Element> farey_subgroup(std::int64_t n);

/// Euler's totient.
std::int64_t totient(std::int64_t n);

}  // namespace banach
