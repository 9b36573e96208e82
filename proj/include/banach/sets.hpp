#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "banach/group.hpp"
#include "banach/rational.hpp"

namespace banach {

/// Half-open denominator band (lo, hi] for subsets of Q/Z.
struct Band {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  friend bool operator==(const Band&, const Band&) = default;
};

/// A subset of Z^d that is a union of cosets of m_1 Z x ... x m_d Z.
///
/// Residues are kept sorted and reduced; membership is a table lookup.
class PeriodicSet {
 public:
  PeriodicSet(std::vector<std::int64_t> period, std::vector<std::vector<std::int64_t>> residues);

  const std::vector<std::int64_t>& period() const noexcept { return period_; }
  const std::vector<std::vector<std::int64_t>>& residues() const noexcept { return residues_; }
  std::size_t dimension() const noexcept { return period_.size(); }
  std::int64_t cell_size() const noexcept { return cell_size_; }
  bool empty() const noexcept { return residues_.empty(); }

  /// Mixed-radix index of x mod period, first coordinate most significant.
  std::size_t residue_index(std::span<const std::int64_t> x) const;
  std::vector<std::int64_t> residue_at(std::size_t index) const;
  bool contains(std::span<const std::int64_t> x) const { return member_[residue_index(x)] != 0; }
  bool contains_index(std::size_t index) const { return member_[index] != 0; }

  /// Residue count over cell size.
  Rational density() const { return Rational(static_cast<std::int64_t>(residues_.size()), cell_size_); }

  /// Same set described with a coarser lattice; each new_period[i] must be a
  /// multiple of period()[i].
  PeriodicSet refined(const std::vector<std::int64_t>& new_period) const;

  friend bool operator==(const PeriodicSet& a, const PeriodicSet& b) {
    return a.period_ == b.period_ && a.residues_ == b.residues_;
  }

 private:
  std::vector<std::int64_t> period_;
  std::vector<std::vector<std::int64_t>> residues_;
  std::vector<char> member_;
  std::int64_t cell_size_ = 1;
};

/// Subset description: explicit list, periodic residues, Farey denominator
/// bands, or a finite union of these.
class SetSpec {
 public:
  struct Explicit {
    std::vector<Element> elements;  // sorted, distinct
    friend bool operator==(const Explicit&, const Explicit&) = default;
  };
  struct FareyBands {
    std::vector<Band> bands;  // sorted by lo
    friend bool operator==(const FareyBands&, const FareyBands&) = default;
  };
  struct Union {
    std::vector<SetSpec> members;
    friend bool operator==(const Union&, const Union&) = default;
  };
  using Variant = std::variant<Explicit, PeriodicSet, FareyBands, Union>;

  static SetSpec explicit_set(std::vector<Element> elements);
  static SetSpec periodic(std::vector<std::int64_t> period, std::vector<std::vector<std::int64_t>> residues);
  static SetSpec periodic(PeriodicSet set);
  static SetSpec farey_bands(std::vector<Band> bands);
  static SetSpec union_of(std::vector<SetSpec> members);
  static SetSpec empty() { return explicit_set({}); }

  const Variant& variant() const noexcept { return v_; }

  friend bool operator==(const SetSpec&, const SetSpec&) = default;

 private:
  explicit SetSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Throws unless every part of `a` is meaningful in `g`.
void validate(const Group& g, const SetSpec& a);

bool contains(const Group& g, const SetSpec& a, const Element& x);

/// A ∩ W in canonical order.
std::vector<Element> enumerate_in_window(const Group& g, const SetSpec& a, std::span<const Element> window);

/// A - A. Periodic inputs give a periodic result with the same period;
/// explicit inputs give an explicit result. Anything else needs a finite
/// scope to enumerate over. Farey bands are rejected.
SetSpec difference_set(const Group& g, const SetSpec& a);
SetSpec difference_set(const Group& g, const SetSpec& a, std::span<const Element> scope);

/// A + t.
SetSpec translate(const Group& g, const SetSpec& a, const Element& t);

/// Periodic description when `a` is periodic or a union of periodic sets.
std::optional<PeriodicSet> as_periodic(const SetSpec& a);

bool uses_farey_bands(const SetSpec& a);

std::vector<std::int64_t> lcm_period(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b);

class MeasureSpec {
 public:
  struct TraceOfHaar {
    SetSpec set;
    friend bool operator==(const TraceOfHaar&, const TraceOfHaar&) = default;
  };
  struct CountingOnSet {
    SetSpec set;
    friend bool operator==(const CountingOnSet&, const CountingOnSet&) = default;
  };
  struct PointMasses {
    std::vector<std::pair<Element, Rational>> masses;  // sorted by element, positive weights
    friend bool operator==(const PointMasses&, const PointMasses&) = default;
  };
  using Variant = std::variant<TraceOfHaar, CountingOnSet, PointMasses>;

  static MeasureSpec trace(SetSpec set) { return MeasureSpec(TraceOfHaar{std::move(set)}); }
  static MeasureSpec counting(SetSpec set) { return MeasureSpec(CountingOnSet{std::move(set)}); }
  static MeasureSpec point_masses(std::vector<std::pair<Element, Rational>> masses);

  const Variant& variant() const noexcept { return v_; }
  /// The set behind a trace or counting measure; null for point masses.
  const SetSpec* underlying_set() const noexcept;

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;

 private:
  explicit MeasureSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

void validate(const Group& g, const MeasureSpec& nu);

/// ν(W) for a finite set W of distinct elements.
Rational mass(const Group& g, const MeasureSpec& nu, std::span<const Element> window);

/// Point weights ν({x}) indexed by Group::index_of; finite groups only.
std::vector<Rational> point_weights(const Group& g, const MeasureSpec& nu);

}  // namespace banach
