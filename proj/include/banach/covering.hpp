#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "banach/group.hpp"
#include "banach/rational.hpp"
#include "banach/sets.hpp"

namespace banach {

/// Evidence that finitely many translates of A - A cover a finite group (or
/// the period quotient of Z^d, in which case the cover lifts to Z^d).
struct CoverCertificate {
  std::vector<Element> translates;  // B, sorted
  Rational density_used;            // ρ
  std::int64_t bound = 0;           // floor(1/ρ)
  bool verified = false;            // A - A + B covers the scope, rechecked directly
  bool packing = false;             // (A - A) ∩ (B - B) = {0}
  bool maximal = false;             // no element can be added to B keeping packing
  bool within_bound = false;        // #B <= bound
  GroupSpec scope;                  // group on which the cover was checked
  std::string scope_note;           // "group" or "quotient of Z^d by the period lattice"
};

/// Greedy maximal B with (A - A) ∩ (B - B) = {0}, scanned in canonical order
/// from 0. On finite groups A is any set valid in `g`; on Z^d A must be
/// periodic and the construction runs on the period quotient.
CoverCertificate greedy_packing_complement(const Group& g, const SetSpec& a);

/// True iff every element of `scope` lies in D + b for some b in B.
bool verify_translates_cover(const Group& g, const SetSpec& d, std::span<const Element> translates,
                             std::span<const Element> scope);

/// The B found for S witnesses that S - S is syndetic.
CoverCertificate syndetic_certificate(const Group& g, const SetSpec& s);

struct GapStatistics {
  std::vector<std::int64_t> differences;  // positive elements of A - A up to range_max
  std::vector<std::int64_t> gaps;         // consecutive differences
  std::int64_t max_gap = 0;
};

/// Positive differences of a periodic A ⊆ Z and their gaps.
GapStatistics gap_statistics(const SetSpec& a, std::int64_t range_max);

}  // namespace banach
