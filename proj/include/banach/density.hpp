#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "banach/group.hpp"
#include "banach/rational.hpp"
#include "banach/sets.hpp"
#include "banach/window.hpp"

namespace banach {

/// Translates x range over one period cell; only valid for periodic sets.
struct FullPeriod {
  friend bool operator==(const FullPeriod&, const FullPeriod&) = default;
};

/// Translates x range over the box lo <= x <= hi (inclusive, per coordinate).
struct BoundedRange {
  std::vector<std::int64_t> lo;
  std::vector<std::int64_t> hi;
  friend bool operator==(const BoundedRange&, const BoundedRange&) = default;
};

using TranslateSearch = std::variant<FullPeriod, BoundedRange>;

struct WindowFamily {
  WindowShape shape;
  std::vector<std::int64_t> scales;  // strictly increasing, positive
  TranslateSearch translates = FullPeriod{};
  friend bool operator==(const WindowFamily&, const WindowFamily&) = default;
};

void validate(const Group& g, const WindowFamily& family);

enum class Exactness { Exact, Estimate };

struct ScaleRecord {
  std::int64_t scale = 0;
  std::int64_t window_size = 0;
  std::optional<Element> witness;  // best translate, least in canonical order
  Rational mass;
  Rational ratio;
  friend bool operator==(const ScaleRecord&, const ScaleRecord&) = default;
};

/// Finite-scale evidence for a limsup density.
struct DensityReport {
  std::vector<ScaleRecord> records;
  Rational max_ratio;
  Rational tail_max_ratio;  // max over the last half of the records
  Exactness exactness = Exactness::Estimate;
  std::optional<Rational> exact_value;  // set when an exact route applies
  std::string translate_search;
  friend bool operator==(const DensityReport&, const DensityReport&) = default;
};

/// Fills max_ratio and tail_max_ratio from the records.
void summarize(DensityReport& report);

struct SubgroupTerm {
  std::int64_t label = 0;
  std::vector<Element> elements;
};

/// #(A ∩ H_n) / #H_n along an increasing chain of finite sets.
DensityReport upper_density_sequence(const Group& g, const SetSpec& a, const std::vector<SubgroupTerm>& chain);

/// upper_density_sequence on Q/Z along farey_subgroup(n), n = n_lo..n_hi.
DensityReport farey_upper_density(const SetSpec& a, std::int64_t n_lo, std::int64_t n_hi);

/// Per scale r: max over translates x of ν(rK + x) / #(rK). Z^d only.
DensityReport uniform_upper_density_windows(const Group& g, const MeasureSpec& nu, const WindowFamily& family);

inline constexpr std::int64_t kDefaultBruteForceCap = 12;

/// inf over nonempty C ⊆ G of sup over nonempty V ⊆ G of ν(V) / #(C+V).
Rational density_def1_finite_group(const Group& g, const MeasureSpec& nu, std::int64_t cap = kDefaultBruteForceCap);
Rational density_def1_finite_group(const Group& g, std::span<const Rational> weights,
                                   std::int64_t cap = kDefaultBruteForceCap);

/// The same inf-sup taken over all finite F. Enumerated F-first so that it
/// shares no loop structure with the compact-set version.
Rational density_def2_finite_group(const Group& g, const MeasureSpec& nu, std::int64_t cap = kDefaultBruteForceCap);
Rational density_def2_finite_group(const Group& g, std::span<const Rational> weights,
                                   std::int64_t cap = kDefaultBruteForceCap);

struct OracleResult {
  Rational density;      // residues / cell size
  Rational window_scan;  // best ratio over boxes of three periods per side
  bool consistent = false;
};

/// Exact uniform upper density of a periodic subset of Z^d.
OracleResult periodic_banach_oracle(const Group& g, const SetSpec& a);

/// min over C in cs of max over V in vs of ν(V) / #(C+V). Used to compare
/// restricted families of translate sets on Z^d.
Rational inf_sup_relaxation(const Group& g, const MeasureSpec& nu, const std::vector<std::vector<Element>>& cs,
                            const std::vector<std::vector<Element>>& vs);

/// Multiples of lcm(period) from lcm up to the first multiple >= min_top.
std::vector<std::int64_t> period_aligned_scales(const std::vector<std::int64_t>& period, std::int64_t min_top);

}  // namespace banach
