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

namespace banach {

/// Work on one period cell of a periodic set (or on all of a finite group).
struct PeriodScope {};
/// Work on an explicit finite window.
struct WindowScope {
  std::vector<Element> points;
};
using Scope = std::variant<PeriodScope, WindowScope>;

struct PartitionCertificate {
  std::vector<Element> q;              // symmetric window containing 0
  std::vector<SetSpec> parts;          // S_1, ..., S_n
  std::int64_t k_local = 0;            // max_s #(S ∩ (s + Q))
  bool verified = false;
  std::string scope_note;
  std::vector<std::int64_t> working_period;  // period of the parts in period mode
  std::optional<std::int64_t> sharp_bound;    // floor((1+ε) ρ #Q), Følner windows only
  bool sharp_bound_holds = true;
};

/// Throws invalid-argument unless q is symmetric and contains 0.
void require_symmetric_neighborhood(const Group& g, std::span<const Element> q);

/// max over s in S ∩ scope of #(S ∩ (s + Q)); 0 for empty S.
std::int64_t local_count(const Group& g, const SetSpec& s, std::span<const Element> q, const Scope& scope);

/// Greedy colouring of the graph s ~ t iff t ∈ s + Q, in canonical order,
/// each point taking the lowest colour unused by its coloured neighbours.
///
/// In period mode the colouring runs on Z^d / M Z^d where M_i is the least
/// multiple of the set's period exceeding 2 max|q_i|, so each part is
/// periodic with period M.
PartitionCertificate greedy_partition(const Group& g, const SetSpec& s, std::span<const Element> q,
                                      const Scope& scope);

/// Independent recheck: parts disjoint, union = S on the scope,
/// (S_j - S_j) ∩ Q = {0}, and #parts <= k_local.
bool verify_partition(const Group& g, const SetSpec& s, const PartitionCertificate& cert, const Scope& scope);

struct FolnerWindow {
  std::int64_t half_width = 0;  // V = [-h, h]^d
  std::vector<Element> points;
  std::int64_t sumset_size = 0;  // #(C + V)
};

/// Smallest centred box V with #(C + V) < (1 + ε) #V.
FolnerWindow folner_box(const Group& g, std::span<const Element> c, const Rational& epsilon);

/// #(C + V) on Z^d by marking a dense grid.
std::int64_t sumset_size(const Group& g, std::span<const Element> c, std::span<const Element> v);

/// greedy_partition with Q = folner_box(F - F, ε), F the period cell of S.
/// Also checks the sharper bound k_local <= floor((1+ε) ρ #Q).
PartitionCertificate folner_partition(const Group& g, const SetSpec& s, const Rational& epsilon);

/// H - H in canonical order.
std::vector<Element> difference_points(const Group& g, std::span<const Element> h);

struct FattenResult {
  SetSpec fattened = SetSpec::empty();  // S + (H - H)
  std::vector<Element> q;               // H - H
  std::optional<Rational> density;      // exact density of the fattened set
  std::optional<Rational> nominal;      // ρ · #(H - H)
};

/// S + (H - H) under the packing hypothesis (S - S) ∩ (H - H) = {0}; a
/// violation raises a precondition error naming the offending pair.
FattenResult fatten(const Group& g, const SetSpec& s, std::span<const Element> h);

struct PackingCheck {
  bool admissible = false;  // (H - H) ∩ (S - S) = {0}
  std::int64_t size = 0;    // #H
  Rational density;         // ρ
  bool bound_holds = true;  // #H <= 1/ρ
  std::string violation;    // witness when not admissible
};

PackingCheck check_packing(const Group& g, const SetSpec& s, std::span<const Element> h);

/// True if the packing condition holds (then #H <= 1/ρ is asserted); false
/// if it fails.
bool packing_bound_check(const Group& g, const SetSpec& s, std::span<const Element> h);

}  // namespace banach
