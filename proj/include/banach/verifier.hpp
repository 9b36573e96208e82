#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "banach/covering.hpp"
#include "banach/density.hpp"
#include "banach/group.hpp"
#include "banach/partition.hpp"
#include "banach/rational.hpp"
#include "banach/sets.hpp"

namespace banach {

struct CheckFailure {
  std::string input;     // compact JSON reproducer
  std::string expected;  // the relation that should have held
  std::string observed;
  friend bool operator==(const CheckFailure&, const CheckFailure&) = default;
};

struct CheckResult {
  std::string name;
  std::int64_t instances_run = 0;
  std::vector<CheckFailure> failures;
  std::vector<std::string> notes;  // informational, never affects status
  bool pass() const noexcept { return failures.empty(); }
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::int64_t cap = 10;  // largest finite group order for brute force
  Rational low_threshold{1, 10};
  Rational high_threshold{9, 10};
  std::int64_t far_band = 100;   // N in the extra band (N, 2N]
  std::int64_t min_top_scale = 64;
};

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi].
std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi);

/// A random nonempty periodic subset of Z^dim with every period entry in
/// [1, max_period] and cell size at most max_cell.
PeriodicSet random_periodic_set(Rng& rng, std::size_t dim, std::int64_t max_period, std::int64_t max_cell);

// --- individual suites -----------------------------------------------------

/// Every A in every listed finite group: both brute-force densities equal #A/#G.
CheckResult check_finite_exactness(const std::vector<GroupSpec>& groups, std::int64_t cap);

/// Both brute-force densities agree for all subsets of Z_6 and random
/// weights on Z_2 x Z_3.
CheckResult check_delta_ge_D(const VerifyOptions& opt);

/// Exhaustive over nonempty A in Z_n, n <= n_max.
CheckResult check_cover_exhaustive(std::int64_t n_max);

/// Gap statistics of random periodic A in Z against the syndetic cover.
CheckResult check_erdos_sarkozy(const VerifyOptions& opt, std::int64_t count);

/// Box and cross windows on random periodic sets against the periodic oracle.
CheckResult check_shape_invariance(const VerifyOptions& opt, std::int64_t count);

/// All nonempty H within the fundamental domain of random periodic S.
/// The packing bound #H <= 1/ρ is checked for every admissible H.
CheckResult check_packing_bound(const VerifyOptions& opt, std::int64_t set_count);

/// On the corpus of check_packing_bound, density(S + (H - H)) >= ρ #(H - H)
/// whenever (S - S) ∩ (H - H) = {0}.
CheckResult check_fattening(const VerifyOptions& opt, std::int64_t set_count);

/// Same corpus, under the disjoint-translates hypothesis
/// (S - S) ∩ (Q - Q) = {0} with Q = H - H; there equality holds.
CheckResult check_fattening_disjoint(const VerifyOptions& opt, std::int64_t set_count);

/// Random greedy partitions are verified independently.
CheckResult check_partition(const VerifyOptions& opt, std::int64_t count);

/// Følner boxes recounted directly.
CheckResult check_folner(const VerifyOptions& opt, std::int64_t count);

/// D(Σ ν_j) <= Σ D(ν_j) for measures on one group. On finite groups D is the
/// brute-force Def-1 value; on Z^d every measure must be a trace or counting
/// measure of a periodic set and the periodic oracle is used.
CheckResult check_subadditivity(const Group& g, const std::vector<MeasureSpec>& nus, std::int64_t cap);

/// Random finite-group measure lists.
CheckResult check_subadditivity_random(const VerifyOptions& opt, std::int64_t count);

struct PipelineResult {
  GroupSpec group;
  SetSpec s = SetSpec::empty();
  std::vector<Element> h;
  std::vector<Element> q;  // H - H
  Rational density;        // ρ of S
  PartitionCertificate partition;
  std::size_t chosen = 0;  // index of the selected part
  Rational chosen_density;
  FattenResult fattened;
  CoverCertificate cover;
  std::vector<Element> final_translates;  // B + Q + Q
  GroupSpec scope;                        // where the final check ran
  bool final_verified = false;
};

/// Partition S by Q = H - H, keep a part of density >= ρ / n, fatten it,
/// cover the fattened set, and verify (S - S) + B + Q + Q covers the scope
/// by direct enumeration. Errors name the failing stage.
PipelineResult syndetic_pipeline(const Group& g, const SetSpec& s, std::span<const Element> h);

CheckResult check_pipeline(const VerifyOptions& opt, std::int64_t count);

/// Scaled Farey bands: low ratio somewhere, high ratio elsewhere.
CheckResult check_counterexamples(const VerifyOptions& opt);

struct SuiteInfo {
  std::string name;
  bool in_all;
  std::function<CheckResult(const VerifyOptions&)> run;
};

/// Registered suites in run order.
const std::vector<SuiteInfo>& suites();

/// Runs one named suite, or every suite marked in_all for "all".
std::vector<CheckResult> run_suites(const std::string& name, const VerifyOptions& opt);

}  // namespace banach
