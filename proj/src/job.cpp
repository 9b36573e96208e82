#include "banach/job.hpp"

#include <charconv>
#include <cstdlib>
#include <set>

#include "banach/error.hpp"
#include "banach/verifier.hpp"

namespace banach {

namespace {

constexpr std::int64_t kDefaultTopScale = 64;

struct Job {
  std::string command;
  GroupSpec group;
  std::optional<SetSpec> set;
  std::optional<MeasureSpec> measure;
  std::optional<WindowFamily> windows;
  // options
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> cap;
  std::optional<std::string> scope;
  std::optional<std::vector<Element>> q, h;
  std::optional<Rational> epsilon;
  std::optional<std::string> suite;
  std::optional<std::pair<std::int64_t, std::int64_t>> farey;
  std::optional<Rational> low, high;
  std::optional<std::int64_t> far_band;
};

const std::set<std::string> kCommands = {"density", "cover", "partition", "verify", "report"};

Job parse_job(const Json& j, const JobOverrides& over) {
  ObjectReader r(j, "$");
  Job job;
  if (const Json* c = r.optional("command")) job.command = string_from_json(*c, r.field("command"));
  if (over.command) {
    if (!job.command.empty() && job.command != *over.command)
      fail(ErrorKind::InvalidSpec, "$.command: file says '" + job.command + "' but the subcommand is '" + *over.command + "'");
    job.command = *over.command;
  }
  if (job.command.empty()) fail(ErrorKind::InvalidSpec, "$: missing required field 'command'");
  if (!kCommands.count(job.command))
    fail(ErrorKind::InvalidSpec, "$.command: unknown command '" + job.command + "'");

  const bool needs_group = job.command != "verify";
  if (const Json* g = needs_group ? &r.required("group") : r.optional("group"))
    job.group = group_from_json(*g, r.field("group"));
  if (const Json* s = r.optional("set")) job.set = set_from_json(*s, r.field("set"));
  if (const Json* m = r.optional("measure")) job.measure = measure_from_json(*m, r.field("measure"));
  if (job.set && job.measure) fail(ErrorKind::InvalidSpec, "$: give either 'set' or 'measure', not both");
  if (const Json* w = r.optional("windows")) job.windows = window_family_from_json(*w, r.field("windows"));

  if (const Json* o = r.optional("options")) {
    ObjectReader opt(*o, r.field("options"));
    if (const Json* v = opt.optional("seed")) {
      const auto s = int_from_json(*v, opt.field("seed"));
      if (s < 0) fail(ErrorKind::InvalidSpec, opt.field("seed") + ": seed must be nonnegative");
      job.seed = static_cast<std::uint64_t>(s);
    }
    if (const Json* v = opt.optional("cap")) job.cap = int_from_json(*v, opt.field("cap"));
    if (const Json* v = opt.optional("scope")) job.scope = string_from_json(*v, opt.field("scope"));
    if (const Json* v = opt.optional("Q")) job.q = elements_from_json(*v, opt.field("Q"));
    if (const Json* v = opt.optional("H")) job.h = elements_from_json(*v, opt.field("H"));
    if (const Json* v = opt.optional("epsilon")) job.epsilon = rational_from_json(*v, opt.field("epsilon"));
    if (const Json* v = opt.optional("suite")) job.suite = string_from_json(*v, opt.field("suite"));
    if (const Json* v = opt.optional("farey")) {
      const auto range = ints_from_json(*v, opt.field("farey"));
      if (range.size() != 2) fail(ErrorKind::InvalidSpec, opt.field("farey") + ": expected [n_lo, n_hi]");
      job.farey = {range[0], range[1]};
    }
    if (const Json* v = opt.optional("low_threshold")) job.low = rational_from_json(*v, opt.field("low_threshold"));
    if (const Json* v = opt.optional("high_threshold")) job.high = rational_from_json(*v, opt.field("high_threshold"));
    if (const Json* v = opt.optional("far_band")) job.far_band = int_from_json(*v, opt.field("far_band"));
    opt.finish();
  }
  r.finish();

  if (over.seed) job.seed = over.seed;
  if (over.cap) job.cap = over.cap;
  if (over.scope) job.scope = over.scope;
  if (over.suite) job.suite = over.suite;

  const bool needs_set = job.command == "cover" || job.command == "partition" || job.command == "report";
  if (needs_set && !job.set) fail(ErrorKind::InvalidSpec, "$: command '" + job.command + "' needs a 'set'");
  if (job.command == "density" && !job.set && !job.measure)
    fail(ErrorKind::InvalidSpec, "$: command 'density' needs a 'set' or a 'measure'");
  if (job.command == "partition" && !job.q && !job.epsilon)
    fail(ErrorKind::InvalidSpec, "$.options: command 'partition' needs 'Q' or 'epsilon'");
  return job;
}

MeasureSpec job_measure(const Job& job) { return job.measure ? *job.measure : MeasureSpec::counting(*job.set); }

// Explicit or defaulted window family, clipped to the largest allowed scale.
WindowFamily job_windows(const Job& job, std::optional<std::int64_t> max_scale) {
  WindowFamily f;
  if (job.windows) {
    f = *job.windows;
  } else {
    const MeasureSpec nu = job_measure(job);
    const SetSpec* s = nu.underlying_set();
    const auto p = s ? as_periodic(*s) : std::nullopt;
    if (!p) fail(ErrorKind::InvalidSpec, "$.windows: required unless the set is periodic");
    f.shape = WindowShape::box();
    f.scales = period_aligned_scales(p->period(), max_scale.value_or(kDefaultTopScale));
    f.translates = FullPeriod{};
  }
  if (max_scale) {
    if (*max_scale < 1) fail(ErrorKind::InvalidArgument, "DENSITY_MAX_SCALE must be positive");
    std::erase_if(f.scales, [&](std::int64_t r) { return r > *max_scale; });
    if (f.scales.empty())
      fail(ErrorKind::InvalidArgument, "DENSITY_MAX_SCALE=" + std::to_string(*max_scale) + " removes every window scale");
  }
  return f;
}

Json density_section(const Job& job, const Group& g, std::optional<std::int64_t> max_scale) {
  const MeasureSpec nu = job_measure(job);
  validate(g, nu);
  Json out{{"group", to_json(g.spec())}};
  if (g.is_finite()) {
    const std::int64_t cap = job.cap.value_or(kDefaultBruteForceCap);
    const auto w = point_weights(g, nu);
    Rational total;
    for (const auto& x : w) total += x;
    out["D"] = to_json(density_def1_finite_group(g, w, cap));
    out["Delta"] = to_json(density_def2_finite_group(g, w, cap));
    out["mass_over_order"] = to_json(total / Rational(g.order()));
    out["cap"] = cap;
    return out;
  }
  if (g.kind() == GroupKind::RationalTorus) {
    const SetSpec* s = nu.underlying_set();
    if (!s) fail(ErrorKind::Unsupported, "densities on Q/Z need a set, not point masses");
    const auto [lo, hi] = job.farey.value_or(std::pair<std::int64_t, std::int64_t>{1, 24});
    out["farey_range"] = {lo, hi};
    out["report"] = to_json(farey_upper_density(*s, lo, hi));
    return out;
  }
  const auto family = job_windows(job, max_scale);
  out["windows"] = to_json(family);
  out["report"] = to_json(uniform_upper_density_windows(g, nu, family));
  if (const SetSpec* s = nu.underlying_set(); s && as_periodic(*s)) {
    const auto o = periodic_banach_oracle(g, *s);
    out["oracle"] = {{"density", to_json(o.density)}, {"window_scan", to_json(o.window_scan)}, {"consistent", o.consistent}};
  }
  return out;
}

bool cover_ok(const CoverCertificate& c) { return c.verified && c.packing && c.maximal && c.within_bound; }

Scope job_scope(const Job& job) {
  if (job.scope) return WindowScope{parse_scope_bounds(*job.scope)};
  return PeriodScope{};
}

PartitionCertificate partition_section(const Job& job, const Group& g) {
  if (job.epsilon) return folner_partition(g, *job.set, *job.epsilon);
  return greedy_partition(g, *job.set, *job.q, job_scope(job));
}

Json run_verify(const Job& job, const JobOverrides& over, bool& failed) {
  VerifyOptions opt;
  opt.seed = job.seed.value_or(opt.seed);
  if (job.cap) opt.cap = *job.cap;
  if (job.low) opt.low_threshold = *job.low;
  if (job.high) opt.high_threshold = *job.high;
  if (job.far_band) opt.far_band = *job.far_band;
  if (over.max_scale) opt.min_top_scale = *over.max_scale;
  const std::string suite = job.suite.value_or("all");
  Json results = Json::array();
  for (const auto& r : run_suites(suite, opt)) {
    failed = failed || !r.pass();
    results.push_back(to_json(r));
  }
  return Json{{"suite", suite}, {"seed", opt.seed}, {"results", results}, {"status", failed ? "fail" : "pass"}};
}

}  // namespace

std::vector<Element> parse_scope_bounds(const std::string& text) {
  std::vector<std::int64_t> lo, hi;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(',', start), text.size());
    const std::string part = text.substr(start, end - start);
    const auto colon = part.find(':');
    std::int64_t a = 0, b = 0;
    auto num = [&](std::string_view s, std::int64_t& v) {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      return ec == std::errc() && p == s.data() + s.size() && !s.empty();
    };
    if (colon == std::string::npos || !num(std::string_view(part).substr(0, colon), a) ||
        !num(std::string_view(part).substr(colon + 1), b) || a >= b)
      fail(ErrorKind::InvalidArgument, "--scope: expected lo:hi[,lo:hi...] with lo < hi, got '" + text + "'");
    lo.push_back(a);
    hi.push_back(b);
    start = end + 1;
  }
  std::int64_t total = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    total *= hi[i] - lo[i];
    if (total > (std::int64_t{1} << 22)) fail(ErrorKind::Resource, "--scope box is too large");
  }
  std::vector<Element> pts;
  std::vector<std::int64_t> x = lo;
  while (true) {
    pts.push_back(Element::of(x));
    std::size_t i = x.size();
    while (i-- > 0) {
      if (++x[i] < hi[i]) break;
      x[i] = lo[i];
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return pts;
}

std::optional<std::int64_t> max_scale_from_env() {
  const char* v = std::getenv("DENSITY_MAX_SCALE");
  if (!v || !*v) return std::nullopt;
  std::int64_t out = 0;
  const std::string_view s(v);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || p != s.data() + s.size() || out < 1)
    fail(ErrorKind::InvalidArgument, "DENSITY_MAX_SCALE must be a positive integer, got '" + std::string(s) + "'");
  return out;
}

std::string render(const Json& document) { return document.dump(2) + "\n"; }

JobOutcome run_job(const Json& input, const JobOverrides& over) {
  JobOutcome out;
  try {
    const Job job = parse_job(input, over);
    Json doc{{"command", job.command}};
    bool failed = false;
    if (job.command == "verify") {
      doc.update(run_verify(job, over, failed));
    } else {
      const Group g = make_group(job.group);
      if (job.set) validate(g, *job.set);
      if (job.command == "density") {
        doc["density"] = density_section(job, g, over.max_scale);
      } else if (job.command == "cover") {
        const auto c = greedy_packing_complement(g, *job.set);
        failed = !cover_ok(c);
        doc["certificate"] = to_json(c);
      } else if (job.command == "partition") {
        const auto c = partition_section(job, g);
        failed = !c.verified || !c.sharp_bound_holds;
        doc["certificate"] = to_json(c);
      } else {  // report
        // Q/Z has no finite quotient to cover, so its report is density only.
        if (g.kind() != GroupKind::RationalTorus) {
          const auto c = greedy_packing_complement(g, *job.set);
          failed = failed || !cover_ok(c);
          doc["cover"] = to_json(c);
        }
        doc["density"] = density_section(job, g, over.max_scale);
        if (job.q || job.epsilon) {
          const auto c = partition_section(job, g);
          failed = failed || !c.verified || !c.sharp_bound_holds;
          doc["partition"] = to_json(c);
        }
        if (job.h) {
          const auto p = syndetic_pipeline(g, *job.set, *job.h);
          failed = failed || !p.final_verified;
          doc["pipeline"] = to_json(p);
        }
      }
    }
    doc["status"] = failed ? "fail" : "pass";
    out.document = std::move(doc);
    out.exit_code = failed ? 1 : 0;
  } catch (const Error& e) {
    out.document = Json{{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    out.exit_code = 2;
  } catch (const std::overflow_error& e) {
    out.document = Json{{"error", {{"kind", "resource-error"}, {"message", e.what()}}}};
    out.exit_code = 2;
  }
  return out;
}

}  // namespace banach
