#include "banach/json_io.hpp"

#include <algorithm>
#include <charconv>

#include "banach/error.hpp"

namespace banach {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorKind::InvalidSpec, path + ": " + what);
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  return j;
}

std::int64_t parse_int(std::string_view s, const std::string& path) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) bad(path, "malformed integer '" + std::string(s) + "'");
  return v;
}

// "p/q" or "p".
std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& s, const std::string& path) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return {parse_int(s, path), 1};
  return {parse_int(std::string_view(s).substr(0, slash), path),
          parse_int(std::string_view(s).substr(slash + 1), path)};
}

Json exactness_json(Exactness e) { return e == Exactness::Exact ? "exact" : "estimate"; }

}  // namespace

ObjectReader::ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
  if (!j_.is_object()) bad(path_, "expected an object");
}

const Json& ObjectReader::required(const std::string& key) {
  if (const Json* v = optional(key)) return *v;
  bad(path_, "missing required field '" + key + "'");
}

const Json* ObjectReader::optional(const std::string& key) {
  used_.push_back(key);
  auto it = j_.find(key);
  return it == j_.end() ? nullptr : &*it;
}

void ObjectReader::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it)
    if (std::find(used_.begin(), used_.end(), it.key()) == used_.end())
      bad(path_, "unknown field '" + it.key() + "'");
}

std::int64_t int_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
    bad(path, "integer out of range");
  return j.get<std::int64_t>();
}

bool bool_from_json(const Json& j, const std::string& path) {
  if (!j.is_boolean()) bad(path, "expected a boolean");
  return j.get<bool>();
}

std::string string_from_json(const Json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

std::vector<std::int64_t> ints_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(int_from_json(j[i], at(path, i)));
  return out;
}

Json to_json(const Rational& r) { return Json{{"num", r.num()}, {"den", r.den()}}; }

Rational rational_from_json(const Json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(int_from_json(j, path));
    if (j.is_string()) {
      auto [p, q] = parse_fraction(j.get<std::string>(), path);
      if (q == 0) bad(path, "zero denominator");
      return Rational(p, q);
    }
    ObjectReader r(j, path);
    const auto num = int_from_json(r.required("num"), r.field("num"));
    const auto den = int_from_json(r.required("den"), r.field("den"));
    r.finish();
    if (den == 0) bad(path, "zero denominator");
    return Rational(num, den);
  } catch (const std::overflow_error&) {
    bad(path, "rational out of range");
  }
}

Json to_json(const GroupSpec& g) {
  switch (g.kind) {
    case GroupKind::FiniteCyclicProduct:
      return Json{{"kind", "finite"}, {"moduli", g.moduli}};
    case GroupKind::LatticeZd:
      return Json{{"kind", "zd"}, {"dimension", g.dimension}};
    case GroupKind::RationalTorus:
      return Json{{"kind", "qz"}};
  }
  return {};
}

GroupSpec group_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  const auto kind = string_from_json(r.required("kind"), r.field("kind"));
  GroupSpec g;
  if (kind == "finite") {
    g = GroupSpec::finite(ints_from_json(r.required("moduli"), r.field("moduli")));
    if (g.moduli.empty()) bad(r.field("moduli"), "needs at least one modulus");
    for (auto m : g.moduli)
      if (m < 1) bad(r.field("moduli"), "moduli must be positive");
  } else if (kind == "zd") {
    g = GroupSpec::lattice(int_from_json(r.required("dimension"), r.field("dimension")));
    if (g.dimension < 1) bad(r.field("dimension"), "dimension must be positive");
  } else if (kind == "qz") {
    g = GroupSpec::rational_torus();
  } else {
    bad(r.field("kind"), "unknown group kind '" + kind + "' (finite, zd, qz)");
  }
  r.finish();
  try {
    make_group(g);
  } catch (const Error& e) {
    bad(path, e.what());
  }
  return g;
}

Json to_json(const Element& e) {
  if (e.fraction) return std::to_string(e.numerator()) + "/" + std::to_string(e.denominator());
  if (e.coords.size() == 1) return e.coords[0];
  return Json(e.coords);
}

Element element_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Element::of({int_from_json(j, path)});
  if (j.is_string()) {
    auto [p, q] = parse_fraction(j.get<std::string>(), path);
    return Element::frac(p, q);
  }
  if (j.is_array()) return Element::of(ints_from_json(j, path));
  bad(path, "expected an element (integer, integer array, or \"p/q\")");
}

Json to_json(const std::vector<Element>& pts) {
  Json out = Json::array();
  for (const auto& e : pts) out.push_back(to_json(e));
  return out;
}

std::vector<Element> elements_from_json(const Json& j, const std::string& path) {
  require_array(j, path);
  std::vector<Element> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(element_from_json(j[i], at(path, i)));
  return out;
}

Json to_json(const SetSpec& s) {
  return std::visit(overloaded{
                        [](const SetSpec::Explicit& e) -> Json { return {{"explicit", to_json(e.elements)}}; },
                        [](const PeriodicSet& p) -> Json {
                          return {{"periodic", {{"m", p.period()}, {"residues", p.residues()}}}};
                        },
                        [](const SetSpec::FareyBands& f) -> Json {
                          Json bands = Json::array();
                          for (const auto& b : f.bands) bands.push_back({b.lo, b.hi});
                          return {{"fareybands", bands}};
                        },
                        [](const SetSpec::Union& u) -> Json {
                          Json members = Json::array();
                          for (const auto& m : u.members) members.push_back(to_json(m));
                          return {{"union", members}};
                        },
                    },
                    s.variant());
}

namespace {

// The single key of a tagged object such as {"explicit": [...]}.
std::string tag_of(const Json& j, const std::string& path, const char* kinds) {
  if (!j.is_object() || j.size() != 1) bad(path, std::string("expected an object with exactly one of ") + kinds);
  return j.begin().key();
}

}  // namespace

SetSpec set_from_json(const Json& j, const std::string& path) {
  const auto kind = tag_of(j, path, "explicit, periodic, fareybands, union");
  const Json& body = j.begin().value();
  const std::string here = path + "." + kind;
  try {
    if (kind == "explicit") return SetSpec::explicit_set(elements_from_json(body, here));
    if (kind == "periodic") {
      ObjectReader r(body, here);
      const Json& pj = r.required("m");
      const auto period = pj.is_array() ? ints_from_json(pj, r.field("m"))
                                        : std::vector<std::int64_t>{int_from_json(pj, r.field("m"))};
      const Json& rj = require_array(r.required("residues"), r.field("residues"));
      std::vector<std::vector<std::int64_t>> residues;
      for (std::size_t i = 0; i < rj.size(); ++i) {
        const auto p = at(r.field("residues"), i);
        residues.push_back(rj[i].is_array() ? ints_from_json(rj[i], p)
                                            : std::vector<std::int64_t>{int_from_json(rj[i], p)});
      }
      r.finish();
      return SetSpec::periodic(period, std::move(residues));
    }
    if (kind == "fareybands") {
      require_array(body, here);
      std::vector<Band> bands;
      for (std::size_t i = 0; i < body.size(); ++i) {
        const auto v = ints_from_json(body[i], at(here, i));
        if (v.size() != 2) bad(at(here, i), "a band is [lo, hi]");
        bands.push_back({v[0], v[1]});
      }
      return SetSpec::farey_bands(std::move(bands));
    }
    if (kind == "union") {
      require_array(body, here);
      std::vector<SetSpec> members;
      for (std::size_t i = 0; i < body.size(); ++i) members.push_back(set_from_json(body[i], at(here, i)));
      return SetSpec::union_of(std::move(members));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidSpec && std::string(e.what()).rfind("$", 0) == 0) throw;
    bad(here, e.what());
  }
  bad(path, "unknown set kind '" + kind + "' (explicit, periodic, fareybands, union)");
}

Json to_json(const MeasureSpec& m) {
  return std::visit(overloaded{
                        [](const MeasureSpec::TraceOfHaar& t) -> Json { return {{"trace", to_json(t.set)}}; },
                        [](const MeasureSpec::CountingOnSet& c) -> Json { return {{"counting", to_json(c.set)}}; },
                        [](const MeasureSpec::PointMasses& p) -> Json {
                          Json masses = Json::array();
                          for (const auto& [e, w] : p.masses) masses.push_back({{"at", to_json(e)}, {"w", to_json(w)}});
                          return {{"weighted", masses}};
                        },
                    },
                    m.variant());
}

MeasureSpec measure_from_json(const Json& j, const std::string& path) {
  const auto kind = tag_of(j, path, "trace, counting, weighted");
  const Json& body = j.begin().value();
  const std::string here = path + "." + kind;
  if (kind == "trace") return MeasureSpec::trace(set_from_json(body, here));
  if (kind == "counting") return MeasureSpec::counting(set_from_json(body, here));
  if (kind != "weighted") bad(path, "unknown measure kind '" + kind + "' (trace, counting, weighted)");
  require_array(body, here);
  std::vector<std::pair<Element, Rational>> masses;
  for (std::size_t i = 0; i < body.size(); ++i) {
    ObjectReader m(body[i], at(here, i));
    auto e = element_from_json(m.required("at"), m.field("at"));
    auto w = rational_from_json(m.required("w"), m.field("w"));
    m.finish();
    masses.emplace_back(std::move(e), w);
  }
  try {
    return MeasureSpec::point_masses(std::move(masses));
  } catch (const Error& e) {
    bad(here, e.what());
  }
}

Json to_json(const WindowShape& w) {
  if (w.kind != ShapeKind::PolytopeHull) return to_string(w.kind);
  Json verts = Json::array();
  for (const auto& v : w.vertices) {
    Json row = Json::array();
    for (const auto& c : v) row.push_back(to_json(c));
    verts.push_back(row);
  }
  return Json{{"hull", verts}};
}

WindowShape shape_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "box") return WindowShape::box();
    if (s == "cross") return WindowShape::cross_polytope();
    bad(path, "unknown shape '" + s + "' (box, cross, {\"hull\": [...]})");
  }
  ObjectReader r(j, path);
  const Json& vj = require_array(r.required("hull"), r.field("hull"));
  std::vector<std::vector<Rational>> verts;
  for (std::size_t i = 0; i < vj.size(); ++i) {
    const auto p = at(r.field("hull"), i);
    require_array(vj[i], p);
    std::vector<Rational> v;
    for (std::size_t k = 0; k < vj[i].size(); ++k) v.push_back(rational_from_json(vj[i][k], at(p, k)));
    verts.push_back(std::move(v));
  }
  r.finish();
  return WindowShape::hull(std::move(verts));
}

Json to_json(const WindowFamily& f) {
  Json translates = std::visit(overloaded{
                                   [](const FullPeriod&) -> Json { return "full-period"; },
                                   [](const BoundedRange& b) -> Json {
                                     Json range = Json::array();
                                     for (std::size_t i = 0; i < b.lo.size(); ++i) range.push_back({b.lo[i], b.hi[i]});
                                     return {{"range", range}};
                                   },
                               },
                               f.translates);
  return Json{{"shape", to_json(f.shape)}, {"scales", f.scales}, {"translates", translates}};
}

WindowFamily window_family_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  WindowFamily f;
  f.shape = shape_from_json(r.required("shape"), r.field("shape"));
  f.scales = ints_from_json(r.required("scales"), r.field("scales"));
  if (const Json* t = r.optional("translates")) {
    const auto p = r.field("translates");
    if (t->is_string()) {
      if (t->get<std::string>() != "full-period") bad(p, "expected \"full-period\" or {\"range\": [[lo, hi], ...]}");
      f.translates = FullPeriod{};
    } else {
      ObjectReader tr(*t, p);
      const Json& rj = require_array(tr.required("range"), tr.field("range"));
      BoundedRange b;
      for (std::size_t i = 0; i < rj.size(); ++i) {
        const auto v = ints_from_json(rj[i], at(tr.field("range"), i));
        if (v.size() != 2 || v[0] > v[1]) bad(at(tr.field("range"), i), "a range is [lo, hi] with lo <= hi");
        b.lo.push_back(v[0]);
        b.hi.push_back(v[1]);
      }
      tr.finish();
      f.translates = std::move(b);
    }
  }
  r.finish();
  return f;
}

Json to_json(const DensityReport& rep) {
  Json records = Json::array();
  for (const auto& s : rep.records) {
    Json rec{{"scale", s.scale}, {"window_size", s.window_size}, {"mass", to_json(s.mass)}, {"ratio", to_json(s.ratio)}};
    if (s.witness) rec["witness"] = to_json(*s.witness);
    records.push_back(std::move(rec));
  }
  Json out{{"records", records},
           {"max_ratio", to_json(rep.max_ratio)},
           {"tail_max_ratio", to_json(rep.tail_max_ratio)},
           {"exactness", exactness_json(rep.exactness)},
           {"translate_search", rep.translate_search}};
  if (rep.exact_value) out["exact_value"] = to_json(*rep.exact_value);
  return out;
}

DensityReport density_report_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  DensityReport rep;
  const Json& rj = require_array(r.required("records"), r.field("records"));
  for (std::size_t i = 0; i < rj.size(); ++i) {
    ObjectReader s(rj[i], at(r.field("records"), i));
    ScaleRecord rec;
    rec.scale = int_from_json(s.required("scale"), s.field("scale"));
    rec.window_size = int_from_json(s.required("window_size"), s.field("window_size"));
    rec.mass = rational_from_json(s.required("mass"), s.field("mass"));
    rec.ratio = rational_from_json(s.required("ratio"), s.field("ratio"));
    if (const Json* w = s.optional("witness")) rec.witness = element_from_json(*w, s.field("witness"));
    s.finish();
    rep.records.push_back(std::move(rec));
  }
  rep.max_ratio = rational_from_json(r.required("max_ratio"), r.field("max_ratio"));
  rep.tail_max_ratio = rational_from_json(r.required("tail_max_ratio"), r.field("tail_max_ratio"));
  const auto ex = string_from_json(r.required("exactness"), r.field("exactness"));
  if (ex != "exact" && ex != "estimate") bad(r.field("exactness"), "expected exact or estimate");
  rep.exactness = ex == "exact" ? Exactness::Exact : Exactness::Estimate;
  rep.translate_search = string_from_json(r.required("translate_search"), r.field("translate_search"));
  if (const Json* e = r.optional("exact_value")) rep.exact_value = rational_from_json(*e, r.field("exact_value"));
  r.finish();
  return rep;
}

Json to_json(const CoverCertificate& c) {
  return Json{{"B", to_json(c.translates)},
              {"density_used", to_json(c.density_used)},
              {"bound", c.bound},
              {"verified", c.verified},
              {"packing", c.packing},
              {"maximal", c.maximal},
              {"within_bound", c.within_bound},
              {"scope", to_json(c.scope)},
              {"scope_note", c.scope_note}};
}

CoverCertificate cover_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  CoverCertificate c;
  c.translates = elements_from_json(r.required("B"), r.field("B"));
  c.density_used = rational_from_json(r.required("density_used"), r.field("density_used"));
  c.bound = int_from_json(r.required("bound"), r.field("bound"));
  c.verified = bool_from_json(r.required("verified"), r.field("verified"));
  c.packing = bool_from_json(r.required("packing"), r.field("packing"));
  c.maximal = bool_from_json(r.required("maximal"), r.field("maximal"));
  c.within_bound = bool_from_json(r.required("within_bound"), r.field("within_bound"));
  c.scope = group_from_json(r.required("scope"), r.field("scope"));
  c.scope_note = string_from_json(r.required("scope_note"), r.field("scope_note"));
  r.finish();
  return c;
}

Json to_json(const PartitionCertificate& c) {
  Json parts = Json::array();
  for (const auto& p : c.parts) parts.push_back(to_json(p));
  Json out{{"Q", to_json(c.q)},
           {"parts", parts},
           {"k_local", c.k_local},
           {"verified", c.verified},
           {"scope_note", c.scope_note},
           {"working_period", c.working_period},
           {"sharp_bound_holds", c.sharp_bound_holds}};
  if (c.sharp_bound) out["sharp_bound"] = *c.sharp_bound;
  return out;
}

PartitionCertificate partition_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  PartitionCertificate c;
  c.q = elements_from_json(r.required("Q"), r.field("Q"));
  const Json& pj = require_array(r.required("parts"), r.field("parts"));
  for (std::size_t i = 0; i < pj.size(); ++i) c.parts.push_back(set_from_json(pj[i], at(r.field("parts"), i)));
  c.k_local = int_from_json(r.required("k_local"), r.field("k_local"));
  c.verified = bool_from_json(r.required("verified"), r.field("verified"));
  c.scope_note = string_from_json(r.required("scope_note"), r.field("scope_note"));
  c.working_period = ints_from_json(r.required("working_period"), r.field("working_period"));
  c.sharp_bound_holds = bool_from_json(r.required("sharp_bound_holds"), r.field("sharp_bound_holds"));
  if (const Json* s = r.optional("sharp_bound")) c.sharp_bound = int_from_json(*s, r.field("sharp_bound"));
  r.finish();
  return c;
}

Json to_json(const CheckResult& c) {
  Json failures = Json::array();
  for (const auto& f : c.failures)
    failures.push_back({{"input", f.input}, {"expected", f.expected}, {"observed", f.observed}});
  return Json{{"name", c.name},
              {"instances_run", c.instances_run},
              {"failures", failures},
              {"notes", c.notes},
              {"status", c.pass() ? "pass" : "fail"}};
}

CheckResult check_result_from_json(const Json& j, const std::string& path) {
  ObjectReader r(j, path);
  CheckResult c;
  c.name = string_from_json(r.required("name"), r.field("name"));
  c.instances_run = int_from_json(r.required("instances_run"), r.field("instances_run"));
  const Json& fj = require_array(r.required("failures"), r.field("failures"));
  for (std::size_t i = 0; i < fj.size(); ++i) {
    ObjectReader f(fj[i], at(r.field("failures"), i));
    CheckFailure cf;
    cf.input = string_from_json(f.required("input"), f.field("input"));
    cf.expected = string_from_json(f.required("expected"), f.field("expected"));
    cf.observed = string_from_json(f.required("observed"), f.field("observed"));
    f.finish();
    c.failures.push_back(std::move(cf));
  }
  if (const Json* n = r.optional("notes")) {
    require_array(*n, r.field("notes"));
    for (std::size_t i = 0; i < n->size(); ++i) c.notes.push_back(string_from_json((*n)[i], at(r.field("notes"), i)));
  }
  const auto status = string_from_json(r.required("status"), r.field("status"));
  if (status != (c.pass() ? "pass" : "fail")) bad(r.field("status"), "status disagrees with the failure list");
  r.finish();
  return c;
}

Json to_json(const FattenResult& f) {
  Json out{{"fattened", to_json(f.fattened)}, {"Q", to_json(f.q)}};
  if (f.density) out["density"] = to_json(*f.density);
  if (f.nominal) out["nominal"] = to_json(*f.nominal);
  return out;
}

Json to_json(const PipelineResult& p) {
  return Json{{"group", to_json(p.group)},
              {"set", to_json(p.s)},
              {"H", to_json(p.h)},
              {"Q", to_json(p.q)},
              {"density", to_json(p.density)},
              {"partition", to_json(p.partition)},
              {"chosen_part", p.chosen},
              {"chosen_density", to_json(p.chosen_density)},
              {"fattening", to_json(p.fattened)},
              {"cover", to_json(p.cover)},
              {"final_translates", to_json(p.final_translates)},
              {"final_scope", to_json(p.scope)},
              {"final_verified", p.final_verified}};
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::InvalidSpec, source + ": malformed JSON: " + e.what());
  }
}

}  // namespace banach
