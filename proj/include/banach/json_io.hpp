#pragma once

#include <string>

#include <json.hpp>

#include "banach/covering.hpp"
#include "banach/density.hpp"
#include "banach/group.hpp"
#include "banach/partition.hpp"
#include "banach/rational.hpp"
#include "banach/sets.hpp"
#include "banach/verifier.hpp"
#include "banach/window.hpp"

namespace banach {

using Json = nlohmann::json;

// Readers throw invalid-spec errors whose message starts with the JSON path
// of the offending field. Unknown keys are rejected everywhere. Elements are
// read as written; a Group is only needed later, to validate them.

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& path = "$");

Json to_json(const GroupSpec& g);
GroupSpec group_from_json(const Json& j, const std::string& path = "$");

Json to_json(const Element& e);
Element element_from_json(const Json& j, const std::string& path = "$");
Json to_json(const std::vector<Element>& pts);
std::vector<Element> elements_from_json(const Json& j, const std::string& path = "$");

Json to_json(const SetSpec& s);
SetSpec set_from_json(const Json& j, const std::string& path = "$");

Json to_json(const MeasureSpec& m);
MeasureSpec measure_from_json(const Json& j, const std::string& path = "$");

Json to_json(const WindowShape& w);
WindowShape shape_from_json(const Json& j, const std::string& path = "$");
Json to_json(const WindowFamily& f);
WindowFamily window_family_from_json(const Json& j, const std::string& path = "$");

Json to_json(const DensityReport& r);
DensityReport density_report_from_json(const Json& j, const std::string& path = "$");

Json to_json(const CoverCertificate& c);
CoverCertificate cover_from_json(const Json& j, const std::string& path = "$");

Json to_json(const PartitionCertificate& c);
PartitionCertificate partition_from_json(const Json& j, const std::string& path = "$");

Json to_json(const CheckResult& c);
CheckResult check_result_from_json(const Json& j, const std::string& path = "$");

Json to_json(const FattenResult& f);
Json to_json(const PipelineResult& p);

/// Parses text, turning syntax errors into invalid-spec errors.
Json parse_json_text(const std::string& text, const std::string& source);

/// Walks an object, handing out fields and remembering which were used.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path);
  const Json& required(const std::string& key);
  const Json* optional(const std::string& key);
  std::string field(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const noexcept { return path_; }
  /// Throws if the object had keys nobody asked for.
  void finish() const;

 private:
  const Json& j_;
  std::string path_;
  std::vector<std::string> used_;
};

std::int64_t int_from_json(const Json& j, const std::string& path);
bool bool_from_json(const Json& j, const std::string& path);
std::string string_from_json(const Json& j, const std::string& path);
std::vector<std::int64_t> ints_from_json(const Json& j, const std::string& path);

}  // namespace banach
