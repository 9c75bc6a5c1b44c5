// Copyright 2026 The monocover Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MONOCOVER_IO_HPP_
#define MONOCOVER_IO_HPP_

#include <istream>
#include <string>
#include <vector>

#include "json.hpp"
#include "monocover/cmip.hpp"
#include "monocover/engine.hpp"
#include "monocover/instance.hpp"
#include "monocover/local_ratio.hpp"
#include "monocover/online.hpp"
#include "monocover/probabilistic.hpp"

namespace monocover {

// Insertion-ordered so that emitted documents have a stable field order.
using Json = nlohmann::ordered_json;

// A malformed document. `pointer` is the JSON pointer of the offending
// value (empty for text formats, which report a line number instead).
class ParseError : public Error {
 public:
  ParseError(std::string pointer, const std::string& what, std::size_t line = 0)
      : Error(ErrorCode::kParse, (line ? "line " + std::to_string(line) : pointer.empty() ? "/" : pointer) + ": " + what),
        pointer_(std::move(pointer)),
        line_(line) {}
  const std::string& pointer() const { return pointer_; }
  std::size_t line() const { return line_; }

 private:
  std::string pointer_;
  std::size_t line_;
};

// Parses text as JSON; syntax errors become ParseError with the byte offset.
Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

struct InstanceDocument {
  Instance instance;
  Json meta = Json::object();
};

// {"variables": [{"name"?, "domain"}], "cost": {...}, "constraints": [...], "meta"?}
// Domains: "reals" | "integers" | "binary" | {"set": [...]} |
//          {"grid": {"start", "step", "stop"?}}.
// Cost: {"linear": [...]} | {"separable": [{"knots", "values", "tail_slope"?}]} |
//       {"facility": {"opening": [...], "pairs": [{"customer", "facility", "cost"}]}}.
// Constraint: {"id", "floor_sum": {"terms": [{"var", "coeff"?, "step"?, "cap"?}], "rhs"}}
//           | {"id", "cmip": <CMIP row>}.
// Unknown fields are rejected; "inf" stands for +infinity.
InstanceDocument instance_from_json(const Json& doc);
Json instance_to_json(const Instance& instance, const Json& meta = Json::object());

// {"A": {"j": coeff}, "b": real, "I": [j], "u": {"j": real | "inf"}}.
std::shared_ptr<CmipRow> cmip_row_from_json(const Json& j, std::string id, const std::string& pointer = "");
Json cmip_row_to_json(const CmipRow& row);

// Instance document with CMIP rows only, plus
// {"p": {"id": prob}, "W": {"id": {"j": weight}}}. Missing p defaults to 1,
// missing weights to 0.
TwoStageInstance two_stage_from_json(const Json& doc);
Json two_stage_to_json(const TwoStageInstance& inst);
bool is_two_stage(const Json& doc);

Json trace_to_json(const StepTrace& trace);
StepTrace trace_from_json(const Json& j);

struct UpgradableScenario {
  CacheTemplate tmpl;
  std::vector<std::size_t> requests;
};
// {"template": "capacity-threshold" | "conflict-pairs", "d", "items",
//  "upgrades": [{"price", "gain"}], "requests": [...], optional "sizes",
//  "base_capacity", "evict_cost", "evict_floor", "discount_rate",
//  "discount_component", "conflicts": [{"a", "b", "component"?, "unlock"?}]}.
UpgradableScenario upgradable_from_json(const Json& doc);
Json upgradable_to_json(const UpgradableScenario& s);

// Text traces, one request per line; blank lines and '#' comments skipped.
// Times must be strictly increasing.
// Connection: `t node_u node_w cost`.
std::vector<ConnectionRequest> parse_connection_trace(std::istream& in);
struct FileTrace {
  std::vector<std::size_t> requests;
  std::vector<double> sizes;  // by file id
  std::vector<double> costs;  // by file id
};
// File caching: `t file size cost`; a file keeps one size and cost.
FileTrace parse_file_trace(std::istream& in);

Json to_json(const LocalRatioReport& r);

}  // namespace monocover

#endif  // MONOCOVER_IO_HPP_
