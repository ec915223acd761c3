#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace threebody::app {

enum class Bound { kBelow, kAbove, kInside };

// One measured quantity and its pinned tolerance.
struct Check {
  std::string label;
  double measured = 0.0;
  double lo = 0.0;  // used by kInside
  double hi = 0.0;  // the bound for kBelow / kAbove, upper end for kInside
  Bound bound = Bound::kBelow;
  bool informational = false;  // reported, never gates

  bool pass() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::vector<Check> checks;
  std::string note;
  std::string error;  // non-empty if the criterion threw
  double seconds = 0.0;

  bool pass() const;
};

struct CriterionInfo {
  int id;
  const char* name;
  const char* summary;
};

const std::vector<CriterionInfo>& acceptance_criteria();

// Filter matches the criterion number ("7"), its name, or a substring of the name.
bool matches_filter(const CriterionInfo& c, const std::string& filter);

CriterionResult run_criterion(int id, std::uint64_t seed);
std::vector<CriterionResult> run_acceptance(const std::string& filter, std::uint64_t seed);

void print_table(std::ostream& os, const std::vector<CriterionResult>& results);
nlohmann::json to_json(const std::vector<CriterionResult>& results);

}  // namespace threebody::app
