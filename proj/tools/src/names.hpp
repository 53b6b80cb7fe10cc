#pragma once

// Name lookups shared by the command-line verbs and the fixture runner.

#include <optional>
#include <string>

#include "unanimity/mechanisms.hpp"
#include "unanimity/oracle.hpp"

namespace unanimity::tools {

TieBreakPolicy tie_named(const std::string& name);
const char* tie_name(TieBreakPolicy tie);
PrefOrEval ranking_named(const std::string& name);

struct MechanismSpec {
  std::string name;  // sd, sdi, asdi, uttc, rsa
  DictatorOrder order;
  TieBreakPolicy tie = TieBreakPolicy::kByEvaluation;
  PointingOrder pointing = PointingOrder::kEvaluation;
  std::optional<AvailabilityFn> availability;  // rsa only
};

/// The mechanism as a function of the problem. UTTC starts from the SDI
/// matching for the same order and tie policy.
oracle::Mechanism mechanism_of(const MechanismSpec& spec);

/// Every realization of the named mechanism. `fixed_order` and `tie` narrow
/// the family when given.
oracle::MechanismFamily family_of(const std::string& name, std::size_t child_count,
                                  std::optional<DictatorOrder> fixed_order = {},
                                  std::optional<TieBreakPolicy> tie = {},
                                  PointingOrder pointing = PointingOrder::kEvaluation);

}  // namespace unanimity::tools
