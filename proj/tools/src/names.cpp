#include "names.hpp"

#include "unanimity/errors.hpp"

namespace unanimity::tools {

TieBreakPolicy tie_named(const std::string& name) {
  if (name == "evaluation") return TieBreakPolicy::kByEvaluation;
  if (name == "preference") return TieBreakPolicy::kByPreference;
  if (name == "home_id" || name == "home-id") return TieBreakPolicy::kByHomeId;
  fail(ErrorCode::kInvalidArgument, "unknown tie policy '" + name + "'");
}

const char* tie_name(TieBreakPolicy tie) {
  switch (tie) {
    case TieBreakPolicy::kByEvaluation:
      return "evaluation";
    case TieBreakPolicy::kByPreference:
      return "preference";
    case TieBreakPolicy::kByHomeId:
      return "home_id";
  }
  return "evaluation";
}

PrefOrEval ranking_named(const std::string& name) {
  if (name == "preference") return PrefOrEval::kPreference;
  if (name == "evaluation") return PrefOrEval::kEvaluation;
  fail(ErrorCode::kInvalidArgument, "expected 'preference' or 'evaluation', got '" + name + "'");
}

oracle::Mechanism mechanism_of(const MechanismSpec& spec) {
  const auto order = spec.order;
  const auto tie = spec.tie;
  if (spec.name == "sd") return [order](const Problem& p) { return sd(p, order); };
  if (spec.name == "sdi") return [order, tie](const Problem& p) { return sdi(p, order, tie); };
  if (spec.name == "asdi") return [order, tie](const Problem& p) { return asdi(p, order, tie); };
  if (spec.name == "uttc") {
    const UttcOptions options{spec.pointing, false};
    return [order, tie, options](const Problem& p) { return uttc(p, sdi(p, order, tie), options); };
  }
  if (spec.name == "rsa") {
    require(spec.availability.has_value(), ErrorCode::kInvalidArgument, "rsa needs an availability draw");
    const auto avail = *spec.availability;
    return [avail](const Problem& p) { return rsa(p, avail); };
  }
  fail(ErrorCode::kInvalidArgument, "unknown mechanism '" + spec.name + "'");
}

oracle::MechanismFamily family_of(const std::string& name, std::size_t child_count,
                                  std::optional<DictatorOrder> fixed_order, std::optional<TieBreakPolicy> tie,
                                  PointingOrder pointing) {
  if (name == "sd") return oracle::sd_family(child_count, PrefOrEval::kPreference, fixed_order);
  oracle::FamilyOptions options;
  options.fixed_order = std::move(fixed_order);
  if (tie) options.ties = {*tie};
  if (name == "sdi") return oracle::sdi_family(child_count, options);
  if (name == "asdi") return oracle::asdi_family(child_count, options);
  if (name == "uttc") return oracle::uttc_family(child_count, pointing, options);
  fail(ErrorCode::kInvalidArgument, "no mechanism family named '" + name + "'");
}

}  // namespace unanimity::tools
