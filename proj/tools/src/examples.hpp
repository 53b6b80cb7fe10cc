#pragma once

// Worked examples bundled with the tool as golden fixtures.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace unanimity::tools {

struct ExampleResult {
  std::string name;
  std::vector<std::string> failures;  // empty when the fixture passed

  bool passed() const { return failures.empty(); }
};

/// The fixture document compiled into the binary.
std::string_view embedded_fixtures();

/// Runs every fixture in `doc`, or only the one named `only`. A malformed
/// document or an unknown name raises kInvalidArgument.
std::vector<ExampleResult> run_examples(const nlohmann::json& doc, const std::optional<std::string>& only = {});

}  // namespace unanimity::tools
