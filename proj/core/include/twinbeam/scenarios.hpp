#pragma once

#include <string_view>
#include <vector>

namespace twinbeam {

struct BundledScenario {
  std::string_view name;
  std::string_view text;
};

/// Scenario files compiled into the library from configs/.
const std::vector<BundledScenario>& bundled_scenarios();
std::string_view bundled_scenario(std::string_view name);

}  // namespace twinbeam
