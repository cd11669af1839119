#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "hhsim/config.hpp"

namespace hhsim {

struct Preset {
  std::string_view name;
  std::string_view description;
  std::string_view text;  // config file contents
  // Overrides of the reduced "smoke" variant.
  std::vector<std::pair<std::string_view, std::string_view>> smoke;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

RunConfig preset_config(const Preset& preset, bool smoke = false);

}  // namespace hhsim
