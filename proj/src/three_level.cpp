#include "ams/three_level.hpp"

#include <string>

namespace ams {

std::string_view to_string(RatePreset preset) { return preset == RatePreset::LinBeta ? "lin" : "log"; }

RatePreset rate_preset_from_string(std::string_view name) {
  if (name == "lin") return RatePreset::LinBeta;
  if (name == "log") return RatePreset::LogBeta;
  throw Error(ErrorKind::ConfigError, "unknown rate preset '" + std::string(name) + "'");
}

}  // namespace ams
