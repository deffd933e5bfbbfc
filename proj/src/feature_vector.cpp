#include "servant/feature_vector.hpp"

#include <string>

#include "servant/error.hpp"

namespace servant {

std::string_view to_string(Modality m) noexcept {
  return m == Modality::Acoustic ? "acoustic" : "visual";
}

Modality modality_from_string(std::string_view s) {
  if (s == "acoustic") return Modality::Acoustic;
  if (s == "visual") return Modality::Visual;
  throw Error(ErrorCode::SchemaError, "unknown modality '" + std::string(s) + "'");
}

}  // namespace servant
