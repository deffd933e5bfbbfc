#pragma once

#include <string_view>
#include <vector>

namespace servant {

enum class Modality { Acoustic, Visual };

std::string_view to_string(Modality m) noexcept;
/// Throws Error{SchemaError} for anything other than "acoustic"/"visual".
Modality modality_from_string(std::string_view s);

/// A single K-Means data point tagged with the pipeline that produced it.
struct FeatureVector {
  std::vector<double> values;
  Modality modality = Modality::Acoustic;
};

}  // namespace servant
