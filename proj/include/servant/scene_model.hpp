#pragma once

#include <string>
#include <vector>

#include "servant/feature_vector.hpp"
#include "servant/kmeans.hpp"

namespace servant::scene {

struct LabeledFeatures {
  std::string scene;
  FeatureVector features;
};

struct TrainingSet {
  Modality modality = Modality::Acoustic;
  std::vector<LabeledFeatures> items;
};

/// K-Means model whose clusters carry scene names.
struct SceneClassifier {
  Modality modality = Modality::Acoustic;
  clustering::KMeansModel model;
  /// Indexed by cluster label; total on 0..k-1.
  std::vector<std::string> cluster_names;
  std::size_t feature_dim = 0;
  /// Set when two clusters share a name or a cluster has no training members.
  bool ambiguous = false;
  std::vector<std::string> warnings;
};

struct ScenePrediction {
  std::string scene;
  double confidence = 0.0;
  Modality modality = Modality::Acoustic;
  /// Seconds on the caller's monotonic clock.
  double at = 0.0;
};

/// Fits K-Means with k forced to the number of distinct scene names and
/// names each cluster by majority vote of its training members (ties and
/// memberless clusters resolved alphabetically).
///
/// Throws TooFewExamples, InconsistentDims or ModalityMismatch.
SceneClassifier train_classifier(const TrainingSet& set, const clustering::KMeansParams& params);

/// Throws DimensionMismatch or ModalityMismatch.
ScenePrediction classify(const SceneClassifier& classifier, const FeatureVector& features,
                         double now);

}  // namespace servant::scene
