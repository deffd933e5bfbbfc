#include "servant/scene_model.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "servant/error.hpp"

namespace servant::scene {

SceneClassifier train_classifier(const TrainingSet& set, const clustering::KMeansParams& params) {
  if (set.items.empty()) throw Error(ErrorCode::TooFewExamples, "training set is empty");

  const std::size_t dim = set.items.front().features.values.size();
  if (dim == 0) throw Error(ErrorCode::InconsistentDims, "feature vectors are empty");
  std::set<std::string> scene_set;
  std::vector<clustering::Point> points;
  points.reserve(set.items.size());
  for (const auto& item : set.items) {
    if (item.features.modality != set.modality)
      throw Error(ErrorCode::ModalityMismatch, "item for scene '" + item.scene + "' has " +
                                                   std::string(to_string(item.features.modality)) +
                                                   " features in a " +
                                                   std::string(to_string(set.modality)) + " set");
    if (item.features.values.size() != dim)
      throw Error(ErrorCode::InconsistentDims,
                  "feature length " + std::to_string(item.features.values.size()) + " for scene '" +
                      item.scene + "', expected " + std::to_string(dim));
    if (item.scene.empty()) throw Error(ErrorCode::TooFewExamples, "empty scene name");
    scene_set.insert(item.scene);
    points.push_back(item.features.values);
  }
  const std::vector<std::string> scenes(scene_set.begin(), scene_set.end());

  clustering::KMeansParams p = params;
  p.k = static_cast<int>(scenes.size());

  SceneClassifier out;
  out.modality = set.modality;
  out.feature_dim = dim;
  out.model = clustering::fit(points, p);

  const std::size_t k = scenes.size();
  // votes[cluster][scene index]
  std::vector<std::vector<std::size_t>> votes(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto label = static_cast<std::size_t>(clustering::predict(out.model, points[i]).label);
    const auto s = static_cast<std::size_t>(
        std::lower_bound(scenes.begin(), scenes.end(), set.items[i].scene) - scenes.begin());
    ++votes[label][s];
  }

  out.cluster_names.resize(k);
  std::vector<bool> empty(k, false);
  for (std::size_t c = 0; c < k; ++c) {
    const auto best = std::max_element(votes[c].begin(), votes[c].end());
    if (*best == 0) {
      empty[c] = true;
      continue;
    }
    // max_element returns the first maximum, i.e. the alphabetically first.
    out.cluster_names[c] = scenes[static_cast<std::size_t>(best - votes[c].begin())];
  }

  for (std::size_t c = 0; c < k; ++c) {
    if (!empty[c]) continue;
    std::string pick = scenes.front();
    for (const auto& s : scenes) {
      if (std::find(out.cluster_names.begin(), out.cluster_names.end(), s) ==
          out.cluster_names.end()) {
        pick = s;
        break;
      }
    }
    out.cluster_names[c] = pick;
    out.ambiguous = true;
    out.warnings.push_back("cluster " + std::to_string(c) +
                           " has no training members; named '" + pick + "'");
  }

  std::map<std::string, int> name_uses;
  for (const auto& n : out.cluster_names) ++name_uses[n];
  for (const auto& [name, uses] : name_uses) {
    if (uses > 1) {
      out.ambiguous = true;
      out.warnings.push_back("scene '" + name + "' names " + std::to_string(uses) + " clusters");
    }
  }
  return out;
}

ScenePrediction classify(const SceneClassifier& classifier, const FeatureVector& features,
                         double now) {
  if (features.modality != classifier.modality)
    throw Error(ErrorCode::ModalityMismatch,
                std::string(to_string(features.modality)) + " features given to a " +
                    std::string(to_string(classifier.modality)) + " classifier");
  if (features.values.size() != classifier.feature_dim)
    throw Error(ErrorCode::DimensionMismatch,
                "feature length " + std::to_string(features.values.size()) + ", classifier expects " +
                    std::to_string(classifier.feature_dim));

  const auto hit = clustering::predict(classifier.model, features.values);
  ScenePrediction pred;
  pred.scene = classifier.cluster_names.at(static_cast<std::size_t>(hit.label));
  pred.confidence = clustering::confidence(hit.distance, classifier.model.params.scale);
  pred.modality = classifier.modality;
  pred.at = now;
  return pred;
}

}  // namespace servant::scene
