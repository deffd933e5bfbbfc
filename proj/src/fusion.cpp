#include "servant/fusion.hpp"

#include <map>

#include "servant/error.hpp"

namespace servant::fusion {

void FusionConfig::validate() const {
  if (!(acoustic_visual_window_s > 0.0) || !(photo_window_s > 0.0))
    throw Error(ErrorCode::InvalidConfig, "fusion windows must be positive");
  if (photo_window_s > acoustic_visual_window_s)
    throw Error(ErrorCode::InvalidConfig, "photo window exceeds the acoustic-visual window");
  if (photos_required < 1) throw Error(ErrorCode::InvalidConfig, "photos_required must be >= 1");
}

SceneFusion::SceneFusion(FusionConfig cfg) : cfg_(cfg) { cfg_.validate(); }

void SceneFusion::observe(double t) {
  if (state_.last_seen && t < *state_.last_seen)
    throw Error(ErrorCode::ClockSkew, "time " + std::to_string(t) + " precedes " +
                                          std::to_string(*state_.last_seen));
  state_.last_seen = t;
}

SceneDecision SceneFusion::restart() {
  state_.phase = Phase::Idle;
  state_.pending_acoustic.reset();
  state_.photos.clear();
  state_.deadline.reset();
  return SceneDecision::no_scene();
}

SceneDecision SceneFusion::on_acoustic(const scene::ScenePrediction& pred) {
  if (pred.modality != Modality::Acoustic)
    throw Error(ErrorCode::ModalityMismatch, "on_acoustic needs an acoustic prediction");
  observe(pred.at);
  state_.phase = Phase::AwaitingVisual;
  state_.pending_acoustic = pred;
  state_.deadline = pred.at + cfg_.acoustic_visual_window_s;
  state_.photos.clear();
  return SceneDecision::pending();
}

SceneDecision SceneFusion::on_visual_photo(const scene::ScenePrediction& pred) {
  if (pred.modality != Modality::Visual)
    throw Error(ErrorCode::ModalityMismatch, "on_visual_photo needs a visual prediction");
  observe(pred.at);
  if (state_.phase != Phase::AwaitingVisual) return SceneDecision::pending();

  if (pred.at > *state_.deadline) return restart();
  if (!state_.photos.empty() && pred.at > state_.photos.front().at + cfg_.photo_window_s)
    return restart();

  state_.photos.push_back(pred);
  if (static_cast<int>(state_.photos.size()) < cfg_.photos_required) return SceneDecision::pending();
  return decide();
}

SceneDecision SceneFusion::decide() {
  std::map<std::string, int> votes;
  for (const auto& p : state_.photos) ++votes[p.scene];
  int top = 0;
  int top_count = 0;
  std::string verdict;
  for (const auto& [scene, n] : votes) {
    if (n > top) {
      top = n;
      top_count = 1;
      verdict = scene;
    } else if (n == top) {
      ++top_count;
    }
  }
  const scene::ScenePrediction acoustic = *state_.pending_acoustic;
  if (top_count != 1 || verdict != acoustic.scene) return restart();

  double visual_sum = 0.0;
  for (const auto& p : state_.photos)
    if (p.scene == verdict) visual_sum += p.confidence;
  const double visual = visual_sum / top;
  const double combined = (acoustic.confidence + visual) / 2.0;
  if (combined < cfg_.min_combined_confidence) return restart();

  restart();
  return {DecisionKind::Identified, verdict, combined};
}

SceneDecision SceneFusion::tick(double now) {
  observe(now);
  if (state_.phase == Phase::AwaitingVisual && now > *state_.deadline) return restart();
  return SceneDecision::pending();
}

std::string to_string(DecisionKind kind) {
  switch (kind) {
    case DecisionKind::Pending: return "Pending";
    case DecisionKind::Identified: return "Identified";
    case DecisionKind::NoScene: return "NoScene";
  }
  return "?";
}

}  // namespace servant::fusion
