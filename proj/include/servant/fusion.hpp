#pragma once

#include <optional>
#include <string>
#include <vector>

#include "servant/scene_model.hpp"

namespace servant::fusion {

struct FusionConfig {
  /// Visual confirmation must arrive within this many seconds of the
  /// acoustic prediction.
  double acoustic_visual_window_s = 30.0;
  /// All photos of one confirmation must fall within this span.
  double photo_window_s = 20.0;
  int photos_required = 3;
  double min_combined_confidence = 0.0;

  /// Throws InvalidConfig.
  void validate() const;
};

enum class Phase { Idle, AwaitingVisual };

struct FusionState {
  Phase phase = Phase::Idle;
  std::optional<scene::ScenePrediction> pending_acoustic;
  std::vector<scene::ScenePrediction> photos;
  std::optional<double> deadline;
  /// Latest timestamp seen by any transition.
  std::optional<double> last_seen;
};

enum class DecisionKind { Pending, Identified, NoScene };

struct SceneDecision {
  DecisionKind kind = DecisionKind::Pending;
  std::optional<std::string> scene;
  double combined_confidence = 0.0;

  static SceneDecision pending() { return {}; }
  static SceneDecision no_scene() { return {DecisionKind::NoScene, std::nullopt, 0.0}; }
};

/// Acoustic-first, visual-confirm state machine. Transitions are driven by
/// caller-supplied timestamps; nothing reads a wall clock.
///
/// Every transition throws ClockSkew if handed a time earlier than one it has
/// already seen, and ModalityMismatch for predictions of the wrong kind.
class SceneFusion {
 public:
  explicit SceneFusion(FusionConfig cfg = {});

  /// Starts (or restarts) the visual confirmation window.
  SceneDecision on_acoustic(const scene::ScenePrediction& pred);

  /// Photos while Idle are discarded. A photo past the acoustic deadline or
  /// outside the photo window ends the attempt with NoScene.
  SceneDecision on_visual_photo(const scene::ScenePrediction& pred);

  /// NoScene and back to Idle once `now` is past the deadline.
  SceneDecision tick(double now);

  const FusionState& state() const { return state_; }
  const FusionConfig& config() const { return cfg_; }

 private:
  void observe(double t);
  SceneDecision restart();
  SceneDecision decide();

  FusionConfig cfg_;
  FusionState state_;
};

std::string to_string(DecisionKind kind);

}  // namespace servant::fusion
