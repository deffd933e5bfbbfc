#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace servant::action {

struct ActionExample {
  std::string scene_label;
  std::string action_code;
};

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct NetParams {
  int hidden_size = 8;
  double learning_rate = 0.5;
  std::uint64_t seed = 1;
};

/// One-hot scene label in, one-hot action code out, one sigmoid hidden layer.
/// No bias terms; with one-hot inputs each input row acts as its own bias.
struct ActionNet {
  std::vector<std::string> scene_vocab;
  std::vector<std::string> action_vocab;
  Matrix weights_ih;  // |scene_vocab| x H
  Matrix weights_ho;  // H x |action_vocab|
  NetParams params;
};

struct TraceEntry {
  long iteration = 0;
  double mean_abs_error = 0.0;
};

struct TrainingTrace {
  /// Sampled every 1000 iterations, starting at iteration 0.
  std::vector<TraceEntry> entries;
  /// Mean absolute output error after the last update.
  double final_error = 0.0;
};

struct Gradients {
  Matrix ih;
  Matrix ho;
};

inline constexpr long kTraceInterval = 1000;

/// Throws UnknownLabel.
std::vector<double> encode_onehot(const std::string& label, const std::vector<std::string>& vocab);

double sigmoid(double x);

/// Vocabularies in first-seen order, weights uniform in [-1, 1] from the seed.
ActionNet init_net(const std::vector<ActionExample>& examples, const NetParams& params);

/// Mean squared output error over the examples and output units.
double loss(const ActionNet& net, const std::vector<ActionExample>& examples);
/// Mean absolute output error; the figure reported in training traces.
double mean_abs_error(const ActionNet& net, const std::vector<ActionExample>& examples);
/// Analytic gradient of loss() with respect to both weight matrices.
Gradients gradient(const ActionNet& net, const std::vector<ActionExample>& examples);

/// Full-batch gradient descent. Throws EmptyTrainingSet or
/// ConflictingExamples (one scene label mapped to two action codes).
std::pair<ActionNet, TrainingTrace> train_actions(const std::vector<ActionExample>& examples,
                                                  long iterations = 100000,
                                                  const NetParams& params = {});

/// Throws UnknownLabel.
std::string predict_action(const ActionNet& net, const std::string& scene_label);

struct ReplOptions {
  long iterations = 100000;
  NetParams params;
  /// Echo each line read, so piped sessions read like a terminal transcript.
  bool echo_input = false;
};

/// Interactive teach-then-query session on a line-oriented channel.
/// Training ends at a blank scene label; queries end at a blank line or EOF.
/// Throws EmptyTrainingSet when no example was entered.
ActionNet action_repl(std::istream& in, std::ostream& out, const ReplOptions& opts = {});

}  // namespace servant::action
