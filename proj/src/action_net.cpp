#include "servant/action_net.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "servant/error.hpp"
#include "servant/random.hpp"

namespace servant::action {

namespace {

std::size_t index_of(const std::string& label, const std::vector<std::string>& vocab) {
  const auto it = std::find(vocab.begin(), vocab.end(), label);
  if (it == vocab.end()) throw Error(ErrorCode::UnknownLabel, "unknown label '" + label + "'");
  return static_cast<std::size_t>(it - vocab.begin());
}

// One forward pass per example, keeping the activations backprop needs.
struct Pass {
  std::vector<double> hidden;
  std::vector<double> output;
};

Pass forward(const ActionNet& net, std::size_t scene) {
  const std::size_t h = net.weights_ih.cols;
  const std::size_t o = net.weights_ho.cols;
  Pass p{std::vector<double>(h), std::vector<double>(o)};
  // The input is one-hot, so the hidden pre-activation is one row of W_ih.
  for (std::size_t j = 0; j < h; ++j) p.hidden[j] = sigmoid(net.weights_ih(scene, j));
  for (std::size_t k = 0; k < o; ++k) {
    double z = 0.0;
    for (std::size_t j = 0; j < h; ++j) z += p.hidden[j] * net.weights_ho(j, k);
    p.output[k] = sigmoid(z);
  }
  return p;
}

struct Encoded {
  std::vector<std::size_t> scene;
  std::vector<std::size_t> action;
};

Encoded encode(const ActionNet& net, const std::vector<ActionExample>& examples) {
  Encoded e;
  for (const auto& ex : examples) {
    e.scene.push_back(index_of(ex.scene_label, net.scene_vocab));
    e.action.push_back(index_of(ex.action_code, net.action_vocab));
  }
  return e;
}

double mean_abs_error(const ActionNet& net, const Encoded& enc) {
  double total = 0.0;
  for (std::size_t i = 0; i < enc.scene.size(); ++i) {
    const Pass p = forward(net, enc.scene[i]);
    for (std::size_t k = 0; k < p.output.size(); ++k)
      total += std::abs(p.output[k] - (k == enc.action[i] ? 1.0 : 0.0));
  }
  return total / static_cast<double>(enc.scene.size() * net.action_vocab.size());
}

Gradients gradient(const ActionNet& net, const Encoded& enc) {
  const std::size_t h = net.weights_ih.cols;
  const std::size_t o = net.weights_ho.cols;
  Gradients g{Matrix(net.weights_ih.rows, h), Matrix(h, o)};
  const double norm = 2.0 / static_cast<double>(enc.scene.size() * o);

  std::vector<double> delta_out(o);
  for (std::size_t i = 0; i < enc.scene.size(); ++i) {
    const Pass p = forward(net, enc.scene[i]);
    for (std::size_t k = 0; k < o; ++k) {
      const double target = k == enc.action[i] ? 1.0 : 0.0;
      delta_out[k] = norm * (p.output[k] - target) * p.output[k] * (1.0 - p.output[k]);
    }
    for (std::size_t j = 0; j < h; ++j) {
      double back = 0.0;
      for (std::size_t k = 0; k < o; ++k) {
        g.ho(j, k) += p.hidden[j] * delta_out[k];
        back += net.weights_ho(j, k) * delta_out[k];
      }
      g.ih(enc.scene[i], j) += back * p.hidden[j] * (1.0 - p.hidden[j]);
    }
  }
  return g;
}

void check_examples(const std::vector<ActionExample>& examples) {
  if (examples.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no training examples");
  std::map<std::string, std::string> seen;
  for (const auto& ex : examples) {
    if (ex.scene_label.empty() || ex.action_code.empty())
      throw Error(ErrorCode::EmptyTrainingSet, "examples need a scene label and an action code");
    const auto [it, fresh] = seen.emplace(ex.scene_label, ex.action_code);
    if (!fresh && it->second != ex.action_code)
      throw Error(ErrorCode::ConflictingExamples, "scene '" + ex.scene_label + "' maps to both '" +
                                                      it->second + "' and '" + ex.action_code + "'");
  }
}

}  // namespace

std::vector<double> encode_onehot(const std::string& label, const std::vector<std::string>& vocab) {
  std::vector<double> v(vocab.size(), 0.0);
  v[index_of(label, vocab)] = 1.0;
  return v;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ActionNet init_net(const std::vector<ActionExample>& examples, const NetParams& params) {
  if (params.hidden_size < 1) throw Error(ErrorCode::InvalidParams, "hidden_size must be >= 1");
  if (!(params.learning_rate > 0.0)) throw Error(ErrorCode::InvalidParams, "learning rate must be > 0");

  ActionNet net;
  net.params = params;
  for (const auto& ex : examples) {
    if (std::find(net.scene_vocab.begin(), net.scene_vocab.end(), ex.scene_label) == net.scene_vocab.end())
      net.scene_vocab.push_back(ex.scene_label);
    if (std::find(net.action_vocab.begin(), net.action_vocab.end(), ex.action_code) ==
        net.action_vocab.end())
      net.action_vocab.push_back(ex.action_code);
  }
  const auto h = static_cast<std::size_t>(params.hidden_size);
  net.weights_ih = Matrix(net.scene_vocab.size(), h);
  net.weights_ho = Matrix(h, net.action_vocab.size());
  Rng rng(params.seed);
  for (double& w : net.weights_ih.data) w = rng.uniform(-1.0, 1.0);
  for (double& w : net.weights_ho.data) w = rng.uniform(-1.0, 1.0);
  return net;
}

double loss(const ActionNet& net, const std::vector<ActionExample>& examples) {
  const Encoded enc = encode(net, examples);
  double total = 0.0;
  for (std::size_t i = 0; i < enc.scene.size(); ++i) {
    const Pass p = forward(net, enc.scene[i]);
    for (std::size_t k = 0; k < p.output.size(); ++k) {
      const double e = p.output[k] - (k == enc.action[i] ? 1.0 : 0.0);
      total += e * e;
    }
  }
  return total / static_cast<double>(enc.scene.size() * net.action_vocab.size());
}

double mean_abs_error(const ActionNet& net, const std::vector<ActionExample>& examples) {
  return mean_abs_error(net, encode(net, examples));
}

Gradients gradient(const ActionNet& net, const std::vector<ActionExample>& examples) {
  return gradient(net, encode(net, examples));
}

std::pair<ActionNet, TrainingTrace> train_actions(const std::vector<ActionExample>& examples,
                                                  long iterations, const NetParams& params) {
  check_examples(examples);
  if (iterations < 1) throw Error(ErrorCode::InvalidParams, "iterations must be >= 1");

  ActionNet net = init_net(examples, params);
  const Encoded enc = encode(net, examples);
  TrainingTrace trace;
  for (long it = 0; it < iterations; ++it) {
    if (it % kTraceInterval == 0) trace.entries.push_back({it, mean_abs_error(net, enc)});
    const Gradients g = gradient(net, enc);
    for (std::size_t i = 0; i < g.ih.data.size(); ++i)
      net.weights_ih.data[i] -= params.learning_rate * g.ih.data[i];
    for (std::size_t i = 0; i < g.ho.data.size(); ++i)
      net.weights_ho.data[i] -= params.learning_rate * g.ho.data[i];
  }
  trace.final_error = mean_abs_error(net, enc);
  return {std::move(net), std::move(trace)};
}

std::string predict_action(const ActionNet& net, const std::string& scene_label) {
  const Pass p = forward(net, index_of(scene_label, net.scene_vocab));
  const auto best = std::max_element(p.output.begin(), p.output.end());
  return net.action_vocab[static_cast<std::size_t>(best - p.output.begin())];
}

namespace {

bool prompt(std::istream& in, std::ostream& out, const char* text, std::string& line, bool echo) {
  out << text << std::flush;
  if (!std::getline(in, line)) {
    out << '\n';
    return false;
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (echo) out << line << '\n';
  return true;
}

}  // namespace

ActionNet action_repl(std::istream& in, std::ostream& out, const ReplOptions& opts) {
  std::vector<ActionExample> examples;
  std::string scene;
  std::string action;

  out << "TRAINING PHASE:\n";
  while (prompt(in, out, "Scene label: ", scene, opts.echo_input) && !scene.empty()) {
    bool got = false;
    while ((got = prompt(in, out, "What action should I take? ", action, opts.echo_input)) &&
           action.empty()) {
    }
    if (!got) break;
    examples.push_back({scene, action});
    out << '\n';
  }

  auto [net, trace] = train_actions(examples, opts.iterations, opts.params);
  for (const auto& e : trace.entries)
    out << fmt::format("output layer error after {} iterations: {}\n", e.iteration, e.mean_abs_error);

  out << "\nPREDICTION PHASE:\n";
  std::string query;
  while (prompt(in, out, "Tell me something: ", query, opts.echo_input) && !query.empty()) {
    try {
      const std::string code = predict_action(net, query);
      out << "based on your command, here's my action prediction:\n[['" << code << "']]\n\n";
    } catch (const Error& err) {
      if (err.code() != ErrorCode::UnknownLabel) throw;
      out << "I was never taught the scene '" << query << "'\n\n";
    }
  }
  return net;
}

}  // namespace servant::action
