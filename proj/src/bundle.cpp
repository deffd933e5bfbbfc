#include "servant/bundle.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "servant/error.hpp"

namespace servant::persist {

using nlohmann::json;

namespace {

json to_json(const clustering::KMeansModel& m) {
  return {{"k", m.params.k},
          {"max_iters", m.params.max_iters},
          {"tol", m.params.tol},
          {"seed", m.params.seed},
          {"scale", m.params.scale},
          {"n_init", m.params.n_init},
          {"dim", m.dim},
          {"inertia", m.inertia},
          {"centroids", m.centroids}};
}

json to_json(const scene::SceneClassifier& c) {
  return {{"modality", std::string(to_string(c.modality))},
          {"feature_dim", c.feature_dim},
          {"cluster_names", c.cluster_names},
          {"ambiguous", c.ambiguous},
          {"warnings", c.warnings},
          {"kmeans", to_json(c.model)}};
}

json to_json(const action::Matrix& m) {
  return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

json to_json(const action::ActionNet& n) {
  return {{"scene_vocab", n.scene_vocab},
          {"action_vocab", n.action_vocab},
          {"hidden_size", n.params.hidden_size},
          {"learning_rate", n.params.learning_rate},
          {"seed", n.params.seed},
          {"weights_ih", to_json(n.weights_ih)},
          {"weights_ho", to_json(n.weights_ho)}};
}

void schema_check(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::SchemaError, what);
}

clustering::KMeansModel kmeans_from_json(const json& j) {
  clustering::KMeansModel m;
  m.params.k = j.at("k").get<int>();
  m.params.max_iters = j.at("max_iters").get<int>();
  m.params.tol = j.at("tol").get<double>();
  m.params.seed = j.at("seed").get<std::uint64_t>();
  m.params.scale = j.at("scale").get<double>();
  m.params.n_init = j.at("n_init").get<int>();
  m.dim = j.at("dim").get<std::size_t>();
  m.inertia = j.at("inertia").get<double>();
  m.centroids = j.at("centroids").get<std::vector<clustering::Point>>();
  try {
    m.params.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  schema_check(m.centroids.size() == static_cast<std::size_t>(m.params.k),
               "centroid count differs from k");
  for (const auto& c : m.centroids) schema_check(c.size() == m.dim, "centroid dimension differs from dim");
  return m;
}

scene::SceneClassifier classifier_from_json(const json& j, Modality expected) {
  scene::SceneClassifier c;
  c.modality = modality_from_string(j.at("modality").get<std::string>());
  schema_check(c.modality == expected, "classifier stored under the wrong modality");
  c.feature_dim = j.at("feature_dim").get<std::size_t>();
  c.cluster_names = j.at("cluster_names").get<std::vector<std::string>>();
  c.ambiguous = j.value("ambiguous", false);
  c.warnings = j.value("warnings", std::vector<std::string>{});
  c.model = kmeans_from_json(j.at("kmeans"));
  schema_check(c.model.dim == c.feature_dim, "feature_dim differs from centroid dimension");
  schema_check(c.cluster_names.size() == c.model.centroids.size(), "cluster_names not total on labels");
  return c;
}

action::Matrix matrix_from_json(const json& j) {
  action::Matrix m;
  m.rows = j.at("rows").get<std::size_t>();
  m.cols = j.at("cols").get<std::size_t>();
  m.data = j.at("data").get<std::vector<double>>();
  schema_check(m.data.size() == m.rows * m.cols, "matrix data size differs from shape");
  return m;
}

action::ActionNet action_from_json(const json& j) {
  action::ActionNet n;
  n.scene_vocab = j.at("scene_vocab").get<std::vector<std::string>>();
  n.action_vocab = j.at("action_vocab").get<std::vector<std::string>>();
  n.params.hidden_size = j.at("hidden_size").get<int>();
  n.params.learning_rate = j.at("learning_rate").get<double>();
  n.params.seed = j.at("seed").get<std::uint64_t>();
  n.weights_ih = matrix_from_json(j.at("weights_ih"));
  n.weights_ho = matrix_from_json(j.at("weights_ho"));
  const auto h = static_cast<std::size_t>(n.params.hidden_size);
  schema_check(n.weights_ih.rows == n.scene_vocab.size() && n.weights_ih.cols == h,
               "weights_ih shape inconsistent with vocabulary");
  schema_check(n.weights_ho.rows == h && n.weights_ho.cols == n.action_vocab.size(),
               "weights_ho shape inconsistent with vocabulary");
  return n;
}

}  // namespace

std::string serialize_bundle(const ModelBundle& bundle) {
  json j;
  j["format_version"] = bundle.format_version;
  const auto& f = bundle.fusion_config;
  j["fusion_config"] = {{"acoustic_visual_window_s", f.acoustic_visual_window_s},
                        {"photo_window_s", f.photo_window_s},
                        {"photos_required", f.photos_required},
                        {"min_combined_confidence", f.min_combined_confidence}};
  const auto& x = bundle.extraction;
  j["extraction"] = {{"audio_window_s", x.audio_window_s},
                     {"palette_colors", x.palette_colors},
                     {"palette_seed", x.palette_seed}};
  if (bundle.acoustic) j["acoustic"] = to_json(*bundle.acoustic);
  if (bundle.visual) j["visual"] = to_json(*bundle.visual);
  if (bundle.action) j["action"] = to_json(*bundle.action);
  return j.dump(2) + "\n";
}

ModelBundle deserialize_bundle(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("bundle is not valid JSON: ") + e.what());
  }

  try {
    schema_check(j.is_object(), "bundle root must be an object");
    ModelBundle b;
    b.format_version = j.at("format_version").get<int>();
    if (b.format_version != kFormatVersion)
      throw Error(ErrorCode::BadVersion, "bundle format_version " + std::to_string(b.format_version) +
                                             ", this build reads " + std::to_string(kFormatVersion));

    const json& f = j.at("fusion_config");
    b.fusion_config.acoustic_visual_window_s = f.at("acoustic_visual_window_s").get<double>();
    b.fusion_config.photo_window_s = f.at("photo_window_s").get<double>();
    b.fusion_config.photos_required = f.at("photos_required").get<int>();
    b.fusion_config.min_combined_confidence = f.at("min_combined_confidence").get<double>();
    try {
      b.fusion_config.validate();
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaError, std::string("fusion_config: ") + e.what());
    }

    const json& x = j.at("extraction");
    b.extraction.audio_window_s = x.at("audio_window_s").get<double>();
    b.extraction.palette_colors = x.at("palette_colors").get<int>();
    b.extraction.palette_seed = x.at("palette_seed").get<std::uint64_t>();

    if (j.contains("acoustic")) b.acoustic = classifier_from_json(j["acoustic"], Modality::Acoustic);
    if (j.contains("visual")) {
      b.visual = classifier_from_json(j["visual"], Modality::Visual);
      schema_check(b.visual->feature_dim == 3 * static_cast<std::size_t>(b.extraction.palette_colors),
                   "visual feature_dim differs from 3 x palette_colors");
    }
    if (j.contains("action")) b.action = action_from_json(j["action"]);
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

void save_bundle(const ModelBundle& bundle, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << serialize_bundle(bundle);
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path);
}

ModelBundle load_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_bundle(ss.str());
}

}  // namespace servant::persist
