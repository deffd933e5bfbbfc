#include <fstream>

#include "doctest.h"
#include "servant/bundle.hpp"
#include "support/helpers.hpp"

using namespace servant;
using namespace servant::persist;
using testing::error_of;

namespace {

scene::SceneClassifier random_classifier(Rng& rng, Modality m, std::size_t dim) {
  scene::TrainingSet set{m, {}};
  for (const char* name : {"coffee", "gym", "park"})
    for (int i = 0; i < 4; ++i) {
      std::vector<double> v(dim);
      for (double& x : v) x = rng.uniform(-1e4, 1e4) / 3.0;
      set.items.push_back({name, {v, m}});
    }
  clustering::KMeansParams p;
  p.seed = 7;
  p.scale = 1234.5678;
  return scene::train_classifier(set, p);
}

ModelBundle sample_bundle() {
  Rng rng(3);
  ModelBundle b;
  b.acoustic = random_classifier(rng, Modality::Acoustic, 10);
  b.visual = random_classifier(rng, Modality::Visual, 9);
  b.action = action::train_actions({{"coffee", "42"}, {"gym", "10"}}, 500).first;
  b.fusion_config.photos_required = 2;
  b.fusion_config.min_combined_confidence = 12.25;
  b.extraction.palette_seed = 99;
  return b;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * std::max(1.0, std::abs(a[i])));
}

}  // namespace

TEST_CASE("bundle round-trips through JSON") {
  const ModelBundle b = sample_bundle();
  const ModelBundle r = deserialize_bundle(serialize_bundle(b));

  REQUIRE(r.acoustic);
  REQUIRE(r.visual);
  REQUIRE(r.action);
  CHECK(r.format_version == 1);
  CHECK(r.acoustic->cluster_names == b.acoustic->cluster_names);
  CHECK(r.acoustic->feature_dim == 10);
  CHECK(r.acoustic->model.params.scale == b.acoustic->model.params.scale);
  for (std::size_t c = 0; c < b.acoustic->model.centroids.size(); ++c)
    check_close(r.acoustic->model.centroids[c], b.acoustic->model.centroids[c]);
  CHECK(r.visual->modality == Modality::Visual);
  CHECK(r.action->scene_vocab == b.action->scene_vocab);
  CHECK(r.action->action_vocab == b.action->action_vocab);
  check_close(r.action->weights_ih.data, b.action->weights_ih.data);
  check_close(r.action->weights_ho.data, b.action->weights_ho.data);
  CHECK(r.fusion_config.photos_required == 2);
  CHECK(r.fusion_config.min_combined_confidence == 12.25);
  CHECK(r.extraction.palette_seed == 99);

  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    FeatureVector q{std::vector<double>(10), Modality::Acoustic};
    for (double& x : q.values) x = rng.uniform(-5000, 5000);
    const auto want = scene::classify(*b.acoustic, q, 0);
    const auto got = scene::classify(*r.acoustic, q, 0);
    CHECK(got.scene == want.scene);
    CHECK(got.confidence == want.confidence);
  }
  CHECK(action::predict_action(*r.action, "gym") == "10");
}

TEST_CASE("partial bundles keep absent sections absent") {
  ModelBundle b;
  const ModelBundle r = deserialize_bundle(serialize_bundle(b));
  CHECK_FALSE(r.acoustic);
  CHECK_FALSE(r.visual);
  CHECK_FALSE(r.action);
}

TEST_CASE("bundle version and schema errors") {
  std::string text = serialize_bundle(sample_bundle());
  const auto at = text.find("\"format_version\": 1");
  REQUIRE(at != std::string::npos);
  std::string v2 = text;
  v2.replace(at, 19, "\"format_version\": 2");
  CHECK(error_of([&] { deserialize_bundle(v2); }) == ErrorCode::BadVersion);

  CHECK(error_of([&] { deserialize_bundle(text.substr(0, text.size() / 2)); }) == ErrorCode::SchemaError);
  CHECK(error_of([] { deserialize_bundle("[]"); }) == ErrorCode::SchemaError);

  std::string bad_fusion = text;
  const auto pr = bad_fusion.find("\"photos_required\": 2");
  REQUIRE(pr != std::string::npos);
  bad_fusion.replace(pr, 20, "\"photos_required\": 0");
  CHECK(error_of([&] { deserialize_bundle(bad_fusion); }) == ErrorCode::SchemaError);
  CHECK(error_of([] { deserialize_bundle("{\"format_version\": 1, \"acoustic\": {}}"); }) == ErrorCode::SchemaError);
}

TEST_CASE("bundle files") {
  testing::TempDir dir("bundle");
  const std::string path = dir.file("model.json");
  save_bundle(sample_bundle(), path);
  const ModelBundle r = load_bundle(path);
  CHECK(r.acoustic);
  CHECK(error_of([&] { load_bundle(dir.file("missing.json")); }) == ErrorCode::IoError);

  {
    std::ofstream f(path, std::ios::trunc);
    f << "{\"format_version\": 1, \"acous";
  }
  CHECK(error_of([&] { load_bundle(path); }) == ErrorCode::SchemaError);
}
