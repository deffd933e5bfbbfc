#include "servant/cli.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "servant/audio.hpp"
#include "servant/bundle.hpp"
#include "servant/error.hpp"
#include "servant/fusion.hpp"
#include "servant/presets.hpp"
#include "servant/scene_model.hpp"
#include "servant/vision.hpp"

namespace servant::cli {

namespace fs = std::filesystem;

namespace {

/// Carries the process exit code out of a command.
struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) { throw Failure{code, message}; }

bool is_decode_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedRiff:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::EmptyData:
    case ErrorCode::ClipTooShort:
    case ErrorCode::BadMagic:
    case ErrorCode::BadHeader:
    case ErrorCode::TruncatedPixelData:
    case ErrorCode::UnsupportedMaxval:
    case ErrorCode::DegenerateImage:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Feature extraction shared by train / predict / fuse
// ---------------------------------------------------------------------------

FeatureVector acoustic_vector(const audio::AudioClip& clip, const persist::ExtractionConfig& x) {
  return audio::acoustic_features(audio::magnitude_spectrum(audio::analysis_window(clip, x.audio_window_s)));
}

FeatureVector visual_vector(const vision::Image& image, const persist::ExtractionConfig& x) {
  clustering::KMeansParams params;
  params.seed = x.palette_seed;
  return vision::palette_features(vision::dominant_colors(image, x.palette_colors, params));
}

audio::AudioClip load_audio(const std::string& path) {
  try {
    return audio::read_wav_file(path);
  } catch (const Error& e) {
    fail(kInputDecode, path + ": " + e.what());
  }
}

vision::Image load_image(const std::string& path) {
  try {
    return vision::read_ppm_file(path);
  } catch (const Error& e) {
    fail(kInputDecode, path + ": " + e.what());
  }
}

FeatureVector extract(Modality m, const std::string& path, const persist::ExtractionConfig& x,
                      int* rate_out = nullptr) {
  try {
    if (m == Modality::Acoustic) {
      const auto clip = load_audio(path);
      if (rate_out) *rate_out = clip.sample_rate_hz;
      return acoustic_vector(clip, x);
    }
    return visual_vector(load_image(path), x);
  } catch (const Error& e) {
    if (is_decode_error(e.code())) fail(kInputDecode, path + ": " + e.what());
    throw;
  }
}

persist::ModelBundle open_bundle(const std::string& path) {
  try {
    return persist::load_bundle(path);
  } catch (const Error& e) {
    fail(kMissingModel, "bundle " + path + ": " + e.what());
  }
}

void write_bundle(const persist::ModelBundle& b, const std::string& path) {
  try {
    persist::save_bundle(b, path);
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
}

const scene::SceneClassifier& require(const std::optional<scene::SceneClassifier>& c, Modality m) {
  if (!c) fail(kMissingModel, fmt::format("bundle has no {} classifier", to_string(m)));
  return *c;
}

Modality parse_modality(const std::string& s) {
  if (s == "acoustic") return Modality::Acoustic;
  if (s == "visual") return Modality::Visual;
  fail(kUsage, "--modality must be acoustic or visual");
}

std::string prediction_line(const scene::ScenePrediction& p) {
  return fmt::format("scene={} confidence={:.3f}", p.scene, p.confidence);
}

// ---------------------------------------------------------------------------
// Options
// ---------------------------------------------------------------------------

struct FusionFlags {
  std::optional<double> window_av;
  std::optional<double> window_photo;
  std::optional<int> photos_required;
  std::optional<double> min_confidence;

  void add_to(CLI::App& app) {
    app.add_option("--window-av", window_av, "Seconds allowed between acoustic and visual prediction");
    app.add_option("--window-photo", window_photo, "Seconds spanned by the photos of one confirmation");
    app.add_option("--photos-required", photos_required, "Photos voted on per confirmation");
    app.add_option("--min-confidence", min_confidence, "Combined confidence needed to report a scene");
  }

  void apply(fusion::FusionConfig& cfg) const {
    if (window_av) cfg.acoustic_visual_window_s = *window_av;
    if (window_photo) cfg.photo_window_s = *window_photo;
    if (photos_required) cfg.photos_required = *photos_required;
    if (min_confidence) cfg.min_combined_confidence = *min_confidence;
    try {
      cfg.validate();
    } catch (const Error& e) {
      fail(kUsage, e.what());
    }
  }
};

struct TrainOpts {
  std::string modality;
  std::vector<std::vector<std::string>> scenes;
  std::string out;
  std::uint64_t seed = 0;
  std::optional<int> colors;
  double scale = 10000.0;
  double window = 5.0;
  FusionFlags fusion;
};

struct PredictOpts {
  std::string modality;
  std::string bundle;
  std::string file;
  std::optional<double> scale;
  std::string dump_spectrum;
};

struct FuseOpts {
  std::string bundle;
  std::string script;
  std::optional<double> scale;
  FusionFlags fusion;
};

struct SynthOpts {
  std::string scene;
  std::vector<std::string> bands;
  std::vector<std::string> colors;
  double seconds = presets::kDefaultSeconds;
  int rate = presets::kDefaultRate;
  int width = presets::kDefaultImageWidth;
  int height = presets::kDefaultImageHeight;
  std::uint64_t seed = 0;
  std::string out;
  std::string out_dir;
  int train_per_scene = 4;
};

struct ActionOpts {
  std::string bundle;
  std::string examples;
  std::string label;
  long iterations = 100000;
  int hidden = 8;
  double lr = 0.5;
  std::uint64_t seed = 1;
  bool echo = false;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

void cmd_train(const TrainOpts& o, std::ostream& out, std::ostream& err) {
  const Modality m = parse_modality(o.modality);

  persist::ModelBundle bundle;
  if (fs::exists(o.out)) bundle = open_bundle(o.out);
  if (m == Modality::Acoustic) {
    bundle.extraction.audio_window_s = o.window;
  } else {
    if (o.colors) bundle.extraction.palette_colors = *o.colors;
    bundle.extraction.palette_seed = o.seed;
  }
  if (bundle.extraction.palette_colors < 1) fail(kUsage, "--k-override must be at least 1");
  o.fusion.apply(bundle.fusion_config);

  scene::TrainingSet set;
  set.modality = m;
  std::map<std::string, int> per_scene;
  std::set<int> rates;
  for (const auto& group : o.scenes) {
    if (group.size() < 2) fail(kUsage, "--scene needs a name followed by at least one file");
    for (std::size_t i = 1; i < group.size(); ++i) {
      int rate = 0;
      set.items.push_back({group[0], extract(m, group[i], bundle.extraction, &rate)});
      if (m == Modality::Acoustic) rates.insert(rate);
      ++per_scene[group[0]];
    }
  }
  if (set.items.empty()) fail(kUsage, "TooFewExamples: no training files given");
  if (rates.size() > 1)
    err << "warning: training clips use " << rates.size()
        << " different sample rates; spectra are compared bin by bin without resampling\n";

  clustering::KMeansParams params;
  params.seed = o.seed;
  params.scale = o.scale;
  scene::SceneClassifier classifier;
  try {
    classifier = scene::train_classifier(set, params);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InconsistentDims)
      fail(kInputDecode, std::string(e.what()) + " (clips of different length or rate?)");
    fail(kUsage, e.what());
  }

  for (const auto& [name, n] : per_scene) out << fmt::format("scene {}: {} files\n", name, n);
  out << fmt::format("modality={} k={} dim={} inertia={:.6g}\n", to_string(m), classifier.model.k(),
                     classifier.feature_dim, classifier.model.inertia);
  for (const auto& w : classifier.warnings) err << "warning: " << w << '\n';

  (m == Modality::Acoustic ? bundle.acoustic : bundle.visual) = std::move(classifier);
  write_bundle(bundle, o.out);
  out << "wrote " << o.out << '\n';
}

void cmd_predict(const PredictOpts& o, std::ostream& out) {
  const Modality m = parse_modality(o.modality);
  const auto bundle = open_bundle(o.bundle);
  auto classifier = require(m == Modality::Acoustic ? bundle.acoustic : bundle.visual, m);
  if (o.scale) classifier.model.params.scale = *o.scale;

  if (!o.dump_spectrum.empty()) {
    if (m != Modality::Acoustic) fail(kUsage, "--dump-spectrum applies to acoustic input only");
    try {
      const auto spec = audio::magnitude_spectrum(
          audio::analysis_window(load_audio(o.file), bundle.extraction.audio_window_s));
      std::ofstream csv(o.dump_spectrum);
      if (!csv) fail(kUsage, "cannot write " + o.dump_spectrum);
      csv << "freq_hz,amp\n";
      for (std::size_t k = 0; k < spec.amps.size(); ++k)
        csv << fmt::format("{},{}\n", spec.freqs_hz[k], spec.amps[k]);
    } catch (const Error& e) {
      fail(kInputDecode, o.file + ": " + e.what());
    }
  }

  const auto features = extract(m, o.file, bundle.extraction);
  try {
    out << prediction_line(scene::classify(classifier, features, 0.0)) << '\n';
  } catch (const Error& e) {
    fail(kInputDecode, o.file + ": " + e.what());
  }
}

void cmd_fuse(const FuseOpts& o, std::ostream& out) {
  const auto bundle = open_bundle(o.bundle);
  auto acoustic = require(bundle.acoustic, Modality::Acoustic);
  auto visual = require(bundle.visual, Modality::Visual);
  if (o.scale) {
    acoustic.model.params.scale = *o.scale;
    visual.model.params.scale = *o.scale;
  }
  fusion::FusionConfig cfg = bundle.fusion_config;
  o.fusion.apply(cfg);

  std::ifstream script(o.script);
  if (!script) fail(kInputDecode, "cannot open script " + o.script);
  std::vector<ScriptEvent> events;
  try {
    events = parse_event_script(script, fs::path(o.script).parent_path().string());
  } catch (const Error& e) {
    fail(kInputDecode, o.script + ": " + e.what());
  }

  fusion::SceneFusion machine(cfg);
  auto report = [&](const fusion::SceneDecision& d) {
    if (d.kind == fusion::DecisionKind::Identified)
      out << fmt::format("{} (confidence={:.3f})\n", detected_line(*d.scene), d.combined_confidence);
    else if (d.kind == fusion::DecisionKind::NoScene)
      out << "No scene detected\n";
  };

  for (const auto& ev : events) {
    report(machine.tick(ev.at));
    const bool is_audio = ev.kind == ScriptEvent::Kind::Audio;
    const Modality m = is_audio ? Modality::Acoustic : Modality::Visual;
    const auto features = extract(m, ev.path, bundle.extraction);
    scene::ScenePrediction pred;
    try {
      pred = scene::classify(is_audio ? acoustic : visual, features, ev.at);
    } catch (const Error& e) {
      fail(kInputDecode, ev.path + ": " + e.what());
    }
    out << fmt::format("t={:.3f} {} {} -> {}\n", ev.at, is_audio ? "audio" : "image",
                       fs::path(ev.path).filename().string(), prediction_line(pred));
    report(is_audio ? machine.on_acoustic(pred) : machine.on_visual_photo(pred));
  }
  // An attempt still open when the script ends can only time out.
  report(machine.tick(std::numeric_limits<double>::infinity()));
}

std::vector<audio::SpectralBand> parse_bands(const std::vector<std::string>& specs) {
  std::vector<audio::SpectralBand> bands;
  for (const auto& s : specs) {
    audio::SpectralBand b;
    char c1 = 0;
    char c2 = 0;
    std::istringstream ss(s);
    if (!(ss >> b.low_hz >> c1 >> b.high_hz >> c2 >> b.gain) || c1 != ':' || c2 != ':' || !ss.eof())
      fail(kUsage, "BadSpec: band '" + s + "' is not LOW:HIGH:GAIN");
    bands.push_back(b);
  }
  return bands;
}

std::vector<vision::ColorShare> parse_colors(const std::vector<std::string>& specs) {
  std::vector<vision::ColorShare> shares;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon != 6) fail(kUsage, "BadSpec: colour '" + s + "' is not RRGGBB:FRACTION");
    unsigned rgb = 0;
    try {
      std::size_t used = 0;
      rgb = static_cast<unsigned>(std::stoul(s.substr(0, 6), &used, 16));
      if (used != 6) throw std::invalid_argument(s);
      vision::ColorShare share;
      share.color = {static_cast<std::uint8_t>(rgb >> 16), static_cast<std::uint8_t>(rgb >> 8),
                     static_cast<std::uint8_t>(rgb)};
      share.fraction = std::stod(s.substr(7), &used);
      if (used != s.size() - 7) throw std::invalid_argument(s);
      shares.push_back(share);
    } catch (const std::logic_error&) {
      fail(kUsage, "BadSpec: colour '" + s + "' is not RRGGBB:FRACTION");
    }
  }
  return shares;
}

void cmd_synth_audio(const SynthOpts& o, std::ostream& out) {
  if (o.out.empty()) fail(kUsage, "--out is required");
  try {
    audio::AudioClip clip;
    if (!o.bands.empty()) {
      if (!o.scene.empty()) fail(kUsage, "use either --scene or --band");
      const auto bands = parse_bands(o.bands);
      clip = audio::synth_ambient(bands, o.seconds, o.rate, o.seed);
    } else if (!o.scene.empty()) {
      clip = presets::scene_audio(o.scene, o.seed, o.seconds, o.rate);
    } else {
      fail(kUsage, "give --scene or at least one --band");
    }
    audio::write_wav_file(o.out, clip);
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
  out << "wrote " << o.out << '\n';
}

void cmd_synth_image(const SynthOpts& o, std::ostream& out) {
  if (o.out.empty()) fail(kUsage, "--out is required");
  try {
    vision::Image img;
    if (!o.colors.empty()) {
      if (!o.scene.empty()) fail(kUsage, "use either --scene or --color");
      const auto shares = parse_colors(o.colors);
      img = vision::synth_scene_image(shares, o.width, o.height, o.seed);
    } else if (!o.scene.empty()) {
      img = presets::scene_image(o.scene, o.seed, o.width, o.height);
    } else {
      fail(kUsage, "give --scene or at least one --color");
    }
    vision::write_ppm_file(o.out, img);
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
  out << "wrote " << o.out << '\n';
}

// Training fixtures plus the 2x2 audio/image stimulus matrix with one event
// script per cell.
void cmd_synth_matrix(const SynthOpts& o, std::ostream& out) {
  if (o.out_dir.empty()) fail(kUsage, "--out-dir is required");
  if (o.train_per_scene < 1) fail(kUsage, "--train-per-scene must be >= 1");
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir / "train", ec);
  if (ec) fail(kUsage, "cannot create " + dir.string() + ": " + ec.message());

  // Seed streams: training fixtures, test audio and test photos never share
  // a seed within one matrix.
  const std::uint64_t base = o.seed * 1000;
  std::vector<std::string> written;
  auto save_audio = [&](const fs::path& p, const std::string& scene, std::uint64_t seed) {
    audio::write_wav_file(p.string(), presets::scene_audio(scene, seed, o.seconds, o.rate));
    written.push_back(fs::relative(p, dir).string());
  };
  auto save_image = [&](const fs::path& p, const std::string& scene, std::uint64_t seed) {
    vision::write_ppm_file(p.string(), presets::scene_image(scene, seed, o.width, o.height));
    written.push_back(fs::relative(p, dir).string());
  };

  try {
    const auto scenes = presets::scene_names();
    for (const auto& scene : scenes) {
      for (int i = 0; i < o.train_per_scene; ++i) {
        const auto seed = base + static_cast<std::uint64_t>(i) + 1;
        save_audio(dir / "train" / fmt::format("{}_{}.wav", scene, i), scene, seed);
        save_image(dir / "train" / fmt::format("{}_{}.ppm", scene, i), scene, seed);
      }
      save_audio(dir / fmt::format("{}.wav", scene), scene, base + 500);
      for (int i = 0; i < 3; ++i)
        save_image(dir / fmt::format("{}_{}.ppm", scene, i), scene, base + 600 + static_cast<std::uint64_t>(i));
    }
    for (const auto& heard : scenes) {
      for (const auto& seen : scenes) {
        const auto name = fmt::format("{}-audio_{}-image.tsv", heard, seen);
        std::ofstream script(dir / name);
        script << "# at\tkind\tpath\n";
        script << fmt::format("0\taudio\t{}.wav\n", heard);
        for (int i = 0; i < 3; ++i) script << fmt::format("{}\timage\t{}_{}.ppm\n", 5 + i, seen, i);
        if (!script) fail(kUsage, "cannot write " + (dir / name).string());
        written.push_back(name);
      }
    }
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
  for (const auto& w : written) out << "wrote " << w << '\n';
}

std::vector<action::ActionExample> read_examples(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(kInputDecode, "cannot open " + path);
  std::vector<action::ActionExample> examples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
      fail(kInputDecode, fmt::format("{}:{}: expected scene<TAB>action", path, lineno));
    examples.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return examples;
}

void store_action(const action::ActionNet& net, const std::string& bundle_path, std::ostream& out) {
  if (bundle_path.empty()) return;
  persist::ModelBundle bundle;
  if (fs::exists(bundle_path)) bundle = open_bundle(bundle_path);
  bundle.action = net;
  write_bundle(bundle, bundle_path);
  out << "wrote " << bundle_path << '\n';
}

action::NetParams net_params(const ActionOpts& o) {
  return {o.hidden, o.lr, o.seed};
}

void cmd_action_train(const ActionOpts& o, std::ostream& out) {
  const auto examples = read_examples(o.examples);
  try {
    auto [net, trace] = action::train_actions(examples, o.iterations, net_params(o));
    for (const auto& e : trace.entries)
      out << fmt::format("output layer error after {} iterations: {}\n", e.iteration, e.mean_abs_error);
    out << fmt::format("final output layer error: {}\n", trace.final_error);
    store_action(net, o.bundle, out);
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
}

void cmd_action_repl(const ActionOpts& o, std::istream& in, std::ostream& out) {
  action::ReplOptions opts;
  opts.iterations = o.iterations;
  opts.params = net_params(o);
  opts.echo_input = o.echo;
  try {
    const auto net = action::action_repl(in, out, opts);
    store_action(net, o.bundle, out);
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
}

void cmd_action_predict(const ActionOpts& o, std::ostream& out) {
  const auto bundle = open_bundle(o.bundle);
  if (!bundle.action) fail(kMissingModel, "bundle has no action network");
  try {
    out << action::predict_action(*bundle.action, o.label) << '\n';
  } catch (const Error& e) {
    fail(kUsage, e.what());
  }
}

}  // namespace

std::string detected_line(const std::string& scene) {
  std::string name = scene;
  if (!name.empty()) name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name + "Scene detected";
}

std::vector<ScriptEvent> parse_event_script(std::istream& in, const std::string& base_dir) {
  std::vector<ScriptEvent> events;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;

    std::vector<std::string> fields;
    std::size_t start = 0;
    for (std::size_t tab; (tab = line.find('\t', start)) != std::string::npos; start = tab + 1)
      fields.push_back(line.substr(start, tab - start));
    fields.push_back(line.substr(start));
    if (fields.size() != 3)
      throw Error(ErrorCode::BadSpec, fmt::format("line {}: expected at<TAB>kind<TAB>path", lineno));

    ScriptEvent ev;
    try {
      std::size_t used = 0;
      ev.at = std::stod(fields[0], &used);
      if (used != fields[0].size()) throw std::invalid_argument(fields[0]);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::BadSpec, fmt::format("line {}: bad timestamp '{}'", lineno, fields[0]));
    }
    if (fields[1] == "audio")
      ev.kind = ScriptEvent::Kind::Audio;
    else if (fields[1] == "image")
      ev.kind = ScriptEvent::Kind::Image;
    else
      throw Error(ErrorCode::BadSpec, fmt::format("line {}: kind must be audio or image", lineno));
    if (fields[2].empty()) throw Error(ErrorCode::BadSpec, fmt::format("line {}: empty path", lineno));
    const fs::path p(fields[2]);
    ev.path = p.is_absolute() || base_dir.empty() ? p.string() : (fs::path(base_dir) / p).string();
    if (!events.empty() && ev.at < events.back().at)
      throw Error(ErrorCode::BadSpec, fmt::format("line {}: timestamps must not decrease", lineno));
    events.push_back(std::move(ev));
  }
  return events;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scene recognition from ambient audio and dominant colours"};
  app.require_subcommand(1);

  TrainOpts train;
  auto* train_cmd = app.add_subcommand("train", "Train a scene classifier and merge it into a bundle");
  train_cmd->add_option("--modality", train.modality, "acoustic or visual")->required();
  train_cmd->add_option("--scene", train.scenes, "NAME FILE... (repeat per scene)")
      ->expected(2, CLI::detail::expected_max_vector_size);
  train_cmd->add_option("--out", train.out, "Bundle to create or update")->required();
  train_cmd->add_option("--seed", train.seed, "K-Means seed");
  train_cmd->add_option("--k-override,--colors", train.colors, "Dominant colours per image (visual)");
  train_cmd->add_option("--scale", train.scale, "Confidence divisor");
  train_cmd->add_option("--window", train.window, "Audio analysis window in seconds");
  train.fusion.add_to(*train_cmd);

  PredictOpts predict;
  auto* predict_cmd = app.add_subcommand("predict", "Classify one audio or image file");
  predict_cmd->add_option("--modality", predict.modality, "acoustic or visual")->required();
  predict_cmd->add_option("--bundle", predict.bundle)->required();
  predict_cmd->add_option("file", predict.file)->required();
  predict_cmd->add_option("--scale", predict.scale, "Override the stored confidence divisor");
  predict_cmd->add_option("--dump-spectrum", predict.dump_spectrum, "Write the spectrum as CSV");

  FuseOpts fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "Replay an event script through scene fusion");
  fuse_cmd->add_option("--bundle", fuse.bundle)->required();
  fuse_cmd->add_option("--script", fuse.script, "TSV of at, kind, path")->required();
  fuse_cmd->add_option("--scale", fuse.scale, "Override the stored confidence divisor");
  fuse.fusion.add_to(*fuse_cmd);

  SynthOpts synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write deterministic synthetic fixtures");
  synth_cmd->require_subcommand(1);
  auto* synth_audio = synth_cmd->add_subcommand("audio", "Synthetic ambience WAV");
  synth_audio->add_option("--scene", synth.scene, "Preset: coffee or gym");
  synth_audio->add_option("--band", synth.bands, "LOW:HIGH:GAIN in Hz (repeatable)");
  synth_audio->add_option("--seconds", synth.seconds);
  synth_audio->add_option("--rate", synth.rate);
  synth_audio->add_option("--seed", synth.seed);
  synth_audio->add_option("--out", synth.out)->required();
  auto* synth_image = synth_cmd->add_subcommand("image", "Synthetic block-colour PPM");
  synth_image->add_option("--scene", synth.scene, "Preset: coffee or gym");
  synth_image->add_option("--color", synth.colors, "RRGGBB:FRACTION (repeatable)");
  synth_image->add_option("--width", synth.width);
  synth_image->add_option("--height", synth.height);
  synth_image->add_option("--seed", synth.seed);
  synth_image->add_option("--out", synth.out)->required();
  auto* synth_matrix = synth_cmd->add_subcommand("matrix", "Training fixtures and the 2x2 stimulus set");
  synth_matrix->add_option("--seed", synth.seed);
  synth_matrix->add_option("--out-dir", synth.out_dir)->required();
  synth_matrix->add_option("--train-per-scene", synth.train_per_scene);
  synth_matrix->add_option("--seconds", synth.seconds);
  synth_matrix->add_option("--rate", synth.rate);

  ActionOpts act;
  auto* action_cmd = app.add_subcommand("action", "Scene-to-action learning");
  action_cmd->require_subcommand(1);
  auto add_net_flags = [&](CLI::App* c) {
    c->add_option("--iterations", act.iterations);
    c->add_option("--hidden", act.hidden);
    c->add_option("--lr", act.lr);
    c->add_option("--seed", act.seed);
  };
  auto* action_train = action_cmd->add_subcommand("train", "Train from a scene<TAB>action file");
  action_train->add_option("--examples", act.examples)->required();
  action_train->add_option("--bundle", act.bundle, "Bundle to store the network in");
  add_net_flags(action_train);
  auto* action_repl = action_cmd->add_subcommand("repl", "Interactive teach-then-query session");
  action_repl->add_option("--bundle", act.bundle, "Bundle to store the network in");
  action_repl->add_flag("--echo", act.echo, "Echo input lines (for piped sessions)");
  add_net_flags(action_repl);
  auto* action_predict = action_cmd->add_subcommand("predict", "Predict the action for a scene label");
  action_predict->add_option("--bundle", act.bundle)->required();
  action_predict->add_option("label", act.label)->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (train_cmd->parsed()) cmd_train(train, out, err);
    else if (predict_cmd->parsed()) cmd_predict(predict, out);
    else if (fuse_cmd->parsed()) cmd_fuse(fuse, out);
    else if (synth_audio->parsed()) cmd_synth_audio(synth, out);
    else if (synth_image->parsed()) cmd_synth_image(synth, out);
    else if (synth_matrix->parsed()) cmd_synth_matrix(synth, out);
    else if (action_train->parsed()) cmd_action_train(act, out);
    else if (action_repl->parsed()) cmd_action_repl(act, in, out);
    else if (action_predict->parsed()) cmd_action_predict(act, out);
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_decode_error(e.code()) ? kInputDecode : kUsage;
  }
  return kOk;
}

}  // namespace servant::cli
