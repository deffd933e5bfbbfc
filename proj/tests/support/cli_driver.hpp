#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "servant/cli.hpp"
#include "support/helpers.hpp"

namespace testing {

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "servant");
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  CliResult r;
  r.code = servant::cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

/// Synthesizes a stimulus matrix under `dir` and trains both classifiers
/// into dir/bundle.json. Returns the first failing step, if any.
inline CliResult prepare_matrix(const TempDir& dir, std::uint64_t seed, int train_per_scene = 4) {
  const std::string root = dir.path().string();
  CliResult r = run_cli({"synth", "matrix", "--seed", std::to_string(seed), "--out-dir", root, "--train-per-scene",
                     std::to_string(train_per_scene)});
  if (r.code != 0) return r;
  for (const char* modality : {"acoustic", "visual"}) {
    const char* ext = std::string(modality) == "acoustic" ? "wav" : "ppm";
    std::vector<std::string> args{"train", "--modality", modality, "--out", dir.file("bundle.json")};
    for (const char* scene : {"coffee", "gym"}) {
      args.push_back("--scene");
      args.push_back(scene);
      for (int i = 0; i < train_per_scene; ++i)
        args.push_back(dir.file("train/" + std::string(scene) + "_" + std::to_string(i) + "." + ext));
    }
    r = run_cli(args);
    if (r.code != 0) return r;
  }
  return r;
}

/// Last non-empty line of the text.
inline std::string last_line(const std::string& text) {
  std::size_t end = text.find_last_not_of('\n');
  if (end == std::string::npos) return "";
  const std::size_t start = text.rfind('\n', end);
  return text.substr(start == std::string::npos ? 0 : start + 1, end - (start == std::string::npos ? 0 : start + 1) + 1);
}

}  // namespace testing
