#include <fstream>
#include <sstream>

#include "doctest.h"
#include "servant/audio.hpp"
#include "servant/presets.hpp"
#include "support/cli_driver.hpp"

using namespace servant;
using testing::run_cli;
using testing::TempDir;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

}  // namespace

TEST_CASE("detected_line capitalizes the scene") {
  CHECK(cli::detected_line("coffee") == "CoffeeScene detected");
  CHECK(cli::detected_line("gym") == "GymScene detected");
}

TEST_CASE("train, predict and fuse over a synthetic matrix") {
  TempDir dir("cli-matrix");
  const auto prep = testing::prepare_matrix(dir, 1);
  REQUIRE_MESSAGE(prep.code == 0, prep.err);
  CHECK(prep.out.find("scene coffee: 4 files") != std::string::npos);
  CHECK(prep.out.find("modality=visual k=2 dim=9") != std::string::npos);

  const auto p = run_cli({"predict", "--modality", "acoustic", "--bundle", dir.file("bundle.json"), dir.file("gym.wav")});
  CHECK(p.code == 0);
  CHECK(p.out.rfind("scene=gym confidence=", 0) == 0);

  const auto v =
      run_cli({"predict", "--modality", "visual", "--bundle", dir.file("bundle.json"), dir.file("coffee_1.ppm")});
  CHECK(v.out.rfind("scene=coffee confidence=", 0) == 0);

  const auto matched =
      run_cli({"fuse", "--bundle", dir.file("bundle.json"), "--script", dir.file("coffee-audio_coffee-image.tsv")});
  CHECK(matched.code == 0);
  CHECK(testing::last_line(matched.out).rfind("CoffeeScene detected (confidence=", 0) == 0);
  CHECK(matched.out.find("t=0.000 audio coffee.wav -> scene=coffee") != std::string::npos);

  const auto crossed =
      run_cli({"fuse", "--bundle", dir.file("bundle.json"), "--script", dir.file("gym-audio_coffee-image.tsv")});
  CHECK(testing::last_line(crossed.out) == "No scene detected");
}

TEST_CASE("a one-file-per-scene bundle recognises its own training clip exactly") {
  TempDir dir("cli-single");
  REQUIRE(run_cli({"synth", "audio", "--scene", "coffee", "--seed", "3", "--out", dir.file("c.wav")}).code == 0);
  REQUIRE(run_cli({"synth", "audio", "--scene", "gym", "--seed", "4", "--out", dir.file("g.wav")}).code == 0);
  const auto t = run_cli({"train", "--modality", "acoustic", "--scene", "coffee", dir.file("c.wav"), "--scene", "gym",
                      dir.file("g.wav"), "--out", dir.file("b.json")});
  REQUIRE_MESSAGE(t.code == 0, t.err);
  const auto p = run_cli({"predict", "--modality", "acoustic", "--bundle", dir.file("b.json"), dir.file("c.wav")});
  CHECK(p.out == "scene=coffee confidence=100.000\n");
}

TEST_CASE("exit codes") {
  TempDir dir("cli-codes");
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"bogus"}).code == cli::kUsage);
  CHECK(run_cli({"train", "--modality", "acoustic", "--out", dir.file("b.json")}).code == cli::kUsage);
  CHECK(run_cli({"predict", "--modality", "sonar", "--bundle", dir.file("b.json"), "x"}).code == cli::kUsage);

  CHECK(run_cli({"predict", "--modality", "acoustic", "--bundle", dir.file("none.json"), "x.wav"}).code ==
        cli::kMissingModel);
  write_text(dir.file("broken.json"), "{\"format_version\": 1,");
  CHECK(run_cli({"predict", "--modality", "acoustic", "--bundle", dir.file("broken.json"), "x.wav"}).code ==
        cli::kMissingModel);

  REQUIRE(run_cli({"synth", "audio", "--scene", "gym", "--out", dir.file("g.wav")}).code == 0);
  REQUIRE(run_cli({"train", "--modality", "acoustic", "--scene", "gym", dir.file("g.wav"), "--out", dir.file("b.json")})
              .code == 0);
  // Acoustic-only bundle has no visual classifier.
  CHECK(run_cli({"predict", "--modality", "visual", "--bundle", dir.file("b.json"), "x.ppm"}).code ==
        cli::kMissingModel);
  CHECK(run_cli({"action", "predict", "--bundle", dir.file("b.json"), "gym"}).code == cli::kMissingModel);

  write_text(dir.file("junk.wav"), "RIFF0000WAVEjunk");
  CHECK(run_cli({"predict", "--modality", "acoustic", "--bundle", dir.file("b.json"), dir.file("junk.wav")}).code ==
        cli::kInputDecode);
  CHECK(run_cli({"predict", "--modality", "acoustic", "--bundle", dir.file("b.json"), dir.file("missing.wav")}).code ==
        cli::kInputDecode);
}

TEST_CASE("repeated runs are byte-identical") {
  TempDir a("cli-det-a");
  TempDir b("cli-det-b");
  REQUIRE(testing::prepare_matrix(a, 5, 2).code == 0);
  REQUIRE(testing::prepare_matrix(b, 5, 2).code == 0);
  CHECK(slurp(a.file("bundle.json")) == slurp(b.file("bundle.json")));
  CHECK(slurp(a.file("gym.wav")) == slurp(b.file("gym.wav")));
  CHECK(slurp(a.file("coffee_2.ppm")) == slurp(b.file("coffee_2.ppm")));

  const auto f1 = run_cli({"fuse", "--bundle", a.file("bundle.json"), "--script", a.file("gym-audio_gym-image.tsv")});
  const auto f2 = run_cli({"fuse", "--bundle", a.file("bundle.json"), "--script", a.file("gym-audio_gym-image.tsv")});
  CHECK(f1.out == f2.out);
}

TEST_CASE("train warns about mixed sample rates") {
  TempDir dir("cli-rates");
  REQUIRE(run_cli({"synth", "audio", "--scene", "gym", "--rate", "8000", "--seconds", "1", "--out", dir.file("a.wav")})
              .code == 0);
  REQUIRE(run_cli({"synth", "audio", "--scene", "gym", "--rate", "6000", "--seconds", "1", "--out",
               dir.file("b.wav")})
              .code == 0);
  const auto t = run_cli({"train", "--modality", "acoustic", "--scene", "gym", dir.file("a.wav"), dir.file("b.wav"),
                          "--window", "0.5", "--out", dir.file("m.json")});
  // 4000 and 3000 samples both pad to 4096, so dimensions agree.
  CHECK(t.code == 0);
  CHECK(t.err.find("different sample rates") != std::string::npos);
}

TEST_CASE("synth audio with explicit bands") {
  TempDir dir("cli-bands");
  CHECK(run_cli({"synth", "audio", "--band", "100:200:1", "--seconds", "1", "--out", dir.file("x.wav")}).code == 0);
  const auto clip = audio::read_wav_file(dir.file("x.wav"));
  CHECK(clip.sample_rate_hz == presets::kDefaultRate);
  CHECK(clip.samples.size() == 8000);
  CHECK(run_cli({"synth", "audio", "--band", "100-200", "--out", dir.file("y.wav")}).code == cli::kUsage);
  CHECK(run_cli({"synth", "image", "--color", "ff0000:0.5", "--out", dir.file("y.ppm")}).code == cli::kUsage);
}

TEST_CASE("action train and predict through the bundle") {
  TempDir dir("cli-action");
  write_text(dir.file("ex.tsv"), "# scene\taction\ncoffee\t42\ngym\t10\ncoffee\t42\n");
  const auto t = run_cli({"action", "train", "--examples", dir.file("ex.tsv"), "--iterations", "3000", "--bundle",
                      dir.file("b.json")});
  REQUIRE_MESSAGE(t.code == 0, t.err);
  CHECK(t.out.rfind("output layer error after 0 iterations: ", 0) == 0);
  CHECK(run_cli({"action", "predict", "--bundle", dir.file("b.json"), "coffee"}).out == "42\n");
  CHECK(run_cli({"action", "predict", "--bundle", dir.file("b.json"), "park"}).code == cli::kUsage);

  const auto repl = run_cli({"action", "repl", "--iterations", "1000", "--echo"}, "gym\n10\n\ngym\n");
  CHECK(repl.code == 0);
  CHECK(repl.out.find("[['10']]") != std::string::npos);
  CHECK(run_cli({"action", "repl"}, "\n").code == cli::kUsage);
}

TEST_CASE("event scripts") {
  std::istringstream ok("# header\n0\taudio\ta.wav\n5.5\timage\t/abs/b.ppm\n\n5.5\timage\tc.ppm\r\n");
  const auto events = cli::parse_event_script(ok, "base");
  REQUIRE(events.size() == 3);
  CHECK(events[0].kind == cli::ScriptEvent::Kind::Audio);
  CHECK(events[0].path == "base/a.wav");
  CHECK(events[1].at == 5.5);
  CHECK(events[1].path == "/abs/b.ppm");
  CHECK(events[2].path == "base/c.ppm");

  for (const char* bad : {"0 audio a.wav\n", "x\taudio\ta.wav\n", "0\tvideo\ta.wav\n", "0\taudio\t\n",
                          "5\taudio\ta.wav\n4\timage\tb.ppm\n"}) {
    std::istringstream in(bad);
    CHECK(testing::error_of([&] { cli::parse_event_script(in, ""); }) == ErrorCode::BadSpec);
  }
}
