#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace servant::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kMissingModel = 2,
  kInputDecode = 3,
};

/// Runs the command line `args` (args[0] is the program name). All output
/// goes to the given streams so the CLI can be driven in-process.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

/// "coffee" -> "CoffeeScene detected".
std::string detected_line(const std::string& scene);

struct ScriptEvent {
  double at = 0.0;
  enum class Kind { Audio, Image } kind = Kind::Audio;
  std::string path;
};

/// Tab-separated `at<TAB>kind<TAB>path` lines; '#' starts a comment line.
/// Relative paths resolve against `base_dir`. Timestamps must not decrease.
/// Throws Error{BadSpec} on malformed input.
std::vector<ScriptEvent> parse_event_script(std::istream& in, const std::string& base_dir);

}  // namespace servant::cli
