#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ppk::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kInputError = 2,
    kInternalError = 3,
};

struct CommandOutcome {
    int exit_code = kOk;
    std::optional<std::filesystem::path> report_path;
};

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"score", "--gt", "g.json", "--pred", "p.json"}. The one-line summary goes to
/// `out`; diagnostics and usage go to `err`.
CommandOutcome run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ppk::cli
