#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgame/embedding.hpp"
#include "qgame/strategies.hpp"

namespace qgame {

inline constexpr const char* kToolName = "qgame";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { verify, simulate, invariants, embed, bloch_export, optimize, infeasibility, reproduce };
enum class OutputFormat { json, csv };

std::string_view to_string(Command command);

/// Bad flags, unknown ids or unsupported combinations. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::reproduce;
    /// Resolved catalog id ("qubit" and "rebit" are expanded via branch/variant).
    std::string strategy_id = "qubit+";
    std::optional<std::filesystem::path> spec_path;
    std::uint64_t seed = 0;
    std::uint64_t rounds = 100000;
    std::size_t order = 3;
    std::size_t restarts = 20;
    SignBranch branch = SignBranch::plus;
    RebitVariant variant = RebitVariant::original;
    OutputFormat output_format = OutputFormat::json;
    std::optional<std::filesystem::path> output_path;
    bool timestamp = true;
    /// optimize only: qubit, rebit, rebit-pure or classical-bit.
    std::string search_class = "qubit";
    bool verbose = false;
};

/// Parses argv (without the program name). Throws UsageError.
/// Returns nullopt when help was requested; the help text goes to `help_out`.
std::optional<RunConfig> parse_run_config(const std::vector<std::string>& args, std::ostream& help_out);

/// Runs the command. Exit code 0 on success, 1 on validation failure or
/// unwritable output, 2 on usage error.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_run_config followed by dispatch.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qgame
