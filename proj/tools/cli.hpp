#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace touchauth::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInput = 3, kRuntime = 4 };

/// Fully resolved parameters of one command: defaults, then the config
/// file, then flags. Values are stored in canonical text form so the same
/// settings always render identically.
class RunConfig {
public:
    RunConfig() = default;
    RunConfig(std::string command, std::vector<std::pair<std::string, std::string>> values)
        : command_(std::move(command)), values_(std::move(values)) {}

    const std::string& command() const noexcept { return command_; }
    const std::vector<std::pair<std::string, std::string>>& values() const noexcept { return values_; }

    const std::string& get(std::string_view key) const;
    std::size_t get_size(std::string_view key) const;
    std::uint64_t get_u64(std::string_view key) const;
    double get_double(std::string_view key) const;
    bool get_bool(std::string_view key) const;

    /// `#@ command=...` followed by one `#@ key=value` line per key.
    std::string comment_block() const;

private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> values_;
};

/// Reads `key=value` lines. Files holding `#@ ` lines (artifacts) contribute
/// only those; JSON reports contribute their "config" object.
std::vector<std::pair<std::string, std::string>> parse_config_text(std::string_view source);

/// Runs the command line `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace touchauth::cli
