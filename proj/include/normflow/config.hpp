#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "normflow/evolve.hpp"

namespace normflow {

enum class ExperimentKind { Single, BaselineCompare, AlphaSweep };

[[nodiscard]] std::string_view to_string(ExperimentKind kind) noexcept;

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Single;
    SolverConfig base{};
    std::vector<double> alpha_values;        ///< AlphaSweep only
    std::optional<std::filesystem::path> out_dir;
};

/// Configuration error tied to one key (or to a line that has no key).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    [[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

using ConfigOverrides = std::vector<std::pair<std::string, std::string>>;

/// Every key the configuration format accepts, in documentation order.
[[nodiscard]] std::span<const std::string_view> config_keys() noexcept;

/// Sweep values used when `alphas` is omitted.
[[nodiscard]] std::vector<double> default_alpha_values();

/**
 * Parses a flat `key = value` document (`#` starts a comment). `kind` is
 * required; everything else falls back to its default. Overrides replace
 * document values key by key before validation. Throws ParseError.
 */
[[nodiscard]] ExperimentSpec parse_config(std::string_view document, const ConfigOverrides& overrides = {});

/// Reads `path` and parses it. A missing file is reported as a ParseError.
[[nodiscard]] ExperimentSpec load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

}  // namespace normflow
