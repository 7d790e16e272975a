#include "normflow/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace normflow {

namespace {

constexpr std::array<std::string_view, 15> kKeys{
    "kind",   "L",       "N",           "g",      "dtau",         "max_steps",       "law",    "alpha",
    "alphas", "target_norm_sq", "initial", "renormalize", "record_every", "convergence_tol", "out_dir",
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(key, "expected a number, got '" + std::string(text) + "'");
    }
    if (!std::isfinite(value)) throw ParseError(key, "value must be finite");
    return value;
}

double parse_positive(const std::string& key, std::string_view text) {
    const double value = parse_real(key, text);
    if (value <= 0.0) throw ParseError(key, "must be positive, got " + std::string(text));
    return value;
}

std::size_t parse_count(const std::string& key, std::string_view text) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
    }
    if (value == 0) throw ParseError(key, "must be positive");
    return value;
}

bool parse_bool(const std::string& key, std::string_view text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ParseError(key, "expected true or false, got '" + std::string(text) + "'");
}

InitialCondition parse_initial(const std::string& key, std::string_view text) {
    if (text == "sech") return {InitialKind::Sech, 2.0};
    if (text == "sech_normalized") return {InitialKind::SechNormalized, 2.0};
    constexpr std::string_view prefix = "gaussian:";
    if (text.starts_with(prefix)) {
        return {InitialKind::Gaussian, parse_positive(key, trim(text.substr(prefix.size())))};
    }
    throw ParseError(key, "expected sech, sech_normalized or gaussian:WIDTH, got '" + std::string(text) + "'");
}

ExperimentKind parse_kind(const std::string& key, std::string_view text) {
    if (text == "single") return ExperimentKind::Single;
    if (text == "baseline_compare") return ExperimentKind::BaselineCompare;
    if (text == "alpha_sweep") return ExperimentKind::AlphaSweep;
    throw ParseError(key, "expected single, baseline_compare or alpha_sweep, got '" + std::string(text) + "'");
}

std::vector<double> parse_alphas(const std::string& key, std::string_view text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        if (item.empty()) throw ParseError(key, "empty entry in alpha list");
        const double alpha = parse_real(key, item);
        if (alpha < 0.0) throw ParseError(key, "alpha values must be >= 0");
        if (std::find(values.begin(), values.end(), alpha) != values.end()) {
            throw ParseError(key, "duplicate alpha value " + std::string(item));
        }
        values.push_back(alpha);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

bool is_known_key(std::string_view key) {
    return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
    switch (kind) {
        case ExperimentKind::Single: return "single";
        case ExperimentKind::BaselineCompare: return "baseline_compare";
        case ExperimentKind::AlphaSweep: return "alpha_sweep";
    }
    return "unknown";
}

std::span<const std::string_view> config_keys() noexcept { return kKeys; }

std::vector<double> default_alpha_values() { return {0.05, 0.1, 0.25, 0.5, 1.0}; }

ExperimentSpec parse_config(std::string_view document, const ConfigOverrides& overrides) {
    std::map<std::string, std::string, std::less<>> entries;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= document.size()) {
        const auto eol = document.find('\n', pos);
        std::string_view line = document.substr(pos, eol == std::string_view::npos ? document.npos : eol - pos);
        pos = eol == std::string_view::npos ? document.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("line " + std::to_string(line_no), "expected 'key = value', got '" + std::string(line) + "'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!is_known_key(key)) throw ParseError(key, "unknown key");
        if (value.empty()) throw ParseError(key, "missing value");
        if (!entries.emplace(key, value).second) throw ParseError(key, "given more than once");
    }
    for (const auto& [key, value] : overrides) {
        if (!is_known_key(key)) throw ParseError(key, "unknown key");
        if (trim(value).empty()) throw ParseError(key, "missing value");
        entries[key] = std::string(trim(value));
    }

    auto take = [&](std::string_view key) -> std::optional<std::string> {
        const auto it = entries.find(key);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    };

    ExperimentSpec spec;
    const auto kind = take("kind");
    if (!kind) throw ParseError("kind", "required key is missing");
    spec.kind = parse_kind("kind", *kind);

    SolverConfig& cfg = spec.base;
    double length = GridSpec::kDefaultLength;
    std::size_t points = GridSpec::kDefaultPoints;
    if (auto v = take("L")) length = parse_positive("L", *v);
    if (auto v = take("N")) points = parse_count("N", *v);
    if (points < GridSpec::kMinPoints) {
        throw ParseError("N", "must be at least " + std::to_string(GridSpec::kMinPoints));
    }
    cfg.grid = GridSpec(length, points);

    if (auto v = take("g")) cfg.physics.g = parse_real("g", *v);
    if (auto v = take("dtau")) cfg.dtau = parse_positive("dtau", *v);
    if (auto v = take("max_steps")) cfg.max_steps = parse_count("max_steps", *v);
    if (auto v = take("law")) {
        const auto law = parse_feedback_law(*v);
        if (!law) throw ParseError("law", "expected off, literal, gauge_real or target_norm, got '" + *v + "'");
        cfg.law = *law;
    }
    if (auto v = take("alpha")) {
        cfg.alpha = parse_real("alpha", *v);
        if (cfg.alpha < 0.0) throw ParseError("alpha", "must be >= 0");
    }
    if (auto v = take("target_norm_sq")) cfg.target_norm_sq = parse_positive("target_norm_sq", *v);
    if (auto v = take("initial")) cfg.initial = parse_initial("initial", *v);
    if (auto v = take("renormalize")) cfg.renormalize_every_step = parse_bool("renormalize", *v);
    if (auto v = take("record_every")) cfg.record_every = parse_count("record_every", *v);
    if (auto v = take("convergence_tol")) cfg.convergence_tol = parse_positive("convergence_tol", *v);
    if (auto v = take("out_dir")) spec.out_dir = std::filesystem::path(*v);

    if (auto v = take("alphas")) {
        if (spec.kind != ExperimentKind::AlphaSweep) throw ParseError("alphas", "only valid with kind = alpha_sweep");
        spec.alpha_values = parse_alphas("alphas", *v);
    } else if (spec.kind == ExperimentKind::AlphaSweep) {
        spec.alpha_values = default_alpha_values();
    }

    if (cfg.renormalize_every_step && cfg.law != FeedbackLaw::Off) {
        throw ParseError("renormalize", "per-step renormalization requires law = off");
    }
    if (spec.kind == ExperimentKind::AlphaSweep && cfg.law == FeedbackLaw::Off) {
        throw ParseError("law", "an alpha sweep needs a feedback law other than off");
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError("config", e.what());
    }
    return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) throw ParseError("config", "cannot read '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), overrides);
}

}  // namespace normflow
