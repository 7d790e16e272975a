#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "normflow/config.hpp"
#include "normflow/evolve.hpp"

namespace normflow {

inline constexpr std::string_view kSeriesHeader = "tau,norm_sq,mu,l2_error,energy";
inline constexpr std::string_view kProfileHeader = "x,re,im,abs,ref_abs";
inline constexpr std::string_view kSummaryHeader = "alpha,final_norm_sq,final_abs_mu,final_l2_error,termination,steps";

struct SweepSummaryRow {
    double alpha = 0.0;
    double final_norm_sq = 0.0;
    double final_abs_mu = 0.0;
    double final_l2_error = 0.0;
    Termination termination = Termination::MaxSteps;
    std::size_t steps = 0;
};

[[nodiscard]] SweepSummaryRow summarize(double alpha, const RunResult& result);

/// 17 significant digits, enough to round-trip any double.
[[nodiscard]] std::string format_real(double value);

[[nodiscard]] std::string series_csv(std::span<const TimeSeriesRecord> series);
[[nodiscard]] std::string profile_csv(const Wavefunction& psi);
[[nodiscard]] std::string summary_csv(std::span<const SweepSummaryRow> rows);

/// Writes through a temporary sibling and renames, so `path` is either complete or absent.
void write_file_atomically(const std::filesystem::path& path, std::string_view contents);

struct LabeledRun {
    std::string label;
    double alpha = 0.0;
    RunResult result;
};

struct ExperimentOutcome {
    std::vector<LabeledRun> runs;
    std::vector<std::filesystem::path> files;

    [[nodiscard]] bool any_diverged() const noexcept;
};

/**
 * Executes the experiment and writes its CSV outputs under spec.out_dir
 * (created if needed). Sweep runs execute concurrently; the summary is
 * written once all of them finish. A diverged run is reported, never fatal.
 */
[[nodiscard]] ExperimentOutcome run_experiment(const ExperimentSpec& spec);

}  // namespace normflow
