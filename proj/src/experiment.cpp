#include "normflow/experiment.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <system_error>

namespace normflow {

namespace {

std::string alpha_label(double alpha) {
    std::array<char, 32> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), alpha);
    return "alpha_" + std::string(buf.data(), ptr);
}

void emit_run(const std::filesystem::path& dir, const LabeledRun& run, std::vector<std::filesystem::path>& files) {
    const auto series_path = dir / ("series_" + run.label + ".csv");
    const auto profile_path = dir / ("profile_" + run.label + ".csv");
    write_file_atomically(series_path, series_csv(run.result.series));
    write_file_atomically(profile_path, profile_csv(run.result.final_psi));
    files.push_back(series_path);
    files.push_back(profile_path);
}

}  // namespace

std::string format_real(double value) {
    std::array<char, 40> buf{};
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    return std::string(buf.data(), ptr);
}

std::string series_csv(std::span<const TimeSeriesRecord> series) {
    std::string out(kSeriesHeader);
    out += '\n';
    for (const auto& r : series) {
        out += format_real(r.tau) + ',' + format_real(r.norm_sq) + ',' + format_real(r.mu) + ',' +
               format_real(r.l2_error) + ',' + format_real(r.energy) + '\n';
    }
    return out;
}

std::string profile_csv(const Wavefunction& psi) {
    std::string out(kProfileHeader);
    out += '\n';
    const GridSpec& grid = psi.grid();
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double x = grid.coordinate(j);
        out += format_real(x) + ',' + format_real(psi[j].real()) + ',' + format_real(psi[j].imag()) + ',' +
               format_real(std::abs(psi[j])) + ',' + format_real(1.0 / std::cosh(x)) + '\n';
    }
    return out;
}

std::string summary_csv(std::span<const SweepSummaryRow> rows) {
    std::string out(kSummaryHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += format_real(r.alpha) + ',' + format_real(r.final_norm_sq) + ',' + format_real(r.final_abs_mu) + ',' +
               format_real(r.final_l2_error) + ',' + std::string(to_string(r.termination)) + ',' +
               std::to_string(r.steps) + '\n';
    }
    return out;
}

SweepSummaryRow summarize(double alpha, const RunResult& result) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    SweepSummaryRow row{alpha, nan, nan, nan, result.termination, result.steps_taken};
    if (!result.series.empty()) {
        const auto& last = result.series.back();
        row.final_norm_sq = last.norm_sq;
        row.final_abs_mu = std::abs(last.mu);
        row.final_l2_error = last.l2_error;
    }
    return row;
}

void write_file_atomically(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::filesystem::filesystem_error("cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw std::filesystem::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
        }
    }
    std::filesystem::rename(tmp, path);
}

bool ExperimentOutcome::any_diverged() const noexcept {
    for (const auto& run : runs) {
        if (run.result.termination == Termination::Diverged) return true;
    }
    return false;
}

ExperimentOutcome run_experiment(const ExperimentSpec& spec) {
    if (!spec.out_dir) throw ParseError("out_dir", "an output directory is required to run an experiment");
    const std::filesystem::path& dir = *spec.out_dir;
    std::filesystem::create_directories(dir);

    ExperimentOutcome outcome;
    switch (spec.kind) {
        case ExperimentKind::Single: {
            outcome.runs.push_back({"single", spec.base.alpha, run(spec.base)});
            break;
        }
        case ExperimentKind::BaselineCompare: {
            SolverConfig unstabilized = spec.base;
            unstabilized.law = FeedbackLaw::Off;
            unstabilized.renormalize_every_step = false;

            SolverConfig projected = unstabilized;
            projected.renormalize_every_step = true;

            SolverConfig feedback = spec.base;
            feedback.renormalize_every_step = false;

            outcome.runs.push_back({"unstabilized", 0.0, run(unstabilized)});
            outcome.runs.push_back({"projected", 0.0, run(projected)});
            outcome.runs.push_back({"feedback_" + std::string(to_string(feedback.law)), feedback.alpha, run(feedback)});
            break;
        }
        case ExperimentKind::AlphaSweep: {
            std::vector<std::future<RunResult>> pending;
            pending.reserve(spec.alpha_values.size());
            for (const double alpha : spec.alpha_values) {
                SolverConfig cfg = spec.base;
                cfg.alpha = alpha;
                pending.push_back(std::async(std::launch::async, [cfg] { return run(cfg); }));
            }
            for (std::size_t i = 0; i < pending.size(); ++i) {
                const double alpha = spec.alpha_values[i];
                outcome.runs.push_back({alpha_label(alpha), alpha, pending[i].get()});
            }
            break;
        }
    }

    for (const auto& r : outcome.runs) emit_run(dir, r, outcome.files);

    if (spec.kind == ExperimentKind::AlphaSweep) {
        std::vector<SweepSummaryRow> rows;
        for (const auto& r : outcome.runs) rows.push_back(summarize(r.alpha, r.result));
        const auto summary_path = dir / "summary.csv";
        write_file_atomically(summary_path, summary_csv(rows));
        outcome.files.push_back(summary_path);
    }
    return outcome;
}

}  // namespace normflow
