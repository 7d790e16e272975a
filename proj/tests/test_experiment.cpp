#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "normflow/experiment.hpp"

using namespace normflow;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("normflow_test_" + std::to_string(rd()));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

// Column `col` of every data row.
std::vector<double> column(const fs::path& csv, std::size_t col) {
    std::vector<double> out;
    const auto rows = lines(slurp(csv));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream row(rows[i]);
        std::string cell;
        for (std::size_t c = 0; c <= col; ++c) std::getline(row, cell, ',');
        out.push_back(std::stod(cell));
    }
    return out;
}

}  // namespace

TEST_CASE("csv schemas") {
    CHECK(kSeriesHeader == "tau,norm_sq,mu,l2_error,energy");
    CHECK(kProfileHeader == "x,re,im,abs,ref_abs");
    CHECK(kSummaryHeader == "alpha,final_norm_sq,final_abs_mu,final_l2_error,termination,steps");

    const std::vector<TimeSeriesRecord> rows{{0.0, 2.0, 0.0, 0.0, -1.0 / 3.0}};
    CHECK(series_csv(rows) == "tau,norm_sq,mu,l2_error,energy\n0,2,0,0,-0.33333333333333331\n");

    const GridSpec grid(4.0, 4);
    const Wavefunction psi(grid, Field{{1, 0}, {0, 1}, {-1, 0}, {3, 4}});
    const auto prof = lines(profile_csv(psi));
    REQUIRE(prof.size() == 5);
    CHECK(prof[0] == kProfileHeader);
    CHECK(prof[4].starts_with("1,3,4,5,"));
}

TEST_CASE("formatted reals read back exactly") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mantissa(rng), exponent(rng));
        const std::string s = format_real(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(back == v);
    }
}

TEST_CASE("single run writes one series and one profile") {
    TempDir tmp;
    ExperimentSpec spec = parse_config("kind=single\nrecord_every=1\nmax_steps=10");
    spec.out_dir = tmp.path;
    const auto outcome = run_experiment(spec);
    REQUIRE(outcome.files.size() == 2);
    CHECK_FALSE(outcome.any_diverged());

    const auto series = lines(slurp(tmp.path / "series_single.csv"));
    CHECK(series.front() == kSeriesHeader);
    CHECK(series.size() == 12);  // header + tau = 0..10
    const auto profile = lines(slurp(tmp.path / "profile_single.csv"));
    CHECK(profile.size() == 513);
    for (const auto& entry : fs::directory_iterator(tmp.path)) CHECK(entry.path().extension() == ".csv");
}

TEST_CASE("baseline comparison separates the three behaviors") {
    TempDir tmp;
    ExperimentSpec spec = parse_config("kind=baseline_compare\nmax_steps=400\nrecord_every=20");
    spec.out_dir = tmp.path;
    const auto outcome = run_experiment(spec);
    REQUIRE(outcome.runs.size() == 3);
    CHECK(outcome.files.size() == 6);

    const auto unstabilized = column(tmp.path / "series_unstabilized.csv", 1);
    const auto projected = column(tmp.path / "series_projected.csv", 1);
    const auto feedback = column(tmp.path / "series_feedback_target_norm.csv", 1);

    for (double n : projected) CHECK(std::abs(n - 2.0) <= 1e-10);
    for (std::size_t i = 1; i < unstabilized.size(); ++i) CHECK(unstabilized[i] > unstabilized[i - 1]);
    CHECK(unstabilized.back() > 2.5);
    for (double n : feedback) CHECK(std::abs(n - 2.0) <= 0.05);
}

TEST_CASE("alpha sweep writes per-run files and a summary") {
    TempDir tmp;
    ExperimentSpec spec = parse_config("kind=alpha_sweep\nmax_steps=300\nalphas=0.05,0.5,1");
    spec.out_dir = tmp.path;
    const auto outcome = run_experiment(spec);
    CHECK(outcome.files.size() == 7);
    CHECK_FALSE(outcome.any_diverged());

    const auto summary = lines(slurp(tmp.path / "summary.csv"));
    REQUIRE(summary.size() == 4);
    CHECK(summary[0] == kSummaryHeader);
    CHECK(summary[1].starts_with("0.050000000000000003,"));
    CHECK(summary[1].ends_with(",max_steps,300"));
    CHECK(fs::exists(tmp.path / "series_alpha_0.05.csv"));
    CHECK(fs::exists(tmp.path / "profile_alpha_1.csv"));
}

TEST_CASE("diverged sweep members are reported, siblings still finish") {
    TempDir tmp;
    ExperimentSpec spec = parse_config("kind=alpha_sweep\nlaw=gauge_real\nmax_steps=200\nalphas=0,0.5");
    spec.out_dir = tmp.path;
    const auto outcome = run_experiment(spec);
    CHECK(outcome.any_diverged());
    const auto summary = lines(slurp(tmp.path / "summary.csv"));
    REQUIRE(summary.size() == 3);
    CHECK(summary[1].find(",max_steps,") != std::string::npos);
    CHECK(summary[2].find(",diverged,") != std::string::npos);
}

TEST_CASE("reruns reproduce byte-identical output") {
    TempDir a, b;
    ExperimentSpec spec = parse_config("kind=alpha_sweep\nmax_steps=200\nalphas=0.1,0.25");
    spec.out_dir = a.path;
    (void)run_experiment(spec);
    spec.out_dir = b.path;
    (void)run_experiment(spec);
    for (const auto& entry : fs::directory_iterator(a.path)) {
        CHECK(slurp(entry.path()) == slurp(b.path / entry.path().filename()));
    }
}

TEST_CASE("atomic writes leave no partial files") {
    TempDir tmp;
    fs::create_directories(tmp.path);
    write_file_atomically(tmp.path / "x.csv", "a,b\n1,2\n");
    CHECK(slurp(tmp.path / "x.csv") == "a,b\n1,2\n");
    CHECK_FALSE(fs::exists(tmp.path / "x.csv.tmp"));

    CHECK_THROWS_AS(write_file_atomically(tmp.path / "missing" / "y.csv", "z"), fs::filesystem_error);
    CHECK_FALSE(fs::exists(tmp.path / "missing" / "y.csv"));
}

TEST_CASE("running without an output directory is an error") {
    CHECK_THROWS_AS((void)run_experiment(parse_config("kind=single")), ParseError);
}
