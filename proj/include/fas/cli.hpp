#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fas/analysis.hpp"
#include "fas/correlation.hpp"
#include "fas/metrics.hpp"

namespace fas::cli {

enum ExitCode : int { kOk = 0, kBadArgs = 2, kNumericalFailure = 3, kGateFailure = 4 };

enum class Format { Csv, Json, Text };

/// Inclusive start:stop:step range.
struct Range {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;
    std::vector<double> values() const;
};

Range parse_range(std::string_view text);
std::vector<double> parse_real_list(std::string_view text);
std::vector<int> parse_int_list(std::string_view text);
/// Comma list of exact, closed_form, approx, asymptotic, mrc, mc.
std::vector<Method> parse_methods(std::string_view text);
CorrelationModel parse_correlation(std::string_view text);
Format parse_format(std::string_view text);

struct RunSpec {
    std::string command = "curve";
    int ports = 10;
    double size_wavelengths = 0.3;
    int m = 1;
    double omega = 1.0;
    CorrelationModel correlation = CorrelationModel::UniformNoReference;
    double gamma_th_db = 1.0;
    /// Average SNR axis (dB) for curve, table and validate.
    Range grid{-10.0, 40.0, 1.0};
    std::vector<Method> methods{Method::Exact, Method::GammaApprox, Method::Asymptotic};
    int mrc_branches = 2;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    Format format = Format::Csv;
    /// Empty means stdout.
    std::string out;

    Range port_range{1.0, 50.0, 1.0};
    std::vector<int> port_list{10, 100, 300};
    std::vector<double> size_list{0.5, 1.0, 2.0};
    std::vector<int> m_list{1, 3, 5};
    Range gamma_th_grid{-10.0, 20.0, 1.0};
    /// Fixed average SNR for the sweeps.
    double gamma_bar_db = 5.0;
    int repetitions = 5;
    unsigned threads = 1;

    FasConfig config() const;
    CorrelationProfile profile() const;
    /// Throws DomainError describing the first invalid field.
    void validate() const;
};

/// Defaults for each command; anything given on the command line overrides them.
RunSpec defaults_for(std::string_view command);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// gamma_bar_db, then one column per method. Asymptotic adds asymptotic_clipped
/// (min(op, 1)) and Monte Carlo adds mc_std_err.
Table cmd_curve(const RunSpec& spec);
/// Rows (N, W, ...) at the fixed gamma_bar_db.
Table cmd_sweep_ports(const RunSpec& spec);
/// Rows (N, gamma_th_db, ...) over gamma_th_grid for each N in port_list.
Table cmd_sweep_threshold(const RunSpec& spec);
/// Rows (N, m, ...) over port_range for each m in m_list.
Table cmd_severity(const RunSpec& spec);
/// One record per N in port_list, timed on the grid.
std::vector<BenchmarkRecord> cmd_table(const RunSpec& spec);

struct GateResult {
    std::string name;
    bool passed = false;
    bool applicable = true;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

/// N=1 exactness, Monte Carlo agreement within 3 standard errors, and the
/// deep-tail slope of exact_op against -mN (1%).
std::vector<GateResult> cmd_validate(const RunSpec& spec);

void write_csv(const Table& table, std::ostream& os);
void write_json(const Table& table, const RunSpec& spec, std::ostream& os);
void write_records_csv(const std::vector<BenchmarkRecord>& records, std::ostream& os);
void write_records_json(const std::vector<BenchmarkRecord>& records, const RunSpec& spec,
                        std::ostream& os);
void write_gates_text(const std::vector<GateResult>& gates, std::ostream& os);
void write_gates_json(const std::vector<GateResult>& gates, const RunSpec& spec, std::ostream& os);

/// Full command-line entry point. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fas::cli
