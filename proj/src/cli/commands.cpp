#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include <json.hpp>

#include "fas/cli.hpp"
#include "fas/errors.hpp"
#include "fas/montecarlo.hpp"
#include "fas/parallel.hpp"
#include "fas/specfun.hpp"

namespace fas::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> method_columns(const std::vector<Method>& methods) {
    std::vector<std::string> cols;
    for (Method m : methods) {
        cols.emplace_back(to_string(m));
        if (m == Method::Asymptotic) cols.emplace_back("asymptotic_clipped");
        if (m == Method::MonteCarlo) cols.emplace_back("mc_std_err");
    }
    return cols;
}

// All requested methods at one (gamma_th, gamma_bar) point, in column order.
void append_point(const RunSpec& spec, const FasConfig& cfg, const CorrelationProfile& prof,
                  const GammaFit& fit, double gth, double gbar, std::vector<double>& row) {
    for (Method m : spec.methods) {
        switch (m) {
            case Method::Exact:
                row.push_back(exact_op(cfg, prof, gth, gbar));
                break;
            case Method::ClosedFormA2:
                row.push_back(closed_form_op(cfg, prof, gth, gbar));
                break;
            case Method::GammaApprox:
                row.push_back(approx_op(fit, gth, gbar));
                break;
            case Method::Asymptotic: {
                const double v = asymptotic_op(fit, gth, gbar);
                row.push_back(v);
                row.push_back(std::min(v, 1.0));
                break;
            }
            case Method::Mrc:
                row.push_back(mrc_op(spec.mrc_branches, cfg.m, cfg.omega.front(), gth, gbar));
                break;
            case Method::MonteCarlo: {
                const McEstimate est = empirical_op(cfg, prof, gth, gbar, spec.samples, spec.seed);
                row.push_back(est.op_hat);
                row.push_back(est.std_err);
                break;
            }
        }
    }
}

// Evaluates independent rows in parallel; output order follows the index.
template <class RowFn>
Table build_rows(std::vector<std::string> columns, std::size_t count, unsigned threads,
                 RowFn&& row_fn) {
    Table table;
    table.columns = std::move(columns);
    table.rows.resize(count);
    parallel_for(count, threads, [&](std::size_t i) { table.rows[i] = row_fn(i); });
    return table;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

Json spec_json(const RunSpec& spec) {
    Json j;
    j["command"] = spec.command;
    j["N"] = spec.ports;
    j["W"] = spec.size_wavelengths;
    j["m"] = spec.m;
    j["omega"] = spec.omega;
    j["corr"] = to_string(spec.correlation);
    j["gamma_th_db"] = spec.gamma_th_db;
    j["grid"] = {spec.grid.start, spec.grid.stop, spec.grid.step};
    Json methods = Json::array();
    for (Method m : spec.methods) methods.push_back(to_string(m));
    j["methods"] = methods;
    j["L"] = spec.mrc_branches;
    j["samples"] = spec.samples;
    j["seed"] = spec.seed;
    return j;
}

GateResult n1_gate(const RunSpec& spec) {
    GateResult gate{"n1_exactness", true, true, 0.0, 1e-9, ""};
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> th_db(-10.0, 10.0);
    std::uniform_real_distribution<double> bar_db(-10.0, 30.0);
    const auto single = constant_profile(1, 0.0);
    for (int m : {1, 2, 3, 5}) {
        const auto cfg = FasConfig::uniform(1, spec.size_wavelengths, m, spec.omega);
        const GammaFit fit = gamma_fit(cfg, single);
        for (int i = 0; i < 50; ++i) {
            const double gth = db_to_linear(th_db(rng));
            const double gbar = db_to_linear(bar_db(rng));
            const double ref = specfun::reg_lower_gamma(m, m * gth / (spec.omega * spec.omega * gbar));
            const double exact = exact_op(cfg, single, gth, gbar);
            gate.worst = std::max({gate.worst, std::abs(exact - ref),
                                   std::abs(approx_op(fit, gth, gbar) - exact)});
        }
    }
    gate.passed = gate.worst <= gate.tolerance;
    gate.detail = "m in {1,2,3,5}, 50 random (gamma_th, gamma_bar) pairs each";
    return gate;
}

GateResult mc_gate(const RunSpec& spec) {
    GateResult gate{"mc_3sigma", true, true, 0.0, 3.0, ""};
    const FasConfig cfg = spec.config();
    const CorrelationProfile prof = spec.profile();
    const double gth = snr_threshold_linear(spec.gamma_th_db);
    // Grid points with at least 100 expected outages and 100 expected successes.
    std::vector<double> gbars;
    std::vector<double> exact;
    for (double db : spec.grid.values()) {
        const double g = db_to_linear(db);
        const double p = exact_op(cfg, prof, gth, g);
        const double n = static_cast<double>(spec.samples);
        if (p * n >= 100.0 && (1.0 - p) * n >= 100.0) {
            gbars.push_back(g);
            exact.push_back(p);
        }
    }
    if (gbars.empty()) {
        gate.applicable = false;
        gate.detail = "no grid point has a resolvable outage level at this sample size";
        return gate;
    }
    if (gbars.size() > 3) {
        const std::size_t last = gbars.size() - 1;
        gbars = {gbars[0], gbars[last / 2], gbars[last]};
        exact = {exact[0], exact[last / 2], exact[last]};
    }
    const auto est = empirical_op_grid(cfg, prof, gth, gbars, spec.samples, spec.seed, spec.threads);
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double z = est[i].std_err > 0.0 ? std::abs(est[i].op_hat - exact[i]) / est[i].std_err
                                              : INFINITY;
        gate.worst = std::max(gate.worst, z);
    }
    gate.passed = gate.worst <= gate.tolerance;
    gate.detail = std::to_string(est.size()) + " grid points, " + std::to_string(spec.samples) +
                  " samples, worst |z| reported";
    return gate;
}

GateResult slope_gate(const RunSpec& spec) {
    GateResult gate{"diversity_slope", true, true, 0.0, 0.01, ""};
    const FasConfig cfg = spec.config();
    const CorrelationProfile prof = spec.profile();
    const double order = static_cast<double>(cfg.m) * cfg.ports;
    // Place a one-decade window where the leading term is about 1e-200.
    const double log10_x = (-200.0 - log_a0_coefficient(cfg, prof) / std::log(10.0)) / order;
    if (log10_x + 1.0 > -3.0) {
        gate.applicable = false;
        gate.detail = "mN too large for the deep tail to be representable in double precision";
        return gate;
    }
    QuadratureSettings deep;
    deep.abs_tol = 1e-300;
    const double gth = 1.0;
    std::vector<double> gbar, op;
    for (int k = 0; k <= 4; ++k) {
        const double x = std::pow(10.0, log10_x + 0.25 * k);
        gbar.push_back(gth / x);
        op.push_back(exact_op(cfg, prof, gth, gbar.back(), deep));
    }
    const double slope = loglog_slope(gbar, op);
    gate.worst = std::abs(slope + order) / order;
    gate.passed = gate.worst <= gate.tolerance;
    gate.detail = "fitted slope " + format_number(slope) + " against " + format_number(-order);
    return gate;
}

}  // namespace

Table cmd_curve(const RunSpec& spec) {
    const FasConfig cfg = spec.config();
    const CorrelationProfile prof = spec.profile();
    const double gth = snr_threshold_linear(spec.gamma_th_db);
    const std::vector<double> grid = spec.grid.values();

    std::vector<std::string> cols{"gamma_bar_db"};
    for (auto& c : method_columns(spec.methods)) cols.push_back(std::move(c));
    Table table;
    table.columns = std::move(cols);
    table.rows.assign(grid.size(), {});
    for (std::size_t i = 0; i < grid.size(); ++i) table.rows[i].push_back(grid[i]);

    CurveOptions options;
    options.mrc_branches = spec.mrc_branches;
    options.threads = spec.threads;
    for (Method m : spec.methods) {
        if (m == Method::MonteCarlo) {
            std::vector<double> gbars;
            for (double db : grid) gbars.push_back(db_to_linear(db));
            const auto est = empirical_op_grid(cfg, prof, gth, gbars, spec.samples, spec.seed,
                                               spec.threads);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                table.rows[i].push_back(est[i].op_hat);
                table.rows[i].push_back(est[i].std_err);
            }
            continue;
        }
        const OpCurve curve = evaluate_curve(m, cfg, prof, gth, grid, options);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            table.rows[i].push_back(curve.points[i].op);
            if (m == Method::Asymptotic) table.rows[i].push_back(std::min(curve.points[i].op, 1.0));
        }
    }
    return table;
}

Table cmd_sweep_ports(const RunSpec& spec) {
    const std::vector<double> ports = spec.port_range.values();
    const double gth = snr_threshold_linear(spec.gamma_th_db);
    const double gbar = db_to_linear(spec.gamma_bar_db);
    std::vector<std::string> cols{"N", "W"};
    for (auto& c : method_columns(spec.methods)) cols.push_back(std::move(c));
    const std::size_t count = ports.size() * spec.size_list.size();
    return build_rows(std::move(cols), count, spec.threads, [&](std::size_t i) {
        const double w = spec.size_list[i / ports.size()];
        const int n = static_cast<int>(ports[i % ports.size()]);
        const auto cfg = FasConfig::uniform(n, w, spec.m, spec.omega);
        const auto prof = build_profile(spec.correlation, n, w);
        std::vector<double> row{static_cast<double>(n), w};
        append_point(spec, cfg, prof, gamma_fit(cfg, prof), gth, gbar, row);
        return row;
    });
}

Table cmd_sweep_threshold(const RunSpec& spec) {
    const std::vector<double> thresholds = spec.gamma_th_grid.values();
    const double gbar = db_to_linear(spec.gamma_bar_db);
    std::vector<std::string> cols{"N", "gamma_th_db"};
    for (auto& c : method_columns(spec.methods)) cols.push_back(std::move(c));
    const std::size_t count = thresholds.size() * spec.port_list.size();
    return build_rows(std::move(cols), count, spec.threads, [&](std::size_t i) {
        const int n = spec.port_list[i / thresholds.size()];
        const double th_db = thresholds[i % thresholds.size()];
        const auto cfg = FasConfig::uniform(n, spec.size_wavelengths, spec.m, spec.omega);
        const auto prof = build_profile(spec.correlation, n, spec.size_wavelengths);
        std::vector<double> row{static_cast<double>(n), th_db};
        append_point(spec, cfg, prof, gamma_fit(cfg, prof), snr_threshold_linear(th_db), gbar, row);
        return row;
    });
}

Table cmd_severity(const RunSpec& spec) {
    const std::vector<double> ports = spec.port_range.values();
    const double gth = snr_threshold_linear(spec.gamma_th_db);
    const double gbar = db_to_linear(spec.gamma_bar_db);
    std::vector<std::string> cols{"N", "m"};
    for (auto& c : method_columns(spec.methods)) cols.push_back(std::move(c));
    const std::size_t count = ports.size() * spec.m_list.size();
    return build_rows(std::move(cols), count, spec.threads, [&](std::size_t i) {
        const int m = spec.m_list[i / ports.size()];
        const int n = static_cast<int>(ports[i % ports.size()]);
        const auto cfg = FasConfig::uniform(n, spec.size_wavelengths, m, spec.omega);
        const auto prof = build_profile(spec.correlation, n, spec.size_wavelengths);
        std::vector<double> row{static_cast<double>(n), static_cast<double>(m)};
        append_point(spec, cfg, prof, gamma_fit(cfg, prof), gth, gbar, row);
        return row;
    });
}

std::vector<BenchmarkRecord> cmd_table(const RunSpec& spec) {
    const auto grid = db_grid(spec.gamma_th_db, spec.grid.start, spec.grid.stop, spec.grid.step);
    std::vector<BenchmarkRecord> records;
    for (int n : spec.port_list) {
        const auto cfg = FasConfig::uniform(n, spec.size_wavelengths, spec.m, spec.omega);
        const auto prof = build_profile(spec.correlation, n, spec.size_wavelengths);
        records.push_back(benchmark_methods(cfg, prof, grid, spec.repetitions, "N=" + std::to_string(n)));
    }
    return records;
}

std::vector<GateResult> cmd_validate(const RunSpec& spec) {
    return {n1_gate(spec), mc_gate(spec), slope_gate(spec)};
}

void write_csv(const Table& table, std::ostream& os) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
        os << '\n';
    }
}

void write_json(const Table& table, const RunSpec& spec, std::ostream& os) {
    Json j;
    j["spec"] = spec_json(spec);
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    os << j.dump(2) << '\n';
}

void write_records_csv(const std::vector<BenchmarkRecord>& records, std::ostream& os) {
    os << "label,asymptotic_seconds,approx_seconds,exact_seconds,time_reduction_percent,nmse,"
          "nmse_log10\n";
    for (const auto& r : records) {
        os << r.label << ',' << format_number(r.asymptotic_seconds) << ','
           << format_number(r.approx_seconds) << ',' << format_number(r.exact_seconds) << ','
           << format_number(r.time_reduction_percent) << ',' << format_number(r.nmse) << ','
           << format_number(r.nmse_log10) << '\n';
    }
}

void write_records_json(const std::vector<BenchmarkRecord>& records, const RunSpec& spec,
                        std::ostream& os) {
    Json list = Json::array();
    for (const auto& r : records) {
        Json j;
        j["label"] = r.label;
        j["asymptotic_seconds"] = r.asymptotic_seconds;
        j["approx_seconds"] = r.approx_seconds;
        j["exact_seconds"] = r.exact_seconds;
        j["time_reduction_percent"] = r.time_reduction_percent;
        j["nmse"] = r.nmse;
        j["nmse_log10"] = r.nmse_log10;
        j["peak_alloc_bytes"] = r.peak_alloc_bytes;
        j["input_checksums"] = {hex64(r.input_checksums[0]), hex64(r.input_checksums[1]),
                                hex64(r.input_checksums[2])};
        list.push_back(j);
    }
    Json doc;
    doc["spec"] = spec_json(spec);
    doc["records"] = list;
    os << doc.dump(2) << '\n';
}

void write_gates_text(const std::vector<GateResult>& gates, std::ostream& os) {
    for (const auto& g : gates) {
        const char* status = !g.applicable ? "SKIP" : (g.passed ? "PASS" : "FAIL");
        os << status << ' ' << g.name << " worst=" << format_number(g.worst)
           << " tol=" << format_number(g.tolerance) << " (" << g.detail << ")\n";
    }
}

void write_gates_json(const std::vector<GateResult>& gates, const RunSpec& spec, std::ostream& os) {
    Json list = Json::array();
    bool all = true;
    for (const auto& g : gates) {
        all = all && g.passed;
        list.push_back({{"name", g.name},
                        {"passed", g.passed},
                        {"applicable", g.applicable},
                        {"worst", g.worst},
                        {"tolerance", g.tolerance},
                        {"detail", g.detail}});
    }
    Json doc;
    doc["spec"] = spec_json(spec);
    doc["gates"] = list;
    doc["passed"] = all;
    os << doc.dump(2) << '\n';
}

}  // namespace fas::cli
