#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "fas/cli.hpp"
#include "fas/errors.hpp"
#include "fas/parallel.hpp"

namespace fas::cli {

namespace {

struct FlagInfo {
    const char* name;
    const char* help;
};

constexpr FlagInfo kCommon[] = {
    {"--N", "number of ports"},
    {"--W", "antenna size in wavelengths"},
    {"--m", "Nakagami-m fading parameter (positive integer)"},
    {"--omega", "per-port spread parameter; omega^2 is the average power"},
    {"--corr", "correlation model: uniform or reference"},
    {"--gamma-th-db", "SNR threshold in dB"},
    {"--methods", "comma list of exact,closed_form,approx,asymptotic,mrc,mc"},
    {"--L", "MRC branch count for the mrc method"},
    {"--samples", "Monte Carlo trials per point"},
    {"--seed", "Monte Carlo seed"},
    {"--format", "csv, json or text"},
    {"--out", "output file (default stdout)"},
};

struct Command {
    const char* name;
    const char* help;
    std::vector<FlagInfo> extra;
};

const std::vector<Command>& commands() {
    static const std::vector<Command> list = {
        {"curve", "OP against average SNR for one configuration",
         {{"--grid", "average SNR grid in dB, start:stop:step"}}},
        {"sweep-ports", "OP against the number of ports for several antenna sizes",
         {{"--N-range", "port counts, start:stop:step"},
          {"--W-list", "comma list of antenna sizes"},
          {"--gamma-bar-db", "average SNR in dB"}}},
        {"sweep-threshold", "OP against the SNR threshold for several port counts",
         {{"--N-list", "comma list of port counts"},
          {"--gamma-th-grid", "threshold grid in dB, start:stop:step"},
          {"--gamma-bar-db", "average SNR in dB"}}},
        {"severity", "OP against the number of ports for several m",
         {{"--N-range", "port counts, start:stop:step"},
          {"--m-list", "comma list of m values"},
          {"--gamma-bar-db", "average SNR in dB"}}},
        {"table", "timing and accuracy of exact, approx and asymptotic OP",
         {{"--grid", "average SNR grid in dB, start:stop:step"},
          {"--N-list", "comma list of port counts"},
          {"--repetitions", "timed repetitions per method (median is kept)"}}},
        {"validate", "run the N=1, Monte Carlo and slope gates",
         {{"--grid", "average SNR grid in dB, start:stop:step"}}},
    };
    return list;
}

template <class T>
T parse_number(const std::string& flag, const std::string& text) {
    T v{};
    std::istringstream is(text);
    is >> v;
    if (!is || !is.eof()) throw DomainError(flag + ": invalid value '" + text + "'");
    return v;
}

void apply(RunSpec& spec, const std::string& flag, const std::string& v) {
    if (flag == "--N") spec.ports = parse_number<int>(flag, v);
    else if (flag == "--W") spec.size_wavelengths = parse_number<double>(flag, v);
    else if (flag == "--m") spec.m = parse_number<int>(flag, v);
    else if (flag == "--omega") spec.omega = parse_number<double>(flag, v);
    else if (flag == "--corr") spec.correlation = parse_correlation(v);
    else if (flag == "--gamma-th-db") spec.gamma_th_db = parse_number<double>(flag, v);
    else if (flag == "--methods") spec.methods = parse_methods(v);
    else if (flag == "--L") spec.mrc_branches = parse_number<int>(flag, v);
    else if (flag == "--samples") spec.samples = parse_number<std::uint64_t>(flag, v);
    else if (flag == "--seed") spec.seed = parse_number<std::uint64_t>(flag, v);
    else if (flag == "--format") spec.format = parse_format(v);
    else if (flag == "--out") spec.out = v;
    else if (flag == "--grid") spec.grid = parse_range(v);
    else if (flag == "--N-range") spec.port_range = parse_range(v);
    else if (flag == "--W-list") spec.size_list = parse_real_list(v);
    else if (flag == "--N-list") spec.port_list = parse_int_list(v);
    else if (flag == "--m-list") spec.m_list = parse_int_list(v);
    else if (flag == "--gamma-th-grid") spec.gamma_th_grid = parse_range(v);
    else if (flag == "--gamma-bar-db") spec.gamma_bar_db = parse_number<double>(flag, v);
    else if (flag == "--repetitions") spec.repetitions = parse_number<int>(flag, v);
}

// Runs the command and writes its output to `os`; returns the exit code.
int execute(const RunSpec& spec, std::ostream& os) {
    const std::string& cmd = spec.command;
    if (cmd == "table") {
        const auto records = cmd_table(spec);
        if (spec.format == Format::Csv) write_records_csv(records, os);
        else write_records_json(records, spec, os);
        return kOk;
    }
    if (cmd == "validate") {
        const auto gates = cmd_validate(spec);
        if (spec.format == Format::Json) write_gates_json(gates, spec, os);
        else write_gates_text(gates, os);
        for (const auto& g : gates) {
            if (!g.passed) return kGateFailure;
        }
        return kOk;
    }
    Table table;
    if (cmd == "curve") table = cmd_curve(spec);
    else if (cmd == "sweep-ports") table = cmd_sweep_ports(spec);
    else if (cmd == "sweep-threshold") table = cmd_sweep_threshold(spec);
    else table = cmd_severity(spec);
    if (spec.format == Format::Json) write_json(table, spec, os);
    else write_csv(table, os);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Outage probability of fluid antenna systems over correlated Nakagami-m fading",
                 "fas"};
    app.require_subcommand(1);
    std::map<std::string, std::string> raw;
    for (const auto& cmd : commands()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        for (const auto& f : kCommon) sub->add_option(f.name, raw[f.name], f.help);
        for (const auto& f : cmd.extra) sub->add_option(f.name, raw[f.name], f.help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadArgs;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    RunSpec spec = defaults_for(chosen->get_name());
    spec.threads = threads_from_env(1);
    try {
        for (const CLI::Option* opt : chosen->get_options()) {
            if (opt->count() == 0) continue;
            const std::string flag = "--" + opt->get_single_name();
            apply(spec, flag, raw[flag]);
        }
        spec.validate();
    } catch (const std::exception& e) {
        err << "fas: " << e.what() << '\n';
        return kBadArgs;
    }

    // Buffer so a failed run never leaves partial output behind.
    std::ostringstream buffer;
    int code = kOk;
    try {
        code = execute(spec, buffer);
    } catch (const DomainError& e) {
        err << "fas: " << e.what() << '\n';
        return kBadArgs;
    } catch (const std::exception& e) {
        err << "fas: numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }

    if (spec.out.empty()) {
        out << buffer.str();
    } else {
        std::ofstream file(spec.out, std::ios::binary);
        if (!file) {
            err << "fas: cannot open " << spec.out << " for writing\n";
            return kBadArgs;
        }
        file << buffer.str();
    }
    return code;
}

}  // namespace fas::cli
