#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fas/analysis.hpp"
#include "fas/cli.hpp"
#include "fas/specfun.hpp"

using namespace fas;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fas");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        FAIL("missing column " << name);
        return 0;
    }
};

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    csv.header = split_commas(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& c : split_commas(line)) row.push_back(std::stod(c));
        REQUIRE(row.size() == csv.header.size());
        csv.rows.push_back(row);
    }
    return csv;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("curve matches the golden snapshot") {
    const auto o = run_cli({"curve", "--N", "4", "--W", "0.5", "--m", "2", "--grid", "-5:15:5",
                            "--methods", "exact,closed_form,approx,asymptotic,mrc,mc",
                            "--samples", "20000", "--seed", "7"});
    REQUIRE(o.code == 0);
    const Csv got = parse_csv(o.out);
    const Csv want = parse_csv(read_file(std::string(FAS_GOLDEN_DIR) + "/curve_small.csv"));
    REQUIRE(got.header == want.header);
    REQUIRE(got.rows.size() == want.rows.size());
    const std::size_t mc = got.col("mc");
    const std::size_t se = got.col("mc_std_err");
    for (std::size_t r = 0; r < got.rows.size(); ++r) {
        for (std::size_t c = 0; c < got.header.size(); ++c) {
            const double a = got.rows[r][c];
            const double b = want.rows[r][c];
            if (c == mc || c == se) {
                CHECK(a == b);
            } else {
                CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
            }
        }
    }
}

TEST_CASE("curve output is byte-identical across runs") {
    const std::vector<std::string> args = {"curve", "--methods", "mc", "--samples", "1000000",
                                           "--seed", "42", "--grid", "0:10:5"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(run_cli({"curve", "--methods", "mc", "--samples", "1000000", "--seed", "43", "--grid",
                   "0:10:5"})
              .out != a.out);
}

TEST_CASE("default curve covers -10 to 40 dB") {
    const auto o = run_cli({"curve", "--methods", "approx,asymptotic"});
    REQUIRE(o.code == 0);
    const Csv csv = parse_csv(o.out);
    REQUIRE(csv.rows.size() == 51);
    CHECK(csv.rows.front()[0] == -10.0);
    CHECK(csv.rows.back()[0] == 40.0);
    const std::size_t raw = csv.col("asymptotic");
    const std::size_t clipped = csv.col("asymptotic_clipped");
    for (const auto& row : csv.rows) CHECK(row[clipped] == std::min(row[raw], 1.0));
}

TEST_CASE("curve with a single port: exact and approx agree") {
    for (const char* m : {"1", "3"}) {
        const auto o = run_cli({"curve", "--N", "1", "--m", m, "--methods", "exact,approx"});
        REQUIRE(o.code == 0);
        const Csv csv = parse_csv(o.out);
        for (const auto& row : csv.rows) CHECK(std::abs(row[1] - row[2]) <= 1e-9);
    }
}

TEST_CASE("json output") {
    const auto o = run_cli({"curve", "--grid", "0:2:1", "--format", "json"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out);
    CHECK(j["spec"]["N"] == 10);
    CHECK(j["spec"]["command"] == "curve");
    CHECK(j.dump().find("exact") != std::string::npos);
}

TEST_CASE("--out writes a file") {
    const std::string path = "cli_out_test.csv";
    const auto o = run_cli({"curve", "--grid", "0:2:1", "--out", path});
    REQUIRE(o.code == 0);
    CHECK(o.out.empty());
    CHECK(read_file(path) == run_cli({"curve", "--grid", "0:2:1"}).out);
    std::remove(path.c_str());
}

TEST_CASE("invalid arguments exit with 2") {
    const std::vector<std::vector<std::string>> bad = {
        {"curve", "--methods", "exact,bogus"},
        {"curve", "--methods", "exact,exact"},
        {"curve", "--grid", "10:0:1"},
        {"curve", "--grid", "0:10:0"},
        {"curve", "--grid", "abc"},
        {"curve", "--N", "0"},
        {"curve", "--N", "2.5"},
        {"curve", "--W", "-1"},
        {"curve", "--m", "0"},
        {"curve", "--corr", "diagonal"},
        {"curve", "--format", "xml"},
        {"curve", "--L", "0"},
        {"curve", "--samples", "0"},
        {"table", "--repetitions", "2"},
        {"severity", "--m-list", "1,0"},
        {"sweep-ports", "--N-range", "0:5:1"},
        {"curve", "--no-such-flag", "1"},
        {"no-such-command"},
        {},
    };
    for (const auto& args : bad) {
        const auto o = run_cli(args);
        CHECK(o.code == 2);
        CHECK(o.out.empty());
    }
    CHECK(run_cli({"curve", "--help"}).code == 0);
}

TEST_CASE("numerical failure exits with 3") {
    const auto o = run_cli({"curve", "--N", "3", "--W", "1e-8", "--grid", "-40:-40:1",
                            "--methods", "exact"});
    CHECK(o.code == 3);
    CHECK(o.out.empty());
    CHECK(o.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("validate") {
    SUBCASE("passes on the default configuration") {
        const auto o = run_cli({"validate", "--samples", "200000", "--format", "json"});
        REQUIRE(o.code == 0);
        const auto j = nlohmann::json::parse(o.out);
        REQUIRE(j["gates"].size() == 3);
        for (const auto& g : j["gates"]) CHECK(g["passed"] == true);
    }
    SUBCASE("a Monte Carlo miss beyond 3 standard errors exits with 4") {
        const auto o = run_cli({"validate", "--N", "2", "--W", "0.5", "--samples", "20000",
                                "--seed", "42"});
        CHECK(o.code == 4);
        CHECK(o.out.find("FAIL mc_3sigma") != std::string::npos);
        CHECK(o.out.find("PASS n1_exactness") != std::string::npos);
    }
}

TEST_CASE("sweep-ports: OP does not increase with N") {
    const auto o = run_cli({"sweep-ports", "--N-range", "1:40:1", "--methods", "approx,exact"});
    REQUIRE(o.code == 0);
    const Csv csv = parse_csv(o.out);
    const std::size_t n = csv.col("N");
    const std::size_t w = csv.col("W");
    REQUIRE(csv.rows.size() == 3 * 40);
    for (const char* method : {"approx", "exact"}) {
        const std::size_t c = csv.col(method);
        std::map<double, std::map<double, double>> by_w;
        for (const auto& row : csv.rows) by_w[row[w]][row[n]] = row[c];
        REQUIRE(by_w.size() == 3);
        for (const auto& [size, curve] : by_w) {
            double prev = 2.0;
            for (const auto& [ports, op] : curve) {
                CHECK(op <= prev);
                prev = op;
            }
        }
    }
}

TEST_CASE("sweep-threshold: OP grows with the threshold") {
    const auto o = run_cli({"sweep-threshold", "--N-list", "10,50", "--gamma-th-grid", "-60:20:2"});
    REQUIRE(o.code == 0);
    const Csv csv = parse_csv(o.out);
    const std::size_t n = csv.col("N");
    const std::size_t th = csv.col("gamma_th_db");
    const std::size_t ex = csv.col("exact");
    const std::size_t ap = csv.col("approx");
    std::map<double, std::map<double, std::pair<double, double>>> by_n;
    for (const auto& row : csv.rows) by_n[row[n]][row[th]] = {row[ex], row[ap]};
    REQUIRE(by_n.size() == 2);
    for (const auto& [ports, curve] : by_n) {
        std::pair<double, double> prev{-1.0, -1.0};
        for (const auto& [t, op] : curve) {
            CHECK(op.first >= prev.first - 1e-10);
            CHECK(op.second >= prev.second - 1e-10);
            prev = op;
        }
        CHECK(curve.begin()->second.first < 1e-20);
        CHECK(curve.rbegin()->second.first > 0.99);
    }

    const int ports = 10;
    const auto cfg = FasConfig::uniform(ports, 2.0, 1);
    const auto prof = build_profile(CorrelationModel::UniformNoReference, ports, 2.0);
    const double ref = exact_op(cfg, prof, db_to_linear(0.0), 1.0);
    CHECK(by_n[10.0][0.0].first == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("severity: larger m lowers the exact OP") {
    const auto o = run_cli({"severity", "--N-range", "1:20:1", "--methods", "exact,approx"});
    REQUIRE(o.code == 0);
    const Csv csv = parse_csv(o.out);
    const std::size_t n = csv.col("N");
    const std::size_t mc = csv.col("m");
    const std::size_t ex = csv.col("exact");
    const std::size_t ap = csv.col("approx");
    std::map<double, std::map<double, std::pair<double, double>>> by_n;
    for (const auto& row : csv.rows) by_n[row[n]][row[mc]] = {row[ex], row[ap]};
    REQUIRE(by_n.size() == 20);
    for (const auto& [ports, by_m] : by_n) {
        REQUIRE(by_m.size() == 3);
        double prev = 2.0;
        for (const auto& [m, op] : by_m) {
            CHECK(op.first < prev);
            prev = op.first;
        }
    }
    double prev = 2.0;
    for (const auto& [m, op] : by_n[1.0]) {
        CHECK(op.second < prev);
        prev = op.second;
    }

    const auto cfg = FasConfig::uniform(5, 0.6, 3);
    const auto prof = build_profile(CorrelationModel::UniformNoReference, 5, 0.6);
    const double ref = exact_op(cfg, prof, db_to_linear(1.0), db_to_linear(3.0));
    CHECK(by_n[5.0][3.0].first == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("table") {
    const auto o = run_cli({"table", "--N-list", "5,40", "--grid", "-10:40:5", "--repetitions",
                            "3"});
    REQUIRE(o.code == 0);
    const auto j = nlohmann::json::parse(o.out);
    const auto& rows = j["records"];
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r["time_reduction_percent"].get<double>() <= 100.0);
        CHECK(r["exact_seconds"].get<double>() > r["approx_seconds"].get<double>());
        CHECK(r["nmse"].get<double>() <= 1.0);
    }
    CHECK(rows[1]["exact_seconds"].get<double>() > rows[0]["exact_seconds"].get<double>());

    const auto csv = run_cli({"table", "--N-list", "5", "--grid", "0:10:5", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("label,", 0) == 0);
}
