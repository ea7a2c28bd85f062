#include "fas/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>

#include "fas/errors.hpp"

namespace fas {

namespace {

class Fnv1a {
public:
    void add(double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            hash_ ^= b;
            hash_ *= 0x100000001b3ull;
        }
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ull;
};

template <class Fn>
double median_seconds(int repetitions, Fn&& run) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(repetitions));
    for (int r = 0; r < repetitions; ++r) {
        const auto start = std::chrono::steady_clock::now();
        run();
        const auto stop = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    return times.size() % 2 == 1 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
}

}  // namespace

double nmse(std::span<const double> reference, std::span<const double> candidate) {
    if (reference.size() != candidate.size() || reference.empty()) {
        throw DomainError("nmse: curves must be nonempty and of equal length");
    }
    const auto [lo, hi] = std::minmax_element(reference.begin(), reference.end());
    if (*lo == *hi) throw DomainError("nmse: reference curve has zero variance");
    double mean = 0.0;
    for (double v : reference) mean += v;
    mean /= static_cast<double>(reference.size());
    double residual = 0.0;
    double spread = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        residual += (reference[i] - candidate[i]) * (reference[i] - candidate[i]);
        spread += (reference[i] - mean) * (reference[i] - mean);
    }
    return 1.0 - residual / spread;
}

double nmse(const OpCurve& reference, const OpCurve& candidate) {
    if (reference.points.size() != candidate.points.size()) {
        throw DomainError("nmse: grid mismatch");
    }
    for (std::size_t i = 0; i < reference.points.size(); ++i) {
        if (reference.points[i].gamma_bar_db != candidate.points[i].gamma_bar_db) {
            throw DomainError("nmse: grid mismatch");
        }
    }
    const auto ref = reference.values();
    const auto cand = candidate.values();
    return nmse(ref, cand);
}

double nmse_log10(std::span<const double> reference, std::span<const double> candidate) {
    if (reference.size() != candidate.size()) throw DomainError("nmse: curves must be of equal length");
    std::vector<double> ref(reference.size());
    std::vector<double> cand(candidate.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        if (!(reference[i] > 0.0) || !(candidate[i] > 0.0)) {
            throw DomainError("nmse_log10: values must be positive");
        }
        ref[i] = std::log10(reference[i]);
        cand[i] = std::log10(candidate[i]);
    }
    return nmse(ref, cand);
}

std::vector<SnrPoint> db_grid(double gamma_th_db, double start_db, double stop_db,
                              double step_db) {
    if (!(step_db > 0.0) || stop_db < start_db) throw DomainError("db_grid: empty grid");
    const auto count = static_cast<std::size_t>(std::floor((stop_db - start_db) / step_db + 1e-9)) + 1;
    const double gth = snr_threshold_linear(gamma_th_db);
    std::vector<SnrPoint> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid.push_back({gth, db_to_linear(start_db + static_cast<double>(i) * step_db)});
    }
    return grid;
}

BenchmarkRecord benchmark_methods(const FasConfig& cfg, const CorrelationProfile& prof,
                                  std::span<const SnrPoint> grid, int repetitions,
                                  std::string label, const QuadratureSettings& quad) {
    if (repetitions < 3) throw DomainError("benchmark_methods: repetitions must be >= 3");
    if (grid.empty()) throw DomainError("benchmark_methods: empty grid");

    BenchmarkRecord rec;
    rec.label = std::move(label);
    std::vector<double> exact(grid.size());
    std::vector<double> approx(grid.size());
    std::vector<double> asym(grid.size());
    std::array<Fnv1a, 3> digests;

    // The fit is part of each method's cost, so it is recomputed inside the timed loop.
    rec.asymptotic_seconds = median_seconds(repetitions, [&] {
        Fnv1a d;
        const GammaFit fit = gamma_fit(cfg, prof);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            d.add(grid[i].gamma_th);
            d.add(grid[i].gamma_bar);
            asym[i] = asymptotic_op(fit, grid[i].gamma_th, grid[i].gamma_bar);
        }
        digests[0] = d;
    });
    rec.approx_seconds = median_seconds(repetitions, [&] {
        Fnv1a d;
        const GammaFit fit = gamma_fit(cfg, prof);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            d.add(grid[i].gamma_th);
            d.add(grid[i].gamma_bar);
            approx[i] = approx_op(fit, grid[i].gamma_th, grid[i].gamma_bar);
        }
        digests[1] = d;
    });
    rec.exact_seconds = median_seconds(repetitions, [&] {
        Fnv1a d;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            d.add(grid[i].gamma_th);
            d.add(grid[i].gamma_bar);
            exact[i] = exact_op(cfg, prof, grid[i].gamma_th, grid[i].gamma_bar, quad);
        }
        digests[2] = d;
    });

    for (std::size_t j = 0; j < 3; ++j) rec.input_checksums[j] = digests[j].value();
    rec.time_reduction_percent =
        rec.exact_seconds > 0.0 ? 100.0 * (1.0 - rec.approx_seconds / rec.exact_seconds) : 0.0;
    rec.nmse = nmse(exact, approx);
    const auto positive = [](double v) { return v > 0.0; };
    rec.nmse_log10 = std::all_of(exact.begin(), exact.end(), positive) &&
                             std::all_of(approx.begin(), approx.end(), positive)
                         ? nmse_log10(exact, approx)
                         : std::numeric_limits<double>::quiet_NaN();
    return rec;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw DomainError("loglog_slope: need at least two paired points");
    }
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) throw DomainError("loglog_slope: degenerate abscissae");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("loglog_slope: values must be > 0");
        const double lx = std::log10(x[i]);
        const double ly = std::log10(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw DomainError("loglog_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace fas
