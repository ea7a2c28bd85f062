#include "fas/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "fas/errors.hpp"
#include "fas/parallel.hpp"

namespace fas {

namespace {

McEstimate make_estimate(std::uint64_t outages, std::uint64_t n, std::uint64_t seed) {
    McEstimate est;
    est.n_samples = n;
    est.outages = outages;
    est.seed = seed;
    est.op_hat = static_cast<double>(outages) / static_cast<double>(n);
    est.std_err = std::sqrt(est.op_hat * (1.0 - est.op_hat) / static_cast<double>(n));
    return est;
}

// Splits n trials into chunks and counts, per threshold, how many trial
// statistics fall strictly below it. `draw` produces one statistic per trial.
template <class MakeDraw>
std::vector<std::uint64_t> count_below(std::span<const double> thresholds, std::uint64_t n,
                                       std::uint64_t seed, unsigned threads,
                                       MakeDraw&& make_draw) {
    const std::uint64_t chunks = (n + kMcChunkSize - 1) / kMcChunkSize;
    std::vector<std::vector<std::uint64_t>> per_chunk(
        chunks, std::vector<std::uint64_t>(thresholds.size(), 0));
    parallel_for(chunks, threads, [&](std::size_t c) {
        McRng rng = make_stream(seed, c);
        auto draw = make_draw();
        const std::uint64_t begin = c * kMcChunkSize;
        const std::uint64_t end = std::min(n, begin + kMcChunkSize);
        auto& counts = per_chunk[c];
        for (std::uint64_t t = begin; t < end; ++t) {
            const double stat = draw(rng);
            for (std::size_t j = 0; j < thresholds.size(); ++j) {
                if (stat < thresholds[j]) ++counts[j];
            }
        }
    });
    std::vector<std::uint64_t> total(thresholds.size(), 0);
    for (const auto& counts : per_chunk) {
        for (std::size_t j = 0; j < counts.size(); ++j) total[j] += counts[j];
    }
    return total;
}

void check_run(double gamma_th, std::uint64_t n_samples) {
    if (n_samples < 1) throw DomainError("Monte Carlo: n_samples must be >= 1");
    if (!(gamma_th >= 0.0)) throw DomainError("Monte Carlo: gamma_th must be nonnegative");
}

}  // namespace

McRng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32), 0x46415321u};
    return McRng(seq);
}

PortGainSampler::PortGainSampler(const FasConfig& cfg, const CorrelationProfile& prof)
    : m_(cfg.m) {
    cfg.validate();
    prof.validate();
    check_compatible(cfg, prof);
    const std::size_t n = prof.ports();
    mix_.resize(n);
    noise_.resize(n);
    scale_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double mu = k == 0 ? 1.0 : prof.mu[k];
        mix_[k] = mu;
        noise_[k] = k == 0 ? 0.0 : std::sqrt(1.0 - mu * mu);
        scale_[k] = cfg.omega[k] * cfg.omega[k] / (2.0 * m_);
    }
    reference_.resize(static_cast<std::size_t>(2 * m_));
}

void PortGainSampler::sample(McRng& rng, std::span<double> gains) {
    if (gains.size() != mix_.size()) throw DomainError("sample: gains span has wrong size");
    double ref_energy = 0.0;
    for (double& v : reference_) {
        v = normal_(rng);
        ref_energy += v * v;
    }
    gains[0] = scale_[0] * ref_energy;
    for (std::size_t k = 1; k < mix_.size(); ++k) {
        double energy = 0.0;
        for (double ref : reference_) {
            const double v = mix_[k] * ref + noise_[k] * normal_(rng);
            energy += v * v;
        }
        gains[k] = scale_[k] * energy;
    }
}

double PortGainSampler::sample_max(McRng& rng) {
    double ref_energy = 0.0;
    for (double& v : reference_) {
        v = normal_(rng);
        ref_energy += v * v;
    }
    double best = scale_[0] * ref_energy;
    for (std::size_t k = 1; k < mix_.size(); ++k) {
        double energy = 0.0;
        for (double ref : reference_) {
            const double v = mix_[k] * ref + noise_[k] * normal_(rng);
            energy += v * v;
        }
        best = std::max(best, scale_[k] * energy);
    }
    return best;
}

std::vector<double> sample_port_gains(const FasConfig& cfg, const CorrelationProfile& prof,
                                      McRng& rng) {
    PortGainSampler sampler(cfg, prof);
    std::vector<double> gains(sampler.ports());
    sampler.sample(rng, gains);
    return gains;
}

std::vector<McEstimate> empirical_op_grid(const FasConfig& cfg, const CorrelationProfile& prof,
                                          double gamma_th, std::span<const double> gamma_bars,
                                          std::uint64_t n_samples, std::uint64_t seed,
                                          unsigned threads) {
    check_run(gamma_th, n_samples);
    std::vector<double> thresholds;
    thresholds.reserve(gamma_bars.size());
    for (double gbar : gamma_bars) {
        if (!(gbar > 0.0)) throw DomainError("Monte Carlo: gamma_bar must be positive");
        thresholds.push_back(gamma_th / gbar);
    }
    const PortGainSampler prototype(cfg, prof);
    const auto counts = count_below(thresholds, n_samples, seed, threads, [&] {
        return [sampler = prototype](McRng& rng) mutable { return sampler.sample_max(rng); };
    });
    std::vector<McEstimate> out;
    out.reserve(counts.size());
    for (auto c : counts) out.push_back(make_estimate(c, n_samples, seed));
    return out;
}

McEstimate empirical_op(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                        double gamma_bar, std::uint64_t n_samples, std::uint64_t seed,
                        unsigned threads) {
    const double gbar[] = {gamma_bar};
    return empirical_op_grid(cfg, prof, gamma_th, gbar, n_samples, seed, threads).front();
}

McEstimate empirical_mrc_op(int branches, int m, double omega, double gamma_th,
                            double gamma_bar, std::uint64_t n_samples, std::uint64_t seed,
                            unsigned threads) {
    if (branches < 1) throw DomainError("empirical_mrc_op: branch count must be >= 1");
    if (m < 1) throw DomainError("empirical_mrc_op: m must be a positive integer");
    if (!(omega > 0.0) || !(gamma_bar > 0.0)) {
        throw DomainError("empirical_mrc_op: omega and gamma_bar must be positive");
    }
    check_run(gamma_th, n_samples);
    const double threshold[] = {gamma_th / gamma_bar};
    const double scale = omega * omega / (2.0 * m);
    const int components = 2 * m * branches;
    const auto counts = count_below(threshold, n_samples, seed, threads, [&] {
        return [normal = std::normal_distribution<double>(), scale,
                components](McRng& rng) mutable {
            double energy = 0.0;
            for (int i = 0; i < components; ++i) {
                const double v = normal(rng);
                energy += v * v;
            }
            return scale * energy;
        };
    });
    return make_estimate(counts.front(), n_samples, seed);
}

OpCurve empirical_curve(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                        std::span<const double> gamma_bar_db, std::uint64_t n_samples,
                        std::uint64_t seed, unsigned threads) {
    std::vector<double> gbars;
    gbars.reserve(gamma_bar_db.size());
    for (double db : gamma_bar_db) gbars.push_back(db_to_linear(db));
    const auto estimates = empirical_op_grid(cfg, prof, gamma_th, gbars, n_samples, seed, threads);
    OpCurve curve;
    curve.method = Method::MonteCarlo;
    curve.config = cfg;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        curve.points.push_back({gamma_bar_db[i], estimates[i].op_hat});
    }
    curve.validate();
    return curve;
}

}  // namespace fas
