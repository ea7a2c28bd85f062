#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fas/analysis.hpp"
#include "fas/correlation.hpp"

namespace fas {

struct McEstimate {
    double op_hat = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t outages = 0;
    /// Binomial standard error sqrt(p (1 - p) / n).
    double std_err = 0.0;
    std::uint64_t seed = 0;
};

using McRng = std::mt19937_64;

/// Trials are generated in fixed-size chunks, each with its own generator
/// stream; results therefore do not depend on the worker count.
inline constexpr std::uint64_t kMcChunkSize = 1u << 16;

/// Independent generator for stream `stream` of master seed `seed`.
McRng make_stream(std::uint64_t seed, std::uint64_t stream);

/// Draws correlated Nakagami-m port gains |h_k|^2.
///
/// Each port carries m complex Gaussian components. Port 1 draws them
/// directly; port k >= 2 mixes port 1's components with fresh noise,
///   x_k = mu_k x_1 + sqrt(1 - mu_k^2) w,
/// so that conditioned on port 1 every other port is an independent
/// noncentral chi variate. Gains are scaled to E[g_k] = omega_k^2.
class PortGainSampler {
public:
    PortGainSampler(const FasConfig& cfg, const CorrelationProfile& prof);

    std::size_t ports() const { return mix_.size(); }

    void sample(McRng& rng, std::span<double> gains);

    /// Largest gain of one trial; avoids materializing the vector.
    double sample_max(McRng& rng);

private:
    int m_;
    std::vector<double> mix_;
    std::vector<double> noise_;
    std::vector<double> scale_;
    std::vector<double> reference_;
    std::normal_distribution<double> normal_;
};

std::vector<double> sample_port_gains(const FasConfig& cfg, const CorrelationProfile& prof,
                                      McRng& rng);

McEstimate empirical_op(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                        double gamma_bar, std::uint64_t n_samples, std::uint64_t seed,
                        unsigned threads = 1);

/// One estimate per average SNR, all from the same trials.
std::vector<McEstimate> empirical_op_grid(const FasConfig& cfg, const CorrelationProfile& prof,
                                          double gamma_th, std::span<const double> gamma_bars,
                                          std::uint64_t n_samples, std::uint64_t seed,
                                          unsigned threads = 1);

/// L-branch MRC with independent Nakagami-m branches: outage when the summed
/// gain falls below gamma_th / gamma_bar.
McEstimate empirical_mrc_op(int branches, int m, double omega, double gamma_th,
                            double gamma_bar, std::uint64_t n_samples, std::uint64_t seed,
                            unsigned threads = 1);

/// Monte Carlo curve over a dB grid of average SNRs.
OpCurve empirical_curve(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                        std::span<const double> gamma_bar_db, std::uint64_t n_samples,
                        std::uint64_t seed, unsigned threads = 1);

}  // namespace fas
