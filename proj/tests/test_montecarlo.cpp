#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fas/analysis.hpp"
#include "fas/errors.hpp"
#include "fas/metrics.hpp"
#include "fas/montecarlo.hpp"
#include "fas/specfun.hpp"
#include "oracles.hpp"

using namespace fas;

namespace {

const double kThreshold1dB = std::pow(10.0, 0.1);

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
template <class Cdf>
double ks_distance(std::vector<double> sample, Cdf&& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        worst = std::max({worst, (i + 1) / n - f, f - i / n});
    }
    return worst;
}

// Pearson correlation of two Rayleigh envelopes whose complex Gaussians have
// correlation rho: (pi/4) (2F1(-1/2, -1/2; 1; rho^2) - 1) / (1 - pi/4).
double rayleigh_envelope_correlation(double rho) {
    const double z = rho * rho;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 200; ++k) {
        term *= (k - 0.5) * (k - 0.5) / ((k + 1.0) * (k + 1.0)) * z;
        sum += term;
    }
    const double quarter_pi = std::atan(1.0);
    return quarter_pi * (sum - 1.0) / (1.0 - quarter_pi);
}

bool within_sigma(const McEstimate& est, double truth, double sigmas = 3.0) {
    return std::abs(est.op_hat - truth) <= sigmas * est.std_err;
}

}  // namespace

TEST_CASE("port gain marginals are Gamma(m, omega^2 / m)") {
    const double critical = 1.63 / std::sqrt(1e6);
    for (int m = 1; m <= 3; ++m) {
        for (bool correlated : {false, true}) {
            FasConfig cfg = FasConfig::uniform(3, 0.3, m);
            cfg.omega = {1.0, 0.6, 1.7};
            const auto prof = correlated ? mu_uniform(3, 0.3) : constant_profile(3, 0.0);
            PortGainSampler sampler(cfg, prof);
            McRng rng = make_stream(100 + m, correlated);
            std::vector<std::vector<double>> gains(3, std::vector<double>(1'000'000));
            std::vector<double> trial(3);
            for (std::size_t i = 0; i < gains[0].size(); ++i) {
                sampler.sample(rng, trial);
                for (std::size_t k = 0; k < 3; ++k) gains[k][i] = trial[k];
            }
            for (std::size_t k = 0; k < 3; ++k) {
                const double w2 = cfg.omega[k] * cfg.omega[k];
                const double d = ks_distance(gains[k], [&](double x) {
                    return specfun::reg_lower_gamma(m, m * x / w2);
                });
                CAPTURE(m);
                CAPTURE(k);
                CHECK(d <= critical);
            }
        }
    }
}

TEST_CASE("nearly identical ports give nearly identical gains") {
    const auto cfg = FasConfig::uniform(2, 0.3, 2);
    const auto prof = constant_profile(2, 1.0 - 1e-4);
    PortGainSampler sampler(cfg, prof);
    McRng rng = make_stream(5, 0);
    std::vector<double> g1(1'000'000), g2(1'000'000);
    std::vector<double> trial(2);
    for (std::size_t i = 0; i < g1.size(); ++i) {
        sampler.sample(rng, trial);
        g1[i] = trial[0];
        g2[i] = trial[1];
    }
    CHECK(pearson(g1, g2) >= 0.99);
}

TEST_CASE("envelope correlation matches the Gaussian-branch value") {
    const double mu = 0.5;
    const auto cfg = FasConfig::uniform(2, 0.3, 1);
    const auto prof = constant_profile(2, mu);
    PortGainSampler sampler(cfg, prof);
    McRng rng = make_stream(6, 0);
    std::vector<double> r1(10'000'000), r2(10'000'000);
    std::vector<double> trial(2);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        sampler.sample(rng, trial);
        r1[i] = std::sqrt(trial[0]);
        r2[i] = std::sqrt(trial[1]);
    }
    const double analytic = rayleigh_envelope_correlation(mu);
    CHECK(analytic == doctest::Approx(0.2325593465).epsilon(1e-9));
    CHECK(std::abs(pearson(r1, r2) - analytic) <= 0.01);
}

TEST_CASE("sample_port_gains shape and errors") {
    McRng rng = make_stream(1, 0);
    const auto gains = sample_port_gains(FasConfig::uniform(7, 0.5, 2), mu_reference(7, 0.5), rng);
    CHECK(gains.size() == 7);
    for (double g : gains) CHECK(g >= 0.0);
    CHECK_THROWS_AS(sample_port_gains(FasConfig::uniform(3, 0.5, 2), mu_uniform(4, 0.5), rng),
                    DomainError);
}

TEST_CASE("empirical_op examples") {
    const auto one = FasConfig::uniform(1, 0.3, 1);
    const auto single = constant_profile(1, 0.0);
    const McEstimate est = empirical_op(one, single, 1.0, 10.0, 10'000'000, 2024);
    CHECK(est.n_samples == 10'000'000);
    CHECK(est.seed == 2024);
    CHECK(within_sigma(est, 1.0 - std::exp(-0.1)));
    CHECK(std::abs(est.op_hat - 0.09516) <= 3.0 * est.std_err + 1e-5);

    const McEstimate none = empirical_op(FasConfig::uniform(4, 0.3, 2), mu_uniform(4, 0.3), 0.0,
                                         1.0, 100'000, 1);
    CHECK(none.op_hat == 0.0);
    CHECK(none.std_err == 0.0);

    CHECK_THROWS_AS(empirical_op(one, single, 1.0, 1.0, 0, 1), DomainError);
}

TEST_CASE("empirical_op closes against exact_op on the reference configurations") {
    const auto ref_cfg = FasConfig::uniform(10, 0.3, 1);
    const auto ref_prof = mu_uniform(10, 0.3);
    const McEstimate a = empirical_op(ref_cfg, ref_prof, kThreshold1dB, 1.0, 10'000'000, 11);
    CHECK(within_sigma(a, exact_op(ref_cfg, ref_prof, kThreshold1dB, 1.0)));

    const auto five = FasConfig::uniform(5, 0.3, 2);
    const auto five_prof = mu_uniform(5, 0.3);
    const McEstimate b = empirical_op(five, five_prof, kThreshold1dB, 10.0, 10'000'000, 12);
    CHECK(within_sigma(b, exact_op(five, five_prof, kThreshold1dB, 10.0)));
}

TEST_CASE("empirical_op_grid reuses one set of trials") {
    const auto cfg = FasConfig::uniform(4, 0.8, 2);
    const auto prof = mu_reference(4, 0.8);
    const std::vector<double> gbars = {0.5, 1.0, 4.0, 16.0};
    const auto grid = empirical_op_grid(cfg, prof, 1.0, gbars, 200'000, 77);
    REQUIRE(grid.size() == gbars.size());
    for (std::size_t i = 0; i < gbars.size(); ++i) {
        const McEstimate single = empirical_op(cfg, prof, 1.0, gbars[i], 200'000, 77);
        CHECK(single.outages == grid[i].outages);
        if (i > 0) CHECK(grid[i].outages <= grid[i - 1].outages);
    }
}

TEST_CASE("empirical_mrc_op examples") {
    // One branch has the law of a single FAS port.
    const McEstimate mrc = empirical_mrc_op(1, 2, 1.0, 1.0, 3.0, 2'000'000, 31);
    const McEstimate fas = empirical_op(FasConfig::uniform(1, 0.3, 2), constant_profile(1, 0.0),
                                        1.0, 3.0, 2'000'000, 32);
    const double diff = std::abs(mrc.op_hat - fas.op_hat);
    CHECK(diff <= 3.0 * std::hypot(mrc.std_err, fas.std_err));
    CHECK(within_sigma(mrc, mrc_op(1, 2, 1.0, 1.0, 3.0)));

    const McEstimate two = empirical_mrc_op(2, 1, 1.0, 1.0, 10.0, 10'000'000, 33);
    CHECK(within_sigma(two, mrc_op(2, 1, 1.0, 1.0, 10.0)));

    CHECK_THROWS_AS(empirical_mrc_op(0, 1, 1.0, 1.0, 1.0, 10, 1), DomainError);
}

TEST_CASE("empirical MRC slope follows the analytic curve where op is 1e-4 to 1e-2") {
    // For L = 2, m = 3 the analytic OP is P(6, 3 gth / gbar). Its log-log slope in this
    // window is about -5.0; the limiting -6 is only approached further into the tail.
    std::vector<double> gbar, mc, analytic;
    for (double db = 0.0; db <= 12.0; db += 0.5) {
        const double g = db_to_linear(db);
        const double p = mrc_op(2, 3, 1.0, 1.0, g);
        if (p < 1e-4 || p > 1e-2) continue;
        gbar.push_back(g);
        analytic.push_back(p);
        mc.push_back(empirical_mrc_op(2, 3, 1.0, 1.0, g, 4'000'000, 40).op_hat);
    }
    REQUIRE(gbar.size() >= 5);
    const double analytic_slope = loglog_slope(gbar, analytic);
    CHECK(analytic_slope == doctest::Approx(-5.04).epsilon(0.01));
    CHECK(std::abs(loglog_slope(gbar, mc) - analytic_slope) <= 0.3);
}

TEST_CASE("Monte Carlo estimates are deterministic and thread-count independent") {
    const auto cfg = FasConfig::uniform(6, 0.5, 2);
    const auto prof = mu_uniform(6, 0.5);
    const McEstimate a = empirical_op(cfg, prof, 1.0, 2.0, 300'000, 9);
    const McEstimate b = empirical_op(cfg, prof, 1.0, 2.0, 300'000, 9);
    const McEstimate c = empirical_op(cfg, prof, 1.0, 2.0, 300'000, 9, 3);
    const McEstimate d = empirical_op(cfg, prof, 1.0, 2.0, 300'000, 10);
    CHECK(a.outages == b.outages);
    CHECK(a.op_hat == b.op_hat);
    CHECK(a.std_err == b.std_err);
    CHECK(a.outages == c.outages);
    CHECK(a.outages != d.outages);

    const std::vector<double> grid = {-5.0, 0.0, 5.0};
    const OpCurve serial = empirical_curve(cfg, prof, 1.0, grid, 100'000, 3, 1);
    const OpCurve threaded = empirical_curve(cfg, prof, 1.0, grid, 100'000, 3, 4);
    CHECK(serial.method == Method::MonteCarlo);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(serial.points[i].op == threaded.points[i].op);
}

TEST_CASE("estimates stay in range") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> db(-10.0, 20.0);
    for (int i = 0; i < 20; ++i) {
        const int n = 2 + i % 5;
        const McEstimate est = empirical_op(FasConfig::uniform(n, 0.4, 1 + i % 3), mu_uniform(n, 0.4),
                                            1.0, db_to_linear(db(rng)), 5'000, i);
        CHECK(est.op_hat >= 0.0);
        CHECK(est.op_hat <= 1.0);
        CHECK(est.std_err >= 0.0);
    }
}

TEST_CASE("empirical_op closes against exact_op on random configurations") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<int> ports(1, 10);
    std::uniform_int_distribution<int> order(1, 3);
    std::uniform_real_distribution<double> size(0.2, 2.0);
    std::uniform_real_distribution<double> op_target(-2.5, -0.2);
    int closed = 0;
    for (int i = 0; i < 100; ++i) {
        const int n = ports(rng);
        const int m = order(rng);
        const double w = size(rng);
        const auto model = i % 2 == 0 ? CorrelationModel::UniformNoReference
                                      : CorrelationModel::FirstPortReference;
        const auto cfg = FasConfig::uniform(n, w, m);
        const auto prof = build_profile(model, n, w);
        // Pick gamma_bar so the outage level is resolvable at this sample size.
        const double target = op_target(rng);
        const double db = oracle::bisect(
            [&](double x) {
                return std::log10(exact_op(cfg, prof, kThreshold1dB, db_to_linear(x))) - target;
            },
            -20.0, 40.0, 20);
        const double gbar = db_to_linear(db);
        const double exact = exact_op(cfg, prof, kThreshold1dB, gbar);
        const McEstimate est = empirical_op(cfg, prof, kThreshold1dB, gbar, 1'000'000,
                                            static_cast<std::uint64_t>(1000 + i));
        if (within_sigma(est, exact)) ++closed;
    }
    CHECK(closed >= 99);
}
