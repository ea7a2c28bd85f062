#include "fas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fas/errors.hpp"
#include "fas/parallel.hpp"
#include "fas/specfun.hpp"

namespace fas {

namespace {

void check_snr(double gamma_th, double gamma_bar) {
    if (!(gamma_th > 0.0) || !std::isfinite(gamma_th)) {
        throw DomainError("outage: gamma_th must be positive and finite");
    }
    if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar)) {
        throw DomainError("outage: gamma_bar must be positive and finite");
    }
}

void check_inputs(const FasConfig& cfg, const CorrelationProfile& prof) {
    cfg.validate();
    prof.validate();
    check_compatible(cfg, prof);
}

double omega_sq(const FasConfig& cfg, std::size_t k) { return cfg.omega[k] * cfg.omega[k]; }

}  // namespace

FasConfig FasConfig::uniform(int ports, double size_wavelengths, int m, double omega) {
    FasConfig cfg;
    cfg.ports = ports;
    cfg.size_wavelengths = size_wavelengths;
    cfg.m = m;
    cfg.omega.assign(ports > 0 ? static_cast<std::size_t>(ports) : 0, omega);
    cfg.validate();
    return cfg;
}

void FasConfig::validate() const {
    if (ports < 1) throw DomainError("FasConfig: ports must be >= 1");
    if (!(size_wavelengths > 0.0) || !std::isfinite(size_wavelengths)) {
        throw DomainError("FasConfig: antenna size must be positive");
    }
    if (m < 1) throw DomainError("FasConfig: m must be a positive integer");
    if (omega.size() != static_cast<std::size_t>(ports)) {
        throw DomainError("FasConfig: omega must have one entry per port");
    }
    for (double w : omega) {
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("FasConfig: omega must be > 0");
    }
}

const char* to_string(Method method) {
    switch (method) {
        case Method::Exact: return "exact";
        case Method::ClosedFormA2: return "closed_form";
        case Method::GammaApprox: return "approx";
        case Method::Asymptotic: return "asymptotic";
        case Method::Mrc: return "mrc";
        case Method::MonteCarlo: return "mc";
    }
    return "unknown";
}

std::vector<double> OpCurve::values() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.op);
    return out;
}

void OpCurve::validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && !(points[i].gamma_bar_db > points[i - 1].gamma_bar_db)) {
            throw DomainError("OpCurve: gamma_bar grid must be strictly increasing");
        }
        const double op = points[i].op;
        const bool upper_ok = method == Method::Asymptotic || method == Method::ClosedFormA2 ||
                              op <= 1.0;
        if (!(op >= 0.0) || !upper_ok) {
            throw DomainError("OpCurve: outage probability out of range");
        }
    }
}

double snr_threshold_linear(double gamma_th_db) {
    if (!std::isfinite(gamma_th_db)) throw DomainError("threshold must be finite");
    return db_to_linear(gamma_th_db);
}

void check_compatible(const FasConfig& cfg, const CorrelationProfile& prof) {
    if (prof.ports() != static_cast<std::size_t>(cfg.ports)) {
        throw DomainError("correlation profile has " + std::to_string(prof.ports()) +
                          " ports, config has " + std::to_string(cfg.ports));
    }
}

QuadratureResult exact_op_detailed(const FasConfig& cfg, const CorrelationProfile& prof,
                                   double gamma_th, double gamma_bar,
                                   const QuadratureSettings& quad) {
    check_inputs(cfg, prof);
    check_snr(gamma_th, gamma_bar);

    const double m = cfg.m;
    const double ratio = gamma_th / gamma_bar;
    const double omega1_sq = omega_sq(cfg, 0);
    const double log_norm = std::numbers::ln2 + m * std::log(m) - specfun::ln_gamma(m) -
                            m * std::log(omega1_sq);

    // For port k the Marcum arguments are a_k = r * a_scale[k] and b_k = b[k].
    const std::size_t others = prof.ports() - 1;
    std::vector<double> a_scale(others);
    std::vector<double> b(others);
    for (std::size_t k = 1; k < prof.ports(); ++k) {
        const double mu_sq = prof.mu[k] * prof.mu[k];
        a_scale[k - 1] = std::sqrt(2.0 * m * mu_sq / (omega1_sq * (1.0 - mu_sq)));
        b[k - 1] = std::sqrt(2.0 * m * ratio / (omega_sq(cfg, k) * (1.0 - mu_sq)));
    }

    const specfun::Accuracy acc;
    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        double log_f = log_norm + (2.0 * m - 1.0) * std::log(r) - m * r * r / omega1_sq;
        for (std::size_t k = 0; k < others; ++k) {
            const double p = specfun::marcum_p(m, r * a_scale[k], b[k], acc);
            if (p <= 0.0) return 0.0;
            log_f += std::log(p);
        }
        return std::exp(log_f);
    };

    QuadratureResult res = integrate_adaptive(integrand, 0.0, std::sqrt(ratio), quad);
    res.value = std::clamp(res.value, 0.0, 1.0);
    return res;
}

double exact_op(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                double gamma_bar, const QuadratureSettings& quad) {
    return exact_op_detailed(cfg, prof, gamma_th, gamma_bar, quad).value;
}

double closed_form_op(const FasConfig& cfg, const CorrelationProfile& prof, double gamma_th,
                      double gamma_bar) {
    check_inputs(cfg, prof);
    check_snr(gamma_th, gamma_bar);

    const double m = cfg.m;
    const double ratio = gamma_th / gamma_bar;
    const double ln_m_factorial = specfun::ln_gamma(m + 1.0);
    double spread = 1.0;
    double log_product = 0.0;
    for (std::size_t k = 1; k < prof.ports(); ++k) {
        const double mu_sq = prof.mu[k] * prof.mu[k];
        spread += mu_sq / (1.0 - mu_sq);
        log_product += m * std::log(m * ratio / (omega_sq(cfg, k) * (1.0 - mu_sq))) - ln_m_factorial;
    }
    const double arg = m * ratio * spread / omega_sq(cfg, 0);
    const double p = specfun::reg_lower_gamma(m, arg);
    if (p <= 0.0) return 0.0;
    return std::exp(std::log(p) - m * std::log(spread) + log_product);
}

double log_a0_coefficient(const FasConfig& cfg, const CorrelationProfile& prof) {
    check_inputs(cfg, prof);
    const double m = cfg.m;
    const double n_others = static_cast<double>(cfg.ports - 1);
    double log_a0 = (m - 1.0) * std::log(m) - specfun::ln_gamma(m) -
                    m * std::log(omega_sq(cfg, 0)) - n_others * specfun::ln_gamma(m + 1.0);
    for (std::size_t k = 1; k < prof.ports(); ++k) {
        const double mu_sq = prof.mu[k] * prof.mu[k];
        log_a0 += m * (std::log(m) - std::log(omega_sq(cfg, k)) - std::log1p(-mu_sq));
    }
    return log_a0;
}

double a0_coefficient(const FasConfig& cfg, const CorrelationProfile& prof) {
    const double log_a0 = log_a0_coefficient(cfg, prof);
    const double a0 = std::exp(log_a0);
    if (!std::isfinite(a0) || a0 < std::numeric_limits<double>::min()) {
        throw OverflowError("a0 coefficient out of double range (ln a0 = " +
                                std::to_string(log_a0) + ")",
                            log_a0);
    }
    return a0;
}

GammaFit gamma_fit(const FasConfig& cfg, const CorrelationProfile& prof) {
    GammaFit fit;
    fit.log_a0 = log_a0_coefficient(cfg, prof);
    fit.a0 = std::exp(fit.log_a0);
    fit.alpha = static_cast<double>(cfg.m) * cfg.ports;
    fit.log_beta = -(specfun::ln_gamma(fit.alpha) + fit.log_a0 + std::log(fit.alpha)) / fit.alpha;
    fit.beta = std::exp(fit.log_beta);
    return fit;
}

double approx_op(const GammaFit& fit, double gamma_th, double gamma_bar) {
    check_snr(gamma_th, gamma_bar);
    const double x = std::exp(std::log(gamma_th) - fit.log_beta - std::log(gamma_bar));
    return specfun::reg_lower_gamma(fit.alpha, x);
}

double asymptotic_op(const GammaFit& fit, double gamma_th, double gamma_bar) {
    check_snr(gamma_th, gamma_bar);
    const double log_x = std::log(gamma_th) - fit.log_beta - std::log(gamma_bar);
    return std::exp(fit.alpha * log_x - std::log(fit.alpha) - specfun::ln_gamma(fit.alpha));
}

double mrc_op(int branches, int m, double omega, double gamma_th, double gamma_bar) {
    if (branches < 1) throw DomainError("mrc_op: branch count must be >= 1");
    if (m < 1) throw DomainError("mrc_op: m must be a positive integer");
    if (!(omega > 0.0)) throw DomainError("mrc_op: omega must be positive");
    check_snr(gamma_th, gamma_bar);
    return specfun::reg_lower_gamma(static_cast<double>(branches) * m,
                                    m * gamma_th / (omega * omega * gamma_bar));
}

OpCurve evaluate_curve(Method method, const FasConfig& cfg, const CorrelationProfile& prof,
                       double gamma_th, std::span<const double> gamma_bar_db,
                       const CurveOptions& options) {
    check_inputs(cfg, prof);
    if (method == Method::MonteCarlo) {
        throw DomainError("evaluate_curve: Monte Carlo curves come from the montecarlo module");
    }
    OpCurve curve;
    curve.method = method;
    curve.config = cfg;
    curve.points.resize(gamma_bar_db.size());

    GammaFit fit;
    if (method == Method::GammaApprox || method == Method::Asymptotic) fit = gamma_fit(cfg, prof);

    parallel_for(gamma_bar_db.size(), options.threads, [&](std::size_t i) {
        const double gbar = db_to_linear(gamma_bar_db[i]);
        double op = 0.0;
        switch (method) {
            case Method::Exact: op = exact_op(cfg, prof, gamma_th, gbar, options.quad); break;
            case Method::ClosedFormA2: op = closed_form_op(cfg, prof, gamma_th, gbar); break;
            case Method::GammaApprox: op = approx_op(fit, gamma_th, gbar); break;
            case Method::Asymptotic: op = asymptotic_op(fit, gamma_th, gbar); break;
            case Method::Mrc:
                op = mrc_op(options.mrc_branches, cfg.m, cfg.omega[0], gamma_th, gbar);
                break;
            case Method::MonteCarlo: break;
        }
        curve.points[i] = {gamma_bar_db[i], op};
    });

    for (const auto& p : curve.points) curve.exceeds_one = curve.exceeds_one || p.op > 1.0;
    curve.validate();
    return curve;
}

}  // namespace fas
