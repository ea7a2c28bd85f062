#include "fas/correlation.hpp"

#include <cmath>
#include <numbers>

#include "fas/errors.hpp"
#include "fas/specfun.hpp"

namespace fas {

namespace {

void check_geometry(int ports, double size_wavelengths) {
    if (ports < 2) throw DomainError("correlation: at least two ports are required");
    if (!(size_wavelengths > 0.0) || !std::isfinite(size_wavelengths)) {
        throw DomainError("correlation: antenna size must be positive and finite");
    }
}

double clamp_coefficient(double mu, bool& clamped) {
    if (mu > kMaxCorrelation) {
        clamped = true;
        return kMaxCorrelation;
    }
    return mu;
}

}  // namespace

const char* to_string(CorrelationModel model) {
    switch (model) {
        case CorrelationModel::UniformNoReference: return "uniform";
        case CorrelationModel::FirstPortReference: return "reference";
    }
    return "unknown";
}

void CorrelationProfile::validate() const {
    if (mu.empty()) throw DomainError("CorrelationProfile: empty profile");
    for (std::size_t k = 1; k < mu.size(); ++k) {
        if (!(mu[k] >= 0.0 && mu[k] < 1.0)) {
            throw DomainError("CorrelationProfile: coefficients must lie in [0, 1)");
        }
    }
}

CorrelationProfile mu_uniform(int ports, double size_wavelengths) {
    check_geometry(ports, size_wavelengths);
    const double n = ports;
    double sum = 0.0;
    for (int k = 1; k < ports; ++k) {
        const double arg = 2.0 * std::numbers::pi * k * size_wavelengths / (n - 1.0);
        sum += (n - k) * specfun::bessel_j0(arg);
    }
    const double mu_sq = std::abs(2.0 / (n * (n - 1.0)) * sum);

    CorrelationProfile prof;
    prof.model = CorrelationModel::UniformNoReference;
    const double mu = clamp_coefficient(std::sqrt(mu_sq), prof.clamped);
    prof.mu.assign(static_cast<std::size_t>(ports), mu);
    prof.mu[0] = 1.0;
    return prof;
}

CorrelationProfile mu_reference(int ports, double size_wavelengths) {
    check_geometry(ports, size_wavelengths);
    CorrelationProfile prof;
    prof.model = CorrelationModel::FirstPortReference;
    prof.mu.resize(static_cast<std::size_t>(ports));
    prof.mu[0] = 1.0;
    for (int k = 2; k <= ports; ++k) {
        const double arg =
            2.0 * std::numbers::pi * (k - 1) * size_wavelengths / (ports - 1.0);
        prof.mu[static_cast<std::size_t>(k - 1)] =
            clamp_coefficient(std::abs(specfun::bessel_j0(arg)), prof.clamped);
    }
    return prof;
}

CorrelationProfile constant_profile(int ports, double mu) {
    if (ports < 1) throw DomainError("constant_profile: at least one port is required");
    CorrelationProfile prof;
    prof.mu.assign(static_cast<std::size_t>(ports), mu);
    prof.mu[0] = 1.0;
    prof.validate();
    return prof;
}

CorrelationProfile build_profile(CorrelationModel model, int ports, double size_wavelengths) {
    if (ports < 1) throw DomainError("build_profile: at least one port is required");
    if (ports == 1) {
        CorrelationProfile prof;
        prof.model = model;
        prof.mu = {1.0};
        return prof;
    }
    return model == CorrelationModel::UniformNoReference
               ? mu_uniform(ports, size_wavelengths)
               : mu_reference(ports, size_wavelengths);
}

}  // namespace fas
