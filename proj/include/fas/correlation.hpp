#pragma once

#include <cstddef>
#include <vector>

namespace fas {

enum class CorrelationModel {
    UniformNoReference,   ///< one coefficient shared by every port pair
    FirstPortReference,   ///< ports 2..N correlated to port 1 (Jakes)
};

const char* to_string(CorrelationModel model);

/// Largest coefficient a profile may carry; builders clamp to this.
inline constexpr double kMaxCorrelation = 1.0 - 1e-9;

/// Port correlation coefficients. mu[0] belongs to the reference port and is 1
/// by convention; mu[k] for k >= 1 lies in [0, 1).
struct CorrelationProfile {
    std::vector<double> mu;
    CorrelationModel model = CorrelationModel::UniformNoReference;
    bool clamped = false;

    std::size_t ports() const { return mu.size(); }

    /// Throws DomainError when an invariant is violated.
    void validate() const;
};

/// Shared-coefficient profile from the pair-averaged Jakes sum over N ports
/// spread on W wavelengths.
CorrelationProfile mu_uniform(int ports, double size_wavelengths);

/// Jakes model referenced to port 1: mu_k = |J0(2 pi (k-1) W / (N-1))|.
CorrelationProfile mu_reference(int ports, double size_wavelengths);

/// Profile with a caller-chosen common coefficient (ports >= 1).
CorrelationProfile constant_profile(int ports, double mu);

/// Dispatches on model; a single port yields the trivial profile {1}.
CorrelationProfile build_profile(CorrelationModel model, int ports, double size_wavelengths);

}  // namespace fas
