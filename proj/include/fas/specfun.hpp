#pragma once

// Special functions needed by the outage-probability formulas: log-gamma,
// regularized incomplete gamma, generalized Marcum Q and Bessel J0.
// Everything here is a pure function of its arguments.

namespace fas::specfun {

/// Truncation controls for the series-based kernels.
struct Accuracy {
    double abs_tol = 1e-12;
    int max_terms = 10000;

    /// Throws DomainError if abs_tol <= 0 or max_terms < 1.
    void validate() const;
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
double reg_lower_gamma(double a, double x, const Accuracy& acc = {});

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed directly
/// so that small tails keep their relative accuracy.
double reg_upper_gamma(double a, double x, const Accuracy& acc = {});

/// Generalized Marcum Q-function Q_order(a, b).
///
/// Evaluated as the Poisson mixture
///   Q_order(a, b) = sum_k e^{-a^2/2} (a^2/2)^k / k! * Q(order + k, b^2 / 2)
/// and truncated once a rigorous bound on the remaining tail drops below
/// acc.abs_tol relative to the partial sum. Throws ConvergenceError when
/// acc.max_terms is exhausted.
double marcum_q(double order, double a, double b, const Accuracy& acc = {});

/// Complement 1 - Q_order(a, b), summed directly from the lower incomplete
/// gamma so that values near zero keep full relative precision.
double marcum_p(double order, double a, double b, const Accuracy& acc = {});

/// Bessel function of the first kind, order zero.
double bessel_j0(double x);

}  // namespace fas::specfun
