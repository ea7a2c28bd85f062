#include "fas/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "fas/errors.hpp"

namespace fas {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;

    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_21(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = kWgk[10] * fc;
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    const double value = kronrod * half;
    const double error = std::abs((kronrod - gauss) * half);
    return {lo, hi, value, error};
}

}  // namespace

void QuadratureSettings::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw DomainError("QuadratureSettings: tolerances must be positive");
    }
    if (max_subdivisions < 1) {
        throw DomainError("QuadratureSettings: max_subdivisions must be at least 1");
    }
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double lo,
                                    double hi, const QuadratureSettings& settings) {
    settings.validate();
    if (!(std::isfinite(lo) && std::isfinite(hi))) {
        throw DomainError("integrate_adaptive: bounds must be finite");
    }
    QuadratureResult result;
    if (lo == hi) return result;

    std::priority_queue<Segment> pending;
    pending.push(gauss_kronrod_21(f, lo, hi));
    result.evaluations = 21;
    double total = pending.top().value;
    double error = pending.top().error;

    auto converged = [&] {
        return error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
    };

    while (!converged()) {
        if (result.subdivisions >= settings.max_subdivisions) {
            throw ConvergenceError("integrate_adaptive: subdivision budget of " +
                                   std::to_string(settings.max_subdivisions) +
                                   " exhausted (error estimate " + std::to_string(error) + ")");
        }
        const Segment worst = pending.top();
        pending.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Segment left = gauss_kronrod_21(f, worst.lo, mid);
        const Segment right = gauss_kronrod_21(f, mid, worst.hi);
        result.evaluations += 42;
        ++result.subdivisions;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        pending.push(left);
        pending.push(right);
    }

    // Re-sum from the segments so the returned value does not carry drift
    // from the incremental updates.
    double value = 0.0;
    double err = 0.0;
    std::vector<Segment> segments;
    segments.reserve(pending.size());
    while (!pending.empty()) {
        segments.push_back(pending.top());
        pending.pop();
    }
    std::sort(segments.begin(), segments.end(),
              [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
    for (const auto& s : segments) {
        value += s.value;
        err += s.error;
    }
    result.value = value;
    result.abs_error = err;
    return result;
}

}  // namespace fas
