// SPDX-License-Identifier: Apache-2.0
#include "bdris/circuit.hpp"

#include <algorithm>
#include <cmath>

namespace bdris {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMonotoneSamples = 256;

void validate(const CircuitParams& p) {
    if (!(p.l1 > 0.0) || !(p.l2 > 0.0))
        throw ConfigError("inductances must be positive");
    if (!(p.c_min > 0.0) || !(p.c_min <= p.c_max))
        throw ConfigError("capacitance range must satisfy 0 < c_min <= c_max");
    if (!(p.f > 0.0))
        throw ConfigError("frequency must be positive");
    if (p.r < 0.0)
        throw ConfigError("resistance must be nonnegative");
}

// Raw admittance, no range check; used for arc construction sampling.
std::complex<double> admittance_at(const CircuitParams& p, double c) {
    const double w = p.omega();
    const std::complex<double> j(0.0, 1.0);
    return 1.0 / (j * w * p.l1) + 1.0 / (j * w * p.l2 + 1.0 / (j * w * c) + p.r);
}

// theta(C) samples with continuous unwrapping relative to the first sample.
void sample_unwrapped_theta(const CircuitParams& p, std::complex<double> alpha,
                            double* thetas, double* caps, int n) {
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double c = p.c_min + (p.c_max - p.c_min) * i / (n - 1);
        double th = std::arg(admittance_at(p, c) - alpha);
        if (i > 0) {
            while (th - prev > kPi) th -= 2.0 * kPi;
            while (th - prev < -kPi) th += 2.0 * kPi;
        }
        thetas[i] = th;
        caps[i] = c;
        prev = th;
    }
}

} // namespace

std::complex<double> AdmittanceArc::value_at(double theta) const {
    return alpha + beta * std::complex<double>(std::cos(theta), std::sin(theta));
}

double AdmittanceArc::wrap_to_arc(double angle) const {
    const double mid = midpoint();
    double a = angle;
    while (a > mid + kPi) a -= 2.0 * kPi;
    while (a <= mid - kPi) a += 2.0 * kPi;
    return a;
}

std::complex<double> admittance_of_capacitance(const CircuitParams& p, double c) {
    validate(p);
    if (c < p.c_min || c > p.c_max)
        throw OutOfRangeCapacitance("capacitance outside [c_min, c_max]");
    return admittance_at(p, c);
}

AdmittanceArc arc_of_params(const CircuitParams& p) {
    validate(p);
    if (!(p.r > 0.0))
        throw ZeroResistance("the admittance circle degenerates at R = 0");

    AdmittanceArc arc;
    const double w = p.omega();
    arc.alpha = std::complex<double>(1.0 / (2.0 * p.r), -1.0 / (w * p.l1));
    arc.beta = 1.0 / (2.0 * p.r);

    double thetas[kMonotoneSamples];
    double caps[kMonotoneSamples];
    sample_unwrapped_theta(p, arc.alpha, thetas, caps, kMonotoneSamples);

    const int dir = thetas[kMonotoneSamples - 1] >= thetas[0] ? 1 : -1;
    for (int i = 1; i < kMonotoneSamples; ++i)
        if (dir * (thetas[i] - thetas[i - 1]) < 0.0)
            throw NonMonotoneArc("theta(C) is not monotone over the capacitance range");

    arc.theta_min = std::min(thetas[0], thetas[kMonotoneSamples - 1]);
    arc.theta_max = std::max(thetas[0], thetas[kMonotoneSamples - 1]);
    return arc;
}

ArcProjection project_onto_arc(const AdmittanceArc& arc, std::complex<double> w) {
    const std::complex<double> psi = w - arc.alpha;
    double theta;
    if (psi == std::complex<double>(0.0, 0.0)) {
        theta = arc.midpoint(); // all arc points equidistant; deterministic tie-break
    } else {
        theta = arc.wrap_to_arc(std::arg(psi));
        if (theta < arc.theta_min) theta = arc.theta_min;
        if (theta > arc.theta_max) theta = arc.theta_max;
    }
    return {theta, arc.value_at(theta)};
}

double capacitance_of_theta(const CircuitParams& p, const AdmittanceArc& arc,
                            double theta) {
    validate(p);
    const double eps = 1e-9 * std::max(1.0, std::abs(arc.theta_max));
    const double target = arc.wrap_to_arc(theta);
    if (target < arc.theta_min - eps || target > arc.theta_max + eps)
        throw OutOfRangeTheta("theta outside [theta_min, theta_max]");

    // The arc interval is cut-free in its own convention, so wrapping the raw
    // angle there gives a monotone theta(C).
    auto theta_of_c = [&](double c) {
        return arc.wrap_to_arc(std::arg(admittance_at(p, c) - arc.alpha));
    };

    double lo = p.c_min, hi = p.c_max;
    const double th_lo = theta_of_c(lo);
    const double th_hi = theta_of_c(hi);
    const int dir = th_hi >= th_lo ? 1 : -1;
    const double t = std::clamp(target, std::min(th_lo, th_hi),
                                std::max(th_lo, th_hi));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double th = theta_of_c(mid);
        if ((dir > 0) == (th < t))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace bdris
