// SPDX-License-Identifier: Apache-2.0
//
// Lossy varactor lumped-circuit model for a tunable admittance component.
// Each component is a parallel inductor L1 alongside the series branch
// R + L2 + C.  Sweeping C traces an arc of a circle in the admittance plane
// with center alpha = 1/(2R) - j/(w L1) and radius beta = 1/(2R).
#ifndef BDRIS_CIRCUIT_HPP
#define BDRIS_CIRCUIT_HPP

#include <complex>

#include "bdris/errors.hpp"

namespace bdris {

struct CircuitParams {
    double r = 1.0;         // parasitic resistance, ohms
    double l1 = 6e-9;       // parallel inductance, henries
    double l2 = 0.7e-9;     // series parasitic inductance, henries
    double c_min = 0.35e-12; // capacitance range of the SMV2020-079LF, farads
    double c_max = 3.20e-12;
    double f = 2.4e9;       // operating frequency, hertz

    double omega() const { return 2.0 * 3.14159265358979323846 * f; }
};

/// Feasible admittance values: alpha + beta e^{j theta},
/// theta in [theta_min, theta_max].  Angles use a continuous convention whose
/// branch cut sits at the antipode of the arc midpoint.
struct AdmittanceArc {
    std::complex<double> alpha; // circle center, siemens
    double beta = 0.0;          // circle radius, siemens
    double theta_min = 0.0;
    double theta_max = 0.0;

    double midpoint() const { return 0.5 * (theta_min + theta_max); }
    std::complex<double> value_at(double theta) const;

    /// Maps an angle into (midpoint - pi, midpoint + pi].
    double wrap_to_arc(double angle) const;
};

/// Component admittance at capacitance c: 1/(jwL1) + 1/(jwL2 + 1/(jwC) + R).
/// Throws OutOfRangeCapacitance outside [c_min, c_max].
std::complex<double> admittance_of_capacitance(const CircuitParams& p, double c);

/// Derives the feasible arc from the circuit constants and capacitance range.
/// Throws ZeroResistance for r <= 0 and NonMonotoneArc when the sampled
/// theta(C) sweep is not monotone.
AdmittanceArc arc_of_params(const CircuitParams& p);

struct ArcProjection {
    double theta;
    std::complex<double> value;
};

/// Closest arc point to w: theta = clamp(arg(w - alpha)).  The degenerate
/// target w == alpha maps to the arc midpoint.
ArcProjection project_onto_arc(const AdmittanceArc& arc, std::complex<double> w);

/// Recovers the capacitance realizing the arc point at theta (bisection on
/// the monotone theta(C) sweep).  Throws OutOfRangeTheta outside the arc.
double capacitance_of_theta(const CircuitParams& p, const AdmittanceArc& arc,
                            double theta);

} // namespace bdris

#endif
