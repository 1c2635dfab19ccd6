#pragma once

#include "gifs/geometry.hpp"
#include "gifs/graph.hpp"

namespace gifs {

/// Certified bracket for a self-similar measure value. Deeper refinement
/// only moves mass out of the straddling frontier, so brackets never widen.
struct MeasureInterval {
    double lo = 0.0;
    double hi = 1.0;
    int refinement_depth = 0;
    bool converged = true;
    Rational exact_lo{0};
    Rational exact_hi{1};
};

struct MeasureOptions {
    double tol = 1e-9;
    int max_depth = 40;
};

/// Measure of the cylinder addressed by a path: exactly the path's
/// probability product (needs the open set condition to be meaningful).
Rational cylinder_measure(const GraphIFS& g, const Path& p);

/// Certified bracket for mu_u(B(x, r)) with B the closed ball. Exact
/// rational classification of cylinders against the ball in 1-D; the lower
/// bound sums cylinders certified inside, the upper adds every straddler.
MeasureInterval ball_measure(const GraphIFS& g, const ComponentHulls& hulls, int u,
                             const std::vector<Rational>& x, const Rational& r,
                             const MeasureOptions& opts = {});

/// Convenience overload: converts the double radius exactly.
MeasureInterval ball_measure(const GraphIFS& g, const ComponentHulls& hulls, int u,
                             const std::vector<double>& x, double r,
                             const MeasureOptions& opts = {});

}  // namespace gifs
