#pragma once

#include <string>

#include "gifs/measure.hpp"

namespace gifs {

/// An r-separated center set together with its moment sum. Values are
/// certified lower bounds on the true supremum except in the 1-D counting
/// case, which is exact.
struct PackingEstimate {
    std::vector<std::vector<Rational>> centers;
    std::vector<std::string> center_ids;
    double r = 0;
    double q = 0;
    double value = 0;          // sum of bracket midpoints raised to q
    Interval value_interval;   // from the measure brackets
    bool exact = false;        // exact supremum (1-D, q = 0)
    bool converged = true;     // all measure brackets met their tolerance
};

struct PackingOptions {
    // Candidates come from stopping-set cylinders at scale candidate_scale * r.
    Rational candidate_scale{1, 2};
    MeasureOptions measure{1e-10, 40};
    std::uint64_t path_cap = kDefaultPathCap;
    int exchange_passes = 8;
    int refine_levels = 4;  // extra candidate refinement rounds for counting
};

/// Maximum cardinality of an r-separated subset of F_u. Exact in 1-D via a
/// left-to-right greedy sweep over certified cylinder endpoints, refined
/// until the count stabilizes.
PackingEstimate packing_number(const GraphIFS& g, const ComponentHulls& hulls, int u,
                               const Rational& r, const PackingOptions& opts = {});

/// Lower-bound estimator for the q-th packing moment at scale r: greedy
/// insertion by ball-mass rank with pairwise exchange passes. Reduces to
/// packing_number when q = 0.
PackingEstimate packing_moment(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                               const Rational& r, const PackingOptions& opts = {});

/// Packing moment restricted to the part of piece e within the closed
/// r-neighbourhood of piece f (e, f distinct edges leaving u). Empty
/// candidate sets give the empty-sum value 0.
PackingEstimate overlap_moment(const GraphIFS& g, const ComponentHulls& hulls, int u, int edge_e,
                               int edge_f, double q, const Rational& r,
                               const PackingOptions& opts = {});

/// Closed-form bound ((1+2*c2)/c1)^m on how many disjoint-ball-bearing sets
/// can meet one ball of radius r.
double ball_count_bound(double c1, double c2, int m);

struct PowerSumCheck {
    bool holds = false;
    double lhs = 0;
    double rhs = 0;
};

/// Evaluates (sum a_i)^p <= max{1, C^(p-1)} * sum a_i^p for C >= count.
PowerSumCheck power_sum_check(double p, const std::vector<double>& values, double C);

}  // namespace gifs
