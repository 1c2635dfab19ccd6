#pragma once

#include "gifs/log_vector.hpp"
#include "gifs/packing.hpp"
#include "gifs/separation.hpp"

namespace gifs {

/// Matrix of finite atomic measures: one atom per edge at ln(1/ratio) with
/// weight p^q r^beta. Total masses reproduce the transfer matrix.
struct MeasureMatrix {
    struct Atom {
        std::optional<LogVector> support_vec;  // exact ln(1/r_e) when factorable
        double support = 0;                    // float fallback
        double weight = 0;
        int edge = -1;
    };
    int n = 0;
    double q = 0;
    double beta = 0;
    std::vector<std::vector<std::vector<Atom>>> entries;  // [u][v] -> atoms

    NonnegMatrix total_mass() const;
};

MeasureMatrix build_P(const GraphIFS& g, double q, double beta);
inline MeasureMatrix build_P(const GraphIFS& g, double q) {
    return build_P(g, q, spectrum_exponent(g, q));
}

enum class LatticeVerdict { Lattice, NonLattice, Undecided };

struct LatticeClassification {
    LatticeVerdict verdict = LatticeVerdict::Undecided;
    bool exact = false;   // exponent-arithmetic verdict vs numerical detection
    double span = 0;      // lambda, when lattice
    LogVector generator;  // exact mode
    std::vector<double> entry_spans;    // per nonzero entry, row-major, 0 for single atoms
    std::vector<double> entry_offsets;  // smallest support element per nonzero entry
    std::vector<std::string> notes;
};

/// Lattice test for the measure matrix. Exact mode reduces every condition
/// to integer exponent arithmetic: closed-walk support sums through each
/// vertex (diagonal arithmetic spans), within-entry support differences,
/// their common span, and the triple cocycle condition. Numerical mode uses
/// a continued-fraction rational-dependence test at 1e-9 and never labels
/// its verdict exact.
LatticeClassification classify_lattice(const MeasureMatrix& P);

struct HarnessOptions {
    PackingOptions packing;
};

/// Scaled moment H_u(t) = e^(-t*beta) M_u(e^-t) as a certified interval
/// around the estimator.
Interval normalized_moment(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                           double t, double beta, const HarnessOptions& opts = {});

/// One-step renewal defect
/// h_u(t) = e^(-t*beta) (M_u(e^-t) - sum_e p_e^q M_t(e)(e^-t / r_e)).
Interval renewal_defect(const GraphIFS& g, const ComponentHulls& hulls, int u, double q, double t,
                        double beta, const HarnessOptions& opts = {});

struct SpectrumFit {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
    double beta_ref = 0;
    std::vector<double> minus_log_r;
    std::vector<double> log_moment;
    std::vector<double> residuals;
};

/// Least-squares slope of ln(moment estimate) against -ln r, with the
/// transfer-matrix exponent attached for comparison.
SpectrumFit lq_spectrum_fit(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                            const std::vector<double>& r_grid, const HarnessOptions& opts = {});

struct RateCheck {
    std::vector<double> residual_products;  // (ln M / -ln r - beta) * (-ln r)
    double max_abs = 0;
    double median_abs = 0;
    double trend_slope = 0;
};

RateCheck convergence_rate_check(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                                 const std::vector<double>& r_grid,
                                 const HarnessOptions& opts = {});

struct PeriodicityCheck {
    std::vector<double> values;  // H(t0 + n*lambda) for n in [n_from, n_to]
    double tail_fluctuation = 0; // (max-min)/mean over the last half
};

PeriodicityCheck lattice_periodicity_check(const GraphIFS& g, const ComponentHulls& hulls, int u,
                                           double q, const LatticeClassification& cls, double t0,
                                           int n_from, int n_to,
                                           const HarnessOptions& opts = {});

struct BoundednessCheck {
    std::vector<double> r_values;
    std::vector<double> scaled;  // r^gamma * overlap estimate
    std::vector<Interval> estimate_intervals;
    double max_over_median = 0;
    double trend_slope = 0;  // slope of ln scaled vs -ln r (positive = growth)
    bool pass = false;
    double gamma = 0;
};

/// Power-law boundedness of the overlap moments: r^gamma * Q(r) stays
/// bounded (max within 10x of the median, no growing trend) for r below
/// the small-scale threshold.
BoundednessCheck theorem2_check(const GraphIFS& g, const ComponentHulls& hulls, int u, int edge_e,
                                int edge_f, double q, const std::vector<double>& r_grid,
                                const SystemConstants& constants,
                                const HarnessOptions& opts = {});

struct PathSums {
    double g_sum = 0;       // sum of p^q over window paths avoiding the designated paths
    double scaled = 0;      // r^gamma * g_sum
    std::uint64_t count = 0;
};

/// Exact enumeration of paths from w with alpha*r <= r_path < beta*r that
/// avoid every designated interior path as a subpath.
PathSums avoiding_path_sums(const GraphIFS& g, int w, double q, const Rational& r, double gamma,
                            const SystemConstants& constants,
                            std::uint64_t cap = kDefaultPathCap);

/// One-step defect bound from the overlap moments, evaluated with matched
/// estimator settings: |h_u(t)| lower end vs e^(-t*beta) * sum of paired
/// overlap upper ends.
struct DefectBoundCheck {
    Interval defect;
    double bound = 0;
    bool consistent = false;
};

DefectBoundCheck osc_defect_bound(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                                  double t, double beta, const HarnessOptions& opts = {});

}  // namespace gifs
