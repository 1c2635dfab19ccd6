#pragma once

#include <optional>
#include <string>

#include "gifs/geometry.hpp"
#include "gifs/spectral.hpp"

namespace gifs {

enum class SeparationCondition { SSC, CSSC, OSC };
enum class Verdict { Holds, Fails, Undecided };

struct SeparationReport {
    SeparationCondition condition = SeparationCondition::SSC;
    Verdict verdict = Verdict::Undecided;
    // Holds(SSC) carries a certified positive gap epsilon; Fails carries a
    // concrete violating pair.
    std::optional<Rational> epsilon;
    std::optional<std::pair<std::string, std::string>> witness_pair;
    std::optional<std::vector<Rational>> touch_point;
    std::vector<std::string> notes;
};

/// Half the minimum pairwise distance between same-vertex level-1 pieces,
/// certified by exact interval arithmetic with branch-and-bound refinement.
SeparationReport check_ssc(const GraphIFS& g, const ComponentHulls& hulls, int depth_cap = 64);

/// Disjointness of sibling convex-hull images (exact in 1-D).
SeparationReport check_cssc(const GraphIFS& g, const ComponentHulls& hulls);

/// Verifies containment S_e(U_t(e)) in U_u and pairwise disjointness of
/// sibling open-set images, exactly for rational boxes.
SeparationReport check_osc(const GraphIFS& g, const std::vector<RationalBox>& open_sets);

/// Per-vertex open sets: the configured boxes when present, else the hull
/// interior.
std::vector<RationalBox> default_open_sets(const GraphIFS& g, const ComponentHulls& hulls);

/// Designated interior paths: per vertex the first (breadth-first,
/// lexicographic) path whose cylinder sits strictly inside the open set,
/// padded to a common length l with gcd(l, primitivity index) = 1 and a
/// strongly connected pruned transfer support.
struct InteriorPaths {
    int l = 0;
    std::vector<Path> ell_paths;
};

InteriorPaths construct_ell_paths(const GraphIFS& g, const ComponentHulls& hulls,
                                  const std::vector<RationalBox>& open_sets, int min_l = 2,
                                  int max_l = 24);

/// Derived scale constants for the overlap machinery.
struct SystemConstants {
    int l = 0;
    std::vector<Path> ell_paths;
    std::vector<double> c_v;  // clearance of each designated cylinder to the open-set boundary
    double c_min = 0, r_min = 0, r_max = 0, d_min = 0, d_max = 0;
    int clearance_depth = 0;  // minimal N with 2 d_max / c_min <= r_max^-(N-1)
    double delta = 0;         // r_min^(N+l+1) d_min, the small-scale threshold
    double alpha = 0;         // 1 / (r_max^N d_max)
    double beta_scale = 0;    // 1 / (r_min^(N+1) d_min)

    // Exact counterparts used by the scale-window path sums.
    std::vector<Rational> c_v_exact;
    Rational delta_exact;
    Rational alpha_exact;
    Rational beta_scale_exact;
};

SystemConstants compute_constants(const GraphIFS& g, const ComponentHulls& hulls,
                                  const std::vector<RationalBox>& open_sets,
                                  const InteriorPaths& interior);

}  // namespace gifs
