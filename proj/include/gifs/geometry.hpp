#pragma once

#include <optional>
#include <vector>

#include "gifs/geometry_types.hpp"
#include "gifs/graph.hpp"

namespace gifs {

/// Per-vertex enclosures of the attractor components. In 1-D the hull
/// endpoints are solved exactly (they are points of the component); in 2-D
/// the boxes are outward-rounded interval enclosures.
struct ComponentHulls {
    bool exact = false;
    std::vector<RationalBox> exact_boxes;   // when exact
    std::vector<Rational> exact_diameter;   // when exact
    std::vector<CertifiedBox> boxes;        // always populated
    std::vector<Interval> diameter;         // always populated
};

struct HullOptions {
    double tol = 1e-12;
    int max_iterations = 20000;
};

/// Fixed point of H_u <- hull(union of edge images of H_t(e)).
ComponentHulls component_hulls(const GraphIFS& g, const HullOptions& opts = {});

/// Composition of the edge maps along a path, argument-side first edge
/// outermost; the scale equals path.r_path exactly.
Similarity compose(const GraphIFS& g, const Path& p);

/// Deterministic per-vertex base point: fixed point of the first self-loop
/// edge in id order, else the hull's lower corner. Always a point of the
/// component in 1-D.
std::vector<std::vector<Rational>> anchor_points(const GraphIFS& g, const ComponentHulls& hulls);

/// Exact rational cylinder interval S_path(hull) for 1-D systems.
RationalBox cylinder_box_exact(const GraphIFS& g, const ComponentHulls& hulls, const Path& p);
CertifiedBox cylinder_box(const GraphIFS& g, const ComponentHulls& hulls, const Path& p);

enum class CloudMode { Deterministic, Chaos };

struct CloudOptions {
    CloudMode mode = CloudMode::Deterministic;
    std::uint64_t seed = 0;
    int chaos_count = 1024;
    std::uint64_t path_cap = kDefaultPathCap;
};

struct PointCloud {
    std::vector<std::vector<double>> points;
    std::vector<std::string> path_ids;  // deterministic mode: one per path
    double resolution = 0.0;            // every point of F_u is within this of the cloud
    int depth = 0;
};

PointCloud attractor_points(const GraphIFS& g, const ComponentHulls& hulls, int u, int depth,
                            const CloudOptions& opts = {});

/// Cover element: a certified box plus witness points known to lie in the
/// covered set.
struct CoverElement {
    RationalBox box;
    std::vector<std::vector<Rational>> witnesses;
};

struct SetDistanceResult {
    Rational lo;
    Rational hi;
    bool exact = false;  // lo == hi
    std::optional<std::vector<Rational>> touch_point;
};

/// One-shot certified bracket for dist(A,B) from covers: lower bound from
/// box gaps, upper bound from witness pairs (1-D exact arithmetic).
SetDistanceResult set_distance(const std::vector<CoverElement>& a,
                               const std::vector<CoverElement>& b);

/// Branch-and-bound distance between two cylinder sets S_a(F) and S_b(F),
/// refining cylinders until the bracket collapses or certifies a verdict.
SetDistanceResult cylinder_set_distance(const GraphIFS& g, const ComponentHulls& hulls,
                                        const Path& a, const Path& b, int depth_cap = 64);

/// Cover of the cylinder S_path(F) by a single element with hull-endpoint
/// witnesses (1-D).
CoverElement cylinder_cover_element(const GraphIFS& g, const ComponentHulls& hulls, const Path& p);

struct CodedPoint {
    std::vector<Rational> point;
    Rational error_radius;  // r_path * |F_t(path)| upper bound
};

/// Representative of the cylinder addressed by a finite path prefix.
CodedPoint code_to_point(const GraphIFS& g, const ComponentHulls& hulls, const Path& prefix);

}  // namespace gifs
