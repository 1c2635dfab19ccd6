#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gifs/geometry_types.hpp"
#include "gifs/rational.hpp"

namespace gifs {

struct Edge {
    std::string id;
    int from = 0;  // initial vertex of the edge
    int to = 0;    // terminal vertex; the map sends component 'to' into component 'from'
    Rational ratio;
    Rational prob;
    Similarity map;
};

/// Directed-graph IFS with probabilities. Immutable after construction;
/// all operations on it are pure.
struct GraphIFS {
    int ambient_dim = 1;
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    // Per-vertex candidate open boxes (axis-aligned, rational endpoints).
    std::vector<std::optional<RationalBox>> open_sets;

    // Out-edge indices per vertex, sorted lexicographically by edge id.
    std::vector<std::vector<int>> out_edges;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int vertex_index(const std::string& name) const;

    /// Rebuilds the sorted out-edge lists; call after filling edges.
    void index();
};

/// Nonempty finite path of consecutive edges with cached products.
struct Path {
    std::vector<int> edges;  // indices into GraphIFS::edges
    int from = 0;
    int to = 0;
    Rational r_path;  // product of edge ratios
    Rational p_path;  // product of edge probabilities

    std::size_t length() const { return edges.size(); }
};

Path make_path(const GraphIFS& g, std::vector<int> edge_indices);
std::string path_id(const GraphIFS& g, const Path& p);  // dash-joined edge ids

struct Violation {
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
};

/// Checks every definitional invariant: >= 2 out-edges per vertex, exact
/// probability sums, ratio/probability ranges, map/ratio consistency,
/// strong connectivity, well-formed open-set boxes.
ValidationReport validate(const GraphIFS& g);

inline constexpr std::uint64_t kDefaultPathCap = 10'000'000;

struct PathCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// All paths of length k starting at u (ending at v when given), in
/// lexicographic edge-id order.
std::vector<Path> enumerate_paths(const GraphIFS& g, int u, int k,
                                  std::optional<int> v = std::nullopt,
                                  std::uint64_t cap = kDefaultPathCap);

/// Stopping set: minimal paths whose cylinder diameter first drops below r.
/// Membership test r_e*|F_t(e)| < r <= r_prefix*|F_t(prefix)| runs in exact
/// rational arithmetic (diameters from exact 1-D hulls).
std::vector<Path> stopping_paths(const GraphIFS& g, int u, const Rational& r,
                                 const std::vector<Rational>& diameters,
                                 std::uint64_t cap = kDefaultPathCap);

/// True iff f's edge sequence occurs contiguously inside g's.
bool is_subpath(const Path& f, const Path& g);

}  // namespace gifs
