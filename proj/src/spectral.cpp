#include "gifs/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gifs {

NonnegMatrix matmul(const NonnegMatrix& x, const NonnegMatrix& y) {
    NonnegMatrix r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int k = 0; k < x.n; ++k) {
            double v = x.at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < x.n; ++j) r.at(i, j) += v * y.at(k, j);
        }
    return r;
}

NonnegMatrix matpow(const NonnegMatrix& x, int k) {
    NonnegMatrix acc(x.n);
    for (int i = 0; i < x.n; ++i) acc.at(i, i) = 1.0;
    NonnegMatrix base = x;
    while (k > 0) {
        if (k & 1) acc = matmul(acc, base);
        base = matmul(base, base);
        k >>= 1;
    }
    return acc;
}

double max_row_sum_norm(const NonnegMatrix& m) {
    double best = 0;
    for (int i = 0; i < m.n; ++i) {
        double s = 0;
        for (int j = 0; j < m.n; ++j) s += std::fabs(m.at(i, j));
        best = std::max(best, s);
    }
    return best;
}

bool is_irreducible(const NonnegMatrix& m) {
    const int n = m.n;
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) reach[i][i] = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m.at(i, j) > 0) reach[i][j] = true;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!reach[i][j]) return false;
    return true;
}

int primitivity_index(const NonnegMatrix& m) {
    if (!is_irreducible(m)) throw NotIrreducible("primitivity_index: matrix not irreducible");
    // BFS levels from vertex 0; gcd of (level(i) + 1 - level(j)) over arcs i->j.
    const int n = m.n;
    std::vector<int> level(n, -1);
    std::vector<int> order;
    level[0] = 0;
    order.push_back(0);
    for (std::size_t h = 0; h < order.size(); ++h) {
        int i = order[h];
        for (int j = 0; j < n; ++j)
            if (m.at(i, j) > 0 && level[j] < 0) {
                level[j] = level[i] + 1;
                order.push_back(j);
            }
    }
    int g = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m.at(i, j) > 0) g = std::gcd(g, std::abs(level[i] + 1 - level[j]));
    return g == 0 ? 1 : g;
}

PerronData spectral_radius(const NonnegMatrix& m, int max_iterations) {
    const int n = m.n;
    if (n == 0) throw std::invalid_argument("spectral_radius: empty matrix");
    for (double v : m.a)
        if (!(v >= 0)) throw std::invalid_argument("spectral_radius: negative entry");

    if (n == 1) return PerronData{m.at(0, 0), {1.0}, 0.0};

    // Normalize so the shifted iteration keeps full relative precision even
    // for tiny radii: rho(M) = c * rho(M/c) with rho(M/c) in [1/n, 1]-ish.
    const double c = max_row_sum_norm(m);
    if (c == 0) return PerronData{0.0, std::vector<double>(n, 1.0), 0.0};
    NonnegMatrix ms(n);
    for (int i = 0; i < n * n; ++i) ms.a[i] = m.a[i] / c;

    const bool irreducible = is_irreducible(m);
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double lo = 0, hi = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iterations; ++it) {
        // One step of (M/c + I) v.
        for (int i = 0; i < n; ++i) {
            double s = v[i];
            for (int j = 0; j < n; ++j) s += ms.at(i, j) * v[j];
            w[i] = s;
        }
        lo = std::numeric_limits<double>::infinity();
        hi = 0;
        for (int i = 0; i < n; ++i) {
            if (v[i] > 0) {
                double ratio = w[i] / v[i];
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        double scale = *std::max_element(w.begin(), w.end());
        for (int i = 0; i < n; ++i) v[i] = w[i] / scale;
        if (irreducible && hi - lo <= 1e-14 * hi) break;
        if (!irreducible && hi - lo <= 1e-11 * hi) break;
    }
    if (it >= max_iterations && irreducible)
        throw NumericFailure("spectral_radius: no convergence within iteration cap");

    PerronData out;
    const double rho_scaled = 0.5 * (lo + hi) - 1.0;
    out.rho = c * std::max(rho_scaled, 0.0);
    out.right_vector = v;
    double vmax = *std::max_element(v.begin(), v.end());
    for (double& x : out.right_vector) x /= vmax;
    out.residual = 0;
    for (int i = 0; i < n; ++i) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += m.at(i, j) * out.right_vector[j];
        out.residual = std::max(out.residual, std::fabs(s - out.rho * out.right_vector[i]));
    }

    if (irreducible && rho_scaled > 1e-6) {
        // Gelfand sandwich: rho <= ||M^k||^{1/k} <= rho * (vmax/vmin)^{1/k}.
        double vmin = *std::min_element(out.right_vector.begin(), out.right_vector.end());
        for (int k : {32, 64}) {
            NonnegMatrix scaled(n);
            for (int i = 0; i < n * n; ++i) scaled.a[i] = m.a[i] / out.rho;
            double nk = std::pow(max_row_sum_norm(matpow(scaled, k)), 1.0 / k);
            double upper = std::pow(1.0 / vmin, 1.0 / k);
            if (!(nk >= 1.0 - 1e-9) || !(nk <= upper * (1 + 1e-9)))
                throw NumericFailure("spectral_radius: Gelfand cross-check failed");
        }
    }
    return out;
}

NonnegMatrix transfer_matrix(const GraphIFS& g, double q, double s) {
    NonnegMatrix m(g.vertex_count());
    for (const auto& e : g.edges)
        m.at(e.from, e.to) += std::pow(to_double(e.prob), q) * std::pow(to_double(e.ratio), s);
    return m;
}

NonnegMatrix transfer_matrix_power(const GraphIFS& g, double q, double s, int l) {
    if (l < 1) throw std::invalid_argument("transfer_matrix_power: l must be >= 1");
    return matpow(transfer_matrix(g, q, s), l);
}

NonnegMatrix pruned_transfer_matrix(const GraphIFS& g, double q, double s, int l,
                                    const std::vector<Path>& ell_paths) {
    if (static_cast<int>(ell_paths.size()) != g.vertex_count())
        throw std::invalid_argument("pruned_transfer_matrix: one designated path per vertex required");
    NonnegMatrix m = transfer_matrix_power(g, q, s, l);
    for (int u = 0; u < g.vertex_count(); ++u) {
        const Path& ell = ell_paths[u];
        if (static_cast<int>(ell.length()) != l || ell.from != u)
            throw std::invalid_argument("pruned_transfer_matrix: designated path length/origin mismatch");
        double term = std::pow(to_double(ell.p_path), q) * std::pow(to_double(ell.r_path), s);
        double& cell = m.at(u, ell.to);
        cell = std::max(0.0, cell - term);
    }
    return m;
}

namespace {

// Root of rho(build(s)) = 1 for a strictly decreasing rho.
template <typename Build>
double solve_unit_radius(Build build) {
    auto f = [&](double s) {
        NonnegMatrix m = build(s);
        for (double v : m.a)
            if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        return spectral_radius(m).rho - 1.0;
    };

    double lo = -64, hi = 64;
    double flo = f(lo), fhi = f(hi);
    int expand = 0;
    while (flo < 0 && expand++ < 16) {
        lo *= 2;
        flo = f(lo);
    }
    expand = 0;
    while (fhi > 0 && expand++ < 16) {
        hi *= 2;
        fhi = f(hi);
    }
    if (flo < 0 || fhi > 0) throw NumericFailure("exponent solve: bracket failure");
    if (flo == 0) return lo;
    if (fhi == 0) return hi;

    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = f(mid);
        if (fm == 0) return mid;
        (fm > 0 ? lo : hi) = mid;
    }
    // Secant polish inside the bisection bracket.
    double a = lo, b = hi, fa = f(a), fb = f(b);
    for (int it = 0; it < 8 && fb != fa; ++it) {
        double c = b - fb * (b - a) / (fb - fa);
        if (!(c >= lo && c <= hi)) break;
        double fc = f(c);
        a = b;
        fa = fb;
        b = c;
        fb = fc;
        if (std::fabs(fc) < 1e-15) break;
    }
    return std::fabs(fb) <= std::fabs(fa) ? b : a;
}

}  // namespace

double spectrum_exponent(const GraphIFS& g, double q) {
    return solve_unit_radius([&](double s) { return transfer_matrix(g, q, s); });
}

double overlap_exponent(const GraphIFS& g, double q, int l, const std::vector<Path>& ell_paths) {
    NonnegMatrix probe = pruned_transfer_matrix(g, q, 0.0, l, ell_paths);
    if (!is_irreducible(probe))
        throw NotIrreducible("overlap_exponent: pruned matrix support not irreducible");
    return solve_unit_radius(
        [&](double s) { return pruned_transfer_matrix(g, q, s, l, ell_paths); });
}

double hausdorff_dimension(const GraphIFS& g) { return spectrum_exponent(g, 0.0); }

}  // namespace gifs
