#include "gifs/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gifs {

NonnegMatrix MeasureMatrix::total_mass() const {
    NonnegMatrix m(n);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
            for (const auto& atom : entries[u][v]) m.at(u, v) += atom.weight;
    return m;
}

MeasureMatrix build_P(const GraphIFS& g, double q, double beta) {
    MeasureMatrix P;
    P.n = g.vertex_count();
    P.q = q;
    P.beta = beta;
    P.entries.assign(P.n, std::vector<std::vector<MeasureMatrix::Atom>>(P.n));
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const Edge& ed = g.edges[e];
        MeasureMatrix::Atom atom;
        atom.edge = e;
        atom.support_vec = log_vector(Rational(1) / ed.ratio);
        atom.support = atom.support_vec ? atom.support_vec->value()
                                        : -std::log(to_double(ed.ratio));
        atom.weight = std::pow(to_double(ed.prob), q) * std::pow(to_double(ed.ratio), beta);
        P.entries[ed.from][ed.to].push_back(std::move(atom));
    }
    return P;
}

namespace {

// Support sums over closed walks through a vertex, up to the length cap.
// These generate the additive group of the diagonal of the convolution
// closure of the matrix.
void closed_walk_sums(const MeasureMatrix& P, int origin, int vertex, int steps_left,
                      const LogVector& acc, std::vector<LogVector>& out, std::size_t cap) {
    for (int next = 0; next < P.n; ++next) {
        for (const auto& atom : P.entries[vertex][next]) {
            if (!atom.support_vec) continue;
            LogVector sum = acc + *atom.support_vec;
            if (next == origin) {
                if (out.size() >= cap) throw std::runtime_error("lattice walk cap exceeded");
                out.push_back(sum);
            }
            if (steps_left > 1) closed_walk_sums(P, origin, next, steps_left - 1, sum, out, cap);
        }
    }
}

bool all_supports_exact(const MeasureMatrix& P) {
    for (const auto& row : P.entries)
        for (const auto& cell : row)
            for (const auto& atom : cell)
                if (!atom.support_vec) return false;
    return true;
}

// Integer multiple test: v == k * gen for some integer k (v may be zero).
bool is_integer_multiple(const LogVector& v, const LogVector& gen) {
    if (v.is_zero()) return true;
    const auto& [p0, g0] = *gen.exponents.begin();
    auto it = v.exponents.find(p0);
    if (it == v.exponents.end() || it->second % g0 != 0) return false;
    return gen * (it->second / g0) == v;
}

// Best rational approximation p/q to x with q <= qmax (continued fractions).
std::optional<std::pair<long long, long long>> rational_approx(double x, long long qmax,
                                                               double tol) {
    long long p_prev = 1, q_prev = 0, p_cur = 0, q_cur = 1;
    double frac = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(frac);
        if (a > 1e17) break;
        long long ai = static_cast<long long>(a);
        long long p_next = ai * p_cur + p_prev;
        long long q_next = ai * q_cur + q_prev;
        if (q_next > qmax) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        double rem = frac - a;
        if (std::fabs(x - static_cast<double>(p_cur) / q_cur) <= tol) break;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    if (q_cur == 0) return std::nullopt;
    if (std::fabs(x - static_cast<double>(p_cur) / q_cur) > tol) return std::nullopt;
    return std::make_pair(p_cur, q_cur);
}

LatticeClassification classify_numeric(const MeasureMatrix& P) {
    LatticeClassification cls;
    cls.exact = false;
    cls.notes.push_back("unfactorable ratio logs; continued-fraction dependence test at 1e-9");

    std::vector<double> gens;
    for (int u = 0; u < P.n; ++u) {
        std::vector<double> walk;
        // Depth-limited double-valued closed walks.
        struct Frame {
            int vertex;
            int steps;
            double acc;
        };
        std::vector<Frame> stack{{u, 0, 0.0}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            if (f.steps >= 2 * P.n) continue;
            for (int next = 0; next < P.n; ++next)
                for (const auto& atom : P.entries[f.vertex][next]) {
                    double acc = f.acc + atom.support;
                    if (next == u) walk.push_back(acc);
                    stack.push_back({next, f.steps + 1, acc});
                }
        }
        gens.insert(gens.end(), walk.begin(), walk.end());
    }
    for (int u = 0; u < P.n; ++u)
        for (int v = 0; v < P.n; ++v)
            for (std::size_t i = 0; i + 1 < P.entries[u][v].size(); ++i) {
                double d = P.entries[u][v][i + 1].support - P.entries[u][v][i].support;
                if (std::fabs(d) > 1e-12) gens.push_back(std::fabs(d));
            }
    if (gens.empty()) {
        cls.verdict = LatticeVerdict::Undecided;
        return cls;
    }

    double base = gens.front();
    long long lcm_q = 1;
    std::vector<long long> nums;
    for (double gval : gens) {
        auto pq = rational_approx(gval / base, 100000, 1e-9);
        if (!pq) {
            cls.verdict = LatticeVerdict::Undecided;
            cls.notes.push_back("no rational dependence detected between generators");
            return cls;
        }
        nums.push_back(pq->first);
        lcm_q = std::lcm(lcm_q, pq->second);
        if (lcm_q > 1'000'000) {
            cls.verdict = LatticeVerdict::Undecided;
            return cls;
        }
    }
    // Candidate span: base / lcm scaled by the gcd of the numerators.
    long long gcd_n = 0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        auto pq = rational_approx(gens[i] / base, 100000, 1e-9);
        long long scaled = pq->first * (lcm_q / pq->second);
        gcd_n = std::gcd(gcd_n, scaled);
    }
    cls.verdict = LatticeVerdict::Lattice;
    cls.span = base / static_cast<double>(lcm_q) * static_cast<double>(gcd_n);
    cls.notes.push_back("numerical verdict; spans are approximate to 1e-9");
    return cls;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Least-squares slope of y against x.
struct LsqFit {
    double slope = 0, intercept = 0, stderr_slope = 0;
};

LsqFit lsq(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LsqFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double ss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = y[i] - (f.slope * x[i] + f.intercept);
            ss += r * r;
        }
        f.stderr_slope = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
    }
    return f;
}

}  // namespace

LatticeClassification classify_lattice(const MeasureMatrix& P) {
    if (!all_supports_exact(P)) return classify_numeric(P);

    LatticeClassification cls;
    cls.exact = true;

    // Generators: closed-walk support sums (diagonal arithmetic condition)
    // plus within-entry support differences (off-diagonal lattice offsets).
    std::vector<LogVector> gens;
    for (int u = 0; u < P.n; ++u) {
        std::vector<LogVector> walks;
        closed_walk_sums(P, u, u, 2 * P.n, LogVector{}, walks, 2'000'000);
        if (walks.empty()) {
            cls.verdict = LatticeVerdict::Undecided;
            cls.notes.push_back("no closed walk through " + std::to_string(u) + " within cap");
            return cls;
        }
        gens.insert(gens.end(), walks.begin(), walks.end());
    }
    for (int u = 0; u < P.n; ++u)
        for (int v = 0; v < P.n; ++v) {
            const auto& atoms = P.entries[u][v];
            for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
                LogVector d = *atoms[i + 1].support_vec - *atoms[i].support_vec;
                if (!d.is_zero()) gens.push_back(std::move(d));
            }
        }

    SpanResult span = discrete_span(gens);
    if (!span.discrete) {
        cls.verdict = LatticeVerdict::NonLattice;
        return cls;
    }

    // Cocycle condition: every a_uv + a_vw - a_uw lands on the span lattice.
    for (int u = 0; u < P.n; ++u)
        for (int v = 0; v < P.n; ++v)
            for (int w = 0; w < P.n; ++w) {
                if (P.entries[u][v].empty() || P.entries[v][w].empty() ||
                    P.entries[u][w].empty())
                    continue;
                for (const auto& a : P.entries[u][v])
                    for (const auto& b : P.entries[v][w])
                        for (const auto& c : P.entries[u][w]) {
                            LogVector comb = *a.support_vec + *b.support_vec - *c.support_vec;
                            if (!is_integer_multiple(comb, span.generator)) {
                                cls.verdict = LatticeVerdict::NonLattice;
                                cls.notes.push_back("cocycle condition fails");
                                return cls;
                            }
                        }
            }

    cls.verdict = LatticeVerdict::Lattice;
    cls.generator = span.generator;
    cls.span = span.generator.value();

    for (int u = 0; u < P.n; ++u)
        for (int v = 0; v < P.n; ++v) {
            const auto& atoms = P.entries[u][v];
            if (atoms.empty()) continue;
            double lo = atoms.front().support;
            for (const auto& a : atoms) lo = std::min(lo, a.support);
            cls.entry_offsets.push_back(lo);
            if (atoms.size() < 2) {
                cls.entry_spans.push_back(0);
                continue;
            }
            std::vector<LogVector> diffs;
            for (std::size_t i = 0; i + 1 < atoms.size(); ++i) {
                LogVector d = *atoms[i + 1].support_vec - *atoms[i].support_vec;
                if (!d.is_zero()) diffs.push_back(std::move(d));
            }
            if (diffs.empty()) {
                cls.entry_spans.push_back(0);
            } else {
                auto s = discrete_span(diffs);
                cls.entry_spans.push_back(s.discrete ? std::fabs(s.generator.value()) : 0);
            }
        }
    return cls;
}

namespace {

PackingEstimate moment_at(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                          const Rational& r, const HarnessOptions& opts) {
    return packing_moment(g, hulls, u, q, r, opts.packing);
}

}  // namespace

Interval normalized_moment(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                           double t, double beta, const HarnessOptions& opts) {
    if (t < 0) throw std::invalid_argument("normalized_moment: t must be >= 0");
    Rational r = rational_from_double(std::exp(-t));
    auto est = moment_at(g, hulls, u, q, r, opts);
    double scale = std::exp(-t * beta);
    return {detail::dn(scale * est.value_interval.lo), detail::up(scale * est.value_interval.hi)};
}

Interval renewal_defect(const GraphIFS& g, const ComponentHulls& hulls, int u, double q, double t,
                        double beta, const HarnessOptions& opts) {
    if (t < 0) throw std::invalid_argument("renewal_defect: t must be >= 0");
    Rational r = rational_from_double(std::exp(-t));
    auto lhs = moment_at(g, hulls, u, q, r, opts);
    double rhs_lo = 0, rhs_hi = 0;
    for (int e : g.out_edges[u]) {
        const Edge& ed = g.edges[e];
        auto child = moment_at(g, hulls, ed.to, q, r / ed.ratio, opts);
        double w = std::pow(to_double(ed.prob), q);
        rhs_lo += w * child.value_interval.lo;
        rhs_hi += w * child.value_interval.hi;
    }
    double scale = std::exp(-t * beta);
    return {detail::dn(scale * (lhs.value_interval.lo - rhs_hi)),
            detail::up(scale * (lhs.value_interval.hi - rhs_lo))};
}

SpectrumFit lq_spectrum_fit(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                            const std::vector<double>& r_grid, const HarnessOptions& opts) {
    if (r_grid.size() < 5) throw std::invalid_argument("lq_spectrum_fit: at least 5 grid points");
    SpectrumFit fit;
    fit.beta_ref = spectrum_exponent(g, q);
    for (double r : r_grid) {
        auto est = moment_at(g, hulls, u, q, rational_from_double(r), opts);
        if (!(est.value > 0)) throw NumericFailure("lq_spectrum_fit: nonpositive moment estimate");
        fit.minus_log_r.push_back(-std::log(r));
        fit.log_moment.push_back(std::log(est.value));
    }
    auto f = lsq(fit.minus_log_r, fit.log_moment);
    fit.slope = f.slope;
    fit.intercept = f.intercept;
    fit.stderr_slope = f.stderr_slope;
    for (std::size_t i = 0; i < fit.minus_log_r.size(); ++i)
        fit.residuals.push_back(fit.log_moment[i] - (f.slope * fit.minus_log_r[i] + f.intercept));
    return fit;
}

RateCheck convergence_rate_check(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                                 const std::vector<double>& r_grid, const HarnessOptions& opts) {
    if (r_grid.size() < 2)
        throw std::invalid_argument("convergence_rate_check: degenerate grid");
    double beta = spectrum_exponent(g, q);
    RateCheck rc;
    std::vector<double> xs;
    for (double r : r_grid) {
        auto est = moment_at(g, hulls, u, q, rational_from_double(r), opts);
        double x = -std::log(r);
        // (ln M / (-ln r) - beta) * (-ln r) = ln M - beta * (-ln r)
        rc.residual_products.push_back(std::log(est.value) - beta * x);
        xs.push_back(x);
    }
    std::vector<double> abs_vals;
    for (double v : rc.residual_products) abs_vals.push_back(std::fabs(v));
    rc.max_abs = *std::max_element(abs_vals.begin(), abs_vals.end());
    rc.median_abs = median_of(abs_vals);
    rc.trend_slope = lsq(xs, rc.residual_products).slope;
    return rc;
}

PeriodicityCheck lattice_periodicity_check(const GraphIFS& g, const ComponentHulls& hulls, int u,
                                           double q, const LatticeClassification& cls, double t0,
                                           int n_from, int n_to, const HarnessOptions& opts) {
    if (cls.verdict != LatticeVerdict::Lattice)
        throw std::invalid_argument("lattice_periodicity_check: system is not lattice");
    double tmin = 0;
    for (const auto& e : g.edges) tmin = std::max(tmin, -std::log(to_double(e.ratio)));
    if (t0 < tmin)
        throw std::invalid_argument("lattice_periodicity_check: t0 below max ln(1/r_e)");
    double beta = spectrum_exponent(g, q);
    PeriodicityCheck pc;
    for (int n = n_from; n <= n_to; ++n) {
        Interval H = normalized_moment(g, hulls, u, q, t0 + n * cls.span, beta, opts);
        pc.values.push_back(H.mid());
    }
    std::size_t from = pc.values.size() / 2;
    double mn = pc.values[from], mx = pc.values[from], mean = 0;
    std::size_t cnt = 0;
    for (std::size_t i = from; i < pc.values.size(); ++i) {
        mn = std::min(mn, pc.values[i]);
        mx = std::max(mx, pc.values[i]);
        mean += pc.values[i];
        ++cnt;
    }
    mean /= static_cast<double>(cnt);
    pc.tail_fluctuation = mean > 0 ? (mx - mn) / mean : std::numeric_limits<double>::infinity();
    return pc;
}

BoundednessCheck theorem2_check(const GraphIFS& g, const ComponentHulls& hulls, int u, int edge_e,
                                int edge_f, double q, const std::vector<double>& r_grid,
                                const SystemConstants& constants, const HarnessOptions& opts) {
    BoundednessCheck bc;
    bc.gamma = overlap_exponent(g, q, constants.l, constants.ell_paths);
    for (double r : r_grid) {
        Rational rr = rational_from_double(r);
        if (!(rr < constants.delta_exact))
            throw std::invalid_argument("theorem2_check: r outside (0, delta)");
        auto est = overlap_moment(g, hulls, u, edge_e, edge_f, q, rr, opts.packing);
        bc.r_values.push_back(r);
        bc.estimate_intervals.push_back(est.value_interval);
        bc.scaled.push_back(std::pow(r, bc.gamma) * est.value);
    }
    std::vector<double> positive;
    std::vector<double> xs;
    for (std::size_t i = 0; i < bc.scaled.size(); ++i)
        if (bc.scaled[i] > 0) {
            positive.push_back(bc.scaled[i]);
            xs.push_back(-std::log(bc.r_values[i]));
        }
    if (positive.empty()) {
        bc.max_over_median = 0;
        bc.trend_slope = 0;
        bc.pass = true;  // identically zero overlaps are trivially bounded
        return bc;
    }
    double mx = *std::max_element(positive.begin(), positive.end());
    double med = median_of(positive);
    bc.max_over_median = med > 0 ? mx / med : std::numeric_limits<double>::infinity();
    if (positive.size() >= 2) {
        std::vector<double> logs;
        for (double v : positive) logs.push_back(std::log(v));
        bc.trend_slope = lsq(xs, logs).slope;
    }
    bc.pass = bc.max_over_median <= 10.0 && bc.trend_slope <= 0.05;
    return bc;
}

namespace {

// DFS with window pruning: r_path only shrinks along extensions, and a path
// containing a designated subpath keeps containing it.
void window_paths(const GraphIFS& g, int vertex, const Rational& lo, const Rational& hi, double q,
                  const std::vector<Path>& avoid, std::vector<int>& stack, Rational r_acc,
                  double p_acc, PathSums& out, std::uint64_t& visited, std::uint64_t cap) {
    if (++visited > cap) throw PathCapExceeded("avoiding_path_sums cap exceeded");
    for (int e : g.out_edges[vertex]) {
        Rational r_next = r_acc * g.edges[e].ratio;
        if (r_next < lo) continue;
        stack.push_back(e);
        bool blocked = false;
        for (const auto& ell : avoid) {
            if (stack.size() < ell.edges.size()) continue;
            if (std::equal(ell.edges.begin(), ell.edges.end(),
                           stack.end() - static_cast<std::ptrdiff_t>(ell.edges.size())))
                blocked = true;
        }
        if (!blocked) {
            double p_next = p_acc * std::pow(to_double(g.edges[e].prob), q);
            if (r_next < hi) {
                out.g_sum += p_next;
                ++out.count;
            }
            window_paths(g, g.edges[e].to, lo, hi, q, avoid, stack, r_next, p_next, out, visited,
                         cap);
        }
        stack.pop_back();
    }
}

}  // namespace

PathSums avoiding_path_sums(const GraphIFS& g, int w, double q, const Rational& r, double gamma,
                            const SystemConstants& constants, std::uint64_t cap) {
    if (!(r > 0)) throw std::invalid_argument("avoiding_path_sums: r must be > 0");
    PathSums out;
    Rational lo = constants.alpha_exact * r;
    Rational hi = constants.beta_scale_exact * r;
    std::vector<int> stack;
    std::uint64_t visited = 0;
    window_paths(g, w, lo, hi, q, constants.ell_paths, stack, Rational(1), 1.0, out, visited, cap);
    out.scaled = std::pow(to_double(r), gamma) * out.g_sum;
    return out;
}

DefectBoundCheck osc_defect_bound(const GraphIFS& g, const ComponentHulls& hulls, int u, double q,
                                  double t, double beta, const HarnessOptions& opts) {
    DefectBoundCheck dc;
    dc.defect = renewal_defect(g, hulls, u, q, t, beta, opts);
    Rational r = rational_from_double(std::exp(-t));
    double sum_hi = 0;
    for (int e : g.out_edges[u])
        for (int f : g.out_edges[u]) {
            if (e == f) continue;
            auto est = overlap_moment(g, hulls, u, e, f, q, r, opts.packing);
            sum_hi += est.value_interval.hi;
        }
    dc.bound = std::exp(-t * beta) * sum_hi;
    double defect_abs_lo = 0;
    if (dc.defect.lo > 0) defect_abs_lo = dc.defect.lo;
    if (dc.defect.hi < 0) defect_abs_lo = -dc.defect.hi;
    dc.consistent = defect_abs_lo <= dc.bound * (1 + 1e-9) + 1e-12;
    return dc;
}

}  // namespace gifs
