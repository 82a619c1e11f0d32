#include "jacobi/eigenspec.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <sstream>

#include "jacobi/errors.hpp"
#include "jacobi/io.hpp"

namespace jacobi {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_tridiagonal(const TruncatedJacobi& t) {
    if (t.diag.empty()) throw InvalidInput("truncated Jacobi matrix is empty");
    if (t.offdiag.size() + 1 != t.diag.size())
        throw InvalidInput("off-diagonal must have N - 1 entries");
    for (double v : t.offdiag)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("off-diagonal entries must be positive");
    for (double v : t.diag)
        if (!std::isfinite(v)) throw InvalidInput("diagonal entries must be finite");
}

// Implicit QL with Wilkinson-type shift on a copy of the matrix.
std::vector<double> ql_eigenvalues(const TruncatedJacobi& t) {
    const std::size_t n = t.size();
    std::vector<double> d = t.diag;
    std::vector<double> e(n, 0.0);
    std::copy(t.offdiag.begin(), t.offdiag.end(), e.begin());

    for (std::size_t l = 0; l < n; ++l) {
        int sweeps = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd || std::abs(e[m]) < std::numeric_limits<double>::min()) break;
            }
            if (m == l) break;
            if (++sweeps > kMaxSweepsPerEigenvalue)
                throw NumericalFailure("QL iteration did not converge for eigenvalue " + std::to_string(l) +
                                       " of a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

// Solves (T - shift I) y = rhs in place by Gaussian elimination with
// partial pivoting; zero pivots are replaced by a tiny perturbation.
class ShiftedSolver {
public:
    ShiftedSolver(const TruncatedJacobi& t, double shift, double perturb) : n_(t.size()) {
        d_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) d_[i] = t.diag[i] - shift;
        du_ = t.offdiag;
        dl_ = t.offdiag;
        du2_.assign(n_ > 2 ? n_ - 2 : 0, 0.0);
        swapped_.assign(n_ > 1 ? n_ - 1 : 0, false);
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] == 0.0) d_[i] = perturb;
                const double fact = dl_[i] / d_[i];
                dl_[i] = fact;
                d_[i + 1] -= fact * du_[i];
            } else {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double tmp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = tmp - fact * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                swapped_[i] = true;
            }
        }
        if (d_[n_ - 1] == 0.0) d_[n_ - 1] = perturb;
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i + 1 < n_; ++i) {
            if (swapped_[i]) {
                const double tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - dl_[i] * b[i];
            } else {
                b[i + 1] -= dl_[i] * b[i];
            }
        }
        b[n_ - 1] /= d_[n_ - 1];
        if (n_ > 1) b[n_ - 2] = (b[n_ - 2] - du_[n_ - 2] * b[n_ - 1]) / d_[n_ - 2];
        for (std::size_t i = n_ >= 2 ? n_ - 2 : 0; i-- > 0;)
            b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }

private:
    std::size_t n_;
    std::vector<double> d_, du_, dl_, du2_;
    std::vector<bool> swapped_;
};

void normalize(std::vector<double>& v) {
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale)) throw NumericalFailure("inverse iteration produced a degenerate vector");
    double ss = 0.0;
    for (double& x : v) {
        x /= scale;
        ss += x * x;
    }
    const double inv = 1.0 / std::sqrt(ss);
    for (double& x : v) x *= inv;
}

// First eigenvector component squared, by inverse iteration from a fixed
// start vector: one solve plus at least one refinement, more while the
// first component is still moving (cap 5 solves).
double first_component_weight(const TruncatedJacobi& t, double lambda, double norm) {
    const std::size_t n = t.size();
    const ShiftedSolver solver(t, lambda, kEps * std::max(norm, std::numeric_limits<double>::min()));
    std::vector<double> v(n);
    // Deterministic, not aligned with any structured eigenvector.
    std::uint64_t state = 0x9E3779B97F4A7C15ull;
    for (auto& x : v) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        x = 0.5 + static_cast<double>(state >> 11) * 0x1.0p-53;
    }
    double w = std::numeric_limits<double>::quiet_NaN();
    for (int it = 0; it < 5; ++it) {
        solver.solve(v);
        normalize(v);
        const double w_new = v[0] * v[0];
        if (it >= 1 && std::abs(w_new - w) <= 1e-14 * w_new) return w_new;
        w = w_new;
    }
    return w;
}

std::vector<double> eigenvalues_only(const CoefficientSequence& c, std::size_t n) {
    const TruncatedJacobi t = truncate(c, n);
    check_tridiagonal(t);
    return ql_eigenvalues(t);
}

std::size_t count_within(const std::vector<double>& sorted, double centre, double radius) {
    const auto lo = std::lower_bound(sorted.begin(), sorted.end(), centre - radius);
    const auto hi = std::upper_bound(sorted.begin(), sorted.end(), centre + radius);
    return static_cast<std::size_t>(hi - lo);
}

}  // namespace

Eigensystem eigen_tridiag(const TruncatedJacobi& t) {
    check_tridiagonal(t);
    Eigensystem es;
    es.eigenvalues = ql_eigenvalues(t);
    const std::size_t n = t.size();
    if (n == 1) {
        es.weights = {1.0};
        return es;
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(t.diag[i]);
        if (i > 0) row += t.offdiag[i - 1];
        if (i + 1 < n) row += t.offdiag[i];
        norm = std::max(norm, row);
    }
    es.weights.resize(n);
    for (std::size_t j = 0; j < n; ++j) es.weights[j] = first_component_weight(t, es.eigenvalues[j], norm);
    return es;
}

SpectrumReport spectrum_sweep(const CoefficientSequence& c, std::vector<std::size_t> sizes, double tol) {
    if (sizes.size() < 2) throw InvalidInput("spectrum_sweep needs at least two sizes");
    if (!(tol > 0.0)) throw InvalidInput("tol must be > 0");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw InvalidInput("truncation sizes must be >= 1");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw InvalidInput("truncation sizes must be strictly increasing");
    }

    std::vector<std::future<Eigensystem>> jobs;
    jobs.reserve(sizes.size());
    for (std::size_t n : sizes)
        jobs.push_back(std::async(std::launch::async, [&c, n] { return eigen_tridiag(truncate(c, n)); }));

    SpectrumReport rep;
    rep.sizes = sizes;
    rep.tol = tol;
    for (auto& j : jobs) {
        Eigensystem es = j.get();
        rep.eigenvalues.push_back(std::move(es.eigenvalues));
        rep.weights.push_back(std::move(es.weights));
    }

    if (const auto& lim = c.declared_limits())
        rep.essential_interval = std::make_pair(lim->b - 2.0 * lim->a, lim->b + 2.0 * lim->a);
    const bool wide_essential = rep.essential_interval && rep.essential_interval->second > rep.essential_interval->first;
    auto inside_essential = [&](double x) {
        return wide_essential && x >= rep.essential_interval->first && x <= rep.essential_interval->second;
    };

    const auto& big = rep.eigenvalues.back();
    const auto& big_w = rep.weights.back();
    const auto& mid = rep.eigenvalues[rep.eigenvalues.size() - 2];
    const auto& mid_w = rep.weights[rep.weights.size() - 2];

    const double eps = 10.0 * tol;
    std::vector<double> loose;
    for (std::size_t i = 0; i < big.size(); ++i) {
        const double x = big[i];
        if (inside_essential(x)) continue;
        auto it = std::lower_bound(mid.begin(), mid.end(), x);
        std::size_t best = mid.size();
        double dx = std::numeric_limits<double>::infinity();
        if (it != mid.end()) {
            best = static_cast<std::size_t>(it - mid.begin());
            dx = *it - x;
        }
        if (it != mid.begin() && x - *(it - 1) < dx) {
            best = static_cast<std::size_t>(it - mid.begin()) - 1;
            dx = x - *(it - 1);
        }
        // A converged point must also stand apart from its neighbours;
        // eigenvalues packed closer than eps belong to a cluster.
        const bool isolated = (i == 0 || x - big[i - 1] > eps) && (i + 1 == big.size() || big[i + 1] - x > eps);
        if (isolated && best < mid.size() && dx <= tol && std::abs(big_w[i] - mid_w[best]) <= tol) {
            rep.converged_points.push_back({x, big_w[i], dx});
        } else {
            loose.push_back(x);
        }
    }

    // Single-linkage clusters of the non-persistent eigenvalues.
    struct Candidate {
        double centre;
        std::size_t members;
    };
    std::vector<Candidate> candidates;
    for (std::size_t start = 0; start < loose.size();) {
        std::size_t end = start + 1;
        while (end < loose.size() && loose[end] - loose[end - 1] <= eps) ++end;
        double centre = loose[start];
        double smallest_gap = std::numeric_limits<double>::infinity();
        for (std::size_t k = start + 1; k < end; ++k) {
            const double gap = loose[k] - loose[k - 1];
            if (gap < smallest_gap) {
                smallest_gap = gap;
                centre = 0.5 * (loose[k] + loose[k - 1]);
            }
        }
        if (count_within(big, centre, eps) > count_within(mid, centre, eps))
            candidates.push_back({centre, end - start});
        start = end;
    }

    const double diameter = big.empty() ? 0.0 : big.back() - big.front();
    const double merge_radius = std::max(eps, 0.01 * diameter);
    for (std::size_t start = 0; start < candidates.size();) {
        std::size_t end = start + 1;
        while (end < candidates.size() && candidates[end].centre - candidates[end - 1].centre <= merge_radius) ++end;
        double weighted = 0.0, total = 0.0;
        for (std::size_t k = start; k < end; ++k) {
            weighted += candidates[k].centre * static_cast<double>(candidates[k].members);
            total += static_cast<double>(candidates[k].members);
        }
        rep.accumulation_estimates.push_back(weighted / total);
        start = end;
    }
    return rep;
}

bool interlaces(const std::vector<double>& smaller, const std::vector<double>& larger, double tol) {
    if (larger.size() != smaller.size() + 1) return false;
    for (std::size_t k = 0; k < smaller.size(); ++k) {
        if (!(larger[k] < smaller[k] + tol)) return false;
        if (!(smaller[k] < larger[k + 1] + tol)) return false;
    }
    return true;
}

KreinPolynomial::KreinPolynomial(std::vector<double> roots) : roots_(std::move(roots)) {
    if (roots_.empty()) throw InvalidInput("Krein polynomial needs at least one root");
    for (double r : roots_)
        if (!std::isfinite(r)) throw InvalidInput("Krein polynomial roots must be finite");
    std::vector<double> sorted = roots_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InvalidInput("Krein polynomial roots must be distinct");
}

double KreinPolynomial::operator()(double x) const {
    double v = 1.0;
    for (double r : roots_) v *= x - r;
    return v;
}

KreinDecay krein_gj_decay(const CoefficientSequence& c, const KreinPolynomial& g, std::size_t depth, double tol) {
    const std::size_t m = g.degree();
    if (depth < m || depth == 0)
        throw InvalidInput("depth " + std::to_string(depth) + " is smaller than the degree " + std::to_string(m));
    if (!(tol > 0.0)) throw InvalidInput("tol must be > 0");

    // Window of depth + m rows keeps rows 0..depth-1 of g(J) exact.
    const std::size_t w = depth + m;
    std::vector<double> b(w), a(w + 1, 0.0);  // a[j] = J_{j-1, j}
    for (std::size_t j = 0; j < w; ++j) b[j] = c.diag(j);
    for (std::size_t j = 1; j < w; ++j) a[j] = c.offdiag(j);

    const std::size_t width = 2 * m + 1;
    auto at = [&](std::vector<double>& band, std::size_t i, long k) -> double& {
        return band[i * width + static_cast<std::size_t>(k + static_cast<long>(m))];
    };
    std::vector<double> cur(w * width, 0.0), next(w * width, 0.0);
    for (std::size_t i = 0; i < w; ++i) at(cur, i, 0) = 1.0;

    long h = 0;  // current half-bandwidth
    for (double root : g.roots()) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < w; ++i) {
            for (long k = -(h + 1); k <= h + 1; ++k) {
                const long jl = static_cast<long>(i) + k;
                if (jl < 0 || jl >= static_cast<long>(w)) continue;
                const std::size_t j = static_cast<std::size_t>(jl);
                double v = 0.0;
                if (k - 1 >= -h && j >= 1) v += at(cur, i, k - 1) * a[j];
                if (k >= -h && k <= h) v += at(cur, i, k) * (b[j] - root);
                if (k + 1 <= h && j + 1 < w) v += at(cur, i, k + 1) * a[j + 1];
                at(next, i, k) = v;
            }
        }
        std::swap(cur, next);
        ++h;
    }

    KreinDecay out;
    out.degree = m;
    out.depth = depth;
    out.tol = tol;
    out.compact_consistent = true;
    for (long k = -static_cast<long>(m); k <= static_cast<long>(m); ++k) {
        BandProfile prof;
        prof.offset = static_cast<int>(k);
        prof.tail_max.assign(depth, 0.0);
        double running = 0.0;
        for (std::size_t i = depth; i-- > 0;) {
            const long j = static_cast<long>(i) + k;
            if (j >= 0) running = std::max(running, std::abs(at(cur, i, k)));
            prof.tail_max[i] = running;
        }
        for (std::size_t i = 0; i < depth; ++i) {
            if (prof.tail_max[i] < tol) {
                prof.settled_at = i;
                break;
            }
        }
        if (!prof.settled_at) out.compact_consistent = false;
        out.bands.push_back(std::move(prof));
    }
    return out;
}

GapReport zero_gap_density(const CoefficientSequence& c, std::size_t n, double lo, double hi) {
    if (!(lo < hi)) throw InvalidInput("inner interval must satisfy lo < hi");
    if (const auto& lim = c.declared_limits()) {
        const double elo = lim->b - 2.0 * lim->a, ehi = lim->b + 2.0 * lim->a;
        if (!(lo > elo && hi < ehi))
            throw InvalidInput("inner interval must lie strictly inside the essential interval");
    }
    const std::vector<double> eig = eigenvalues_only(c, n);
    GapReport r;
    r.n = n;
    r.lo = lo;
    r.hi = hi;
    std::vector<double> inside;
    std::copy_if(eig.begin(), eig.end(), std::back_inserter(inside), [&](double x) { return x >= lo && x <= hi; });
    r.count = inside.size();
    if (inside.size() < 3)
        throw InsufficientResolution("only " + std::to_string(inside.size()) + " eigenvalues of the " +
                                     std::to_string(n) + "-truncation lie in the interval; increase N");
    r.max_gap = std::max(inside.front() - lo, hi - inside.back());
    for (std::size_t k = 1; k < inside.size(); ++k) r.max_gap = std::max(r.max_gap, inside[k] - inside[k - 1]);
    return r;
}

std::string eigen_table_csv(const SpectrumReport& report) {
    std::ostringstream os;
    os << "size,index,eigenvalue,weight\n";
    for (std::size_t s = 0; s < report.sizes.size(); ++s) {
        for (std::size_t i = 0; i < report.eigenvalues[s].size(); ++i) {
            os << report.sizes[s] << ',' << i << ',' << format_number(report.eigenvalues[s][i]) << ','
               << format_number(report.weights[s][i]) << '\n';
        }
    }
    return os.str();
}

}  // namespace jacobi
