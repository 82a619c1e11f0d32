#pragma once

// Spectra of finite sections of Jacobi operators.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jacobi/coeffs.hpp"

namespace jacobi {

struct Eigensystem {
    std::vector<double> eigenvalues;  // ascending
    std::vector<double> weights;      // squared first eigenvector components
};

// QL sweeps allowed per eigenvalue before NumericalFailure is thrown.
inline constexpr int kMaxSweepsPerEigenvalue = 50;

// Implicit-shift QL for the eigenvalues, inverse iteration for the first
// eigenvector components.
Eigensystem eigen_tridiag(const TruncatedJacobi& t);

struct ConvergedPoint {
    double value = 0.0;
    double weight = 0.0;
    double residual = 0.0;  // |x_N - x_M| across the two largest sizes
};

struct SpectrumReport {
    std::vector<std::size_t> sizes;
    std::vector<std::vector<double>> eigenvalues;
    std::vector<std::vector<double>> weights;
    double tol = 0.0;
    std::vector<ConvergedPoint> converged_points;  // ascending by value
    std::vector<double> accumulation_estimates;    // ascending
    std::optional<std::pair<double, double>> essential_interval;
};

// Eigenvalue/weight pairs of the largest size that reappear in the
// second-largest size within tol, and have no neighbour within 10 tol, are
// converged points (excluding anything inside a declared essential interval
// of positive width). The remaining
// eigenvalues are clustered by single linkage at distance 10 tol; a cluster
// yields an accumulation estimate at its densest gap when the count of
// eigenvalues within 10 tol of that point grows with the size. Estimates
// closer than 1% of the spectral diameter are merged (count-weighted).
SpectrumReport spectrum_sweep(const CoefficientSequence& c, std::vector<std::size_t> sizes, double tol);

// Strict interlacing of the eigenvalues of consecutive truncations,
// x_k^{(N+1)} < x_k^{(N)} < x_{k+1}^{(N+1)}, with slack tol on each side.
bool interlaces(const std::vector<double>& smaller, const std::vector<double>& larger, double tol);

// g(x) = (x - x_1)...(x - x_m), distinct real roots.
class KreinPolynomial {
public:
    explicit KreinPolynomial(std::vector<double> roots);

    const std::vector<double>& roots() const { return roots_; }
    std::size_t degree() const { return roots_.size(); }
    double operator()(double x) const;

private:
    std::vector<double> roots_;
};

struct BandProfile {
    int offset = 0;  // k in [-m, m]: entries g(J)_{i, i+k}
    // tail_max[i] = max over rows r in [i, depth) of |g(J)_{r, r+k}|
    std::vector<double> tail_max;
    std::optional<std::size_t> settled_at;  // first row with tail_max < tol
};

struct KreinDecay {
    std::size_t degree = 0;
    std::size_t depth = 0;
    double tol = 0.0;
    std::vector<BandProfile> bands;  // offsets -m..m
    bool compact_consistent = false;
};

// Exact band entries of g(J) for rows 0..depth-1.
KreinDecay krein_gj_decay(const CoefficientSequence& c, const KreinPolynomial& g, std::size_t depth,
                          double tol = 1e-3);

struct GapReport {
    std::size_t n = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 0;  // eigenvalues inside [lo, hi]
    double max_gap = 0.0;   // includes the gaps to lo and hi
};

// Largest empty stretch of [lo, hi] between truncation-N eigenvalues.
// Throws InsufficientResolution when fewer than three eigenvalues fall
// inside the interval.
GapReport zero_gap_density(const CoefficientSequence& c, std::size_t n, double lo, double hi);

// CSV rows (size, index, eigenvalue, weight).
std::string eigen_table_csv(const SpectrumReport& report);

}  // namespace jacobi
