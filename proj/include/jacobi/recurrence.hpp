#pragma once

// Three-term recurrence evaluation: orthonormal polynomials p_n, the
// numerator (second-kind) solution, ratio asymptotics and Christoffel sums.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "jacobi/coeffs.hpp"

namespace jacobi {

// Values of p_0..p_N and of the second solution u_0..u_N (u_0 = 0, u_1 = 1)
// at a point x. Stored values are the true values times exp(-scale_log).
template <typename T>
struct PolynomialTrace {
    T x{};
    std::vector<T> values;
    std::vector<T> numerators;
    double scale_log = 0.0;
};

// Rescale threshold for carried recurrence values.
inline constexpr double kRescaleThreshold = 1e150;

template <typename T>
PolynomialTrace<T> eval_polys(const CoefficientSequence& c, T x, std::size_t n);

extern template PolynomialTrace<double> eval_polys(const CoefficientSequence&, double, std::size_t);
extern template PolynomialTrace<Complex> eval_polys(const CoefficientSequence&, Complex, std::size_t);

// CSV rows (k, p_k, numerator_k, scale_log) with a header line.
std::string trace_to_csv(const PolynomialTrace<double>& trace);

enum class RootRegime {
    distinct,       // |xi1| > |xi2|: Poincare applies
    equal_modulus,  // x inside (b - a, b + a)
    boundary,       // x = b +- a: double root
};

std::string_view to_string(RootRegime r);

struct PoincareRoots {
    Complex xi1;  // larger modulus
    Complex xi2;
    RootRegime regime = RootRegime::distinct;
};

// Roots of 2 x xi = a xi^2 + 2 b xi + a for the M(a, b) comparison recurrence.
PoincareRoots poincare_roots(double a, double b, Complex x);

template <typename T>
struct RatioReport {
    // ratios[k] = p_{k+1}(x) / p_k(x) for k = 0..N-1; NaN where p_k(x) == 0.
    std::vector<T> ratios;
    std::vector<bool> defined;
    std::optional<PoincareRoots> roots;  // from declared limits
    bool converged = false;
    std::optional<std::size_t> converged_at;  // first k of the stable run
    T limit{};                                // last defined ratio
    double residual = 0.0;                    // |limit - xi1| when roots known, else NaN
};

inline constexpr std::size_t kDefaultStableRun = 5;

// Convergence is flagged when |r_k - r_{k-1}| < tol for `stable_run`
// consecutive k, and never for equal-modulus or boundary points.
template <typename T>
RatioReport<T> ratio_sequence(const CoefficientSequence& c, T x, std::size_t n, double tol = 1e-12,
                              std::size_t stable_run = kDefaultStableRun);

extern template RatioReport<double> ratio_sequence(const CoefficientSequence&, double, std::size_t, double,
                                                   std::size_t);
extern template RatioReport<Complex> ratio_sequence(const CoefficientSequence&, Complex, std::size_t, double,
                                                    std::size_t);

struct ChristoffelSums {
    double x = 0.0;
    // log_sums[k] = log(sum_{j<=k} p_j(x)^2), k = 0..N
    std::vector<double> log_sums;

    double sum(std::size_t k) const;   // may overflow to +inf
    double mass(std::size_t k) const;  // 1 / S_k, may underflow to 0
};

ChristoffelSums christoffel_mass(const CoefficientSequence& c, double x, std::size_t n);

}  // namespace jacobi
