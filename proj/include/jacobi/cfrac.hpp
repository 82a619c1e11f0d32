#pragma once

// Convergents of S-fractions and J-fractions by forward (Wallis) recurrences.
// Numerator and denominator are tracked separately with a shared power-of-two
// exponent so separate convergence of the two parts can be observed.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jacobi/coeffs.hpp"

namespace jacobi {

enum class ConvergentStatus { ok, pole };

std::string_view to_string(ConvergentStatus s);

struct ConvergentValue {
    std::size_t order = 0;
    Complex value{};
    Complex numerator{};    // true numerator = numerator * 2^exponent
    Complex denominator{};  // true denominator = denominator * 2^exponent
    long exponent = 0;
    ConvergentStatus status = ConvergentStatus::ok;

    Complex true_numerator() const;
    Complex true_denominator() const;
};

// |denominator| below this (after rescaling) is reported as a pole.
inline constexpr double kPoleThreshold = 1e-300;

// n-th convergent of b_0 / (1 + b_1 t / (1 + ... + b_{n-1} t)).
ConvergentValue s_convergent(const SFraction& s, Complex t, std::size_t n);
// Orders 1..n in one pass.
std::vector<ConvergentValue> s_convergents(const SFraction& s, Complex t, std::size_t n);

// n-th convergent of lambda_0 / (z + a_1 - lambda_1 / (z + a_2 - ... (z + a_n))).
ConvergentValue j_convergent(const JFraction& j, Complex z, std::size_t n);
std::vector<ConvergentValue> j_convergents(const JFraction& j, Complex z, std::size_t n);

struct ContractionCheck {
    double residual = 0.0;  // relative
    ConvergentStatus status = ConvergentStatus::ok;
    Complex s_value{};  // S_{2n}(1/z)
    Complex j_value{};  // J_n(z)
};

// Compares the 2n-th S-convergent at t = 1/z with z J_n(z), where J is the
// even contraction of s.
ContractionCheck check_contraction(const SFraction& s, Complex z, std::size_t n);

enum class LimitStatus { converged, undetermined, pole };

std::string_view to_string(LimitStatus s);

struct LimitEstimate {
    LimitStatus status = LimitStatus::undetermined;
    Complex value{};  // last convergent computed
    std::size_t order = 0;
};

inline constexpr std::size_t kDefaultConvergenceWindow = 5;

using FractionRef = std::variant<SFraction, JFraction>;

inline constexpr double kPoleProbeShift = 1e-12;

// Converged when |C_{n+1} - C_n| < tol for `window` consecutive n before max_n.
// A converged value is reported as a pole when re-evaluation at
// point + kPoleProbeShift * max(1, |point|) changes it by more than 1%.
LimitEstimate estimate_limit(const FractionRef& fraction, Complex point, double tol, std::size_t max_n,
                             std::size_t window = kDefaultConvergenceWindow);

struct GridPoint {
    Complex point{};
    LimitEstimate estimate;
};

// CSV rows (re(point), im(point), order, re(value), im(value), status).
std::string grid_to_csv(const std::vector<GridPoint>& rows);

}  // namespace jacobi
