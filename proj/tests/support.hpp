#pragma once

// Shared fixtures for the test binaries: seeded generators and a few
// hand-built sequences.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "jacobi/coeffs.hpp"

namespace jacobi::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    // (0, 1]
    double unit_open_left() { return 1.0 - uniform(0.0, 1.0); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }

private:
    std::mt19937_64 engine_;
};

// b_n = (-1)^n, a_n = 1/(n+1): two accumulation points, +-1.
inline CoefficientSequence alternating_two_point() {
    return CoefficientSequence([](std::size_t n) { return n % 2 == 0 ? 1.0 : -1.0; },
                               [](std::size_t n) { return 1.0 / (static_cast<double>(n) + 1.0); });
}

// a_n = 1/2 + 1/(n+1), b_n = 1/(n+2); essential spectrum [-1, 1].
inline CoefficientSequence perturbed_chebyshev(bool declare_limits = true) {
    return CoefficientSequence([](std::size_t n) { return 1.0 / (static_cast<double>(n) + 2.0); },
                               [](std::size_t n) { return 0.5 + 1.0 / (static_cast<double>(n) + 1.0); },
                               declare_limits ? std::optional<Limits>(Limits{0.5, 0.0}) : std::nullopt);
}

// Random compact sequence: a_n = U(0.2, 1)/(n+1), b_n = U(-1, 1)/(n+1),
// tabulated up to `length` entries.
inline CoefficientSequence random_compact(Rng& rng, std::size_t length) {
    std::vector<double> diag(length), off(length);
    for (std::size_t n = 0; n < length; ++n) {
        diag[n] = rng.uniform(-1.0, 1.0) / (static_cast<double>(n) + 1.0);
        off[n] = rng.uniform(0.2, 1.0) / (static_cast<double>(n) + 2.0);
    }
    return CoefficientSequence::from_table(diag, off);
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace jacobi::testing
