// Randomized invariants. Every generator is seeded so failures reproduce.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jacobi/cfrac.hpp"
#include "jacobi/coeffs.hpp"
#include "jacobi/eigenspec.hpp"
#include "jacobi/families.hpp"
#include "jacobi/recurrence.hpp"
#include "support.hpp"

using namespace jacobi;
using testing::Rng;

namespace {

// Table with a_n -> a, b_n -> b plus decaying random noise.
CoefficientSequence random_mab(Rng& rng, double a, double b, std::size_t length) {
    std::vector<double> diag(length), off(length);
    for (std::size_t n = 0; n < length; ++n) {
        diag[n] = b + rng.uniform(-1.0, 1.0) / (n + 1.0);
        off[n] = a + rng.uniform(0.0, 1.0) / (n + 2.0);
    }
    return CoefficientSequence::from_table(diag, off, Limits{a, b});
}

SFraction random_sfraction(Rng& rng, std::size_t length) {
    std::vector<double> b(length);
    for (auto& v : b) v = rng.unit_open_left();
    return SFraction::positive_table(b);
}

}  // namespace

TEST_CASE("truncations interlace") {
    Rng rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const auto c = trial % 2 ? testing::random_compact(rng, 80) : random_mab(rng, rng.uniform(0.1, 2.0), rng.uniform(-1.0, 1.0), 80);
        const std::size_t n = rng.index(2, 60);
        const auto small = eigen_tridiag(truncate(c, n)).eigenvalues;
        const auto big = eigen_tridiag(truncate(c, n + 1)).eigenvalues;
        CHECK(interlaces(small, big, 1e-12));
    }
}

TEST_CASE("weights are positive and sum to one; eigenvalues strictly increase") {
    Rng rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        const auto c = random_mab(rng, rng.uniform(0.05, 1.0), rng.uniform(-2.0, 2.0), 200);
        const auto es = eigen_tridiag(truncate(c, rng.index(1, 150)));
        CHECK(std::abs(std::accumulate(es.weights.begin(), es.weights.end(), 0.0) - 1.0) < 1e-12);
        CHECK(std::all_of(es.weights.begin(), es.weights.end(), [](double w) { return w > 0.0; }));
        CHECK(std::adjacent_find(es.eigenvalues.begin(), es.eigenvalues.end(), std::greater_equal<>()) ==
              es.eigenvalues.end());
    }
}

TEST_CASE("diagonal shift moves eigenvalues and keeps weights") {
    Rng rng(303);
    for (int trial = 0; trial < 20; ++trial) {
        auto t = truncate(testing::random_compact(rng, 40), 30);
        const double shift = rng.uniform(-5.0, 5.0);
        const auto base = eigen_tridiag(t);
        for (auto& d : t.diag) d += shift;
        const auto moved = eigen_tridiag(t);
        for (std::size_t k = 0; k < 30; ++k) {
            CHECK(std::abs(moved.eigenvalues[k] - base.eigenvalues[k] - shift) < 1e-12 * (1.0 + std::abs(shift)));
            CHECK(std::abs(moved.weights[k] - base.weights[k]) < 1e-10);
        }
    }
}

TEST_CASE("truncate(N) is a prefix of truncate(M)") {
    Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = testing::random_compact(rng, 100);
        const std::size_t n = rng.index(1, 50), m = n + rng.index(0, 40);
        const auto tn = truncate(c, n), tm = truncate(c, m);
        CHECK(std::equal(tn.diag.begin(), tn.diag.end(), tm.diag.begin()));
        CHECK(std::equal(tn.offdiag.begin(), tn.offdiag.end(), tm.offdiag.begin()));
    }
}

TEST_CASE("contraction identity on random S-fractions") {
    Rng rng(505);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_sfraction(rng, 40);
        const std::size_t n = rng.index(1, 15);
        for (const Complex z : {Complex(2.0, 0.0), Complex(3.0, 1.0)}) {
            const auto r = check_contraction(s, z, n);
            CHECK(r.status == ConvergentStatus::ok);
            CHECK(r.residual <= 1e-10);
        }
    }
}

TEST_CASE("classify recovers M(a, b) for constant-tail sequences") {
    Rng rng(606);
    for (int trial = 0; trial < 30; ++trial) {
        const double a = rng.uniform(0.1, 3.0), b = rng.uniform(-2.0, 2.0);
        const auto r = classify(make_family(family_spec("chebyshev", {{"a", a}, {"b", b}})), {100, 200}, 1e-12);
        REQUIRE(r.mab);
        CHECK(r.mab->first == doctest::Approx(a));
        CHECK(r.mab->second == b);
        CHECK(r.is_compact == Verdict::no);
        CHECK(r.is_trace_class == Verdict::no);

        // Same without declared limits: a constant table tail is detected.
        std::vector<double> diag(10, b), off(10, a / 2.0);
        diag[0] += rng.uniform(-1.0, 1.0);
        const auto t = classify(CoefficientSequence::from_table(diag, off), {20, 60}, 1e-12);
        REQUIRE(t.mab);
        CHECK(t.mab->first == doctest::Approx(a));
        CHECK(t.is_compact == Verdict::no);
    }
}

TEST_CASE("compact classification never contradicts declared zero limits") {
    Rng rng(707);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> diag(300), off(300);
        for (std::size_t n = 0; n < 300; ++n) {
            diag[n] = rng.uniform(-1.0, 1.0) / (n + 1.0);
            off[n] = rng.uniform(0.2, 1.0) / (n + 2.0);
        }
        const auto c = CoefficientSequence::from_table(diag, off, Limits{0.0, 0.0});
        const auto r = classify(c, {100, 200}, 1e-12);
        CHECK(r.is_compact == Verdict::yes);
        CHECK(r.is_trace_class != Verdict::yes);  // summands ~ 1/n in the window
    }
}

TEST_CASE("Blumenthal interval is filled by contracted truncations") {
    Rng rng(808);
    for (int trial = 0; trial < 10; ++trial) {
        const double l = rng.uniform(0.1, 2.0), l1 = rng.uniform(0.1, 2.0);
        const auto s = SFraction::positive([l, l1](std::size_t k) { return k % 2 == 0 ? l : l1; });
        const auto bl = blumenthal_limits(l, l1);
        const auto jac = s_to_j(s).jacobi;
        const double width = bl.upper - bl.lower;
        const auto ev = eigen_tridiag(truncate(jac, 1000)).eigenvalues;
        std::vector<double> inside;
        for (double x : ev)
            if (x >= bl.lower + 0.05 * width && x <= bl.upper - 0.05 * width) inside.push_back(x);
        REQUIRE(inside.size() > 100);
        double gap = 0.0;
        for (std::size_t k = 1; k < inside.size(); ++k) gap = std::max(gap, inside[k] - inside[k - 1]);
        CHECK(gap < 0.02 * width);
        // No truncation eigenvalue strays far inside-out beyond one isolated outlier per side.
        const auto outside = std::count_if(ev.begin(), ev.end(), [&](double x) {
            return x < bl.lower - 1e-9 * width || x > bl.upper + 1e-9 * width;
        });
        CHECK(outside <= 2);
    }
}

TEST_CASE("Christoffel mass is nonincreasing in k") {
    Rng rng(909);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = trial % 2 ? testing::random_compact(rng, 60) : random_mab(rng, 0.5, 0.0, 60);
        const auto s = christoffel_mass(c, rng.uniform(-1.5, 1.5), 300);
        for (std::size_t k = 1; k < s.log_sums.size(); ++k) CHECK(s.log_sums[k] >= s.log_sums[k - 1]);
    }
}

TEST_CASE("ratio limits solve the characteristic equation") {
    Rng rng(1010);
    for (int trial = 0; trial < 30; ++trial) {
        const double a = rng.uniform(0.2, 2.0), b = rng.uniform(-1.0, 1.0);
        const auto c = make_family(family_spec("chebyshev", {{"a", a}, {"b", b}}));
        // points off [b - a, b + a]
        const Complex x = trial % 2 ? Complex(b + a * rng.uniform(1.2, 3.0), 0.0)
                                    : Complex(rng.uniform(-2.0, 2.0), rng.uniform(0.3, 2.0));
        const auto r = ratio_sequence(c, x, 400);
        REQUIRE(r.converged);
        const Complex xi = r.limit;
        CHECK(std::abs(a * xi * xi + 2.0 * (b - x) * xi + a) < 1e-9 * (1.0 + std::abs(xi * xi)));
        CHECK(std::abs(xi) >= 1.0);
        CHECK(r.residual < 1e-10);
    }
}

TEST_CASE("J-convergents from recurrence numerators agree for random inputs") {
    Rng rng(1111);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = random_mab(rng, rng.uniform(0.1, 1.0), rng.uniform(-1.0, 1.0), 60);
        const std::size_t n = rng.index(1, 40);
        const Complex z(rng.uniform(-3.0, 3.0), rng.uniform(0.2, 2.0));
        const auto tr = eval_polys(c, z, n);
        const Complex expected = tr.numerators[n] / (c.offdiag(1) * tr.values[n]);
        const Complex got = j_convergent(to_jfraction(c), z, n).value;
        CHECK(std::abs(got - expected) <= 1e-12 * std::abs(expected));
    }
}
