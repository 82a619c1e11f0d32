#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "jacobi/eigenspec.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/families.hpp"
#include "jacobi/recurrence.hpp"
#include "support.hpp"

using namespace jacobi;

namespace {

CoefficientSequence fam(const std::string& name, std::map<std::string, double> p = {}) {
    return make_family(family_spec(name, p));
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("small matrices") {
    SUBCASE("2x2") {
        const auto es = eigen_tridiag(TruncatedJacobi{{0.3, 0.3}, {0.8}});
        CHECK(es.eigenvalues[0] == doctest::Approx(0.3 - 0.8).epsilon(1e-15));
        CHECK(es.eigenvalues[1] == doctest::Approx(0.3 + 0.8).epsilon(1e-15));
        CHECK(es.weights[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(es.weights[1] == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("1x1") {
        const auto es = eigen_tridiag(TruncatedJacobi{{-2.5}, {}});
        CHECK(es.eigenvalues == std::vector<double>{-2.5});
        CHECK(es.weights == std::vector<double>{1.0});
    }
    CHECK_THROWS_AS(eigen_tridiag(TruncatedJacobi{{}, {}}), InvalidInput);
    CHECK_THROWS_AS(eigen_tridiag(TruncatedJacobi{{0.0, 0.0}, {}}), InvalidInput);
}

TEST_CASE("Chebyshev N = 100 has cosine eigenvalues") {
    const auto es = eigen_tridiag(truncate(fam("chebyshev"), 100));
    for (std::size_t i = 0; i < 100; ++i) {
        const double exact = std::cos((100.0 - i) * std::numbers::pi / 101.0);
        CHECK(std::abs(es.eigenvalues[i] - exact) < 1e-10);
    }
    CHECK(std::abs(sum(es.weights) - 1.0) < 1e-12);
    CHECK(std::is_sorted(es.eigenvalues.begin(), es.eigenvalues.end()));
}

TEST_CASE("weights match the Christoffel mass") {
    for (const auto& c : {fam("chebyshev", {{"a", 1.3}, {"b", 0.2}}), testing::perturbed_chebyshev()}) {
        const std::size_t n = 60;
        const auto es = eigen_tridiag(truncate(c, n));
        const auto lim = *c.declared_limits();
        for (std::size_t k = 0; k < n; ++k) {
            // Forward recurrence is only a trustworthy oracle where p_n oscillates.
            if (std::abs(es.eigenvalues[k] - lim.b) > 2.0 * lim.a) continue;
            const double mass = christoffel_mass(c, es.eigenvalues[k], n - 1).mass(n - 1);
            CHECK(es.weights[k] == doctest::Approx(mass).epsilon(1e-10));
        }
    }
}

TEST_CASE("interlacing of consecutive truncations") {
    const auto c = testing::perturbed_chebyshev();
    const auto a = eigen_tridiag(truncate(c, 30)).eigenvalues;
    const auto b = eigen_tridiag(truncate(c, 31)).eigenvalues;
    CHECK(interlaces(a, b, 1e-12));
    CHECK_FALSE(interlaces(b, a, 1e-12));
    CHECK_FALSE(interlaces({0.0, 0.5}, {-1.0, 0.6, 1.0}, 1e-12));
}

TEST_CASE("spectrum sweeps of the reference families") {
    SUBCASE("Lommel") {
        const auto r = spectrum_sweep(fam("lommel", {{"nu", 1.0}}), {200, 400}, 1e-10);
        REQUIRE(r.converged_points.size() >= 10);
        std::vector<double> positive;
        for (const auto& p : r.converged_points)
            if (p.value > 0.0) positive.push_back(p.value);
        std::sort(positive.rbegin(), positive.rend());
        REQUIRE(positive.size() >= 5);
        for (std::size_t k = 1; k <= 5; ++k) CHECK(std::abs(positive[k - 1] - 1.0 / bessel_zero(0.0, k)) < 1e-10);  // zeros of J_{nu-1}
        REQUIRE(r.accumulation_estimates.size() == 1);
        CHECK(std::abs(r.accumulation_estimates[0]) < 1e-2);
        for (const auto& p : r.converged_points) CHECK(p.residual <= 1e-10);
        REQUIRE(r.essential_interval);
        CHECK(r.essential_interval->first == r.essential_interval->second);
    }
    SUBCASE("Tricomi-Carlitz") {
        const auto r = spectrum_sweep(fam("tricomi_carlitz", {{"alpha", 2.0}}), {200, 400}, 1e-10);
        REQUIRE_FALSE(r.converged_points.empty());
        CHECK(r.converged_points.front().value == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-10));
        CHECK(r.converged_points.back().value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    }
    SUBCASE("Chebyshev") {
        const auto r = spectrum_sweep(fam("chebyshev"), {200, 400}, 1e-10);
        CHECK(r.converged_points.empty());
        REQUIRE(r.essential_interval);
        CHECK(r.essential_interval->first == -1.0);
        CHECK(r.essential_interval->second == 1.0);
    }
    SUBCASE("per-size invariants") {
        const auto r = spectrum_sweep(testing::perturbed_chebyshev(), {50, 100, 200}, 1e-8);
        REQUIRE(r.eigenvalues.size() == 3);
        for (std::size_t s = 0; s < 3; ++s) {
            CHECK(r.eigenvalues[s].size() == r.sizes[s]);
            CHECK(std::adjacent_find(r.eigenvalues[s].begin(), r.eigenvalues[s].end(), std::greater_equal<>()) ==
                  r.eigenvalues[s].end());
            CHECK(std::abs(sum(r.weights[s]) - 1.0) < 1e-12);
            CHECK(std::all_of(r.weights[s].begin(), r.weights[s].end(), [](double w) { return w > 0.0; }));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(spectrum_sweep(fam("chebyshev"), {200}, 1e-10), InvalidInput);
        CHECK_THROWS_AS(spectrum_sweep(fam("chebyshev"), {200, 200}, 1e-10), InvalidInput);
        CHECK_THROWS_AS(spectrum_sweep(fam("chebyshev"), {200, 400}, 0.0), InvalidInput);
    }
}

TEST_CASE("eigen table CSV") {
    const auto r = spectrum_sweep(fam("chebyshev"), {2, 3}, 1e-10);
    const auto csv = eigen_table_csv(r);
    CHECK(csv.rfind("size,index,eigenvalue,weight\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 + 3);
}

TEST_CASE("Krein polynomial decay") {
    const auto two = testing::alternating_two_point();
    SUBCASE("minimal polynomial x^2 - 1") {
        const auto k = krein_gj_decay(two, KreinPolynomial({-1.0, 1.0}), 200);
        CHECK(k.bands.size() == 5);
        CHECK(k.compact_consistent);
        for (const auto& b : k.bands) CHECK(b.settled_at.has_value());
    }
    SUBCASE("wrong guess g(x) = x") {
        const auto k = krein_gj_decay(two, KreinPolynomial({0.0}), 200);
        CHECK_FALSE(k.compact_consistent);
        const auto& diag = *std::find_if(k.bands.begin(), k.bands.end(), [](const BandProfile& b) { return b.offset == 0; });
        CHECK(diag.tail_max.back() == doctest::Approx(1.0));
        CHECK_FALSE(diag.settled_at);
    }
    SUBCASE("g(x) = x on a compact sequence") {
        const auto lommel = fam("lommel");
        const auto k = krein_gj_decay(lommel, KreinPolynomial({0.0}), 100, 1e-2);
        CHECK(k.compact_consistent);
        const auto& diag = *std::find_if(k.bands.begin(), k.bands.end(), [](const BandProfile& b) { return b.offset == 0; });
        CHECK(diag.tail_max[0] == 0.0);  // b_n = 0
        const auto& upper = *std::find_if(k.bands.begin(), k.bands.end(), [](const BandProfile& b) { return b.offset == 1; });
        CHECK(upper.tail_max[10] == doctest::Approx(lommel.offdiag(11)));
    }
    SUBCASE("sweep estimates lie near the roots") {
        const auto r = spectrum_sweep(two, {200, 400}, 1e-10);
        REQUIRE(r.accumulation_estimates.size() == 2);
        CHECK(std::abs(r.accumulation_estimates[0] + 1.0) < 1e-2);
        CHECK(std::abs(r.accumulation_estimates[1] - 1.0) < 1e-2);
    }
    CHECK_THROWS_AS(krein_gj_decay(two, KreinPolynomial({-1.0, 1.0}), 1), InvalidInput);
    CHECK_THROWS_AS(KreinPolynomial({1.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(KreinPolynomial({}), InvalidInput);
    CHECK(KreinPolynomial({-1.0, 1.0})(3.0) == 8.0);
}

TEST_CASE("zero gap density") {
    SUBCASE("Chebyshev N = 2000") {
        const auto g = zero_gap_density(fam("chebyshev"), 2000, -0.9, 0.9);
        CHECK(g.max_gap < 0.01);
        CHECK(g.count > 1000);
    }
    SUBCASE("perturbed Chebyshev decreases with N") {
        double prev = 1.0;
        for (std::size_t n : {500u, 1000u, 2000u}) {
            const double gap = zero_gap_density(testing::perturbed_chebyshev(), n, -0.9, 0.9).max_gap;
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 0.01);
    }
    CHECK_THROWS_AS(zero_gap_density(fam("chebyshev"), 2, -0.9, 0.9), InsufficientResolution);
    CHECK_THROWS_AS(zero_gap_density(fam("chebyshev"), 100, -1.5, 0.9), InvalidInput);
    CHECK_THROWS_AS(zero_gap_density(fam("chebyshev"), 100, 0.5, 0.1), InvalidInput);
    // Without declared limits the interval is not checked.
    CHECK(zero_gap_density(testing::perturbed_chebyshev(false), 100, -0.5, 0.5).count > 3);
}

TEST_CASE("extreme eigenvalues fill toward the interval endpoints") {
    for (const auto& c : {fam("chebyshev"), testing::perturbed_chebyshev(), fam("chebyshev", {{"a", 2.0}, {"b", 1.0}})}) {
        const auto lim = *c.declared_limits();
        const double lo = lim.b - 2.0 * lim.a, hi = lim.b + 2.0 * lim.a;
        const auto ev = eigen_tridiag(truncate(c, 2000)).eigenvalues;
        double inside_min = hi, inside_max = lo;
        for (double x : ev) {
            if (x < lo || x > hi) continue;
            inside_min = std::min(inside_min, x);
            inside_max = std::max(inside_max, x);
        }
        CHECK(inside_min - lo < 1e-2);
        CHECK(hi - inside_max < 1e-2);
    }
}
