#include "jacobi/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "jacobi/errors.hpp"

namespace jacobi {

namespace {

const std::map<std::string, FamilyInfo, std::less<>>& catalog() {
    static const std::map<std::string, FamilyInfo, std::less<>> table = {
        {"chebyshev",
         {"chebyshev", "Chebyshev polynomials of the second kind on [b - a, b + a]", {{"a", 1.0}, {"b", 0.0}},
          {"a > 0", "b finite"}, "(a/2, b)"}},
        {"lommel",
         {"lommel", "Lommel polynomials; spectrum {+-1/j_{k,nu-1}} and 0", {{"nu", 1.0}}, {"nu > 0"}, "(0, 0)"}},
        {"tricomi_carlitz",
         {"tricomi_carlitz", "Tricomi-Carlitz polynomials; mass points +-1/sqrt(k + alpha - 1) and 0",
          {{"alpha", 2.0}},
          {"alpha > 0"},
          "(0, 0)"}},
        {"natvig",
         {"natvig", "birth-death rates lambda_n = lambda/(n+1), mu_0 = 0, mu_n = mu", {{"lambda", 1.0}, {"mu", 2.0}},
          {"lambda > 0", "mu > 0"}, "(0, mu)"}},
        {"chihara_ismail",
         {"chihara_ismail", "queueing rates lambda_n = lambda/(n+a), mu_{n+1} = mu (n+1)/(n+a)",
          {{"lambda", 1.0}, {"mu", 2.0}, {"a", 1.0}},
          {"lambda > 0", "mu > 0", "a > 0"},
          "(0, mu)"}},
        {"rogers_ramanujan",
         {"rogers_ramanujan", "symmetrized U_{n+1} = x (1 + a q^n) U_n - b q^{n-1} U_{n-1}",
          {{"a", 0.0}, {"b", 1.0}, {"q", 0.5}},
          {"a > -1", "b > 0", "0 < q < 1"},
          "(0, 0)"}},
    };
    return table;
}

void require(bool ok, const std::string& family, const std::string& constraint, double value) {
    if (!ok || !std::isfinite(value))
        throw InvalidInput(family + ": parameter violates " + constraint + " (got " + std::to_string(value) + ")");
}

CoefficientSequence rule(const FamilySpec& spec, CoefficientSequence::Rule diag, CoefficientSequence::Rule off,
                         Limits limits) {
    return CoefficientSequence(std::move(diag), std::move(off), limits, RuleSource{spec.name, spec.params});
}

// J_nu(x) by the ascending series, in extended precision.
double bessel_series(double nu, double x) {
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    const long double h = static_cast<long double>(x) / 2.0L;
    const long double nul = nu;
    long double term = std::exp(nul * std::log(h) - std::lgamma(nul + 1.0L));
    long double sum = term;
    const long double h2 = h * h;
    for (int k = 1; k < 500; ++k) {
        term *= -h2 / (static_cast<long double>(k) * (static_cast<long double>(k) + nul));
        sum += term;
        if (k > h && std::abs(term) <= 1e-21L * std::abs(sum)) break;
    }
    return static_cast<double>(sum);
}

// J_nu(x) by backward recurrence from a high order, normalized with
// (x/2)^nu / Gamma(nu+1) = sum_k w_k J_{nu+2k}(x).
double bessel_miller(double nu, double x) {
    int m = static_cast<int>(std::ceil(x + 15.0 + std::sqrt(40.0 * x)));
    if (m % 2 != 0) ++m;
    std::vector<double> f(static_cast<std::size_t>(m) + 2, 0.0);
    f[static_cast<std::size_t>(m)] = 1e-30;
    for (int k = m; k >= 1; --k) {
        const auto ku = static_cast<std::size_t>(k);
        f[ku - 1] = 2.0 * (nu + k) / x * f[ku] - f[ku + 1];
        if (std::abs(f[ku - 1]) > 1e150) {
            for (std::size_t j = ku - 1; j <= static_cast<std::size_t>(m); ++j) f[j] *= 1e-150;
        }
    }
    // w_0 = 1; w_k = (nu + 2k) c_k with c_1 = 1, c_{k+1} = c_k (nu + k) / (k + 1).
    double norm = f[0];
    double ck = 1.0;
    for (int k = 1; 2 * k <= m; ++k) {
        norm += (nu + 2.0 * k) * ck * f[static_cast<std::size_t>(2 * k)];
        ck *= (nu + k) / (k + 1.0);
    }
    const double lhs = std::exp(nu * std::log(x / 2.0) - std::lgamma(nu + 1.0));
    return f[0] * (lhs / norm);
}

double bessel_unchecked(double nu, double x) { return x <= 12.0 ? bessel_series(nu, x) : bessel_miller(nu, x); }

}  // namespace

const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names = {"chebyshev", "lommel",         "tricomi_carlitz",
                                                   "natvig",    "chihara_ismail", "rogers_ramanujan"};
    return names;
}

const FamilyInfo& family_info(std::string_view name) {
    const auto it = catalog().find(name);
    if (it == catalog().end()) throw InvalidInput("unknown family '" + std::string(name) + "'");
    return it->second;
}

FamilySpec family_spec(std::string_view name, const std::map<std::string, double>& params) {
    const FamilyInfo& info = family_info(name);
    FamilySpec spec{info.name, info.defaults, info.provenance};
    for (const auto& [key, value] : params) {
        if (!info.defaults.count(key))
            throw InvalidInput("family " + info.name + " has no parameter '" + key + "'");
        spec.params[key] = value;
    }
    return spec;
}

CoefficientSequence make_family(const FamilySpec& spec) {
    const FamilySpec full = family_spec(spec.name, spec.params);
    const auto& p = full.params;
    const std::string& name = full.name;

    if (name == "chebyshev") {
        const double a = p.at("a"), b = p.at("b");
        require(a > 0.0, name, "a > 0", a);
        require(true, name, "b finite", b);
        return rule(full, [b](std::size_t) { return b; }, [a](std::size_t) { return a / 2.0; }, {a / 2.0, b});
    }
    if (name == "lommel") {
        const double nu = p.at("nu");
        require(nu > 0.0, name, "nu > 0", nu);
        return rule(
            full, [](std::size_t) { return 0.0; },
            [nu](std::size_t n) {
                const double k = static_cast<double>(n);
                return 1.0 / (2.0 * std::sqrt((k + nu) * (k + nu - 1.0)));
            },
            {0.0, 0.0});
    }
    if (name == "tricomi_carlitz") {
        const double alpha = p.at("alpha");
        require(alpha > 0.0, name, "alpha > 0", alpha);
        return rule(
            full, [](std::size_t) { return 0.0; },
            [alpha](std::size_t n) {
                const double k = static_cast<double>(n);
                return std::sqrt(k / ((k + alpha) * (k + alpha - 1.0)));
            },
            {0.0, 0.0});
    }
    if (name == "natvig" || name == "chihara_ismail") {
        const double lambda = p.at("lambda"), mu = p.at("mu");
        const double a = name == "natvig" ? 1.0 : p.at("a");
        require(lambda > 0.0, name, "lambda > 0", lambda);
        require(mu > 0.0, name, "mu > 0", mu);
        require(a > 0.0, name, "a > 0", a);
        // lambda_n = lambda/(n+a); mu_0 = 0, mu_n = mu n/(n-1+a). Natvig is a = 1.
        auto birth = [lambda, a](std::size_t n) { return lambda / (static_cast<double>(n) + a); };
        auto death = [mu, a](std::size_t n) {
            const double k = static_cast<double>(n);
            return n == 0 ? 0.0 : mu * k / (k - 1.0 + a);
        };
        return rule(
            full, [birth, death](std::size_t n) { return birth(n) + death(n); },
            [birth, death](std::size_t n) { return std::sqrt(birth(n - 1) * death(n)); }, {0.0, mu});
    }
    if (name == "rogers_ramanujan") {
        const double a = p.at("a"), b = p.at("b"), q = p.at("q");
        require(a > -1.0, name, "a > -1", a);
        require(b > 0.0, name, "b > 0", b);
        require(q > 0.0 && q < 1.0, name, "0 < q < 1", q);
        return rule(
            full, [](std::size_t) { return 0.0; },
            [a, b, q](std::size_t n) {
                const double k = static_cast<double>(n) - 1.0;
                const double qn1 = std::pow(q, k);
                const double v = std::sqrt(b) * std::pow(q, k / 2.0) / std::sqrt((1.0 + a * qn1) * (1.0 + a * qn1 * q));
                // Entries below the normal range are kept positive at DBL_MIN.
                return std::max(v, std::numeric_limits<double>::min());
            },
            {0.0, 0.0});
    }
    throw InvalidInput("unknown family '" + name + "'");
}

SFraction rogers_ramanujan_sfraction(double q) {
    if (!(q > 0.0 && q < 1.0)) throw InvalidInput("rogers_ramanujan: parameter violates 0 < q < 1");
    return SFraction::positive([q](std::size_t k) { return std::pow(q, static_cast<double>(k)); });
}

double bessel_j(double nu, double x) {
    if (!(nu >= 0.0 && nu <= 20.0))
        throw UnsupportedRange("bessel_j: order must lie in [0, 20] (got " + std::to_string(nu) + ")");
    if (!(x >= 0.0 && x <= 1000.0))
        throw UnsupportedRange("bessel_j: argument must lie in [0, 1000] (got " + std::to_string(x) + ")");
    return bessel_unchecked(nu, x);
}

double bessel_zero(double nu, std::size_t k) {
    if (!(nu >= 0.0 && nu <= 10.0))
        throw UnsupportedRange("bessel_zero: order must lie in [0, 10] (got " + std::to_string(nu) + ")");
    if (k < 1 || k > 300) throw UnsupportedRange("bessel_zero: index must lie in [1, 300]");

    // Bracket the k-th sign change by scanning; zeros are more than 2 apart.
    const double step = 0.25;
    double lo = std::max(nu, 0.0) + 1e-3;
    double flo = bessel_unchecked(nu, lo);
    std::size_t found = 0;
    double hi = lo, fhi = flo;
    while (found < k) {
        hi = lo + step;
        fhi = bessel_unchecked(nu, hi);
        if ((flo < 0.0) != (fhi < 0.0) || fhi == 0.0) {
            if (++found == k) break;
        }
        lo = hi;
        flo = fhi;
    }
    if (fhi == 0.0) return hi;

    // Safeguarded Newton from the McMahon estimate when it falls in the bracket.
    const double beta = (static_cast<double>(k) + nu / 2.0 - 0.25) * std::numbers::pi;
    double x = beta - (4.0 * nu * nu - 1.0) / (8.0 * beta);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double f = bessel_unchecked(nu, x);
        if (f == 0.0) return x;
        if ((f < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        const double df = nu / x * f - bessel_unchecked(nu + 1.0, x);
        double next = x - f / df;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * x) return next;
        x = next;
        if (hi - lo <= 4e-16 * x) return x;
    }
    return x;
}

}  // namespace jacobi
