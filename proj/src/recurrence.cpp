#include "jacobi/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "jacobi/errors.hpp"
#include "jacobi/io.hpp"

namespace jacobi {

namespace {

double magnitude(double v) { return std::abs(v); }
double magnitude(const Complex& v) { return std::abs(v); }

// Power-of-two exponent that brings m back to order one; exact scaling.
int rescale_exponent(double m) { return std::ilogb(m); }

template <typename T>
T scaled(const T& v, int e) {
    if constexpr (std::is_same_v<T, double>) {
        return std::ldexp(v, -e);
    } else {
        return T(std::ldexp(v.real(), -e), std::ldexp(v.imag(), -e));
    }
}

}  // namespace

template <typename T>
PolynomialTrace<T> eval_polys(const CoefficientSequence& c, T x, std::size_t n) {
    if (n < 1) throw InvalidInput("eval_polys needs N >= 1");
    PolynomialTrace<T> tr;
    tr.x = x;
    tr.values.assign(n + 1, T{});
    tr.numerators.assign(n + 1, T{});
    auto& p = tr.values;
    auto& u = tr.numerators;

    auto maybe_rescale = [&](std::size_t k) {
        const double m = std::max(magnitude(p[k]), magnitude(u[k]));
        if (!(m > kRescaleThreshold)) return;
        const int e = rescale_exponent(m);
        for (std::size_t j = 0; j <= k; ++j) {
            p[j] = scaled(p[j], e);
            u[j] = scaled(u[j], e);
        }
        tr.scale_log += e * std::numbers::ln2;
    };

    p[0] = T(1.0);
    u[0] = T(0.0);
    p[1] = (x - c.diag(0)) / c.offdiag(1);
    u[1] = T(1.0);
    maybe_rescale(1);
    for (std::size_t k = 1; k < n; ++k) {
        const double ak = c.offdiag(k);
        const double ak1 = c.offdiag(k + 1);
        const T shift = x - c.diag(k);
        p[k + 1] = (shift * p[k] - ak * p[k - 1]) / ak1;
        u[k + 1] = (shift * u[k] - ak * u[k - 1]) / ak1;
        maybe_rescale(k + 1);
    }
    return tr;
}

template PolynomialTrace<double> eval_polys(const CoefficientSequence&, double, std::size_t);
template PolynomialTrace<Complex> eval_polys(const CoefficientSequence&, Complex, std::size_t);

std::string trace_to_csv(const PolynomialTrace<double>& trace) {
    std::ostringstream os;
    os << "k,p_k,numerator_k,scale_log\n";
    for (std::size_t k = 0; k < trace.values.size(); ++k) {
        os << k << ',' << format_number(trace.values[k]) << ',' << format_number(trace.numerators[k]) << ','
           << format_number(trace.scale_log) << '\n';
    }
    return os.str();
}

std::string_view to_string(RootRegime r) {
    switch (r) {
        case RootRegime::distinct: return "distinct";
        case RootRegime::equal_modulus: return "equal_modulus";
        case RootRegime::boundary: return "boundary";
    }
    return "distinct";
}

PoincareRoots poincare_roots(double a, double b, Complex x) {
    if (!(a > 0.0)) throw InvalidInput("poincare_roots requires a > 0");
    const Complex d = x - b;
    const Complex disc = d * d - a * a;
    const Complex root = std::sqrt(disc);
    PoincareRoots r;
    r.xi1 = (d + root) / a;
    r.xi2 = (d - root) / a;
    if (std::abs(r.xi2) > std::abs(r.xi1)) std::swap(r.xi1, r.xi2);

    if (x.imag() == 0.0) {
        const double dr = disc.real();
        const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(a * a, std::norm(d));
        if (std::abs(dr) <= slack) {
            r.regime = RootRegime::boundary;
        } else if (dr < 0.0) {
            r.regime = RootRegime::equal_modulus;
        }
    }
    return r;
}

template <typename T>
RatioReport<T> ratio_sequence(const CoefficientSequence& c, T x, std::size_t n, double tol,
                              std::size_t stable_run) {
    if (n < 1) throw InvalidInput("ratio_sequence needs N >= 1");
    if (!(tol > 0.0)) throw InvalidInput("tol must be > 0");
    RatioReport<T> rep;
    if (const auto& lim = c.declared_limits(); lim && lim->a > 0.0)
        rep.roots = poincare_roots(2.0 * lim->a, lim->b, Complex(x));

    rep.ratios.assign(n, T(std::numeric_limits<double>::quiet_NaN()));
    rep.defined.assign(n, false);

    T prev(0.0), cur(1.0);
    std::size_t run = 0, run_start = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double ak = k == 0 ? 0.0 : c.offdiag(k);
        T next = ((x - c.diag(k)) * cur - ak * prev) / c.offdiag(k + 1);
        if (cur != T(0.0)) {
            rep.ratios[k] = next / cur;
            rep.defined[k] = true;
        }
        if (k > 0 && rep.defined[k] && rep.defined[k - 1] &&
            magnitude(rep.ratios[k] - rep.ratios[k - 1]) < tol) {
            if (run++ == 0) run_start = k;
        } else {
            run = 0;
        }
        const double m = std::max(magnitude(cur), magnitude(next));
        if (m > kRescaleThreshold) {
            const int e = rescale_exponent(m);
            cur = scaled(cur, e);
            next = scaled(next, e);
        }
        prev = cur;
        cur = next;
    }

    // Only a stable run reaching the end of the sequence counts.
    const bool poincare_applies = !rep.roots || rep.roots->regime == RootRegime::distinct;
    if (run >= stable_run && poincare_applies) {
        rep.converged = true;
        rep.converged_at = run_start;
    }

    for (std::size_t k = n; k-- > 0;) {
        if (rep.defined[k]) {
            rep.limit = rep.ratios[k];
            break;
        }
    }
    rep.residual = rep.roots ? std::abs(Complex(rep.limit) - rep.roots->xi1)
                             : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

template RatioReport<double> ratio_sequence(const CoefficientSequence&, double, std::size_t, double, std::size_t);
template RatioReport<Complex> ratio_sequence(const CoefficientSequence&, Complex, std::size_t, double,
                                             std::size_t);

double ChristoffelSums::sum(std::size_t k) const { return std::exp(log_sums.at(k)); }
double ChristoffelSums::mass(std::size_t k) const { return std::exp(-log_sums.at(k)); }

ChristoffelSums christoffel_mass(const CoefficientSequence& c, double x, std::size_t n) {
    ChristoffelSums out;
    out.x = x;
    out.log_sums.resize(n + 1);
    out.log_sums[0] = 0.0;

    double prev = 0.0, cur = 1.0, sum = 1.0;
    long exponent = 0;  // true p = stored p * 2^exponent
    for (std::size_t k = 0; k < n; ++k) {
        const double ak = k == 0 ? 0.0 : c.offdiag(k);
        double next = ((x - c.diag(k)) * cur - ak * prev) / c.offdiag(k + 1);
        const double m = std::max(std::abs(cur), std::abs(next));
        if (m > kRescaleThreshold) {
            const int e = rescale_exponent(m);
            cur = std::ldexp(cur, -e);
            next = std::ldexp(next, -e);
            sum = std::ldexp(sum, -2 * e);
            exponent += e;
        }
        sum += next * next;
        out.log_sums[k + 1] = std::log(sum) + 2.0 * static_cast<double>(exponent) * std::numbers::ln2;
        // Rounding of the log can make an exact tie look like a decrease.
        if (out.log_sums[k + 1] < out.log_sums[k]) out.log_sums[k + 1] = out.log_sums[k];
        prev = cur;
        cur = next;
    }
    return out;
}

}  // namespace jacobi
