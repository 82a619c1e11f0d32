#include "jacobi/cfrac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "jacobi/errors.hpp"
#include "jacobi/io.hpp"

namespace jacobi {

std::string_view to_string(ConvergentStatus s) { return s == ConvergentStatus::ok ? "ok" : "pole"; }

std::string_view to_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::converged: return "converged";
        case LimitStatus::undetermined: return "undetermined";
        case LimitStatus::pole: return "pole";
    }
    return "undetermined";
}

namespace {

Complex ldexp_c(Complex v, long e) {
    return {std::ldexp(v.real(), static_cast<int>(e)), std::ldexp(v.imag(), static_cast<int>(e))};
}

// A_k = d_k A_{k-1} + n_k A_{k-2}, same for B, with A_{-1} = 1, A_0 = 0,
// B_{-1} = 0, B_0 = 1. After every step the four carried values are scaled
// by a common power of two so that max(|A_k|, |B_k|) is of order one.
class Wallis {
public:
    void step(Complex num, Complex den) {
        const Complex a = den * a_ + num * a_prev_;
        const Complex b = den * b_ + num * b_prev_;
        a_prev_ = a_;
        b_prev_ = b_;
        a_ = a;
        b_ = b;
        ++order_;
        const double m = std::max(std::abs(a_), std::abs(b_));
        if (m > 0.0 && std::isfinite(m)) {
            const int e = std::ilogb(m);
            a_ = ldexp_c(a_, -e);
            b_ = ldexp_c(b_, -e);
            a_prev_ = ldexp_c(a_prev_, -e);
            b_prev_ = ldexp_c(b_prev_, -e);
            exponent_ += e;
        }
    }

    ConvergentValue value() const {
        ConvergentValue v;
        v.order = order_;
        v.numerator = a_;
        v.denominator = b_;
        v.exponent = exponent_;
        if (std::abs(b_) < kPoleThreshold || !std::isfinite(std::abs(b_))) {
            v.status = ConvergentStatus::pole;
            v.value = Complex(std::numeric_limits<double>::infinity(), 0.0);
        } else {
            v.value = a_ / b_;
        }
        return v;
    }

private:
    Complex a_prev_{1.0}, a_{0.0}, b_prev_{0.0}, b_{1.0};
    long exponent_ = 0;
    std::size_t order_ = 0;
};

// Partial numerator / denominator of the k-th level (k >= 1).
struct SLevels {
    const SFraction& s;
    Complex t;
    std::pair<Complex, Complex> operator()(std::size_t k) const {
        return {k == 1 ? s.term(0) : s.term(k - 1) * t, Complex(1.0)};
    }
};

struct JLevels {
    const JFraction& j;
    Complex z;
    std::pair<Complex, Complex> operator()(std::size_t k) const {
        return {k == 1 ? j.lambda0 : -j.weight(k - 1), z + j.shift(k)};
    }
};

template <typename Levels>
std::vector<ConvergentValue> all_orders(const Levels& levels, std::size_t n) {
    std::vector<ConvergentValue> out;
    out.reserve(n);
    Wallis w;
    for (std::size_t k = 1; k <= n; ++k) {
        const auto [num, den] = levels(k);
        w.step(num, den);
        out.push_back(w.value());
    }
    return out;
}

template <typename Levels>
ConvergentValue single_order(const Levels& levels, std::size_t n) {
    Wallis w;
    for (std::size_t k = 1; k <= n; ++k) {
        const auto [num, den] = levels(k);
        w.step(num, den);
    }
    return w.value();
}

template <typename Levels>
LimitEstimate iterate_limit(const Levels& levels, double tol, std::size_t max_n, std::size_t window) {
    LimitEstimate est;
    Wallis w;
    std::size_t run = 0;
    bool pole_seen = false;
    Complex prev{};
    bool have_prev = false;
    for (std::size_t k = 1; k <= max_n; ++k) {
        const auto [num, den] = levels(k);
        w.step(num, den);
        const ConvergentValue v = w.value();
        est.value = v.value;
        est.order = k;
        if (v.status == ConvergentStatus::pole) {
            pole_seen = true;
            run = 0;
            have_prev = false;
            continue;
        }
        if (have_prev && std::abs(v.value - prev) < tol) {
            if (++run >= window) {
                est.status = LimitStatus::converged;
                return est;
            }
        } else {
            run = 0;
        }
        prev = v.value;
        have_prev = true;
    }
    est.status = pole_seen ? LimitStatus::pole : LimitStatus::undetermined;
    return est;
}

}  // namespace

Complex ConvergentValue::true_numerator() const { return ldexp_c(numerator, exponent); }
Complex ConvergentValue::true_denominator() const { return ldexp_c(denominator, exponent); }

ConvergentValue s_convergent(const SFraction& s, Complex t, std::size_t n) {
    return single_order(SLevels{s, t}, n);
}

std::vector<ConvergentValue> s_convergents(const SFraction& s, Complex t, std::size_t n) {
    return all_orders(SLevels{s, t}, n);
}

ConvergentValue j_convergent(const JFraction& j, Complex z, std::size_t n) {
    return single_order(JLevels{j, z}, n);
}

std::vector<ConvergentValue> j_convergents(const JFraction& j, Complex z, std::size_t n) {
    return all_orders(JLevels{j, z}, n);
}

ContractionCheck check_contraction(const SFraction& s, Complex z, std::size_t n) {
    if (s.kind() != SKind::positive_real) throw InvalidInput("check_contraction requires a positive-real S-fraction");
    if (n < 1) throw InvalidInput("check_contraction needs n >= 1");
    if (z == Complex(0.0)) throw InvalidInput("check_contraction needs z != 0");
    const ConvergentValue sv = s_convergent(s, 1.0 / z, 2 * n);
    const ConvergentValue jv = j_convergent(s_to_j(s).jfraction, z, n);
    ContractionCheck out;
    out.s_value = sv.value;
    out.j_value = jv.value;
    if (sv.status == ConvergentStatus::pole || jv.status == ConvergentStatus::pole) {
        out.status = ConvergentStatus::pole;
        out.residual = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.residual = std::abs(sv.value - z * jv.value) / std::abs(sv.value);
    return out;
}

LimitEstimate estimate_limit(const FractionRef& fraction, Complex point, double tol, std::size_t max_n,
                             std::size_t window) {
    if (!(tol > 0.0)) throw InvalidInput("tol must be > 0");
    if (window == 0) throw InvalidInput("convergence window must be >= 1");
    const auto run = [&](Complex at) {
        return std::visit(
            [&](const auto& f) -> LimitEstimate {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, SFraction>) {
                    return iterate_limit(SLevels{f, at}, tol, max_n, window);
                } else {
                    return iterate_limit(JLevels{f, at}, tol, max_n, window);
                }
            },
            fraction);
    };
    LimitEstimate est = run(point);
    if (est.status != LimitStatus::converged) return est;
    // A converged value that moves by more than 1% under a relative shift of
    // the point by 1e-12 is a pole to working precision.
    const Complex shifted = point + kPoleProbeShift * std::max(1.0, std::abs(point));
    const LimitEstimate probe = run(shifted);
    if (probe.status != LimitStatus::converged ||
        std::abs(probe.value - est.value) > 1e-2 * std::max(std::abs(est.value), 1.0)) {
        est.status = LimitStatus::pole;
    }
    return est;
}

std::string grid_to_csv(const std::vector<GridPoint>& rows) {
    std::ostringstream os;
    os << "re_point,im_point,order,re_value,im_value,status\n";
    for (const auto& r : rows) {
        os << format_number(r.point.real()) << ',' << format_number(r.point.imag()) << ',' << r.estimate.order
           << ',' << format_number(r.estimate.value.real()) << ',' << format_number(r.estimate.value.imag()) << ','
           << to_string(r.estimate.status) << '\n';
    }
    return os.str();
}

}  // namespace jacobi
