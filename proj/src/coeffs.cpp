#include "jacobi/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <utility>

#include "jacobi/errors.hpp"

namespace jacobi {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::undetermined: return "undetermined";
    }
    return "undetermined";
}

Verdict verdict_from_string(std::string_view s) {
    if (s == "yes") return Verdict::yes;
    if (s == "no") return Verdict::no;
    if (s == "undetermined") return Verdict::undetermined;
    throw InvalidInput("unknown verdict '" + std::string(s) + "'");
}

std::string_view to_string(SKind k) {
    return k == SKind::positive_real ? "positive-real" : "complex";
}

// ---------------------------------------------------------------------------

CoefficientSequence::CoefficientSequence(Rule diag, Rule offdiag, std::optional<Limits> limits,
                                         SequenceSource source)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)), limits_(limits), source_(std::move(source)) {
    if (!diag_ || !offdiag_) throw InvalidInput("coefficient rules must be callable");
    if (limits_) {
        if (!std::isfinite(limits_->a) || !std::isfinite(limits_->b))
            throw InvalidInput("declared limits must be finite");
        if (limits_->a < 0.0) throw InvalidInput("declared off-diagonal limit must be >= 0");
    }
}

CoefficientSequence CoefficientSequence::from_table(std::vector<double> diag, std::vector<double> offdiag,
                                                    std::optional<Limits> limits) {
    if (diag.empty() && !limits) throw InvalidInput("table needs at least one diagonal entry or declared limits");
    if (offdiag.empty() && !limits && diag.size() > 1)
        throw InvalidInput("table needs off-diagonal entries or declared limits");
    for (double v : diag)
        if (!std::isfinite(v)) throw InvalidInput("diagonal entries must be finite");
    for (double v : offdiag)
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("off-diagonal entries must be finite and > 0");

    auto d = std::make_shared<const std::vector<double>>(diag);
    auto o = std::make_shared<const std::vector<double>>(offdiag);
    const double d_tail = limits ? limits->b : (d->empty() ? 0.0 : d->back());
    // A table without off-diagonal entries and without limits only makes
    // sense for N = 1; continue with 1 so indexing stays total.
    const double o_tail = limits ? limits->a : (o->empty() ? 1.0 : o->back());

    Rule diag_rule = [d, d_tail](std::size_t n) { return n < d->size() ? (*d)[n] : d_tail; };
    Rule off_rule = [o, o_tail](std::size_t n) {
        if (n - 1 < o->size()) return (*o)[n - 1];
        if (o_tail == 0.0)
            throw InsufficientResolution("coefficient table stores " + std::to_string(o->size()) +
                                         " off-diagonal entries and its declared limit 0 cannot continue it (a_" +
                                         std::to_string(n) + " requested)");
        return o_tail;
    };
    return CoefficientSequence(std::move(diag_rule), std::move(off_rule), limits,
                               TableSource{std::move(diag), std::move(offdiag)});
}

double CoefficientSequence::diag(std::size_t n) const { return diag_(n); }

double CoefficientSequence::offdiag(std::size_t n) const {
    if (n == 0) throw InvalidInput("off-diagonal entries are indexed from 1");
    const double v = offdiag_(n);
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidInput("off-diagonal entry a_" + std::to_string(n) + " is not a positive finite number");
    return v;
}

CoefficientSequence CoefficientSequence::with_limits(std::optional<Limits> limits) const {
    return CoefficientSequence(diag_, offdiag_, limits, source_);
}

// ---------------------------------------------------------------------------

SFraction::SFraction(Rule terms, SKind kind) : terms_(std::move(terms)), kind_(kind) {
    if (!terms_) throw InvalidInput("S-fraction rule must be callable");
}

SFraction SFraction::positive(std::function<double(std::size_t)> terms) {
    return SFraction([t = std::move(terms)](std::size_t k) { return Complex(t(k), 0.0); }, SKind::positive_real);
}

SFraction SFraction::positive_table(std::vector<double> terms, std::optional<double> tail) {
    if (terms.empty()) throw InvalidInput("S-fraction table is empty");
    for (std::size_t k = 0; k < terms.size(); ++k)
        if (!(terms[k] > 0.0) || !std::isfinite(terms[k]))
            throw InvalidInput("S-fraction coefficient b_" + std::to_string(k) + " must be positive");
    if (tail && !(*tail > 0.0)) throw InvalidInput("S-fraction tail must be positive");
    const double t = tail.value_or(terms.back());
    auto data = std::make_shared<const std::vector<double>>(std::move(terms));
    return SFraction([data, t](std::size_t k) { return Complex(k < data->size() ? (*data)[k] : t, 0.0); },
                     SKind::positive_real);
}

SFraction SFraction::complex_table(std::vector<Complex> terms, std::optional<Complex> tail) {
    if (terms.empty()) throw InvalidInput("S-fraction table is empty");
    const Complex t = tail.value_or(terms.back());
    auto data = std::make_shared<const std::vector<Complex>>(std::move(terms));
    return SFraction([data, t](std::size_t k) { return k < data->size() ? (*data)[k] : t; }, SKind::complex);
}

Complex SFraction::term(std::size_t k) const {
    const Complex v = terms_(k);
    if (kind_ == SKind::positive_real && !(v.real() > 0.0 && v.imag() == 0.0 && std::isfinite(v.real())))
        throw InvalidInput("S-fraction coefficient b_" + std::to_string(k) + " is not positive");
    return v;
}

// ---------------------------------------------------------------------------

JFraction to_jfraction(const CoefficientSequence& c, double lambda0) {
    return JFraction{
        Complex(lambda0, 0.0),
        [c](std::size_t n) { return Complex(-c.diag(n - 1), 0.0); },
        [c](std::size_t n) {
            const double a = c.offdiag(n);
            return Complex(a * a, 0.0);
        },
    };
}

JFraction contract(const SFraction& s) {
    return JFraction{
        s.term(0),
        [s](std::size_t n) { return n == 1 ? s.term(1) : s.term(2 * n - 2) + s.term(2 * n - 1); },
        [s](std::size_t n) { return s.term(2 * n - 1) * s.term(2 * n); },
    };
}

Contraction s_to_j(const SFraction& s) {
    if (s.kind() != SKind::positive_real) throw InvalidInput("s_to_j requires a positive-real S-fraction");
    JFraction jf = contract(s);
    CoefficientSequence view(
        [shift = jf.shift](std::size_t n) { return -shift(n + 1).real(); },
        [weight = jf.weight](std::size_t n) { return std::sqrt(weight(n).real()); });
    return Contraction{std::move(jf), std::move(view)};
}

// ---------------------------------------------------------------------------

namespace {

struct Stats {
    double mean = 0.0;
    double residual = 0.0;
};

Stats window_stats(const std::vector<double>& v) {
    Stats s;
    if (v.empty()) return s;
    s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double x : v) s.residual = std::max(s.residual, std::abs(x - s.mean));
    return s;
}

// Least-squares slope of log(t_n) against log(n); returns -slope, or NaN
// when fewer than three positive summands exist or the fit is not a clean
// power law (max log residual above 0.1).
double decay_exponent(const std::vector<std::size_t>& idx, const std::vector<double>& terms) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] == 0 || !(terms[i] > 0.0)) continue;
        lx.push_back(std::log(static_cast<double>(idx[i])));
        ly.push_back(std::log(terms[i]));
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (lx.size() < 3) return nan;
    const double n = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    if (sxx == 0.0) return nan;
    const double slope = sxy / sxx;
    double worst = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i)
        worst = std::max(worst, std::abs(ly[i] - (my + slope * (lx[i] - mx))));
    if (worst > 0.1) return nan;
    return -slope;
}

}  // namespace

ClassificationReport classify(const CoefficientSequence& c, IndexWindow window, double tol) {
    if (window.last < window.first) throw InvalidInput("classification window is empty");
    if (!(tol > 0.0)) throw InvalidInput("tol must be > 0");
    const std::size_t first_off = std::max<std::size_t>(window.first, 1);
    if (window.last < first_off) throw InvalidInput("classification window must reach index >= 1");

    std::vector<double> as, bs;
    for (std::size_t n = window.first; n <= window.last; ++n) {
        bs.push_back(c.diag(n));
        if (n >= first_off) as.push_back(c.offdiag(n));
    }

    ClassificationReport rep;
    auto& ev = rep.evidence;
    ev.window = window;
    const Stats sa = window_stats(as), sb = window_stats(bs);
    ev.a_mean = sa.mean;
    ev.b_mean = sb.mean;
    ev.a_residual = sa.residual;
    ev.b_residual = sb.residual;
    ev.limits_declared = c.declared_limits().has_value();

    std::optional<Limits> lim = c.declared_limits();
    if (!lim) {
        double max_entry = 0.0;
        for (double a : as) max_entry = std::max(max_entry, a);
        for (double b : bs) max_entry = std::max(max_entry, std::abs(b));
        if (max_entry < tol) {
            lim = Limits{0.0, 0.0};
        } else if (sa.residual < tol && sb.residual < tol) {
            lim = Limits{sa.mean, sb.mean};
            if (std::abs(lim->a) < tol) lim->a = 0.0;
            if (std::abs(lim->b) < tol) lim->b = 0.0;
        }
    }

    // Banded trace-class criterion on J - bI: sum of |b_n - b| + |a_n - a|.
    const double b_centre = lim ? lim->b : 0.0;
    const double a_centre = lim ? lim->a : 0.0;
    std::vector<double> summands;
    std::vector<std::size_t> summand_idx;
    for (std::size_t n = window.first; n <= window.last; ++n) {
        double t = std::abs(bs[n - window.first] - b_centre);
        if (n >= first_off) t += std::abs(as[n - first_off] - a_centre);
        summands.push_back(t);
        summand_idx.push_back(n);
    }
    ev.tail_sum = std::accumulate(summands.begin(), summands.end(), 0.0);
    ev.decay_exponent = decay_exponent(summand_idx, summands);

    if (!lim) return rep;

    rep.mab = std::make_pair(2.0 * lim->a, lim->b);
    rep.is_compact = (lim->a == 0.0 && lim->b == 0.0) ? Verdict::yes : Verdict::no;

    if (lim->a > 0.0) {
        // Neither J nor J - bI is compact.
        rep.is_trace_class = Verdict::no;
    } else if (ev.tail_sum < tol) {
        rep.is_trace_class = Verdict::yes;
    } else if (std::isfinite(ev.decay_exponent) && ev.decay_exponent <= 1.0) {
        rep.is_trace_class = Verdict::no;
    } else {
        rep.is_trace_class = Verdict::undetermined;
    }
    return rep;
}

BlumenthalLimits blumenthal_limits(double l, double l1) {
    if (!(l >= 0.0) || !(l1 >= 0.0) || !std::isfinite(l) || !std::isfinite(l1))
        throw InvalidInput("Blumenthal limits require l >= 0 and l1 >= 0");
    BlumenthalLimits r;
    r.a = 2.0 * std::sqrt(l * l1);
    r.b = -l - l1;
    r.lower = r.b - r.a;
    r.upper = r.b + r.a;
    return r;
}

TruncatedJacobi truncate(const CoefficientSequence& c, std::size_t n) {
    if (n == 0) throw InvalidInput("truncation size must be >= 1");
    TruncatedJacobi t;
    t.diag.resize(n);
    t.offdiag.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = c.diag(i);
    for (std::size_t i = 0; i + 1 < n; ++i) t.offdiag[i] = c.offdiag(i + 1);
    return t;
}

}  // namespace jacobi
