#pragma once

// Coefficient sequences of S-fractions and Jacobi operators.
//
// A Jacobi operator is given by the recurrence
//
//     x p_n(x) = a_{n+1} p_{n+1}(x) + b_n p_n(x) + a_n p_{n-1}(x),
//
// with diagonal entries b_0, b_1, ... and off-diagonal entries a_1, a_2, ...
// (all a_n > 0). Sequences are index -> value rules, so indexing is total.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jacobi {

using Complex = std::complex<double>;

enum class Verdict { yes, no, undetermined };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

// Declared limits a_n -> a, b_n -> b. The operator is then in M(2a, b).
struct Limits {
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const Limits&, const Limits&) = default;
};

// Where a sequence came from; used for serialization only.
struct TableSource {
    std::vector<double> diag;
    std::vector<double> offdiag;  // a_1, a_2, ...
};

struct RuleSource {
    std::string family;
    std::map<std::string, double> params;
};

using SequenceSource = std::variant<TableSource, RuleSource>;

class CoefficientSequence {
public:
    using Rule = std::function<double(std::size_t)>;

    CoefficientSequence(Rule diag, Rule offdiag, std::optional<Limits> limits = std::nullopt,
                        SequenceSource source = RuleSource{});

    // Stored prefix continued by its tail value: the declared limit when
    // present, otherwise the last stored entry.
    static CoefficientSequence from_table(std::vector<double> diag, std::vector<double> offdiag,
                                          std::optional<Limits> limits = std::nullopt);

    // b_n, n >= 0.
    double diag(std::size_t n) const;
    // a_n, n >= 1. Throws InvalidInput for n == 0 or a non-positive entry.
    double offdiag(std::size_t n) const;

    const std::optional<Limits>& declared_limits() const { return limits_; }
    const SequenceSource& source() const { return source_; }

    // Same rules with a different limit declaration.
    CoefficientSequence with_limits(std::optional<Limits> limits) const;

private:
    Rule diag_;
    Rule offdiag_;
    std::optional<Limits> limits_;
    SequenceSource source_;
};

enum class SKind { positive_real, complex };

std::string_view to_string(SKind k);

// Coefficients b_0, b_1, ... of b_0 / (1 + b_1 t / (1 + b_2 t / (1 + ...))).
class SFraction {
public:
    using Rule = std::function<Complex(std::size_t)>;

    SFraction(Rule terms, SKind kind);

    static SFraction positive(std::function<double(std::size_t)> terms);
    // Prefix continued by `tail` (default: last entry). Positivity of the
    // prefix is checked eagerly.
    static SFraction positive_table(std::vector<double> terms, std::optional<double> tail = std::nullopt);
    static SFraction complex_table(std::vector<Complex> terms, std::optional<Complex> tail = std::nullopt);

    // Throws InvalidInput when a positive-real fraction yields b_k <= 0.
    Complex term(std::size_t k) const;
    SKind kind() const { return kind_; }

private:
    Rule terms_;
    SKind kind_;
};

// lambda_0 / (z + a_1 - lambda_1 / (z + a_2 - lambda_2 / (z + a_3 - ...)))
// in the older (shift, weight) notation. Entries may be complex.
struct JFraction {
    Complex lambda0;
    std::function<Complex(std::size_t)> shift;   // a_n, n >= 1
    std::function<Complex(std::size_t)> weight;  // lambda_n, n >= 1
};

// J-form of a Jacobi sequence: shift a_n = -b_{n-1}, weight lambda_n = a_n^2.
JFraction to_jfraction(const CoefficientSequence& c, double lambda0 = 1.0);

struct Contraction {
    JFraction jfraction;
    // The same operator in recurrence notation: diag_n = -a_{n+1},
    // offdiag_n = sqrt(lambda_n).
    CoefficientSequence jacobi;
};

// Even contraction of a positive-real S-fraction: lambda_0 = b_0,
// a_1 = b_1, a_n = b_{2n-2} + b_{2n-1} (n >= 2), lambda_n = b_{2n-1} b_{2n}.
Contraction s_to_j(const SFraction& s);

// Even contraction for any kind (complex coefficients allowed).
JFraction contract(const SFraction& s);

struct IndexWindow {
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
};

struct ClassificationEvidence {
    IndexWindow window;
    double a_mean = 0.0;
    double b_mean = 0.0;
    double a_residual = 0.0;  // max |a_n - a_mean| over the window
    double b_residual = 0.0;
    double tail_sum = 0.0;        // sum over the window of |b_n - b| + |a_n - a|
    double decay_exponent = 0.0;  // log-log slope fit of the summands (NaN if not fittable)
    bool limits_declared = false;
};

struct ClassificationReport {
    Verdict is_compact = Verdict::undetermined;
    // For sequences with a_n -> 0 and b_n -> b != 0 this refers to J - bI.
    Verdict is_trace_class = Verdict::undetermined;
    std::optional<std::pair<double, double>> mab;  // (a, b) of M(a, b)
    ClassificationEvidence evidence;
};

ClassificationReport classify(const CoefficientSequence& c, IndexWindow window, double tol);

struct BlumenthalLimits {
    double a = 0.0;
    double b = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

// S-fraction with b_{2n} -> l, b_{2n+1} -> l1 lies in M(a, b) with
// a = 2 sqrt(l l1), b = -l - l1; truncation zeros fill [b - a, b + a].
BlumenthalLimits blumenthal_limits(double l, double l1);

struct TruncatedJacobi {
    std::vector<double> diag;     // N entries
    std::vector<double> offdiag;  // N - 1 entries, all > 0

    std::size_t size() const { return diag.size(); }
};

TruncatedJacobi truncate(const CoefficientSequence& c, std::size_t n);

}  // namespace jacobi
