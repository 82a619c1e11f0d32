#include "jacobi/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "jacobi/errors.hpp"

namespace jacobi {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_number(const Complex& v) {
    std::string out = format_number(v.real());
    const double im = v.imag();
    out += (std::signbit(im) ? "-" : "+") + format_number(std::abs(im)) + "i";
    return out;
}

Complex parse_complex(const std::string& text) {
    auto fail = [&] { return InvalidInput("cannot parse complex number '" + text + "'"); };
    auto parse_real = [&](std::string_view s) {
        if (s.empty()) throw fail();
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(std::string(s), &pos);
        } catch (const std::exception&) {
            throw fail();
        }
        if (pos != s.size()) throw fail();
        return v;
    };
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    if (s.empty()) throw fail();
    if (s.back() != 'i') return {parse_real(s), 0.0};
    s.pop_back();
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imag_part = [&](std::string_view t) {
        if (t == "+" || t.empty()) return 1.0;
        if (t == "-") return -1.0;
        return parse_real(t);
    };
    if (split == std::string::npos) return {0.0, imag_part(s)};
    return {parse_real(std::string_view(s).substr(0, split)), imag_part(std::string_view(s).substr(split))};
}

namespace {

// JSON has no NaN; null stands for it.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double get_num(const Json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!j.is_number()) throw InputFileError("expected a number, got " + j.dump());
    return j.get<double>();
}

Json cnum(const Complex& v) { return Json::array({num(v.real()), num(v.imag())}); }

Complex get_cnum(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw InputFileError("expected [re, im], got " + j.dump());
    return {get_num(j[0]), get_num(j[1])};
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InputFileError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::vector<double> num_array(const Json& j) {
    if (!j.is_array()) throw InputFileError("expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(get_num(v));
    return out;
}

Json num_array_json(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(num(x));
    return out;
}

std::optional<Limits> limits_from(const Json& j) {
    if (!j.contains("limits") || j.at("limits").is_null()) return std::nullopt;
    const auto l = num_array(j.at("limits"));
    if (l.size() != 2) throw InputFileError("'limits' must be [a, b]");
    return Limits{l[0], l[1]};
}

template <typename E>
E enum_from(const Json& j, std::initializer_list<E> values) {
    const std::string s = j.get<std::string>();
    for (E e : values)
        if (to_string(e) == s) return e;
    throw InputFileError("unknown enum value '" + s + "'");
}

// Library-level type errors inside a document are file errors.
template <typename F>
auto guarded(const char* what, F&& parse) {
    try {
        return parse();
    } catch (const nlohmann::json::exception& e) {
        throw InputFileError(std::string("malformed ") + what + " document: " + e.what());
    }
}

}  // namespace

Json coefficients_to_json(const CoefficientSequence& c) {
    Json j;
    const auto& lim = c.declared_limits();
    if (const auto* t = std::get_if<TableSource>(&c.source())) {
        j["kind"] = "table";
        j["diag"] = num_array_json(t->diag);
        j["offdiag"] = num_array_json(t->offdiag);
    } else {
        const auto& r = std::get<RuleSource>(c.source());
        if (r.family.empty()) throw InvalidInput("sequence defined by an opaque rule cannot be serialized");
        j["kind"] = "rule";
        j["family"] = r.family;
        Json params = Json::object();
        for (const auto& [k, v] : r.params) params[k] = v;
        j["params"] = params;
    }
    if (lim) j["limits"] = Json::array({lim->a, lim->b});
    return j;
}

CoefficientSequence coefficients_from_json(const Json& j) {
    try {
        const std::string kind = field(j, "kind").get<std::string>();
        if (kind == "table") {
            return CoefficientSequence::from_table(num_array(field(j, "diag")), num_array(field(j, "offdiag")),
                                                   limits_from(j));
        }
        if (kind == "rule") {
            std::map<std::string, double> params;
            if (j.contains("params")) {
                if (!j.at("params").is_object()) throw InputFileError("'params' must be an object");
                for (const auto& [k, v] : j.at("params").items()) params[k] = get_num(v);
            }
            CoefficientSequence c = make_family(family_spec(field(j, "family").get<std::string>(), params));
            if (const auto lim = limits_from(j); lim && !(*lim == *c.declared_limits()))
                throw InputFileError("declared limits of a rule sequence must match the family");
            return c;
        }
        throw InputFileError("unknown coefficient kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw InputFileError(std::string("malformed coefficient document: ") + e.what());
    }
}

SFraction sfraction_from_json(const Json& j) {
    try {
        const std::string kind = field(j, "kind").get<std::string>();
        const Json& terms = field(j, "terms");
        if (!terms.is_array() || terms.empty()) throw InputFileError("'terms' must be a non-empty array");
        if (kind == "positive-real") {
            std::optional<double> tail;
            if (j.contains("tail") && !j.at("tail").is_null()) tail = get_num(j.at("tail"));
            return SFraction::positive_table(num_array(terms), tail);
        }
        if (kind == "complex") {
            std::vector<Complex> v;
            for (const auto& t : terms) v.push_back(get_cnum(t));
            std::optional<Complex> tail;
            if (j.contains("tail") && !j.at("tail").is_null()) tail = get_cnum(j.at("tail"));
            return SFraction::complex_table(std::move(v), tail);
        }
        throw InputFileError("unknown S-fraction kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        throw InputFileError(std::string("malformed S-fraction document: ") + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputFileError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw InputFileError("'" + path + "' is not valid JSON: " + e.what());
    }
}

// --- classification --------------------------------------------------------

Json to_json(const ClassificationReport& r) {
    const auto& ev = r.evidence;
    Json j;
    j["is_compact"] = to_string(r.is_compact);
    j["is_trace_class"] = to_string(r.is_trace_class);
    j["mab"] = r.mab ? Json::array({r.mab->first, r.mab->second}) : Json(nullptr);
    j["evidence"] = {
        {"window", Json::array({ev.window.first, ev.window.last})},
        {"a_mean", num(ev.a_mean)},
        {"b_mean", num(ev.b_mean)},
        {"a_residual", num(ev.a_residual)},
        {"b_residual", num(ev.b_residual)},
        {"tail_sum", num(ev.tail_sum)},
        {"decay_exponent", num(ev.decay_exponent)},
        {"limits_declared", ev.limits_declared},
    };
    return j;
}

static ClassificationReport parse_classification(const Json& j) {
    ClassificationReport r;
    r.is_compact = enum_from(field(j, "is_compact"), {Verdict::yes, Verdict::no, Verdict::undetermined});
    r.is_trace_class = enum_from(field(j, "is_trace_class"), {Verdict::yes, Verdict::no, Verdict::undetermined});
    if (const Json& m = field(j, "mab"); !m.is_null()) {
        const auto v = num_array(m);
        if (v.size() != 2) throw InputFileError("'mab' must be [a, b]");
        r.mab = std::make_pair(v[0], v[1]);
    }
    const Json& ev = field(j, "evidence");
    const Json& w = field(ev, "window");
    r.evidence.window = {w.at(0).get<std::size_t>(), w.at(1).get<std::size_t>()};
    r.evidence.a_mean = get_num(field(ev, "a_mean"));
    r.evidence.b_mean = get_num(field(ev, "b_mean"));
    r.evidence.a_residual = get_num(field(ev, "a_residual"));
    r.evidence.b_residual = get_num(field(ev, "b_residual"));
    r.evidence.tail_sum = get_num(field(ev, "tail_sum"));
    r.evidence.decay_exponent = get_num(field(ev, "decay_exponent"));
    r.evidence.limits_declared = field(ev, "limits_declared").get<bool>();
    return r;
}

// --- spectrum --------------------------------------------------------------

Json to_json(const SpectrumReport& r) {
    Json j;
    j["sizes"] = r.sizes;
    j["tol"] = num(r.tol);
    j["essential_interval"] = r.essential_interval
                                  ? Json::array({num(r.essential_interval->first), num(r.essential_interval->second)})
                                  : Json(nullptr);
    Json pts = Json::array();
    for (const auto& p : r.converged_points)
        pts.push_back({{"value", num(p.value)}, {"weight", num(p.weight)}, {"residual", num(p.residual)}});
    j["converged_points"] = pts;
    j["accumulation_estimates"] = num_array_json(r.accumulation_estimates);
    Json ev = Json::array(), wt = Json::array();
    for (const auto& v : r.eigenvalues) ev.push_back(num_array_json(v));
    for (const auto& v : r.weights) wt.push_back(num_array_json(v));
    j["eigenvalues"] = ev;
    j["weights"] = wt;
    return j;
}

static SpectrumReport parse_spectrum(const Json& j) {
    SpectrumReport r;
    r.sizes = field(j, "sizes").get<std::vector<std::size_t>>();
    r.tol = get_num(field(j, "tol"));
    if (const Json& e = field(j, "essential_interval"); !e.is_null()) {
        const auto v = num_array(e);
        if (v.size() != 2) throw InputFileError("'essential_interval' must be [lo, hi]");
        r.essential_interval = std::make_pair(v[0], v[1]);
    }
    for (const auto& p : field(j, "converged_points"))
        r.converged_points.push_back(
            {get_num(field(p, "value")), get_num(field(p, "weight")), get_num(field(p, "residual"))});
    r.accumulation_estimates = num_array(field(j, "accumulation_estimates"));
    for (const auto& v : field(j, "eigenvalues")) r.eigenvalues.push_back(num_array(v));
    for (const auto& v : field(j, "weights")) r.weights.push_back(num_array(v));
    return r;
}

// --- continued-fraction grid -----------------------------------------------

Json to_json(const std::vector<GridPoint>& grid) {
    Json out = Json::array();
    for (const auto& g : grid) {
        out.push_back({{"point", cnum(g.point)},
                       {"order", g.estimate.order},
                       {"value", cnum(g.estimate.value)},
                       {"status", to_string(g.estimate.status)}});
    }
    return out;
}

static std::vector<GridPoint> parse_grid(const Json& j) {
    if (!j.is_array()) throw InputFileError("grid must be an array");
    std::vector<GridPoint> out;
    for (const auto& g : j) {
        GridPoint p;
        p.point = get_cnum(field(g, "point"));
        p.estimate.order = field(g, "order").get<std::size_t>();
        p.estimate.value = get_cnum(field(g, "value"));
        p.estimate.status = enum_from(field(g, "status"),
                                      {LimitStatus::converged, LimitStatus::undetermined, LimitStatus::pole});
        out.push_back(p);
    }
    return out;
}

// --- ratio -----------------------------------------------------------------

Json to_json(const RatioReport<Complex>& r) {
    Json j;
    Json ratios = Json::array();
    for (std::size_t k = 0; k < r.ratios.size(); ++k) ratios.push_back(r.defined[k] ? cnum(r.ratios[k]) : Json(nullptr));
    j["ratios"] = ratios;
    if (r.roots) {
        j["roots"] = {{"xi1", cnum(r.roots->xi1)}, {"xi2", cnum(r.roots->xi2)}, {"regime", to_string(r.roots->regime)}};
    } else {
        j["roots"] = nullptr;
    }
    j["converged"] = r.converged;
    j["converged_at"] = r.converged_at ? Json(*r.converged_at) : Json(nullptr);
    j["limit"] = cnum(r.limit);
    j["residual"] = num(r.residual);
    return j;
}

static RatioReport<Complex> parse_ratio(const Json& j) {
    RatioReport<Complex> r;
    for (const auto& v : field(j, "ratios")) {
        r.defined.push_back(!v.is_null());
        r.ratios.push_back(v.is_null() ? Complex(std::numeric_limits<double>::quiet_NaN()) : get_cnum(v));
    }
    if (const Json& roots = field(j, "roots"); !roots.is_null()) {
        r.roots = PoincareRoots{get_cnum(field(roots, "xi1")), get_cnum(field(roots, "xi2")),
                                enum_from(field(roots, "regime"), {RootRegime::distinct, RootRegime::equal_modulus,
                                                                   RootRegime::boundary})};
    }
    r.converged = field(j, "converged").get<bool>();
    if (const Json& at = field(j, "converged_at"); !at.is_null()) r.converged_at = at.get<std::size_t>();
    r.limit = get_cnum(field(j, "limit"));
    r.residual = get_num(field(j, "residual"));
    return r;
}

// --- Christoffel sums ------------------------------------------------------

Json to_json(const ChristoffelSums& s) {
    Json j;
    j["x"] = num(s.x);
    j["log_sums"] = num_array_json(s.log_sums);
    j["mass_estimate"] = s.log_sums.empty() ? Json(nullptr) : num(s.mass(s.log_sums.size() - 1));
    return j;
}

static ChristoffelSums parse_christoffel(const Json& j) {
    ChristoffelSums s;
    s.x = get_num(field(j, "x"));
    s.log_sums = num_array(field(j, "log_sums"));
    return s;
}

// --- contraction check -----------------------------------------------------

Json to_json(const ContractionCheck& c) {
    return {{"residual", num(c.residual)},
            {"status", to_string(c.status)},
            {"s_value", cnum(c.s_value)},
            {"j_value", cnum(c.j_value)}};
}

static ContractionCheck parse_contraction_check(const Json& j) {
    ContractionCheck c;
    c.residual = get_num(field(j, "residual"));
    c.status = enum_from(field(j, "status"), {ConvergentStatus::ok, ConvergentStatus::pole});
    c.s_value = get_cnum(field(j, "s_value"));
    c.j_value = get_cnum(field(j, "j_value"));
    return c;
}

// --- family catalog --------------------------------------------------------

Json to_json(const FamilyInfo& info) {
    Json params = Json::object();
    for (const auto& [k, v] : info.defaults) params[k] = v;
    Json j;
    j["name"] = info.name;
    j["provenance"] = info.provenance;
    j["constraints"] = info.constraints;
    j["limits"] = info.limits;
    j["coefficients"] = coefficients_to_json(make_family(family_spec(info.name)));
    j["defaults"] = params;
    return j;
}

static FamilyInfo parse_family_info(const Json& j) {
    FamilyInfo info;
    info.name = field(j, "name").get<std::string>();
    info.provenance = field(j, "provenance").get<std::string>();
    info.constraints = field(j, "constraints").get<std::vector<std::string>>();
    info.limits = field(j, "limits").get<std::string>();
    for (const auto& [k, v] : field(j, "defaults").items()) info.defaults[k] = get_num(v);
    return info;
}

// --- eigenspec extras ------------------------------------------------------

Json to_json(const KreinDecay& k) {
    Json bands = Json::array();
    for (const auto& b : k.bands) {
        bands.push_back({{"offset", b.offset},
                         {"settled_at", b.settled_at ? Json(*b.settled_at) : Json(nullptr)},
                         {"tail_max", num_array_json(b.tail_max)}});
    }
    return {{"degree", k.degree},
            {"depth", k.depth},
            {"tol", num(k.tol)},
            {"compact_consistent", k.compact_consistent},
            {"bands", bands}};
}

Json to_json(const GapReport& g) {
    return {{"n", g.n}, {"lo", num(g.lo)}, {"hi", num(g.hi)}, {"count", g.count}, {"max_gap", num(g.max_gap)}};
}

// --- guarded entry points --------------------------------------------------

ClassificationReport classification_from_json(const Json& j) { return guarded("classification", [&] { return parse_classification(j); }); }
SpectrumReport spectrum_from_json(const Json& j) { return guarded("spectrum", [&] { return parse_spectrum(j); }); }
std::vector<GridPoint> grid_from_json(const Json& j) { return guarded("grid", [&] { return parse_grid(j); }); }
RatioReport<Complex> ratio_from_json(const Json& j) { return guarded("ratio", [&] { return parse_ratio(j); }); }
ChristoffelSums christoffel_from_json(const Json& j) { return guarded("christoffel", [&] { return parse_christoffel(j); }); }
ContractionCheck contraction_check_from_json(const Json& j) { return guarded("contraction check", [&] { return parse_contraction_check(j); }); }
FamilyInfo family_info_from_json(const Json& j) { return guarded("family info", [&] { return parse_family_info(j); }); }

}  // namespace jacobi
