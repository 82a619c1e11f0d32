#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "jacobi/cfrac.hpp"
#include "jacobi/coeffs.hpp"
#include "jacobi/eigenspec.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/families.hpp"
#include "jacobi/io.hpp"
#include "jacobi/recurrence.hpp"

namespace jacobi::cli {

namespace {

constexpr int kSchemaVersion = 1;

const char* const kExitCodeFooter =
    "Exit codes:\n"
    "  0  success\n"
    "  1  unexpected internal error\n"
    "  2  bad usage (unknown flag, invalid parameter or option value)\n"
    "  3  bad input file (unreadable, malformed JSON, wrong schema) or unwritable --output\n"
    "  4  numerical failure (an iteration exceeded its cap)\n"
    "  5  unsupported range (arguments outside the range an algorithm supports)";

struct InputOptions {
    std::string family;
    std::string coeff_file;
    std::map<std::string, std::optional<double>> params{{"a", std::nullopt},      {"b", std::nullopt},
                                                        {"nu", std::nullopt},     {"alpha", std::nullopt},
                                                        {"lambda", std::nullopt}, {"mu", std::nullopt},
                                                        {"q", std::nullopt}};
};

struct OutputOptions {
    std::string format = "json";
    std::string output;
};

struct Options {
    InputOptions input;
    OutputOptions output;
    double tol = 1e-12;
    std::vector<std::size_t> sizes{200, 400};
    std::vector<std::size_t> window{500, 1000};
    std::size_t conv_window = kDefaultConvergenceWindow;
    std::size_t max_n = 100000;
    std::size_t n = 0;
    std::vector<std::string> z;
    std::vector<double> grid;
    std::string x;
    double mass_x = 0.0;
    std::string sfrac_file;
    std::string family_name;
};

void add_input(CLI::App* sub, InputOptions& in) {
    sub->add_option("--family", in.family, "built-in family (see 'family list')");
    sub->add_option("--coeff-file", in.coeff_file, "JSON coefficient document");
    for (auto& [key, value] : in.params) {
        sub->add_option_function<double>(
               "--" + key, [&value = value](double v) { value = v; }, "family parameter " + key)
            ->type_name("REAL");
    }
}

void add_output(CLI::App* sub, OutputOptions& out) {
    sub->add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_option("--output", out.output, "write the document to this path instead of stdout");
}

CLI::Option* add_tol(CLI::App* sub, double& tol) {
    return sub->add_option("--tol", tol, "tolerance (> 0)")->capture_default_str();
}

struct ResolvedInput {
    CoefficientSequence seq;
    Json echo;
};

ResolvedInput resolve_input(const InputOptions& in) {
    const bool any_param =
        std::any_of(in.params.begin(), in.params.end(), [](const auto& kv) { return kv.second.has_value(); });
    if (!in.family.empty() && !in.coeff_file.empty())
        throw InvalidInput("give exactly one of --family and --coeff-file");
    if (in.family.empty() && in.coeff_file.empty()) throw InvalidInput("one of --family or --coeff-file is required");
    if (!in.coeff_file.empty()) {
        if (any_param) throw InvalidInput("family parameters cannot be combined with --coeff-file");
        CoefficientSequence c = coefficients_from_json(read_json_file(in.coeff_file));
        return {c, Json{{"coeff_file", in.coeff_file}}};
    }
    std::map<std::string, double> given;
    for (const auto& [k, v] : in.params)
        if (v) given[k] = *v;
    const FamilySpec spec = family_spec(in.family, given);
    Json params = Json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    return {make_family(spec), Json{{"family", spec.name}, {"params", params}}};
}

void check_tol(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidInput("--tol must be a positive finite number");
}

struct Document {
    Json config;
    Json result;
    std::string csv;
};

Document do_classify(const Options& o) {
    check_tol(o.tol);
    if (o.window.size() != 2) throw InvalidInput("--window takes FIRST,LAST");
    const ResolvedInput in = resolve_input(o.input);
    const ClassificationReport r = classify(in.seq, {o.window[0], o.window[1]}, o.tol);
    Document d;
    d.config = {{"input", in.echo}, {"window", o.window}, {"tol", o.tol}};
    d.result = to_json(r);
    std::ostringstream csv;
    const auto& ev = r.evidence;
    csv << "is_compact,is_trace_class,mab_a,mab_b,window_first,window_last,a_mean,b_mean,a_residual,b_residual,"
           "tail_sum,decay_exponent,limits_declared\n";
    csv << to_string(r.is_compact) << ',' << to_string(r.is_trace_class) << ','
        << (r.mab ? format_number(r.mab->first) : "") << ',' << (r.mab ? format_number(r.mab->second) : "") << ','
        << ev.window.first << ',' << ev.window.last << ',' << format_number(ev.a_mean) << ','
        << format_number(ev.b_mean) << ',' << format_number(ev.a_residual) << ',' << format_number(ev.b_residual)
        << ',' << format_number(ev.tail_sum) << ',' << format_number(ev.decay_exponent) << ','
        << (ev.limits_declared ? "true" : "false") << '\n';
    d.csv = csv.str();
    return d;
}

Document do_spectrum(const Options& o) {
    check_tol(o.tol);
    const ResolvedInput in = resolve_input(o.input);
    const SpectrumReport r = spectrum_sweep(in.seq, o.sizes, o.tol);
    Document d;
    d.config = {{"input", in.echo}, {"sizes", o.sizes}, {"tol", o.tol}};
    d.result = to_json(r);
    d.csv = eigen_table_csv(r);
    return d;
}

std::vector<Complex> cf_points(const Options& o) {
    std::vector<Complex> pts;
    for (const auto& s : o.z) pts.push_back(parse_complex(s));
    if (!o.grid.empty()) {
        if (o.grid.size() != 6) throw InvalidInput("--grid takes RE_LO,RE_HI,N_RE,IM_LO,IM_HI,N_IM");
        const auto count = [](double v) {
            if (!(v >= 1.0) || v != std::floor(v) || v > 1e4) throw InvalidInput("--grid counts must be integers in [1, 10000]");
            return static_cast<std::size_t>(v);
        };
        const std::size_t nr = count(o.grid[2]), ni = count(o.grid[5]);
        for (std::size_t i = 0; i < ni; ++i) {
            const double im = ni == 1 ? o.grid[3] : o.grid[3] + (o.grid[4] - o.grid[3]) * i / (ni - 1.0);
            for (std::size_t r = 0; r < nr; ++r) {
                const double re = nr == 1 ? o.grid[0] : o.grid[0] + (o.grid[1] - o.grid[0]) * r / (nr - 1.0);
                pts.emplace_back(re, im);
            }
        }
    }
    if (pts.empty()) pts.emplace_back(2.0, 0.0);
    return pts;
}

Document do_cf(const Options& o) {
    check_tol(o.tol);
    if (o.conv_window == 0) throw InvalidInput("--conv-window must be >= 1");
    if (o.max_n == 0) throw InvalidInput("--max-n must be >= 1");
    const std::vector<Complex> pts = cf_points(o);
    Document d;
    std::optional<FractionRef> frac;
    if (!o.sfrac_file.empty()) {
        const bool any_input = !o.input.family.empty() || !o.input.coeff_file.empty();
        if (any_input) throw InvalidInput("--sfrac-file cannot be combined with --family or --coeff-file");
        frac = sfraction_from_json(read_json_file(o.sfrac_file));
        d.config["input"] = {{"sfrac_file", o.sfrac_file}};
        d.config["variable"] = "t";
    } else {
        const ResolvedInput in = resolve_input(o.input);
        frac = to_jfraction(in.seq);
        d.config["input"] = in.echo;
        d.config["variable"] = "z";
    }
    Json points = Json::array();
    for (const auto& p : pts) points.push_back(Json::array({p.real(), p.imag()}));
    d.config["points"] = points;
    d.config["tol"] = o.tol;
    d.config["max_n"] = o.max_n;
    d.config["conv_window"] = o.conv_window;

    std::vector<GridPoint> grid;
    for (const auto& p : pts) grid.push_back({p, estimate_limit(*frac, p, o.tol, o.max_n, o.conv_window)});
    d.result = to_json(grid);
    d.csv = grid_to_csv(grid);
    return d;
}

Document do_ratio(const Options& o) {
    check_tol(o.tol);
    if (o.conv_window == 0) throw InvalidInput("--conv-window must be >= 1");
    const std::size_t n = o.n == 0 ? 200 : o.n;
    const Complex x = parse_complex(o.x.empty() ? "2" : o.x);
    const ResolvedInput in = resolve_input(o.input);
    const RatioReport<Complex> r = ratio_sequence(in.seq, x, n, o.tol, o.conv_window);
    Document d;
    d.config = {{"input", in.echo},
                {"x", Json::array({x.real(), x.imag()})},
                {"n", n},
                {"tol", o.tol},
                {"conv_window", o.conv_window}};
    d.result = to_json(r);
    std::ostringstream csv;
    csv << "k,re_ratio,im_ratio,defined\n";
    for (std::size_t k = 0; k < r.ratios.size(); ++k) {
        csv << k << ',' << format_number(r.ratios[k].real()) << ',' << format_number(r.ratios[k].imag()) << ','
            << (r.defined[k] ? "true" : "false") << '\n';
    }
    d.csv = csv.str();
    return d;
}

Document do_mass(const Options& o) {
    const std::size_t n = o.n == 0 ? 1000 : o.n;
    if (!std::isfinite(o.mass_x)) throw InvalidInput("--x must be finite");
    const ResolvedInput in = resolve_input(o.input);
    const ChristoffelSums s = christoffel_mass(in.seq, o.mass_x, n);
    Document d;
    d.config = {{"input", in.echo}, {"x", o.mass_x}, {"n", n}};
    d.result = to_json(s);
    std::ostringstream csv;
    csv << "k,log_sum,mass\n";
    for (std::size_t k = 0; k < s.log_sums.size(); ++k)
        csv << k << ',' << format_number(s.log_sums[k]) << ',' << format_number(s.mass(k)) << '\n';
    d.csv = csv.str();
    return d;
}

Document do_contract_check(const Options& o) {
    if (o.sfrac_file.empty()) throw InvalidInput("contract-check needs --sfrac-file");
    const std::size_t n = o.n == 0 ? 10 : o.n;
    const Complex z = parse_complex(o.x.empty() ? "2" : o.x);
    const SFraction s = sfraction_from_json(read_json_file(o.sfrac_file));
    const ContractionCheck c = check_contraction(s, z, n);
    Document d;
    d.config = {{"input", {{"sfrac_file", o.sfrac_file}}}, {"n", n}, {"z", Json::array({z.real(), z.imag()})}};
    d.result = to_json(c);
    std::ostringstream csv;
    csv << "n,re_z,im_z,residual,status\n"
        << n << ',' << format_number(z.real()) << ',' << format_number(z.imag()) << ',' << format_number(c.residual)
        << ',' << to_string(c.status) << '\n';
    d.csv = csv.str();
    return d;
}

Document do_family_list() {
    Document d;
    d.config = Json::object();
    Json list = Json::array();
    std::ostringstream csv;
    csv << "name,limits,provenance\n";
    for (const auto& name : family_names()) {
        const FamilyInfo& info = family_info(name);
        list.push_back({{"name", name}, {"limits", info.limits}, {"provenance", info.provenance}});
        csv << name << ',' << '"' << info.limits << '"' << ',' << '"' << info.provenance << '"' << '\n';
    }
    d.result = {{"families", list}};
    d.csv = csv.str();
    return d;
}

Document do_family_info(const std::string& name) {
    const FamilyInfo& info = family_info(name);
    Document d;
    d.config = {{"name", name}};
    d.result = to_json(info);
    std::ostringstream csv;
    csv << "parameter,default\n";
    for (const auto& [k, v] : info.defaults) csv << k << ',' << format_number(v) << '\n';
    d.csv = csv.str();
    return d;
}

void emit(const std::string& command, const Document& doc, const OutputOptions& out_opts, std::ostream& out) {
    std::string text;
    if (out_opts.format == "csv") {
        text = doc.csv;
    } else {
        Json j;
        j["schema_version"] = kSchemaVersion;
        j["command"] = command;
        Json config = doc.config;
        config["format"] = out_opts.format;
        j["config"] = config;
        j["result"] = doc.result;
        text = j.dump(2) + "\n";
    }
    if (out_opts.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_opts.output, std::ios::binary);
    if (!f) throw InputFileError("cannot open '" + out_opts.output + "' for writing");
    f << text;
    if (!f) throw InputFileError("failed writing '" + out_opts.output + "'");
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputFileError*>(&e)) return kBadInputFile;
    if (dynamic_cast<const InvalidInput*>(&e)) return kBadUsage;
    if (dynamic_cast<const NumericalFailure*>(&e)) return kNumericalFailure;
    if (dynamic_cast<const UnsupportedRange*>(&e)) return kUnsupportedRange;
    return kFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral analysis of infinite Jacobi matrices", "jacobi-spectra"};
    app.footer(kExitCodeFooter);
    app.require_subcommand(1);
    Options o;

    auto* classify_cmd = app.add_subcommand("classify", "compactness, trace class and M(a,b) membership");
    add_input(classify_cmd, o.input);
    add_output(classify_cmd, o.output);
    add_tol(classify_cmd, o.tol);
    classify_cmd->add_option("--window", o.window, "index window FIRST,LAST for tail statistics")
        ->delimiter(',')
        ->expected(2)
        ->capture_default_str();

    auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and weights of nested truncations");
    add_input(spectrum_cmd, o.input);
    add_output(spectrum_cmd, o.output);
    add_tol(spectrum_cmd, o.tol);
    spectrum_cmd->add_option("--sizes", o.sizes, "strictly increasing truncation sizes")
        ->delimiter(',')
        ->capture_default_str();

    auto* cf_cmd = app.add_subcommand("cf", "continued-fraction limits at points or on a grid");
    add_input(cf_cmd, o.input);
    add_output(cf_cmd, o.output);
    add_tol(cf_cmd, o.tol);
    cf_cmd->add_option("--sfrac-file", o.sfrac_file, "S-fraction document (points are then values of t)");
    cf_cmd->add_option("--z", o.z, "evaluation point, e.g. 2 or 3+1i (repeatable; default 2)");
    cf_cmd->add_option("--grid", o.grid, "RE_LO,RE_HI,N_RE,IM_LO,IM_HI,N_IM")->delimiter(',');
    cf_cmd->add_option("--max-n", o.max_n, "maximum convergent order")->capture_default_str();
    cf_cmd->add_option("--conv-window", o.conv_window, "consecutive small differences required")
        ->capture_default_str();

    auto* ratio_cmd = app.add_subcommand("ratio", "ratio asymptotics p_{k+1}(x)/p_k(x)");
    add_input(ratio_cmd, o.input);
    add_output(ratio_cmd, o.output);
    add_tol(ratio_cmd, o.tol);
    ratio_cmd->add_option("--x", o.x, "evaluation point, real or complex (default 2)");
    ratio_cmd->add_option("--n", o.n, "number of ratios (default 200)");
    ratio_cmd->add_option("--conv-window", o.conv_window, "consecutive small differences required")
        ->capture_default_str();

    auto* mass_cmd = app.add_subcommand("mass", "Christoffel sums sum_k p_k(x)^2");
    add_input(mass_cmd, o.input);
    add_output(mass_cmd, o.output);
    mass_cmd->add_option("--x", o.mass_x, "real evaluation point")->capture_default_str();
    mass_cmd->add_option("--n", o.n, "highest degree (default 1000)");

    auto* family_cmd = app.add_subcommand("family", "built-in family catalog");
    family_cmd->require_subcommand(1);
    auto* family_list = family_cmd->add_subcommand("list", "list families");
    add_output(family_list, o.output);
    auto* family_show = family_cmd->add_subcommand("info", "parameters and defaults of one family");
    family_show->add_option("name", o.family_name, "family name")->required();
    add_output(family_show, o.output);

    auto* contract_cmd = app.add_subcommand("contract-check", "compare S-convergents with the contracted J-fraction");
    add_output(contract_cmd, o.output);
    contract_cmd->add_option("--sfrac-file", o.sfrac_file, "positive-real S-fraction document")->required();
    contract_cmd->add_option("--n", o.n, "J-fraction order (default 10)");
    contract_cmd->add_option("--z", o.x, "evaluation point, real or complex (default 2)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadUsage;
    }

    try {
        std::string command;
        Document doc;
        if (classify_cmd->parsed()) {
            command = "classify";
            doc = do_classify(o);
        } else if (spectrum_cmd->parsed()) {
            command = "spectrum";
            doc = do_spectrum(o);
        } else if (cf_cmd->parsed()) {
            command = "cf";
            doc = do_cf(o);
        } else if (ratio_cmd->parsed()) {
            command = "ratio";
            doc = do_ratio(o);
        } else if (mass_cmd->parsed()) {
            command = "mass";
            doc = do_mass(o);
        } else if (family_list->parsed()) {
            command = "family list";
            doc = do_family_list();
        } else if (family_show->parsed()) {
            command = "family info";
            doc = do_family_info(o.family_name);
        } else {
            command = "contract-check";
            doc = do_contract_check(o);
        }
        emit(command, doc, o.output, out);
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

}  // namespace jacobi::cli
