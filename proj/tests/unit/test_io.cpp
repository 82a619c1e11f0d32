#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "jacobi/errors.hpp"
#include "jacobi/io.hpp"
#include "support.hpp"

using namespace jacobi;

TEST_CASE("number formatting is shortest round-trip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-2.5e-300) == "-2.5e-300");
    CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    testing::Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double v = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.uniform(-200.0, 200.0));
        CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(Complex(1.5, -2.0)) == "1.5-2i");
    CHECK(format_number(Complex(0.0, 0.25)) == "0+0.25i");
}

TEST_CASE("complex parsing") {
    CHECK(parse_complex("2") == Complex(2.0, 0.0));
    CHECK(parse_complex("3+1i") == Complex(3.0, 1.0));
    CHECK(parse_complex("3-0.5i") == Complex(3.0, -0.5));
    CHECK(parse_complex("-2i") == Complex(0.0, -2.0));
    CHECK(parse_complex("i") == Complex(0.0, 1.0));
    CHECK(parse_complex("1e-3+2e+2i") == Complex(1e-3, 200.0));
    CHECK(parse_complex(" 1 + 2i ") == Complex(1.0, 2.0));
    CHECK(parse_complex(format_number(Complex(-0.1, 7.25))) == Complex(-0.1, 7.25));
    CHECK_THROWS_AS(parse_complex(""), InvalidInput);
    CHECK_THROWS_AS(parse_complex("abc"), InvalidInput);
    CHECK_THROWS_AS(parse_complex("1+2j"), InvalidInput);
    CHECK_THROWS_AS(parse_complex("1+xi"), InvalidInput);
}

TEST_CASE("coefficient documents") {
    SUBCASE("table round-trip") {
        const auto c = CoefficientSequence::from_table({0.1, 0.2, 0.3}, {1.0, 0.5}, Limits{0.5, 0.0});
        const Json j = coefficients_to_json(c);
        CHECK(j["kind"] == "table");
        const auto back = coefficients_from_json(j);
        for (std::size_t n = 0; n < 10; ++n) CHECK(back.diag(n) == c.diag(n));
        for (std::size_t n = 1; n < 10; ++n) CHECK(back.offdiag(n) == c.offdiag(n));
        CHECK(coefficients_to_json(back) == j);
    }
    SUBCASE("rule round-trip") {
        const auto c = make_family(family_spec("lommel", {{"nu", 2.5}}));
        const Json j = coefficients_to_json(c);
        CHECK(j["family"] == "lommel");
        CHECK(j["params"]["nu"] == 2.5);
        const auto back = coefficients_from_json(j);
        CHECK(back.offdiag(7) == c.offdiag(7));
        CHECK(coefficients_to_json(back) == j);
    }
    SUBCASE("rule with mismatched limits") {
        const Json j = Json::parse(R"({"kind":"rule","family":"lommel","params":{"nu":1},"limits":[1,0]})");
        CHECK_THROWS_AS(coefficients_from_json(j), InputFileError);
    }
    SUBCASE("opaque rules cannot be written") {
        CHECK_THROWS_AS(coefficients_to_json(testing::perturbed_chebyshev()), InvalidInput);
    }
    SUBCASE("malformed documents") {
        CHECK_THROWS_AS(coefficients_from_json(Json::parse(R"({"kind":"table","diag":[1]})")), InputFileError);
        CHECK_THROWS_AS(coefficients_from_json(Json::parse(R"({"kind":"spline"})")), InputFileError);
        CHECK_THROWS_AS(coefficients_from_json(Json::parse(R"({"kind":"table","diag":["x"],"offdiag":[1]})")),
                        InputFileError);
        CHECK_THROWS_AS(coefficients_from_json(Json::parse(R"([1,2])")), InputFileError);
        CHECK_THROWS_AS(coefficients_from_json(Json::parse(R"({"kind":"table","diag":[0],"offdiag":[-1]})")),
                        InvalidInput);
    }
}

TEST_CASE("S-fraction documents") {
    const auto s = sfraction_from_json(Json::parse(R"({"kind":"positive-real","terms":[1,2,3],"tail":0.5})"));
    CHECK(s.kind() == SKind::positive_real);
    CHECK(s.term(2) == Complex(3.0));
    CHECK(s.term(9) == Complex(0.5));
    const auto cx = sfraction_from_json(Json::parse(R"({"kind":"complex","terms":[[1,0],[0,2]]})"));
    CHECK(cx.kind() == SKind::complex);
    CHECK(cx.term(1) == Complex(0.0, 2.0));
    CHECK_THROWS_AS(sfraction_from_json(Json::parse(R"({"kind":"complex","terms":[[1,0,3]]})")), InputFileError);
    CHECK_THROWS_AS(sfraction_from_json(Json::parse(R"({"kind":"positive-real","terms":[]})")), InputFileError);
    CHECK_THROWS_AS(sfraction_from_json(Json::parse(R"({"kind":"positive-real","terms":[1,-1]})")), InvalidInput);
}

TEST_CASE("files") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/x.json"), InputFileError);
    const std::string path = "test_io_tmp.json";
    {
        std::ofstream out(path);
        out << "{ not json";
    }
    CHECK_THROWS_AS(read_json_file(path), InputFileError);
    {
        std::ofstream out(path);
        out << R"({"kind":"positive-real","terms":[1]})";
    }
    CHECK(read_json_file(path)["terms"][0] == 1);
    std::remove(path.c_str());
}

TEST_CASE("report round-trips are fixpoints") {
    const auto lommel = make_family(family_spec("lommel"));

    const Json cj = to_json(classify(lommel, {500, 1000}, 1e-12));
    CHECK(to_json(classification_from_json(cj)) == cj);
    CHECK(cj["is_compact"] == "yes");

    const Json sj = to_json(spectrum_sweep(lommel, {40, 80}, 1e-10));
    CHECK(to_json(spectrum_from_json(sj)) == sj);

    std::vector<GridPoint> grid;
    for (double z : {2.0, 3.0}) grid.push_back({Complex(z, 0.5), estimate_limit(to_jfraction(lommel), Complex(z, 0.5), 1e-12, 500)});
    const Json gj = to_json(grid);
    CHECK(to_json(grid_from_json(gj)) == gj);

    const Json rj = to_json(ratio_sequence(lommel, Complex(0.0, 0.0), 6));  // p_1(0) = 0: NaN entries
    CHECK(to_json(ratio_from_json(rj)) == rj);
    CHECK(rj.dump().find("null") != std::string::npos);

    const Json mj = to_json(christoffel_mass(lommel, 0.2, 50));
    CHECK(to_json(christoffel_from_json(mj)) == mj);

    const Json kj = to_json(check_contraction(SFraction::positive_table({1.0, 0.5, 0.25}), Complex(2.0, 1.0), 3));
    CHECK(to_json(contraction_check_from_json(kj)) == kj);

    for (const auto& n : family_names()) {
        const Json fj = to_json(family_info(n));
        CHECK(to_json(family_info_from_json(fj)) == fj);
        CHECK(fj.contains("coefficients"));
    }

    const Json kd = to_json(krein_gj_decay(testing::alternating_two_point(), KreinPolynomial({-1.0, 1.0}), 50));
    CHECK(kd["bands"].size() == 5);
    const Json gap = to_json(zero_gap_density(make_family(family_spec("chebyshev")), 200, -0.5, 0.5));
    CHECK(gap["max_gap"].get<double>() > 0.0);

    CHECK_THROWS_AS(classification_from_json(Json::parse(R"({"is_compact":"perhaps"})")), InputFileError);
    CHECK_THROWS_AS(spectrum_from_json(Json::parse("[]")), InputFileError);
}
