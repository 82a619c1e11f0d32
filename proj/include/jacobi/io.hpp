#pragma once

// Text formats: shortest round-trip numbers, JSON documents for coefficient
// sequences, S-fractions and every result type.

#include <string>
#include <vector>

#include <json.hpp>

#include "jacobi/cfrac.hpp"
#include "jacobi/coeffs.hpp"
#include "jacobi/eigenspec.hpp"
#include "jacobi/families.hpp"
#include "jacobi/recurrence.hpp"

namespace jacobi {

using Json = nlohmann::ordered_json;

// Shortest decimal string that parses back to the same double.
std::string format_number(double v);
std::string format_number(const Complex& v);  // "re+imi"

// Accepts "x", "x+yi", "x-yi", "yi".
Complex parse_complex(const std::string& text);

// {"kind": "table", "diag": [...], "offdiag": [...], "limits": [a, b]?}
// {"kind": "rule", "family": name, "params": {...}, "limits": [a, b]}
Json coefficients_to_json(const CoefficientSequence& c);
CoefficientSequence coefficients_from_json(const Json& j);

// {"kind": "positive-real", "terms": [...], "tail": x?}
// {"kind": "complex", "terms": [[re, im], ...], "tail": [re, im]?}
SFraction sfraction_from_json(const Json& j);

// Reads and parses a JSON file; InputFileError on I/O or syntax problems.
Json read_json_file(const std::string& path);

Json to_json(const ClassificationReport& r);
ClassificationReport classification_from_json(const Json& j);

Json to_json(const SpectrumReport& r);
SpectrumReport spectrum_from_json(const Json& j);

Json to_json(const std::vector<GridPoint>& grid);
std::vector<GridPoint> grid_from_json(const Json& j);

Json to_json(const RatioReport<Complex>& r);
RatioReport<Complex> ratio_from_json(const Json& j);

Json to_json(const ChristoffelSums& s);
ChristoffelSums christoffel_from_json(const Json& j);

Json to_json(const ContractionCheck& c);
ContractionCheck contraction_check_from_json(const Json& j);

Json to_json(const FamilyInfo& info);
FamilyInfo family_info_from_json(const Json& j);

Json to_json(const KreinDecay& k);
Json to_json(const GapReport& g);

}  // namespace jacobi
