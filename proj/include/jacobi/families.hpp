#pragma once

// Reference families with known spectra, and a Bessel function oracle.

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "jacobi/coeffs.hpp"

namespace jacobi {

struct FamilySpec {
    std::string name;
    std::map<std::string, double> params;
    std::string provenance;
};

struct FamilyInfo {
    std::string name;
    std::string provenance;
    std::map<std::string, double> defaults;
    std::vector<std::string> constraints;  // human-readable parameter domains
    std::string limits;                     // declared limits as a formula
};

// chebyshev, lommel, tricomi_carlitz, natvig, chihara_ismail, rogers_ramanujan
const std::vector<std::string>& family_names();
const FamilyInfo& family_info(std::string_view name);

// Fills in defaults for missing parameters and rejects unknown ones.
FamilySpec family_spec(std::string_view name, const std::map<std::string, double>& params = {});

// Throws InvalidInput naming the violated constraint.
CoefficientSequence make_family(const FamilySpec& spec);

// 1 / (1 + q t / (1 + q^2 t / (1 + ...))), i.e. b_0 = 1, b_k = q^k.
SFraction rogers_ramanujan_sfraction(double q);

// J_nu(x) for 0 <= nu <= 20, 0 <= x <= 1000; UnsupportedRange otherwise.
// Power series for x <= 12, normalized backward recurrence above.
double bessel_j(double nu, double x);

// k-th positive zero of J_nu, 0 <= nu <= 10, 1 <= k <= 300.
double bessel_zero(double nu, std::size_t k);

}  // namespace jacobi
