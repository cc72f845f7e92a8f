#pragma once

#include <json.hpp>

#include "hsys/spectral.hpp"

namespace hsys::spectral {

/// Numbers stay numbers when finite; non-finite values become "inf", "-inf"
/// or "nan" strings so the output is valid JSON.
nlohmann::ordered_json json_number(double x);

nlohmann::ordered_json report_to_json(const SpectrumReport& report);

}  // namespace hsys::spectral
