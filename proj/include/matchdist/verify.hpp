#pragma once

#include "matchdist/high_precision.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace matchdist {

struct VerifyOptions {
    int digits = kDefaultDigits;
    std::uint64_t seed = 20240601;
    unsigned workers = 1;
    /// Run only the property with this name.
    std::optional<std::string> only;
};

struct PropertyOutcome {
    std::string name;
    bool pass = false;
    /// Count of grid points / cases examined.
    std::size_t cases = 0;
    /// First failure, or a short summary on success.
    std::string detail;
    double seconds = 0.0;
};

struct Property {
    std::string name;
    std::string summary;
    std::function<PropertyOutcome(const VerifyOptions&)> run;
};

/// Every invariant of the library as a named, independently runnable check.
const std::vector<Property>& property_catalog();

/// Runs the catalog (or just opts.only). Throws std::invalid_argument when
/// opts.only names no property.
std::vector<PropertyOutcome> run_properties(const VerifyOptions& opts);

}  // namespace matchdist
