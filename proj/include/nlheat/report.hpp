#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace nlheat {

/// One verified estimate: the checked inequality or identity as a formula
/// string, the fitted constants, the residual against its tolerance.
struct CheckRecord {
    std::string name;
    std::string anchor;
    std::map<std::string, double> constants;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerificationReport {
    std::string suite;
    std::string spec_name;
    std::string grid_desc;
    std::uint64_t seed = 0;
    std::vector<CheckRecord> checks;
    double seconds = 0.0;

    bool pass() const;
    nlohmann::json to_json() const;
};

CheckRecord make_check(std::string name, std::string anchor, double residual,
                       double tolerance, bool pass,
                       std::map<std::string, double> constants = {});

}  // namespace nlheat
