#pragma once

#include <string>
#include <vector>

#include "nlheat/report.hpp"

namespace nlheat {

struct SuiteConfig {
    std::string spec_text = "fractional:alpha=1";
    int dim = 1;
    std::uint64_t seed = 2024;
    int jobs = 2;
    std::size_t oracle_samples = 200000;

    nlohmann::json to_json() const;
    static SuiteConfig from_json(const nlohmann::json& j);
};

/// Named verification suites behind the `verify` subcommand; "all" chains
/// every other one.
VerificationReport run_suite(const std::string& name, const SuiteConfig& cfg);

/// (name, headline estimate) pairs for --list.
const std::vector<std::pair<std::string, std::string>>& suite_catalog();

}  // namespace nlheat
