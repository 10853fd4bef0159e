#include "nlheat/report.hpp"

namespace nlheat {

bool VerificationReport::pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["spec"] = spec_name;
    j["grid"] = grid_desc;
    j["seed"] = seed;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json jc;
        jc["name"] = c.name;
        jc["anchor"] = c.anchor;
        jc["constants"] = c.constants;
        jc["residual"] = c.residual;
        jc["tolerance"] = c.tolerance;
        jc["pass"] = c.pass;
        j["checks"].push_back(jc);
    }
    j["pass"] = pass();
    j["seconds"] = seconds;
    return j;
}

CheckRecord make_check(std::string name, std::string anchor, double residual,
                       double tolerance, bool pass,
                       std::map<std::string, double> constants) {
    CheckRecord c;
    c.name = std::move(name);
    c.anchor = std::move(anchor);
    c.constants = std::move(constants);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = pass;
    return c;
}

}  // namespace nlheat
