#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "nlheat/comparison_phi.hpp"
#include "nlheat/heat_kernel.hpp"
#include "nlheat/io.hpp"
#include "nlheat/mc_oracle.hpp"
#include "nlheat/solver.hpp"
#include "nlheat/suites.hpp"

using namespace nlheat;

namespace {

// exit-code contract: 0 pass, 1 check failure, 2 usage/config error,
// 3 numerical-infrastructure failure
constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct GridOpts {
    int dim = 1;
    int nodes = 0;
    double half_width = 0.0;

    Grid grid() const {
        Grid g = Grid::defaults(dim);
        if (nodes > 0) g.nodes_per_axis = nodes;
        if (half_width > 0.0) g.half_width = half_width;
        return g;
    }
};

void add_grid_options(CLI::App* cmd, GridOpts& go) {
    cmd->add_option("--d", go.dim, "dimension (1-3)")->check(CLI::Range(1, 3));
    cmd->add_option("--grid-n", go.nodes, "nodes per axis (power of two)");
    cmd->add_option("--grid-l", go.half_width, "box half-width");
}

std::vector<double> parse_times(const std::string& text) {
    std::vector<double> times;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const auto comma = text.find(',', pos);
        times.push_back(std::stod(text.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return times;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heat kernels and Cauchy problems for symmetric Levy operators"};
    app.require_subcommand(1);

    auto* sym = app.add_subcommand("symbol", "sample the Fourier symbol on the dual grid");
    std::string sym_spec = "fractional:alpha=1";
    GridOpts sym_grid;
    std::string sym_out = "symbol.csv";
    sym->add_option("--spec", sym_spec, "kernel, e.g. fractional:alpha=1");
    add_grid_options(sym, sym_grid);
    sym->add_option("--out", sym_out, "output CSV path");

    auto* hk = app.add_subcommand("heatkernel", "build a heat kernel field");
    std::string hk_spec = "fractional:alpha=1";
    GridOpts hk_grid;
    double hk_t = 1.0;
    std::string hk_out = "kernel.nlhk";
    std::string hk_route = "fourier";
    bool hk_csv = false;
    hk->add_option("--spec", hk_spec, "kernel spec");
    add_grid_options(hk, hk_grid);
    hk->add_option("--t", hk_t, "time")->check(CLI::PositiveNumber);
    hk->add_option("--route", hk_route, "fourier | subordination | mixed | gaussian");
    hk->add_option("--out", hk_out, "output path");
    hk->add_flag("--csv", hk_csv, "write CSV instead of the binary format");

    auto* ap = app.add_subcommand("apply", "apply the operator to a stored field");
    std::string ap_spec = "fractional:alpha=1";
    std::string ap_in, ap_out = "image.nlhk";
    std::string ap_variant = "pure_jump";
    int ap_jobs = 2;
    ap->add_option("--spec", ap_spec, "kernel spec");
    ap->add_option("--in", ap_in, "input field (binary format)")->required();
    ap->add_option("--out", ap_out, "output field path");
    ap->add_option("--variant", ap_variant, "pure_jump | mixed");
    ap->add_option("--jobs", ap_jobs, "worker threads");

    auto* so = app.add_subcommand("solve", "Cauchy problem via the representation formula");
    std::string so_spec = "fractional:alpha=1";
    GridOpts so_grid;
    std::string so_measure;
    std::string so_times = "0.5,1.0";
    std::string so_prefix = "solution";
    so->add_option("--spec", so_spec, "kernel spec");
    add_grid_options(so, so_grid);
    so->add_option("--measure", so_measure, "measure JSON path")->required();
    so->add_option("--times", so_times, "comma-separated times");
    so->add_option("--out-prefix", so_prefix, "field files are <prefix>_<k>.nlhk");

    auto* ph = app.add_subcommand("phi", "comparison function samples and constants");
    std::string ph_spec = "fractional:alpha=1";
    std::string ph_csv = "phi.csv", ph_json = "phi.json";
    ph->add_option("--spec", ph_spec, "kernel spec");
    ph->add_option("--csv", ph_csv, "samples CSV path");
    ph->add_option("--json", ph_json, "constants JSON path");

    auto* orc = app.add_subcommand("oracle", "Monte Carlo cross-validation");
    std::string orc_spec = "fractional:alpha=1";
    GridOpts orc_grid;
    std::size_t orc_n = 200000;
    std::uint64_t orc_seed = 2024;
    int orc_jobs = 2;
    std::string orc_json = "oracle.json";
    std::string orc_samples_out;
    orc->add_option("--spec", orc_spec, "kernel spec");
    add_grid_options(orc, orc_grid);
    orc->add_option("--n", orc_n, "sample count (>= 1e4)");
    orc->add_option("--seed", orc_seed, "64-bit seed");
    orc->add_option("--jobs", orc_jobs, "worker threads");
    orc->add_option("--json", orc_json, "comparison JSON path");
    orc->add_option("--samples-out", orc_samples_out, "optional binary sample dump");

    auto* ve = app.add_subcommand("verify", "run a named verification suite");
    std::string ve_suite;
    std::string ve_config;
    SuiteConfig cfg;
    bool ve_list = false, ve_print = false;
    ve->add_option("suite", ve_suite, "suite name (see --list)");
    ve->add_option("--spec", cfg.spec_text, "kernel spec");
    ve->add_option("--d", cfg.dim, "dimension")->check(CLI::Range(1, 3));
    ve->add_option("--seed", cfg.seed, "64-bit seed");
    ve->add_option("--jobs", cfg.jobs, "worker threads");
    ve->add_option("--oracle-samples", cfg.oracle_samples, "Monte Carlo sample count");
    ve->add_option("--config", ve_config, "JSON config; flags override file values");
    ve->add_flag("--list", ve_list, "print the suite/anchor table");
    ve->add_flag("--print-config", ve_print, "print the effective config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (sym->parsed()) {
            const auto spec = spec_from_string(sym_spec, sym_grid.dim);
            const auto sf = symbol_grid(spec, sym_grid.grid());
            write_symbol_csv(sym_out, sf);
            std::cout << "wrote " << sym_out << " (achieved tol " << sf.achieved_tol
                      << ")\n";
            return kExitPass;
        }

        if (hk->parsed()) {
            const Grid g = hk_grid.grid();
            KernelField kf;
            if (hk_route == "fourier") {
                kf = kernel_fourier_inversion(spec_from_string(hk_spec, g.dim), hk_t, g);
            } else if (hk_route == "subordination") {
                kf = subordinated_fractional_kernel(1.0, hk_t, g);
            } else if (hk_route == "mixed") {
                kf = mixed_kernel(spec_from_string(hk_spec, g.dim), hk_t, g);
            } else if (hk_route == "gaussian") {
                kf = gaussian_kernel(hk_t, g);
            } else {
                std::cerr << "unknown route " << hk_route << "\n";
                return kExitUsage;
            }
            if (hk_csv)
                write_field_csv(hk_out, kf.field);
            else
                write_field_binary(hk_out, kf.field, hk_t);
            std::cout << "wrote " << hk_out << " (mass " << kf.mass << ")\n";
            return kExitPass;
        }

        if (ap->parsed()) {
            const auto lf = read_field_binary(ap_in);
            const auto spec = spec_from_string(ap_spec, lf.field.grid().dim);
            OperatorSpec op = (ap_variant == "mixed") ? OperatorSpec::mixed(spec)
                                                      : OperatorSpec::pure_jump(spec);
            const Field image = apply_levy(op, lf.field, ap_jobs);
            write_field_binary(ap_out, image, lf.time);
            std::cout << "wrote " << ap_out << "\n";
            return kExitPass;
        }

        if (so->parsed()) {
            const Grid g = so_grid.grid();
            const auto spec = spec_from_string(so_spec, g.dim);
            std::ifstream in(so_measure);
            if (!in) {
                std::cerr << "cannot open " << so_measure << "\n";
                return kExitUsage;
            }
            nlohmann::json jm;
            in >> jm;
            const auto mu = measure_from_json(jm, g);
            const auto times = parse_times(so_times);
            const auto u = solve_rf(mu, spec, times, g);

            nlohmann::json summary;
            summary["measure"] = mu.name;
            summary["growth_value"] =
                growth_check(mu, kernel_fourier_inversion(spec, 1.0, g)).value;
            summary["times"] = times;
            bool positive = true;
            nlohmann::json masses = nlohmann::json::array();
            for (std::size_t k = 0; k < u.slices.size(); ++k) {
                masses.push_back(u.slices[k].integral());
                for (double v : u.slices[k].values()) positive = positive && v >= 0.0;
                write_field_binary(so_prefix + "_" + std::to_string(k) + ".nlhk",
                                   u.slices[k], times[k]);
            }
            summary["mass"] = masses;
            summary["positive"] = positive;
            std::ofstream outj(so_prefix + "_summary.json");
            outj << summary.dump(2) << "\n";
            std::cout << summary.dump(2) << "\n";
            return kExitPass;
        }

        if (ph->parsed()) {
            const auto spec = spec_from_string(ph_spec, 1);
            auto phi = build_phi(spec);
            const auto op = OperatorSpec::pure_jump(spec);
            std::vector<SpaceBump> psis{{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 1}};
            const auto bounds = verify_phi_bounds(phi, op, psis);

            std::ofstream csv(ph_csv);
            csv << "r,phi,phi_d1,phi_d2\n";
            for (int i = 0; i <= 400; ++i) {
                const double r = std::max(0.05 * i, 1e-12);
                csv << r << "," << phi.radial_value(0, r) << "," << phi.radial_d1(0, r)
                    << "," << phi.radial_d2(0, r) << "\n";
            }
            nlohmann::json j;
            j["levy_bound"] = bounds.levy_ratio;
            j["bilinear_bound"] = bounds.bilinear_ratio;
            j["near_ratio"] = bounds.near_ratio;
            j["far_ratio"] = bounds.far_ratio;
            std::ofstream outj(ph_json);
            outj << j.dump(2) << "\n";
            std::cout << j.dump(2) << "\n";
            return kExitPass;
        }

        if (orc->parsed()) {
            const Grid g = orc_grid.grid();
            const auto spec = spec_from_string(orc_spec, g.dim);
            SimulationPlan plan;
            plan.spec = spec;
            plan.samples = orc_n;
            plan.seed = orc_seed;
            plan.jobs = orc_jobs;
            const auto samples = simulate_levy(plan);
            if (!orc_samples_out.empty()) {
                std::ofstream bin(orc_samples_out, std::ios::binary);
                for (const Vec& p : samples.positions)
                    bin.write(reinterpret_cast<const char*>(p.data()),
                              static_cast<std::streamsize>(g.dim * sizeof(double)));
            }
            const auto ref = kernel_fourier_inversion(spec, plan.horizon, g);
            const auto cmp =
                compare_density(samples, g, 4.0 * g.spacing(), ref, orc_seed + 1);
            nlohmann::json j;
            j["l1_distance"] = cmp.l1_distance;
            j["ci"] = {cmp.ci_lower, cmp.ci_upper};
            j["samples"] = orc_n;
            j["jump_rate"] = samples.jump_rate;
            std::ofstream outj(orc_json);
            outj << j.dump(2) << "\n";
            std::cout << j.dump(2) << "\n";
            return kExitPass;
        }

        if (ve->parsed()) {
            if (ve_list) {
                for (const auto& [name, anchor] : suite_catalog())
                    std::cout << name << "\t" << anchor << "\n";
                return kExitPass;
            }
            if (!ve_config.empty()) {
                std::ifstream in(ve_config);
                if (!in) {
                    std::cerr << "cannot open config " << ve_config << "\n";
                    return kExitUsage;
                }
                nlohmann::json jc;
                in >> jc;
                const SuiteConfig file_cfg = SuiteConfig::from_json(jc);
                if (ve->get_option("--spec")->count() == 0)
                    cfg.spec_text = file_cfg.spec_text;
                if (ve->get_option("--d")->count() == 0) cfg.dim = file_cfg.dim;
                if (ve->get_option("--seed")->count() == 0) cfg.seed = file_cfg.seed;
                if (ve->get_option("--jobs")->count() == 0) cfg.jobs = file_cfg.jobs;
                if (ve->get_option("--oracle-samples")->count() == 0)
                    cfg.oracle_samples = file_cfg.oracle_samples;
            }
            if (ve_print) {
                std::cout << cfg.to_json().dump(2) << "\n";
                return kExitPass;
            }
            if (ve_suite.empty()) {
                std::cerr << "verify: missing suite name (see --list)\n";
                return kExitUsage;
            }
            const auto report = run_suite(ve_suite, cfg);
            std::cout << report.to_json().dump(2) << "\n";
            return report.pass() ? kExitPass : kExitCheckFailure;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
