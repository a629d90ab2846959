#ifndef MSPATTERN_COMMANDS_HPP
#define MSPATTERN_COMMANDS_HPP

#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include <json.hpp>

#include "mspattern/io.hpp"

namespace mspattern {

/// Command entry points shared by the CLI and the test suites. Configuration
/// problems throw (InvalidParameter, DegenerateCoupling, BelowCritical);
/// numerical failures are reported through the returned exit code (3) with
/// partial outputs retained.

inline int cmd_thresholds(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    const ModelParams p = cfg.model_params();
    const TuringThresholds th = thresholds(p);

    nlohmann::json j;
    j["config"] = serialize_config(cfg);
    j["chi_bar"] = th.chi_bar;
    j["chi_c"] = th.chi_c;
    j["kc2"] = th.kc2;
    j["kc"] = th.kc;
    j["modes"] = nlohmann::json::array();
    for (const auto& m : admissible_modes(p.domain_length, cfg.thresholds.n_max))
        j["modes"].push_back({{"n", m.n}, {"k", m.k}, {"k2", m.k2},
                              {"chi_n", chi_at_mode(m.k2, p)}});
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / "thresholds.json", j.dump(2) + "\n");
    return 0;
}

inline int cmd_dispersion(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    const ModelParams p = cfg.model_params();
    const auto curve = dispersion_curve(p, cfg.dispersion.samples);
    std::ostringstream o;
    o << config_comment_block(cfg);
    o << "k2,g,h,re_lambda1,im_lambda1,re_lambda2,im_lambda2,lambda_max\n";
    for (const auto& s : curve)
        o << format_double(s.k2) << ',' << format_double(s.g) << ',' << format_double(s.h)
          << ',' << format_double(s.lambda1.real()) << ',' << format_double(s.lambda1.imag())
          << ',' << format_double(s.lambda2.real()) << ',' << format_double(s.lambda2.imag())
          << ',' << format_double(s.lambda_max) << "\n";
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / "dispersion.csv", o.str());
    return 0;
}

inline int cmd_landau(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    const ModelParams p = cfg.model_params();
    std::optional<double> target;
    if (cfg.landau.chi_target > 0.0) target = cfg.landau.chi_target;
    const StuartLandauData sl = stuart_landau(p, target);

    nlohmann::json j;
    j["config"] = serialize_config(cfg);
    j["chi_c"] = thresholds(p).chi_c;
    j["kc2"] = thresholds(p).kc2;
    j["xi"] = p.xi();
    j["omega"] = p.growth.omega();
    j["rho"] = {sl.rho_m, sl.rho_c};
    j["psi"] = {sl.psi1, sl.psi2};
    j["second_order"] = {{"mu_m", sl.mu_m}, {"theta_m", sl.theta_m},
                         {"mu_c", sl.mu_c}, {"theta_c", sl.theta_c}};
    j["chi2"] = sl.chi2;
    j["sigma"] = sl.sigma;
    j["landau"] = sl.landau;
    j["p_value"] = sl.p_value;
    j["criticality"] = to_string(sl.criticality);
    if (sl.eta) {
        j["eta"] = *sl.eta;
        const PatternPrediction pred = predicted_pattern(p, *target);
        j["prediction"] = {{"valid", pred.valid}, {"A_inf", pred.A_inf},
                           {"amplitude", pred.amplitude}, {"kc", pred.kc}};
    }
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir / "landau.json", j.dump(2) + "\n");
    return 0;
}

inline int cmd_region_map(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    const auto& rm = cfg.region_map;
    const CriticalityRegionMap map = criticality_region_map(
        rm.M_min, rm.M_max, rm.M_samples, rm.eps_min, rm.eps_max, rm.eps_samples,
        cfg.region_case());
    std::filesystem::create_directories(out_dir);
    write_region_map_csv(out_dir / "region_map.csv", map, cfg);
    return 0;
}

inline int cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    const ModelParams p = cfg.model_params();
    const Grid1D grid = Grid1D::uniform(cfg.sim.N, p.domain_length);
    std::filesystem::create_directories(out_dir);

    auto run_one = [&](std::uint64_t seed) -> SimulationSummary {
        SimulationSummary sum;
        sum.seed = seed;
        sum.snapshot_file = "sim_seed" + std::to_string(seed) + ".csv";
        FieldState s = cfg.sim.init_mode >= 1
                           ? initial_state_cosine(grid, p, cfg.sim.init_amp, cfg.sim.init_mode)
                           : initial_state(grid, p, cfg.sim.perturb_amp, seed);
        SimConfig sc;
        sc.dt = cfg.sim.dt;
        sc.t_end = cfg.sim.t_end;
        sc.steady_tol = cfg.sim.steady_tol;
        try {
            const RunDiagnostics diag = run_to_steady(s, p, grid, sc);
            sum.reached_steady = diag.reached_steady;
            sum.steps = diag.steps;
            sum.residual = diag.residual;
        } catch (const BlowUp& e) {
            sum.error = e.what();
        }
        sum.t_final = s.t;
        sum.peaks = count_peaks(s.m);
        const DominantMode dm = dominant_mode(s.m, grid.length);
        sum.dominant_mode = dm.n;
        sum.degenerate_mode = dm.degenerate;
        sum.m_min = *std::min_element(s.m.begin(), s.m.end());
        sum.m_max = *std::max_element(s.m.begin(), s.m.end());
        sum.norm_m_L2 = l2_norm(s.m, grid.length);
        write_snapshot_csv(out_dir / sum.snapshot_file, grid, s, cfg, seed);
        return sum;
    };

    std::vector<std::future<SimulationSummary>> futures;
    futures.reserve(cfg.sim.seeds.size());
    for (std::uint64_t seed : cfg.sim.seeds)
        futures.push_back(std::async(std::launch::async, run_one, seed));

    std::vector<SimulationSummary> runs;
    runs.reserve(futures.size());
    bool failed = false;
    for (auto& f : futures) {
        runs.push_back(f.get());
        if (!runs.back().error.empty()) failed = true;
    }
    write_summary_json(out_dir / "sim_summary.json", cfg, runs);
    return failed ? 3 : 0;
}

inline int cmd_bifurcate(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    cfg.validate();
    ModelParams p = cfg.model_params();
    ContinuationSettings cs;
    cs.ds = cfg.continuation.ds;
    cs.ds_min = cfg.continuation.ds_min;
    cs.ds_max = cfg.continuation.ds_max;
    cs.chi_min = cfg.continuation.chi_min;
    cs.chi_max = cfg.continuation.chi_max;
    cs.max_points = cfg.continuation.max_points;
    cs.s0 = cfg.continuation.s0;

    const auto branches = bifurcation_diagram(p, cfg.continuation.N, cs,
                                              cfg.continuation.modes);
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> files, point_files;
    bool failed = false;
    for (const auto& br : branches) {
        const std::string stem = "branch_" + br.label;
        files.push_back(stem + ".csv");
        point_files.push_back(stem + "_points.json");
        write_branch_csv(out_dir / files.back(), br, cfg);
        write_branch_points_json(out_dir / point_files.back(), br, cfg.continuation.N);
        if (br.points.empty()) failed = true;
    }
    write_diagram_manifest(out_dir / "diagram.json", cfg, branches, files, point_files);
    return failed ? 3 : 0;
}

}  // namespace mspattern

#endif
