#ifndef MSPATTERN_IO_HPP
#define MSPATTERN_IO_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mspattern/amplitude.hpp"
#include "mspattern/config.hpp"
#include "mspattern/continuation.hpp"
#include "mspattern/grid.hpp"
#include "mspattern/simulator.hpp"

namespace mspattern {

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw NumericalFailure("cannot open output file: " + path.string());
    f << content;
}

/// Effective config embedded as comment lines for provenance.
inline std::string config_comment_block(const RunConfig& cfg) {
    std::istringstream in(serialize_config(cfg));
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out << "# " << line << "\n";
    return out.str();
}

inline void write_snapshot_csv(const std::filesystem::path& path, const Grid1D& g,
                               const FieldState& s, const RunConfig& cfg,
                               std::uint64_t seed) {
    std::ostringstream o;
    o << "# mspattern snapshot\n";
    o << "# seed = " << seed << "\n";
    o << "# t = " << format_double(s.t) << "\n";
    o << config_comment_block(cfg);
    o << "x,m,c,d\n";
    for (int i = 0; i < g.n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        o << format_double(g.x(i)) << ',' << format_double(s.m[k]) << ','
          << format_double(s.c[k]) << ',' << format_double(s.d[k]) << "\n";
    }
    write_text_file(path, o.str());
}

struct SimulationSummary {
    std::uint64_t seed = 0;
    bool reached_steady = false;
    long steps = 0;
    double residual = 0.0;
    double t_final = 0.0;
    double peaks = 0.0;
    int dominant_mode = 0;
    bool degenerate_mode = false;
    double m_min = 0.0, m_max = 0.0;
    double norm_m_L2 = 0.0;
    std::string snapshot_file;
    std::string error;  // empty on success
};

inline void write_summary_json(const std::filesystem::path& path, const RunConfig& cfg,
                               const std::vector<SimulationSummary>& runs) {
    nlohmann::json j;
    j["config"] = serialize_config(cfg);
    j["runs"] = nlohmann::json::array();
    for (const auto& r : runs) {
        nlohmann::json e;
        e["seed"] = r.seed;
        e["reached_steady"] = r.reached_steady;
        e["steps"] = r.steps;
        e["residual"] = r.residual;
        e["t_final"] = r.t_final;
        e["peaks"] = r.peaks;
        e["dominant_mode"] = r.dominant_mode;
        e["degenerate_mode"] = r.degenerate_mode;
        e["m_min"] = r.m_min;
        e["m_max"] = r.m_max;
        e["norm_m_L2"] = r.norm_m_L2;
        e["snapshot_file"] = r.snapshot_file;
        if (!r.error.empty()) e["error"] = r.error;
        j["runs"].push_back(std::move(e));
    }
    write_text_file(path, j.dump(2) + "\n");
}

inline void write_region_map_csv(const std::filesystem::path& path,
                                 const CriticalityRegionMap& map, const RunConfig& cfg) {
    std::ostringstream o;
    o << config_comment_block(cfg);
    o << "M,eps,case,p_value,verdict\n";
    for (std::size_t iM = 0; iM < map.M_grid.size(); ++iM)
        for (std::size_t ie = 0; ie < map.eps_grid.size(); ++ie)
            o << format_double(map.M_grid[iM]) << ',' << format_double(map.eps_grid[ie])
              << ',' << to_string(map.law_case) << ',' << format_double(map.p_at(iM, ie))
              << ',' << to_string(map.verdict_at(iM, ie)) << "\n";
    write_text_file(path, o.str());
}

inline void write_branch_csv(const std::filesystem::path& path, const Branch& br,
                             const RunConfig& cfg) {
    std::ostringstream o;
    o << "# branch " << br.label << "\n";
    o << config_comment_block(cfg);
    o << "chi,norm_m_L2,n_unstable,tag\n";
    for (const auto& p : br.points)
        o << format_double(p.chi) << ',' << format_double(p.m_norm) << ','
          << p.n_unstable << ',' << to_string(p.tag) << "\n";
    write_text_file(path, o.str());
}

/// Solution snapshots at tagged points (fold / branch-point markers).
inline void write_branch_points_json(const std::filesystem::path& path, const Branch& br,
                                     int grid_n) {
    nlohmann::json j;
    j["label"] = br.label;
    j["snapshots"] = nlohmann::json::array();
    for (const auto& p : br.points) {
        if (p.tag == PointTag::None) continue;
        nlohmann::json e;
        e["chi"] = p.chi;
        e["tag"] = to_string(p.tag);
        e["n_unstable"] = p.n_unstable;
        e["m"] = std::vector<double>(p.U.data(), p.U.data() + grid_n);
        e["c"] = std::vector<double>(p.U.data() + grid_n, p.U.data() + 2 * grid_n);
        j["snapshots"].push_back(std::move(e));
    }
    write_text_file(path, j.dump(2) + "\n");
}

inline void write_diagram_manifest(const std::filesystem::path& path, const RunConfig& cfg,
                                   const std::vector<Branch>& branches,
                                   const std::vector<std::string>& files,
                                   const std::vector<std::string>& point_files) {
    nlohmann::json j;
    j["config"] = serialize_config(cfg);
    j["branches"] = nlohmann::json::array();
    for (std::size_t i = 0; i < branches.size(); ++i) {
        const Branch& b = branches[i];
        nlohmann::json e;
        e["label"] = b.label;
        e["file"] = files[i];
        e["points_file"] = point_files[i];
        e["n_points"] = b.points.size();
        e["truncated"] = b.truncated;
        if (!b.note.empty()) e["note"] = b.note;
        e["bifurcations"] = nlohmann::json::array();
        for (const auto& [chi, tag] : b.bifurcations)
            e["bifurcations"].push_back({{"chi", chi}, {"type", to_string(tag)}});
        j["branches"].push_back(std::move(e));
    }
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace mspattern

#endif
