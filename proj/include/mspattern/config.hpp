#ifndef MSPATTERN_CONFIG_HPP
#define MSPATTERN_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mspattern/amplitude.hpp"
#include "mspattern/model.hpp"

namespace mspattern {

/// Flat key = value configuration, one section per command family. Parsing is
/// strict: unknown sections or keys are rejected, and parse(serialize(c))
/// reproduces c exactly.
struct RunConfig {
    struct Model {
        std::string growth = "logistic";      // logistic | allee
        double M = 0.0;
        std::string Lambda_case = "explicit"; // explicit | case1 | case2
        double Lambda = 1.0;
        double tau = 1.0;
        double eps = 0.08;
        double beta = 1.0;
        double r = 1.0;
        double delta = 1.0;
        double chi = 3.5;
        double L_domain = 12.0 * kPi;
    } model;

    struct Sim {
        int N = 512;
        double dt = 0.0;  // 0 selects stable_dt
        double t_end = 2000.0;
        double steady_tol = 1e-8;
        double perturb_amp = 0.01;
        std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
        int init_mode = 0;  // 0 = seeded random noise, n >= 1 = pure cosine mode
        double init_amp = 0.001;
    } sim;

    struct Thresholds {
        int n_max = 36;
    } thresholds;

    struct Dispersion {
        int samples = 400;
    } dispersion;

    struct Landau {
        double chi_target = 0.0;  // 0 = report at the critical point only
    } landau;

    struct RegionMap {
        std::string law_case = "case1";  // logistic | case1 | case2
        double M_min = -1.0;
        double M_max = 0.9;
        int M_samples = 39;
        double eps_min = 0.5;
        double eps_max = 1.5;
        int eps_samples = 21;
    } region_map;

    struct Continuation {
        int N = 512;
        double chi_min = 3.0;
        double chi_max = 4.5;
        std::vector<int> modes{22, 23};
        double ds = 0.01;
        double ds_min = 1e-6;
        double ds_max = 0.25;
        int max_points = 2000;
        double s0 = 0.01;
    } continuation;

    /// Growth law resolved through the Lambda calibration selector.
    GrowthLaw growth_law() const {
        if (model.growth == "logistic") return GrowthLaw::logistic();
        if (model.growth != "allee")
            throw InvalidParameter("model.growth must be 'logistic' or 'allee'");
        if (model.Lambda_case == "case1") return GrowthLaw::allee_case1(model.M);
        if (model.Lambda_case == "case2") return GrowthLaw::allee_case2(model.M);
        if (model.Lambda_case == "explicit") return GrowthLaw::allee(model.M, model.Lambda);
        throw InvalidParameter("model.Lambda_case must be explicit, case1 or case2");
    }

    ModelParams model_params() const {
        ModelParams p;
        p.tau = model.tau;
        p.eps = model.eps;
        p.beta = model.beta;
        p.r = model.r;
        p.delta = model.delta;
        p.chi = model.chi;
        p.domain_length = model.L_domain;
        p.growth = growth_law();
        p.validate();
        return p;
    }

    LambdaCalibration region_case() const {
        if (region_map.law_case == "logistic") return LambdaCalibration::Logistic;
        if (region_map.law_case == "case1") return LambdaCalibration::Case1;
        if (region_map.law_case == "case2") return LambdaCalibration::Case2;
        throw InvalidParameter("region_map.case must be logistic, case1 or case2");
    }

    void validate() const {
        (void)model_params();
        if (sim.N < 16) throw InvalidParameter("sim.N must be >= 16");
        if (sim.dt < 0.0) throw InvalidParameter("sim.dt must be >= 0");
        if (!(sim.t_end > 0.0)) throw InvalidParameter("sim.t_end must be positive");
        if (sim.steady_tol < 0.0) throw InvalidParameter("sim.steady_tol must be >= 0");
        if (sim.perturb_amp < 0.0) throw InvalidParameter("sim.perturb_amp must be >= 0");
        if (sim.seeds.empty()) throw InvalidParameter("sim.seeds must be nonempty");
        if (sim.init_mode < 0) throw InvalidParameter("sim.init_mode must be >= 0");
        if (thresholds.n_max < 1) throw InvalidParameter("thresholds.n_max must be >= 1");
        if (dispersion.samples < 2) throw InvalidParameter("dispersion.samples must be >= 2");
        if (landau.chi_target < 0.0) throw InvalidParameter("landau.chi_target must be >= 0");
        if (region_map.M_samples < 1 || region_map.eps_samples < 1)
            throw InvalidParameter("region_map sample counts must be >= 1");
        if (!(region_map.eps_min > 0.0)) throw InvalidParameter("region_map.eps_min must be positive");
        if (region_case() != LambdaCalibration::Logistic && region_map.M_max >= 1.0)
            throw InvalidParameter("region_map.M_max must be < 1 for Allee cases");
        if (continuation.N < 16) throw InvalidParameter("continuation.N must be >= 16");
        if (!(continuation.ds > 0.0) || !(continuation.ds_min > 0.0) ||
            continuation.ds_max < continuation.ds_min)
            throw InvalidParameter("continuation step sizes must be positive and ordered");
        if (continuation.max_points < 2) throw InvalidParameter("continuation.max_points must be >= 2");
        if (continuation.modes.empty()) throw InvalidParameter("continuation.modes must be nonempty");
        if (!(continuation.chi_max > continuation.chi_min))
            throw InvalidParameter("continuation chi range is empty");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InvalidParameter("invalid numeric value for " + key + ": '" + v + "'");
    }
}

inline int parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int d = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw InvalidParameter("invalid integer value for " + key + ": '" + v + "'");
    }
}

template <class T>
std::vector<T> parse_list(const std::string& v, const std::string& key) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw InvalidParameter("empty element in list for " + key);
        out.push_back(static_cast<T>(std::stoll(item)));
    }
    if (out.empty()) throw InvalidParameter("empty list for " + key);
    return out;
}

template <class T>
std::string join_list(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

}  // namespace detail

/// Assign one key from its string value; throws on unknown section.key.
inline void config_set(RunConfig& c, const std::string& section,
                       const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    const std::string id = section + "." + key;
    auto bad = [&]() { return InvalidParameter("unknown config key: " + id); };

    if (section == "model") {
        if (key == "growth") c.model.growth = value;
        else if (key == "M") c.model.M = parse_double(value, id);
        else if (key == "Lambda_case") c.model.Lambda_case = value;
        else if (key == "Lambda") c.model.Lambda = parse_double(value, id);
        else if (key == "tau") c.model.tau = parse_double(value, id);
        else if (key == "eps") c.model.eps = parse_double(value, id);
        else if (key == "beta") c.model.beta = parse_double(value, id);
        else if (key == "r") c.model.r = parse_double(value, id);
        else if (key == "delta") c.model.delta = parse_double(value, id);
        else if (key == "chi") c.model.chi = parse_double(value, id);
        else if (key == "L_domain") c.model.L_domain = parse_double(value, id);
        else throw bad();
    } else if (section == "sim") {
        if (key == "N") c.sim.N = parse_int(value, id);
        else if (key == "dt") c.sim.dt = parse_double(value, id);
        else if (key == "t_end") c.sim.t_end = parse_double(value, id);
        else if (key == "steady_tol") c.sim.steady_tol = parse_double(value, id);
        else if (key == "perturb_amp") c.sim.perturb_amp = parse_double(value, id);
        else if (key == "seeds") c.sim.seeds = detail::parse_list<std::uint64_t>(value, id);
        else if (key == "init_mode") c.sim.init_mode = parse_int(value, id);
        else if (key == "init_amp") c.sim.init_amp = parse_double(value, id);
        else throw bad();
    } else if (section == "thresholds") {
        if (key == "n_max") c.thresholds.n_max = parse_int(value, id);
        else throw bad();
    } else if (section == "dispersion") {
        if (key == "samples") c.dispersion.samples = parse_int(value, id);
        else throw bad();
    } else if (section == "landau") {
        if (key == "chi_target") c.landau.chi_target = parse_double(value, id);
        else throw bad();
    } else if (section == "region_map") {
        if (key == "case") c.region_map.law_case = value;
        else if (key == "M_min") c.region_map.M_min = parse_double(value, id);
        else if (key == "M_max") c.region_map.M_max = parse_double(value, id);
        else if (key == "M_samples") c.region_map.M_samples = parse_int(value, id);
        else if (key == "eps_min") c.region_map.eps_min = parse_double(value, id);
        else if (key == "eps_max") c.region_map.eps_max = parse_double(value, id);
        else if (key == "eps_samples") c.region_map.eps_samples = parse_int(value, id);
        else throw bad();
    } else if (section == "continuation") {
        if (key == "N") c.continuation.N = parse_int(value, id);
        else if (key == "chi_min") c.continuation.chi_min = parse_double(value, id);
        else if (key == "chi_max") c.continuation.chi_max = parse_double(value, id);
        else if (key == "modes") c.continuation.modes = detail::parse_list<int>(value, id);
        else if (key == "ds") c.continuation.ds = parse_double(value, id);
        else if (key == "ds_min") c.continuation.ds_min = parse_double(value, id);
        else if (key == "ds_max") c.continuation.ds_max = parse_double(value, id);
        else if (key == "max_points") c.continuation.max_points = parse_int(value, id);
        else if (key == "s0") c.continuation.s0 = parse_double(value, id);
        else throw bad();
    } else {
        throw InvalidParameter("unknown config section: [" + section + "]");
    }
}

inline RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidParameter("malformed section header at line " + std::to_string(lineno));
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidParameter("expected key = value at line " + std::to_string(lineno));
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw InvalidParameter("key outside any section at line " + std::to_string(lineno));
        config_set(c, section, key, value);
    }
    return c;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidParameter("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

/// Canonical text form; parse(serialize(c)) == c field by field.
inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream o;
    o << "[model]\n";
    o << "growth = " << c.model.growth << "\n";
    o << "M = " << format_double(c.model.M) << "\n";
    o << "Lambda_case = " << c.model.Lambda_case << "\n";
    o << "Lambda = " << format_double(c.model.Lambda) << "\n";
    o << "tau = " << format_double(c.model.tau) << "\n";
    o << "eps = " << format_double(c.model.eps) << "\n";
    o << "beta = " << format_double(c.model.beta) << "\n";
    o << "r = " << format_double(c.model.r) << "\n";
    o << "delta = " << format_double(c.model.delta) << "\n";
    o << "chi = " << format_double(c.model.chi) << "\n";
    o << "L_domain = " << format_double(c.model.L_domain) << "\n";
    o << "\n[sim]\n";
    o << "N = " << c.sim.N << "\n";
    o << "dt = " << format_double(c.sim.dt) << "\n";
    o << "t_end = " << format_double(c.sim.t_end) << "\n";
    o << "steady_tol = " << format_double(c.sim.steady_tol) << "\n";
    o << "perturb_amp = " << format_double(c.sim.perturb_amp) << "\n";
    o << "seeds = " << detail::join_list(c.sim.seeds) << "\n";
    o << "init_mode = " << c.sim.init_mode << "\n";
    o << "init_amp = " << format_double(c.sim.init_amp) << "\n";
    o << "\n[thresholds]\n";
    o << "n_max = " << c.thresholds.n_max << "\n";
    o << "\n[dispersion]\n";
    o << "samples = " << c.dispersion.samples << "\n";
    o << "\n[landau]\n";
    o << "chi_target = " << format_double(c.landau.chi_target) << "\n";
    o << "\n[region_map]\n";
    o << "case = " << c.region_map.law_case << "\n";
    o << "M_min = " << format_double(c.region_map.M_min) << "\n";
    o << "M_max = " << format_double(c.region_map.M_max) << "\n";
    o << "M_samples = " << c.region_map.M_samples << "\n";
    o << "eps_min = " << format_double(c.region_map.eps_min) << "\n";
    o << "eps_max = " << format_double(c.region_map.eps_max) << "\n";
    o << "eps_samples = " << c.region_map.eps_samples << "\n";
    o << "\n[continuation]\n";
    o << "N = " << c.continuation.N << "\n";
    o << "chi_min = " << format_double(c.continuation.chi_min) << "\n";
    o << "chi_max = " << format_double(c.continuation.chi_max) << "\n";
    o << "modes = " << detail::join_list(c.continuation.modes) << "\n";
    o << "ds = " << format_double(c.continuation.ds) << "\n";
    o << "ds_min = " << format_double(c.continuation.ds_min) << "\n";
    o << "ds_max = " << format_double(c.continuation.ds_max) << "\n";
    o << "max_points = " << c.continuation.max_points << "\n";
    o << "s0 = " << format_double(c.continuation.s0) << "\n";
    return o.str();
}

/// "--override section.key=value"
inline void apply_override(RunConfig& c, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw InvalidParameter("override must be section.key=value: " + spec);
    const std::string path = detail::trim(spec.substr(0, eq));
    const std::string value = detail::trim(spec.substr(eq + 1));
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        throw InvalidParameter("override must be section.key=value: " + spec);
    config_set(c, path.substr(0, dot), path.substr(dot + 1), value);
}

}  // namespace mspattern

#endif
