#include "mcsl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcsl/version.hpp"

namespace mcsl {

using nlohmann::json;

namespace {

void require_known_keys(const json& obj, const std::set<std::string>& allowed,
                        const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
        }
    }
}

WavePhase phase_from_name(const std::string& name) {
    if (name == "sin") return WavePhase::Sin;
    if (name == "cos") return WavePhase::Cos;
    throw std::invalid_argument("config: initial.phase must be 'sin' or 'cos'");
}

std::string phase_name(WavePhase phase) {
    return phase == WavePhase::Sin ? "sin" : "cos";
}

WaveInitial parse_initial(const json& obj) {
    require_known_keys(obj, {"phase", "mode"}, "initial");
    WaveInitial init;
    if (obj.contains("phase")) init.phase = phase_from_name(obj.at("phase").get<std::string>());
    if (obj.contains("mode")) init.mode = obj.at("mode").get<int>();
    return init;
}

void parse_heat(const json& obj, HeatRunSpec& spec) {
    require_known_keys(obj, {"nu", "dt", "m_s", "n_mc", "t_final", "initial"}, "heat");
    if (obj.contains("nu")) spec.nu = obj.at("nu").get<double>();
    if (obj.contains("dt")) spec.dt = obj.at("dt").get<double>();
    if (obj.contains("m_s")) spec.m_s = obj.at("m_s").get<Eigen::Index>();
    if (obj.contains("n_mc")) spec.n_mc = obj.at("n_mc").get<int>();
    if (obj.contains("t_final")) spec.t_final = obj.at("t_final").get<double>();
    if (obj.contains("initial")) spec.initial = parse_initial(obj.at("initial"));
}

void parse_dirichlet(const json& obj, DirichletRunSpec& spec) {
    require_known_keys(obj,
                       {"a", "b", "nu", "dt", "dx", "n_interior", "n_boundary", "tau",
                        "boundary_margin", "t_final", "use_bridge_test"},
                       "dirichlet");
    if (obj.contains("a")) spec.a = obj.at("a").get<double>();
    if (obj.contains("b")) spec.b = obj.at("b").get<double>();
    if (obj.contains("nu")) spec.nu = obj.at("nu").get<double>();
    if (obj.contains("dt")) spec.dt = obj.at("dt").get<double>();
    if (obj.contains("dx")) spec.dx = obj.at("dx").get<double>();
    if (obj.contains("n_interior")) spec.n_interior = obj.at("n_interior").get<int>();
    if (obj.contains("n_boundary")) spec.n_boundary = obj.at("n_boundary").get<int>();
    if (obj.contains("tau")) spec.tau = obj.at("tau").get<double>();
    if (obj.contains("boundary_margin")) spec.boundary_margin = obj.at("boundary_margin").get<double>();
    if (obj.contains("t_final")) spec.t_final = obj.at("t_final").get<double>();
    if (obj.contains("use_bridge_test")) spec.use_bridge_test = obj.at("use_bridge_test").get<bool>();
}

void parse_burgers(const json& obj, BurgersRunSpec& spec) {
    require_known_keys(obj,
                       {"nu", "dt", "dx", "n_interior", "n_boundary", "tau",
                        "interior_halfwidth", "t_final", "forcing", "snapshot_times"},
                       "burgers");
    if (obj.contains("nu")) spec.nu = obj.at("nu").get<double>();
    if (obj.contains("dt")) spec.dt = obj.at("dt").get<double>();
    if (obj.contains("dx")) spec.dx = obj.at("dx").get<double>();
    if (obj.contains("n_interior")) spec.n_interior = obj.at("n_interior").get<int>();
    if (obj.contains("n_boundary")) spec.n_boundary = obj.at("n_boundary").get<int>();
    if (obj.contains("tau")) spec.tau = obj.at("tau").get<double>();
    if (obj.contains("interior_halfwidth")) spec.interior_halfwidth = obj.at("interior_halfwidth").get<double>();
    if (obj.contains("t_final")) spec.t_final = obj.at("t_final").get<double>();
    if (obj.contains("forcing")) {
        spec.forcing = obj.at("forcing").get<std::string>();
        if (spec.forcing != "sine_product" && spec.forcing != "none") {
            throw std::invalid_argument("config: burgers.forcing must be 'sine_product' or 'none'");
        }
    }
    if (obj.contains("snapshot_times")) {
        spec.snapshot_times = obj.at("snapshot_times").get<std::vector<double>>();
    }
}

void parse_convergence(const json& obj, ConvergenceSpec& spec) {
    require_known_keys(obj,
                       {"pde", "n_values", "n_mc_values", "repetitions", "nu", "t_final",
                        "initial", "boundary_margin", "nb_over_ni", "tau_refine"},
                       "convergence");
    if (obj.contains("pde")) {
        spec.pde = obj.at("pde").get<std::string>();
        if (spec.pde != "heat_periodic" && spec.pde != "heat_dirichlet") {
            throw std::invalid_argument("config: convergence.pde must be 'heat_periodic' or 'heat_dirichlet'");
        }
    }
    if (obj.contains("n_values")) spec.n_values = obj.at("n_values").get<std::vector<int>>();
    if (obj.contains("n_mc_values")) spec.n_mc_values = obj.at("n_mc_values").get<std::vector<int>>();
    if (obj.contains("repetitions")) spec.repetitions = obj.at("repetitions").get<int>();
    if (obj.contains("nu")) spec.nu = obj.at("nu").get<double>();
    if (obj.contains("t_final")) spec.t_final = obj.at("t_final").get<double>();
    if (obj.contains("initial")) spec.initial = parse_initial(obj.at("initial"));
    if (obj.contains("boundary_margin")) spec.boundary_margin = obj.at("boundary_margin").get<double>();
    if (obj.contains("nb_over_ni")) spec.nb_over_ni = obj.at("nb_over_ni").get<int>();
    if (obj.contains("tau_refine")) spec.tau_refine = obj.at("tau_refine").get<int>();
    if (spec.n_values.empty() || spec.n_mc_values.empty()) {
        throw std::invalid_argument("config: convergence sweep lists must be nonempty");
    }
    if (spec.repetitions < 2) {
        throw std::invalid_argument("config: convergence.repetitions must be >= 2");
    }
}

void parse_verify(const json& obj, VerifySpec& spec) {
    require_known_keys(obj, {"m_s", "nu", "dt", "p_m_s", "p_samples", "decay_ell_max"},
                       "verify");
    if (obj.contains("m_s")) spec.m_s = obj.at("m_s").get<Eigen::Index>();
    if (obj.contains("nu")) spec.nu = obj.at("nu").get<double>();
    if (obj.contains("dt")) spec.dt = obj.at("dt").get<double>();
    if (obj.contains("p_m_s")) spec.p_m_s = obj.at("p_m_s").get<Eigen::Index>();
    if (obj.contains("p_samples")) spec.p_samples = obj.at("p_samples").get<int>();
    if (obj.contains("decay_ell_max")) spec.decay_ell_max = obj.at("decay_ell_max").get<int>();
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::HeatPeriodic: return "heat_periodic";
        case ExperimentKind::HeatDirichlet: return "heat_dirichlet";
        case ExperimentKind::Burgers2d: return "burgers2d";
        case ExperimentKind::Convergence: return "convergence";
        case ExperimentKind::Verify: return "verify";
    }
    return "heat_periodic";
}

ExperimentKind kind_from_name(const std::string& name) {
    if (name == "heat_periodic") return ExperimentKind::HeatPeriodic;
    if (name == "heat_dirichlet") return ExperimentKind::HeatDirichlet;
    if (name == "burgers2d") return ExperimentKind::Burgers2d;
    if (name == "convergence") return ExperimentKind::Convergence;
    if (name == "verify") return ExperimentKind::Verify;
    throw std::invalid_argument("config: unknown experiment kind '" + name + "'");
}

ExperimentConfig parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
    require_known_keys(root,
                       {"kind", "seed", "output_dir", "threads", "record_every", "heat",
                        "dirichlet", "burgers", "convergence", "verify"},
                       "top level");
    ExperimentConfig cfg;
    if (root.contains("kind")) cfg.kind = kind_from_name(root.at("kind").get<std::string>());
    if (root.contains("seed")) cfg.seed = root.at("seed").get<std::uint64_t>();
    if (root.contains("output_dir")) cfg.output_dir = root.at("output_dir").get<std::string>();
    if (root.contains("threads")) cfg.threads = root.at("threads").get<unsigned>();
    if (root.contains("record_every")) cfg.record_every = root.at("record_every").get<int>();
    if (root.contains("heat")) parse_heat(root.at("heat"), cfg.heat);
    if (root.contains("dirichlet")) parse_dirichlet(root.at("dirichlet"), cfg.dirichlet);
    if (root.contains("burgers")) parse_burgers(root.at("burgers"), cfg.burgers);
    if (root.contains("convergence")) parse_convergence(root.at("convergence"), cfg.convergence);
    if (root.contains("verify")) parse_verify(root.at("verify"), cfg.verify);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string canonical_config_json(const ExperimentConfig& cfg) {
    json root;
    root["kind"] = kind_name(cfg.kind);
    root["seed"] = cfg.seed;
    root["record_every"] = cfg.record_every;
    // threads and output_dir are deliberately excluded: the hash identifies
    // the experiment content, and results are thread-count invariant.
    switch (cfg.kind) {
        case ExperimentKind::HeatPeriodic: {
            const auto& s = cfg.heat;
            root["heat"] = {{"nu", s.nu},           {"dt", s.dt},
                            {"m_s", s.m_s},         {"n_mc", s.n_mc},
                            {"t_final", s.t_final},
                            {"initial", {{"phase", phase_name(s.initial.phase)}, {"mode", s.initial.mode}}}};
            break;
        }
        case ExperimentKind::HeatDirichlet: {
            const auto& s = cfg.dirichlet;
            root["dirichlet"] = {{"a", s.a},
                                 {"b", s.b},
                                 {"nu", s.nu},
                                 {"dt", s.dt},
                                 {"dx", s.dx},
                                 {"n_interior", s.n_interior},
                                 {"n_boundary", s.n_boundary},
                                 {"tau", s.tau},
                                 {"boundary_margin", s.boundary_margin},
                                 {"t_final", s.t_final},
                                 {"use_bridge_test", s.use_bridge_test}};
            break;
        }
        case ExperimentKind::Burgers2d: {
            const auto& s = cfg.burgers;
            root["burgers"] = {{"nu", s.nu},
                               {"dt", s.dt},
                               {"dx", s.dx},
                               {"n_interior", s.n_interior},
                               {"n_boundary", s.n_boundary},
                               {"tau", s.tau},
                               {"interior_halfwidth", s.interior_halfwidth},
                               {"t_final", s.t_final},
                               {"forcing", s.forcing},
                               {"snapshot_times", s.snapshot_times}};
            break;
        }
        case ExperimentKind::Convergence: {
            const auto& s = cfg.convergence;
            root["convergence"] = {{"pde", s.pde},
                                   {"n_values", s.n_values},
                                   {"n_mc_values", s.n_mc_values},
                                   {"repetitions", s.repetitions},
                                   {"nu", s.nu},
                                   {"t_final", s.t_final},
                                   {"initial", {{"phase", phase_name(s.initial.phase)}, {"mode", s.initial.mode}}},
                                   {"boundary_margin", s.boundary_margin},
                                   {"nb_over_ni", s.nb_over_ni},
                                   {"tau_refine", s.tau_refine}};
            break;
        }
        case ExperimentKind::Verify: {
            const auto& s = cfg.verify;
            root["verify"] = {{"m_s", s.m_s},     {"nu", s.nu},
                              {"dt", s.dt},       {"p_m_s", s.p_m_s},
                              {"p_samples", s.p_samples}, {"decay_ell_max", s.decay_ell_max}};
            break;
        }
    }
    return root.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string text = canonical_config_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

OutputMetadata make_metadata(const ExperimentConfig& cfg) {
    return {cfg.seed, kVersion, config_hash(cfg)};
}

}  // namespace mcsl
