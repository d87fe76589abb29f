#include "aes/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace aes {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    double d = parse_double(key, value);
    if (d != std::floor(d)) throw ConfigError("'" + key + "' must be an integer: " + value);
    return static_cast<int>(d);
}

Vec2 parse_vec2(const std::string& key, const std::string& value) {
    size_t comma = value.find(',');
    if (comma == std::string::npos)
        throw ConfigError("'" + key + "' expects two comma-separated numbers: " + value);
    return {parse_double(key, trim(value.substr(0, comma))),
            parse_double(key, trim(value.substr(comma + 1)))};
}

}  // namespace

ScenarioConfig baseline_config() {
    ScenarioConfig cfg;
    cfg.lattice = LatticeSpec{};       // 10x10, 0.2 m pitch, 0.01 m jitter, random headings
    cfg.params = ModelParams{};        // tuned alpha/beta/k, both drives on
    cfg.t_f = 30.0;
    cfg.w1 = 1.0 / cfg.agent_count();
    cfg.w2 = -1.0;
    cfg.n_mc = 10;
    return cfg;
}

ScenarioConfig setup_config(int setup) {
    ScenarioConfig cfg = baseline_config();
    switch (setup) {
        case 1: cfg.params.omega = 0.0; break;  // linear motion only
        case 2: cfg.params.w_l = 0.0; break;    // rotational motion only
        case 3: break;                          // combined
        default: throw ConfigError("unknown setup id " + std::to_string(setup) +
                                   " (expected 1, 2 or 3)");
    }
    return cfg;
}

ScenarioConfig parse_config_text(std::string_view text) {
    ScenarioConfig cfg = baseline_config();
    bool w1_set = false;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");

        if (key == "rows") cfg.lattice.rows = parse_int(key, value);
        else if (key == "cols") cfg.lattice.cols = parse_int(key, value);
        else if (key == "d_init") cfg.lattice.d_init = parse_double(key, value);
        else if (key == "jitter") cfg.lattice.jitter = parse_double(key, value);
        else if (key == "heading_mode") {
            if (value == "random") cfg.lattice.heading_mode = HeadingMode::random;
            else if (value == "fixed") cfg.lattice.heading_mode = HeadingMode::fixed;
            else throw ConfigError("heading_mode must be 'random' or 'fixed', got: " + value);
        }
        else if (key == "theta0") cfg.lattice.theta0 = parse_double(key, value);
        else if (key == "link_radius_mult") cfg.lattice.link_radius_mult = parse_double(key, value);
        else if (key == "v0") cfg.params.v0 = parse_double(key, value);
        else if (key == "tf") cfg.t_f = parse_double(key, value);
        else if (key == "dt") cfg.params.dt = parse_double(key, value);
        else if (key == "alpha") cfg.params.alpha = parse_double(key, value);
        else if (key == "beta") cfg.params.beta = parse_double(key, value);
        else if (key == "k") cfg.params.k = parse_double(key, value);
        else if (key == "D_r") cfg.params.D_r = parse_double(key, value);
        else if (key == "D_theta") cfg.params.D_theta = parse_double(key, value);
        else if (key == "v_d") cfg.params.v_d_hat = parse_vec2(key, value);
        else if (key == "w_l") cfg.params.w_l = parse_double(key, value);
        else if (key == "omega") cfg.params.omega = parse_double(key, value);
        else if (key == "w_r") cfg.params.w_r = parse_double(key, value);
        else if (key == "rotation_center_mode") {
            if (value == "centroid")
                cfg.params.rotation_center_mode = RotationCenterMode::swarm_centroid;
            else if (value == "fixed")
                cfg.params.rotation_center_mode = RotationCenterMode::fixed_point;
            else throw ConfigError("rotation_center_mode must be 'centroid' or 'fixed', got: " +
                                   value);
        }
        else if (key == "x_c") cfg.params.rotation_center = parse_vec2(key, value);
        else if (key == "sign_convention") {
            if (value == "restoring") cfg.params.sign_convention = SignConvention::restoring;
            else if (value == "literal-paper")
                cfg.params.sign_convention = SignConvention::literal_paper;
            else throw ConfigError(
                    "sign_convention must be 'restoring' or 'literal-paper', got: " + value);
        }
        else if (key == "eps") cfg.eps = parse_double(key, value);
        else if (key == "w1") { cfg.w1 = parse_double(key, value); w1_set = true; }
        else if (key == "w2") cfg.w2 = parse_double(key, value);
        else if (key == "n_mc") cfg.n_mc = parse_int(key, value);
        else if (key == "seed") cfg.seed = static_cast<uint64_t>(parse_double(key, value));
        else throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }

    if (!w1_set) cfg.w1 = 1.0 / cfg.agent_count();
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config_text(buf.str());
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

std::string config_to_text(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "rows = " << cfg.lattice.rows << '\n';
    out << "cols = " << cfg.lattice.cols << '\n';
    out << "d_init = " << cfg.lattice.d_init << '\n';
    out << "jitter = " << cfg.lattice.jitter << '\n';
    out << "heading_mode = "
        << (cfg.lattice.heading_mode == HeadingMode::random ? "random" : "fixed") << '\n';
    out << "theta0 = " << cfg.lattice.theta0 << '\n';
    out << "link_radius_mult = " << cfg.lattice.link_radius_mult << '\n';
    out << "v0 = " << cfg.params.v0 << '\n';
    out << "tf = " << cfg.t_f << '\n';
    out << "dt = " << cfg.params.dt << '\n';
    out << "alpha = " << cfg.params.alpha << '\n';
    out << "beta = " << cfg.params.beta << '\n';
    out << "k = " << cfg.params.k << '\n';
    out << "D_r = " << cfg.params.D_r << '\n';
    out << "D_theta = " << cfg.params.D_theta << '\n';
    out << "v_d = " << cfg.params.v_d_hat.x << "," << cfg.params.v_d_hat.y << '\n';
    out << "w_l = " << cfg.params.w_l << '\n';
    out << "omega = " << cfg.params.omega << '\n';
    out << "w_r = " << cfg.params.w_r << '\n';
    out << "rotation_center_mode = "
        << (cfg.params.rotation_center_mode == RotationCenterMode::swarm_centroid ? "centroid"
                                                                                  : "fixed")
        << '\n';
    out << "x_c = " << cfg.params.rotation_center.x << "," << cfg.params.rotation_center.y << '\n';
    out << "sign_convention = "
        << (cfg.params.sign_convention == SignConvention::restoring ? "restoring"
                                                                    : "literal-paper")
        << '\n';
    out << "eps = " << cfg.eps << '\n';
    out << "w1 = " << cfg.w1 << '\n';
    out << "w2 = " << cfg.w2 << '\n';
    out << "n_mc = " << cfg.n_mc << '\n';
    return out.str();
}

void apply_weight_preset(ScenarioConfig& cfg, WeightPreset preset) {
    double n = cfg.agent_count();
    switch (preset) {
        case WeightPreset::defaults: cfg.w1 = 1.0 / n; cfg.w2 = -1.0; break;
        case WeightPreset::force: cfg.w1 = 10.0 / n; cfg.w2 = -1.0; break;
        case WeightPreset::align: cfg.w1 = 1.0 / n; cfg.w2 = -10.0; break;
    }
}

}  // namespace aes
