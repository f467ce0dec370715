#include "kerr_ring/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "kerr_ring/errors.hpp"

namespace kerr_ring {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const char* c = text.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw ConfigError("bad numeric value for '" + key + "': " + text);
    return v;
}

} // namespace

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : to_double(key, it->second);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    double v = get_double(key, static_cast<double>(fallback));
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("expected integer for '" + key + "'");
    return i;
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    const std::string& s = it->second;
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("bad boolean for '" + key + "': " + s);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line = line.substr(0, cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(path + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        cfg.values[section.empty() ? key : section + "." + key] = val;
    }
    return cfg;
}

void apply_override(RunConfig& cfg, const std::string& kv) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--param expects section.key=value, got: " + kv);
    cfg.values[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
}

ModelParams model_from_config(const RunConfig& cfg) {
    ModelParams p;
    p.omega0 = cfg.get_double("model.omega0", p.omega0);
    p.omega_d = cfg.get_double("model.omega_d", p.omega_d);
    if (cfg.has("model.delta"))
        p.delta = cfg.get_double("model.delta", 0.0);
    else if (std::isfinite(p.omega0) && std::isfinite(p.omega_d))
        p.delta = detuning_from_frequencies(p.omega0, p.omega_d);
    p.epsilon = cfg.get_double("model.epsilon", p.epsilon);
    if (cfg.has("model.u")) {  // common self-Kerr shorthand
        p.u_a = p.u_b = cfg.get_double("model.u", 0.0);
    }
    p.u_a = cfg.get_double("model.u_a", p.u_a);
    p.u_b = cfg.get_double("model.u_b", p.u_b);
    p.v = cfg.get_double("model.v", p.v);
    p.j_re = cfg.get_double("model.j_re", p.j_re);
    p.j_im = cfg.get_double("model.j_im", p.j_im);
    p.kappa = cfg.get_double("model.kappa", p.kappa);
    p.gamma = cfg.get_double("model.gamma", p.gamma);
    if (cfg.has("model.f_in")) {  // common drive shorthand
        p.f_a = p.f_b = cfg.get_double("model.f_in", 0.0);
    }
    p.f_a = cfg.get_double("model.f_a", p.f_a);
    p.f_b = cfg.get_double("model.f_b", p.f_b);
    p.n_th = cfg.get_double("model.n_th", p.n_th);
    p.gamma_phi = cfg.get_double("model.gamma_phi", p.gamma_phi);

    std::string conv = cfg.get_string("model.eom_convention", "appendix_b");
    if (conv == "appendix_b")
        p.eom_convention = EomConvention::AppendixB;
    else if (conv == "main_text")
        p.eom_convention = EomConvention::MainText;
    else
        throw ConfigError("model.eom_convention must be appendix_b or main_text");

    ValidationResult vr = validate(p);
    if (!vr.ok()) {
        std::string msg = "invalid model parameters:";
        for (const auto& s : vr.violations) msg += " [" + s + "]";
        throw ConfigError(msg);
    }
    return p;
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw ConfigError("grid count must be >= 1");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > 0.0))
        throw ConfigError("log grid endpoints must be positive");
    std::vector<double> v = linspace(std::log10(lo), std::log10(hi), count);
    for (double& x : v) x = std::pow(10.0, x);
    return v;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(to_double("list", item));
    }
    if (out.empty()) throw ConfigError("empty value list");
    return out;
}

std::vector<double> grid_from_config(const RunConfig& cfg, const std::string& section,
                                     const std::string& name) {
    const std::string base = section + "." + name;
    if (cfg.has(base + "_values"))
        return parse_double_list(cfg.get_string(base + "_values", ""));
    if (!cfg.has(base + "_min") || !cfg.has(base + "_max") || !cfg.has(base + "_count"))
        throw ConfigError("missing grid spec: " + base + "_values or " + base +
                          "_min/_max/_count");
    double lo = cfg.get_double(base + "_min", 0.0);
    double hi = cfg.get_double(base + "_max", 0.0);
    int count = cfg.get_int(base + "_count", 0);
    bool log = cfg.get_bool(base + "_log", false);
    return log ? logspace(lo, hi, count) : linspace(lo, hi, count);
}

} // namespace kerr_ring
