#include "specres/config.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace specres {

namespace {

using json = nlohmann::json;

std::map<std::string, std::string> flatten_json(const json& j, const std::string& prefix) {
    std::map<std::string, std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            auto sub = flatten_json(*it, key);
            out.insert(sub.begin(), sub.end());
        } else if (it->is_array()) {
            std::ostringstream os;
            for (std::size_t i = 0; i < it->size(); ++i) {
                if (i) os << ",";
                os << (*it)[i].dump();
            }
            out[key] = os.str();
        } else if (it->is_string()) {
            out[key] = it->get<std::string>();
        } else {
            out[key] = it->dump();
        }
    }
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    auto e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> parse_flat(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail_config("config line " + std::to_string(lineno) + ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail_config("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

long to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail_config("config key '" + key + "': expected an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail_config("config key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(key, item));
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            fail_config(std::string("config JSON parse error: ") + e.what());
        }
        kv = flatten_json(j, "");
    } else {
        kv = parse_flat(text);
    }

    ExperimentConfig cfg;
    for (const auto& [key, val] : kv) {
        if (key == "model.kind") cfg.model_kind = val;
        else if (key == "model.lambda") cfg.lambda = to_double(key, val);
        else if (key == "model.diag_shift") cfg.diag_shift = to_double(key, val);
        else if (key == "model.g") cfg.g = to_double(key, val);
        else if (key == "model.x0") cfg.x0 = to_double(key, val);
        else if (key == "model.w") cfg.w = to_double(key, val);
        else if (key == "model.center") cfg.center = to_double(key, val);
        else if (key == "model.radius") cfg.radius = to_double(key, val);
        else if (key == "model.coefficients") cfg.coefficients = to_list(key, val);
        else if (key == "model.support_a") cfg.support_a = to_double(key, val);
        else if (key == "model.support_b") cfg.support_b = to_double(key, val);
        else if (key == "model.unbounded") cfg.unbounded = to_bool(key, val);
        else if (key == "model.truncation_L") cfg.truncation_L = to_double(key, val);
        else if (key == "model.random_size") cfg.random_size = int(to_int(key, val));
        else if (key == "interval.lo") cfg.interval.lo = to_double(key, val);
        else if (key == "interval.hi") cfg.interval.hi = to_double(key, val);
        else if (key == "n") cfg.n = int(to_int(key, val));
        else if (key == "kappa.max") cfg.kappa_max = to_double(key, val);
        else if (key == "kappa.count") cfg.kappa_count = int(to_int(key, val));
        else if (key == "kappa.ratio") cfg.kappa_ratio = to_double(key, val);
        else if (key == "grid.N") cfg.grid_N = int(to_int(key, val));
        else if (key == "grid.N_direct") cfg.grid_N_direct = int(to_int(key, val));
        else if (key == "time.max_tau") cfg.time_max_tau = to_double(key, val);
        else if (key == "time.count") cfg.time_count = int(to_int(key, val));
        else if (key == "cutoff.plateau_halfwidth") cfg.plateau_halfwidth = to_double(key, val);
        else if (key == "mourre.delta_lo") cfg.mourre_delta.lo = to_double(key, val);
        else if (key == "mourre.delta_hi") cfg.mourre_delta.hi = to_double(key, val);
        else if (key == "mourre.kappa") cfg.mourre_kappa = to_double(key, val);
        else if (key == "mourre.nu") cfg.mourre_nu = int(to_int(key, val));
        else if (key == "mourre.grid_N") cfg.mourre_grid_N = int(to_int(key, val));
        else if (key == "check.models") cfg.check_models = int(to_int(key, val));
        else if (key == "check.samples") cfg.check_samples = int(to_int(key, val));
        else if (key == "check.size") cfg.check_size = int(to_int(key, val));
        else if (key == "seed") cfg.seed = std::uint64_t(to_int(key, val));
        else if (key == "jobs") cfg.jobs = int(to_int(key, val));
        else fail_config("unknown config key '" + key + "'");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail_config("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    ExperimentConfig cfg = parse_config_text(ss.str());
    validate_config(cfg);
    return cfg;
}

std::vector<double> ExperimentConfig::kappa_ladder() const {
    std::vector<double> out;
    double k = kappa_max;
    for (int i = 0; i < kappa_count; ++i) {
        out.push_back(k);
        k /= kappa_ratio;
    }
    return out;
}

FriedrichsSpec ExperimentConfig::friedrichs_spec() const {
    FriedrichsSpec spec;
    spec.lambda = lambda;
    spec.diag_shift = diag_shift;
    spec.unbounded_support = unbounded;
    spec.support = {support_a, support_b};
    spec.truncation_L = truncation_L;
    CouplingDensity& c = spec.coupling;
    if (model_kind == "lorentzian") {
        c.kind = CouplingDensity::Kind::Lorentzian;
        c.g = g;
        c.x0 = x0;
        c.w = w;
    } else if (model_kind == "semicircle") {
        c.kind = CouplingDensity::Kind::Semicircle;
        c.g = g;
        c.center = center;
        c.radius = radius;
        spec.unbounded_support = false;
    } else if (model_kind == "polynomial") {
        c.kind = CouplingDensity::Kind::Polynomial;
        c.coefficients = coefficients;
        c.poly_a = support_a;
        c.poly_b = support_b;
        spec.unbounded_support = false;
    } else {
        fail_config("friedrichs_spec: model kind '" + model_kind + "' is not a continuum model");
    }
    return spec;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.model_kind != "lorentzian" && cfg.model_kind != "semicircle" &&
        cfg.model_kind != "polynomial" && cfg.model_kind != "random")
        fail_config("model.kind must be lorentzian, semicircle, polynomial or random");
    if (!(cfg.interval.lo < cfg.interval.hi)) fail_config("interval I is empty or reversed");
    if (cfg.n < 1) fail_config("n >= 1 required");
    if (cfg.kappa_count < 1) fail_config("kappa ladder is empty");
    if (!(cfg.kappa_max > 0.0)) fail_config("kappa.max must be positive");
    if (!(cfg.kappa_ratio > 1.0))
        fail_config("kappa.ratio must exceed 1 (ladder strictly decreasing)");
    if (cfg.grid_N < 2) fail_config("grid.N >= 2 required");
    if (cfg.time_count < 8) fail_config("time.count >= 8 required");
    if (!(cfg.plateau_halfwidth > 0.0)) fail_config("cutoff.plateau_halfwidth must be positive");
    if (cfg.jobs < 1) fail_config("jobs >= 1 required");
    if (cfg.model_kind != "random" && !cfg.interval.strictly_contains(cfg.lambda))
        fail_config("lambda must lie in the interior of interval I");
}

std::string canonical_dump(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "check.models=" << cfg.check_models << "\n"
       << "check.samples=" << cfg.check_samples << "\n"
       << "check.size=" << cfg.check_size << "\n"
       << "cutoff.plateau_halfwidth=" << cfg.plateau_halfwidth << "\n"
       << "grid.N=" << cfg.grid_N << "\n"
       << "grid.N_direct=" << cfg.grid_N_direct << "\n"
       << "interval.lo=" << cfg.interval.lo << "\n"
       << "interval.hi=" << cfg.interval.hi << "\n"
       << "jobs=" << cfg.jobs << "\n"
       << "kappa.count=" << cfg.kappa_count << "\n"
       << "kappa.max=" << cfg.kappa_max << "\n"
       << "kappa.ratio=" << cfg.kappa_ratio << "\n"
       << "model.center=" << cfg.center << "\n";
    os << "model.coefficients=";
    for (std::size_t i = 0; i < cfg.coefficients.size(); ++i)
        os << (i ? "," : "") << cfg.coefficients[i];
    os << "\n"
       << "model.diag_shift=" << cfg.diag_shift << "\n"
       << "model.g=" << cfg.g << "\n"
       << "model.kind=" << cfg.model_kind << "\n"
       << "model.lambda=" << cfg.lambda << "\n"
       << "model.radius=" << cfg.radius << "\n"
       << "model.random_size=" << cfg.random_size << "\n"
       << "model.support_a=" << cfg.support_a << "\n"
       << "model.support_b=" << cfg.support_b << "\n"
       << "model.truncation_L=" << cfg.truncation_L << "\n"
       << "model.unbounded=" << (cfg.unbounded ? "true" : "false") << "\n"
       << "model.w=" << cfg.w << "\n"
       << "model.x0=" << cfg.x0 << "\n"
       << "mourre.delta_lo=" << cfg.mourre_delta.lo << "\n"
       << "mourre.delta_hi=" << cfg.mourre_delta.hi << "\n"
       << "mourre.grid_N=" << cfg.mourre_grid_N << "\n"
       << "mourre.kappa=" << cfg.mourre_kappa << "\n"
       << "mourre.nu=" << cfg.mourre_nu << "\n"
       << "n=" << cfg.n << "\n"
       << "seed=" << cfg.seed << "\n"
       << "time.count=" << cfg.time_count << "\n"
       << "time.max_tau=" << cfg.time_max_tau << "\n";
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string s = canonical_dump(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace specres
