#include "vdlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace vdlab {

namespace {

const std::vector<std::string> kModes = {"simulate", "project","scatter",
                                         "invariants", "verify", "conjectures"};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// value forms: string "..", boolean, number, array of numbers
struct TomlValue {
    std::string str;
    bool is_string = false;
    bool is_array = false;
    std::vector<double> numbers;
    double number = 0.0;
};

TomlValue parse_value(const std::string& raw, const std::string& key) {
    TomlValue v;
    std::string s = trim(raw);
    if (s.empty()) throw ValidationError({"empty value for key '" + key + "'"});
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ValidationError({"unterminated string for key '" + key + "'"});
        v.is_string = true;
        v.str = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.number = s == "true" ? 1.0 : 0.0;
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']') throw ValidationError({"unterminated array for key '" + key + "'"});
        v.is_array = true;
        std::string body = s.substr(1, s.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            try {
                v.numbers.push_back(std::stod(item));
            } catch (...) {
                throw ValidationError({"non-numeric array element for key '" + key + "'"});
            }
        }
        return v;
    }
    try {
        std::size_t pos = 0;
        v.number = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
    } catch (...) {
        throw ValidationError({"cannot parse value '" + s + "' for key '" + key + "'"});
    }
    return v;
}

ExperimentConfig from_map(const std::map<std::string, TomlValue>& kv) {
    ExperimentConfig cfg;
    const auto vec_of = [](const TomlValue& v) {
        Vec out(static_cast<Eigen::Index>(v.numbers.size()));
        for (std::size_t i = 0; i < v.numbers.size(); ++i)
            out[static_cast<Eigen::Index>(i)] = v.numbers[i];
        return out;
    };
    for (const auto& [key, v] : kv) {
        if (key == "mode") cfg.mode = v.str;
        else if (key == "n") cfg.n = static_cast<Eigen::Index>(v.number);
        else if (key == "mu") cfg.mu = v.number;
        else if (key == "nu") cfg.nu = v.number;
        else if (key == "kappa") cfg.kappa = v.number;
        else if (key == "lambda0") cfg.lambda0 = vec_of(v);
        else if (key == "theta0") cfg.theta0 = vec_of(v);
        else if (key == "t0") cfg.t0 = v.number;
        else if (key == "t1") cfg.t1 = v.number;
        else if (key == "out_dt") cfg.out_dt = v.number;
        else if (key == "tol") cfg.tol = v.number;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(v.number);
        else if (key == "trials") cfg.trials = static_cast<int>(v.number);
        else if (key == "etas") cfg.etas_re = v.numbers;
        else if (key == "etas_im") cfg.etas_im = v.numbers;
        else throw ValidationError({"unknown config key '" + key + "'"});
    }
    return cfg;
}

}  // namespace

ExperimentConfig parse_toml(const std::string& text) {
    std::map<std::string, TomlValue> kv;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        // strip comments outside strings
        std::string clean;
        bool in_str = false;
        for (char ch : line) {
            if (ch == '"') in_str = !in_str;
            if (ch == '#' && !in_str) break;
            clean += ch;
        }
        clean = trim(clean);
        if (clean.empty()) continue;
        if (clean.front() == '[') continue;  // section headers carry no data here
        const std::size_t eq = clean.find('=');
        if (eq == std::string::npos)
            throw ValidationError({"malformed config line: '" + clean + "'"});
        const std::string key = trim(clean.substr(0, eq));
        kv[key] = parse_value(clean.substr(eq + 1), key);
    }
    return from_map(kv);
}

ExperimentConfig parse_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::map<std::string, TomlValue> kv;
    for (const auto& [key, val] : j.items()) {
        TomlValue v;
        if (val.is_string()) {
            v.is_string = true;
            v.str = val.get<std::string>();
        } else if (val.is_array()) {
            v.is_array = true;
            for (const auto& x : val) v.numbers.push_back(x.get<double>());
        } else if (val.is_boolean()) {
            v.number = val.get<bool>() ? 1.0 : 0.0;
        } else {
            v.number = val.get<double>();
        }
        kv[key] = v;
    }
    return from_map(kv);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError({"cannot open config file '" + path + "'"});
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const bool json_ext = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    if (json_ext) return parse_json(text);
    // content fallback: JSON object without a .json extension
    const std::string t = trim(text.substr(0, text.find('\n')));
    if (!t.empty() && t.front() == '{') return parse_json(text);
    return parse_toml(text);
}

std::vector<std::string> ExperimentConfig::violations() const {
    std::vector<std::string> v;
    if (std::find(kModes.begin(), kModes.end(), mode) == kModes.end())
        v.push_back("unknown mode '" + mode + "'");
    if (n < 1 || n > 16) v.push_back("n must lie in 1..16");
    if (static_cast<bool>(lambda0) != static_cast<bool>(theta0))
        v.push_back("lambda0 and theta0 must be given together");
    if (lambda0 && lambda0->size() != n)
        v.push_back("lambda0 must have n entries");
    if (theta0 && theta0->size() != n) v.push_back("theta0 must have n entries");
    if (lambda0 && theta0 && lambda0->size() == n && theta0->size() == n) {
        PhasePoint p(*lambda0, *theta0);
        for (auto& msg : p.violations()) v.push_back(msg);
    }
    if (mu && nu) {
        CouplingParams c(*mu, *nu);
        c.kappa = kappa;
        for (auto& msg : c.violations()) v.push_back(msg);
    } else if (static_cast<bool>(mu) != static_cast<bool>(nu)) {
        v.push_back("mu and nu must be given together");
    }
    if (!(tol >= 1e-13 && tol <= 1e-4)) v.push_back("tol must lie in [1e-13, 1e-4]");
    if (!(out_dt > 0.0)) v.push_back("out_dt must be positive");
    if (mode != "invariants" && mode != "verify" && mode != "conjectures" && !(t0 < t1))
        v.push_back("t0 must be smaller than t1");
    if (trials < 1) v.push_back("trials must be positive");
    if (!etas_im.empty() && etas_im.size() != etas_re.size())
        v.push_back("etas_im must match etas in length");
    return v;
}

}  // namespace vdlab
