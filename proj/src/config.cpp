#include "qcl/config.hpp"

#include <fstream>
#include <sstream>

#include "qcl/errors.hpp"

namespace qcl {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            cfg.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse(os.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        throw ConfigError("config: missing [" + section + "] " + key);
    return sections_.at(section).at(key);
}

std::string Config::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
    return has(section, key) ? get(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    try {
        return std::stod(get(section, key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config: [" + section + "] " + key + " is not a number");
    }
}

double Config::get_double_or(const std::string& section, const std::string& key,
                             double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key) const {
    try {
        return std::stoll(get(section, key));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config: [" + section + "] " + key + " is not an integer");
    }
}

std::int64_t Config::get_int_or(const std::string& section, const std::string& key,
                                std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
    std::istringstream is(get(section, key));
    std::vector<double> out;
    std::string tok;
    while (is >> tok) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::invalid_argument&) {
            throw ConfigError("config: [" + section + "] " + key + ": bad number '" + tok + "'");
        }
    }
    return out;
}

cplx parse_cplx_token(const std::string& token) {
    const auto colon = token.find(':');
    try {
        if (colon == std::string::npos) return cplx(std::stod(token), 0.0);
        return cplx(std::stod(token.substr(0, colon)), std::stod(token.substr(colon + 1)));
    } catch (const std::invalid_argument&) {
        throw ConfigError("config: bad complex token '" + token + "' (expected re or re:im)");
    }
}

std::vector<cplx> Config::get_cplx_list(const std::string& section, const std::string& key) const {
    std::istringstream is(get(section, key));
    std::vector<cplx> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_cplx_token(tok));
    return out;
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
    sections_[section][key] = value;
}

std::string Config::canonical() const {
    std::ostringstream os;
    for (const auto& [sec, kv] : sections_) {
        os << "[" << sec << "]\n";
        for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
    }
    return os.str();
}

std::uint64_t Config::hash() const {
    const std::string s = canonical();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace qcl
