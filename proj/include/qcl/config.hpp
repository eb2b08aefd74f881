#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qcl/sparse.hpp"

namespace qcl {

/// Flat sectioned key-value configuration:
///
///   # comment
///   [section]
///   key = value
///
/// Values are whitespace-separated token lists; complex tokens are "re:im".
class Config {
public:
    static Config parse(const std::string& text);
    static Config parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;

    double get_double(const std::string& section, const std::string& key) const;
    double get_double_or(const std::string& section, const std::string& key,
                         double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const;

    std::vector<double> get_list(const std::string& section, const std::string& key) const;
    std::vector<cplx> get_cplx_list(const std::string& section, const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    /// Sections/keys sorted; whitespace normalized. Basis of the config hash.
    std::string canonical() const;
    std::uint64_t hash() const;  // FNV-1a of canonical()

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

cplx parse_cplx_token(const std::string& token);

}  // namespace qcl
