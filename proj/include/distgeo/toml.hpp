#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace distgeo {

// Minimal TOML reader covering what scenario files use: top-level and [table]
// sections, keys with string / integer / float / boolean / (nested, possibly
// multi-line) array values, and # comments. Unknown syntax is rejected with
// the offending line number.
class TomlValue {
public:
    using Array = std::vector<TomlValue>;
    std::variant<std::int64_t, double, bool, std::string, Array> v;
    int line = 0;

    bool is_int() const { return std::holds_alternative<std::int64_t>(v); }
    bool is_float() const { return std::holds_alternative<double>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    bool is_array() const { return std::holds_alternative<Array>(v); }

    std::int64_t as_int(const std::string& what) const;
    double as_number(const std::string& what) const;  // int or float
    const std::string& as_string(const std::string& what) const;
    const Array& as_array(const std::string& what) const;
};

struct TomlTable {
    std::map<std::string, TomlValue> entries;

    const TomlValue* find(const std::string& key) const {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
};

struct TomlDocument {
    TomlTable root;
    std::map<std::string, TomlTable> sections;
    std::vector<std::string> section_order;

    const TomlTable* section(const std::string& name) const {
        auto it = sections.find(name);
        return it == sections.end() ? nullptr : &it->second;
    }
};

TomlDocument toml_parse(const std::string& text);

}  // namespace distgeo
