#include "qspec/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qspec {

namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1;
    int col() const {
        int c = 1;
        for (std::size_t k = pos; k-- > 0;) {
            if (s[k] == '\n') break;
            ++c;
        }
        return c;
    }
};

void skip_ws(Cursor& c) {
    while (c.pos < c.s.size() &&
           (c.s[c.pos] == ' ' || c.s[c.pos] == '\t' || c.s[c.pos] == '\r'))
        ++c.pos;
}

bool at_line_end(Cursor& c) {
    skip_ws(c);
    return c.pos >= c.s.size() || c.s[c.pos] == '\n' || c.s[c.pos] == '#';
}

void next_line(Cursor& c) {
    while (c.pos < c.s.size() && c.s[c.pos] != '\n') ++c.pos;
    if (c.pos < c.s.size()) {
        ++c.pos;
        ++c.line;
    }
}

std::string parse_bare_key(Cursor& c) {
    skip_ws(c);
    std::string key;
    while (c.pos < c.s.size() &&
           (std::isalnum(static_cast<unsigned char>(c.s[c.pos])) || c.s[c.pos] == '_' ||
            c.s[c.pos] == '-' || c.s[c.pos] == '.'))
        key += c.s[c.pos++];
    if (key.empty()) throw ConfigError("expected a key", c.line, c.col());
    return key;
}

std::string parse_string_value(Cursor& c) {
    ++c.pos;  // opening quote
    std::string out;
    while (c.pos < c.s.size() && c.s[c.pos] != '"') {
        if (c.s[c.pos] == '\n') throw ConfigError("unterminated string", c.line, c.col());
        out += c.s[c.pos++];
    }
    if (c.pos >= c.s.size()) throw ConfigError("unterminated string", c.line, c.col());
    ++c.pos;
    return out;
}

double parse_number_token(Cursor& c) {
    skip_ws(c);
    const std::size_t start = c.pos;
    while (c.pos < c.s.size() && (std::isdigit(static_cast<unsigned char>(c.s[c.pos])) ||
                                  std::string("+-.eE_").find(c.s[c.pos]) != std::string::npos))
        ++c.pos;
    std::string tok = c.s.substr(start, c.pos - start);
    std::erase(tok, '_');
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + tok + "'", c.line, c.col());
    }
}

ConfigValue parse_value(Cursor& c) {
    skip_ws(c);
    if (c.pos >= c.s.size()) throw ConfigError("missing value", c.line, c.col());
    ConfigValue out;
    out.line = c.line;
    const char ch = c.s[c.pos];
    if (ch == '"') {
        out.v = parse_string_value(c);
    } else if (c.s.compare(c.pos, 4, "true") == 0) {
        out.v = true;
        c.pos += 4;
    } else if (c.s.compare(c.pos, 5, "false") == 0) {
        out.v = false;
        c.pos += 5;
    } else if (ch == '[') {
        ++c.pos;
        skip_ws(c);
        if (c.pos < c.s.size() && c.s[c.pos] == '"') {
            std::vector<std::string> arr;
            while (true) {
                skip_ws(c);
                if (c.pos < c.s.size() && c.s[c.pos] == ']') {
                    ++c.pos;
                    break;
                }
                arr.push_back(parse_string_value(c));
                skip_ws(c);
                if (c.pos < c.s.size() && c.s[c.pos] == ',') ++c.pos;
            }
            out.v = std::move(arr);
        } else {
            std::vector<double> arr;
            while (true) {
                skip_ws(c);
                if (c.pos >= c.s.size()) throw ConfigError("unterminated array", c.line, c.col());
                if (c.s[c.pos] == ']') {
                    ++c.pos;
                    break;
                }
                arr.push_back(parse_number_token(c));
                skip_ws(c);
                if (c.pos < c.s.size() && c.s[c.pos] == ',') ++c.pos;
            }
            out.v = std::move(arr);
        }
    } else {
        out.v = parse_number_token(c);
    }
    return out;
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.text_ = text;
    Cursor c{text};
    std::string prefix;
    std::map<std::string, int> array_counts;
    while (c.pos < text.size()) {
        skip_ws(c);
        if (at_line_end(c)) {
            next_line(c);
            continue;
        }
        if (text[c.pos] == '[') {
            const bool array_table = (c.pos + 1 < text.size() && text[c.pos + 1] == '[');
            c.pos += array_table ? 2 : 1;
            const std::string name = parse_bare_key(c);
            skip_ws(c);
            const std::string closer = array_table ? "]]" : "]";
            if (text.compare(c.pos, closer.size(), closer) != 0)
                throw ConfigError("expected '" + closer + "' after table name", c.line, c.col());
            c.pos += closer.size();
            if (array_table) {
                const int idx = array_counts[name]++;
                prefix = name + "." + std::to_string(idx);
                cfg.values_[name + ".__count"] =
                    ConfigValue{double(array_counts[name]), c.line};
            } else {
                prefix = name;
            }
            if (!at_line_end(c))
                throw ConfigError("unexpected characters after table header", c.line, c.col());
            next_line(c);
            continue;
        }
        const std::string key = parse_bare_key(c);
        skip_ws(c);
        if (c.pos >= text.size() || text[c.pos] != '=')
            throw ConfigError("expected '=' after key '" + key + "'", c.line, c.col());
        ++c.pos;
        ConfigValue value = parse_value(c);
        if (!at_line_end(c))
            throw ConfigError("unexpected characters after value for '" + key + "'", c.line,
                              c.col());
        const std::string full = prefix.empty() ? key : prefix + "." + key;
        cfg.values_[full] = std::move(value);
        next_line(c);
    }
    (void)origin;
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

const ConfigValue& Config::at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key '" + key + "'");
    return it->second;
}

double Config::number(const std::string& key) const {
    const auto& cv = at(key);
    if (const double* d = std::get_if<double>(&cv.v)) return *d;
    throw ConfigError("config key '" + key + "' is not a number", cv.line, 1);
}

double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::string Config::str(const std::string& key) const {
    const auto& cv = at(key);
    if (const std::string* s = std::get_if<std::string>(&cv.v)) return *s;
    throw ConfigError("config key '" + key + "' is not a string", cv.line, 1);
}

std::string Config::str_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? str(key) : fallback;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& cv = at(key);
    if (const bool* b = std::get_if<bool>(&cv.v)) return *b;
    throw ConfigError("config key '" + key + "' is not a boolean", cv.line, 1);
}

std::vector<double> Config::numbers(const std::string& key) const {
    const auto& cv = at(key);
    if (const auto* a = std::get_if<std::vector<double>>(&cv.v)) return *a;
    if (const double* d = std::get_if<double>(&cv.v)) return {*d};
    throw ConfigError("config key '" + key + "' is not a numeric array", cv.line, 1);
}

std::vector<double> Config::numbers_or(const std::string& key,
                                       std::vector<double> fallback) const {
    return has(key) ? numbers(key) : fallback;
}

int Config::table_count(const std::string& prefix) const {
    auto it = values_.find(prefix + ".__count");
    if (it == values_.end()) return 0;
    return static_cast<int>(std::get<double>(it->second.v));
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qspec
