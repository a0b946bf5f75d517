#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbflow {

/// Plain-text key/value configuration with optional [section] headers.
/// Lines: `key = value`, `#` or `;` comments. Section names prefix keys as
/// "section.key". Values are kept verbatim; typed accessors parse on demand
/// and report the offending key and line on failure.
class ConfigFile {
  public:
    ConfigFile() = default;

    static ConfigFile parse_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("config: cannot open " + path);
        std::stringstream ss;
        ss << is.rdbuf();
        return parse_string(ss.str(), path);
    }

    static ConfigFile parse_string(const std::string& text,
                                   const std::string& origin = "<string>") {
        ConfigFile cfg;
        std::istringstream is(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            std::string s = strip(line);
            if (s.empty() || s[0] == '#' || s[0] == ';') continue;
            if (s.front() == '[') {
                if (s.back() != ']')
                    throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                             ": malformed section header");
                section = strip(s.substr(1, s.size() - 2));
                continue;
            }
            auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                         ": expected key = value");
            std::string key = strip(s.substr(0, eq));
            std::string val = strip(s.substr(eq + 1));
            if (key.empty())
                throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                         ": empty key");
            if (!section.empty()) key = section + "." + key;
            cfg.values_[key] = val;
            cfg.order_.push_back(key);
        }
        return cfg;
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& dflt = "") const {
        auto it = values_.find(key);
        return it == values_.end() ? dflt : it->second;
    }

    double get_double(const std::string& key, double dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        if (it->second == "inf") return std::numeric_limits<double>::infinity();
        try {
            size_t pos = 0;
            double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "': bad number '" +
                                     it->second + "'");
        }
    }

    int get_int(const std::string& key, int dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        try {
            size_t pos = 0;
            int v = std::stoi(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw std::runtime_error("config: key '" + key + "': bad integer '" +
                                     it->second + "'");
        }
    }

    bool get_bool(const std::string& key, bool dflt) const {
        auto it = values_.find(key);
        if (it == values_.end()) return dflt;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw std::runtime_error("config: key '" + key + "': bad bool '" +
                                 it->second + "'");
    }

    std::vector<int> get_int_list(const std::string& key) const {
        std::vector<int> out;
        auto it = values_.find(key);
        if (it == values_.end()) return out;
        std::istringstream is(it->second);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            tok = strip(tok);
            if (tok.empty()) continue;
            try {
                out.push_back(std::stoi(tok));
            } catch (const std::exception&) {
                throw std::runtime_error("config: key '" + key + "': bad list entry '" +
                                         tok + "'");
            }
        }
        return out;
    }

    /// Keys in first-seen order, for embedding the resolved config in outputs.
    const std::vector<std::string>& keys() const { return order_; }

  private:
    static std::string strip(const std::string& s) {
        size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }
    std::map<std::string, std::string> values_;
    std::vector<std::string> order_;
};

}  // namespace fbflow
