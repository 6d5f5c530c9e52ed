// Copyright 2026 The ARCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARCS_CONFIG_HPP
#define ARCS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

namespace arcs {

// Line-oriented `key = value` configuration with [section] headers.
// '#' starts a comment; whitespace around keys and values is ignored.
class ConfigFile {
 public:
  ConfigFile() = default;

  static ConfigFile parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    ConfigFile config;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw std::runtime_error("config: bad section at line " +
                                   std::to_string(line_no));
        section = line.substr(1, line.size() - 2);
        trim(section);
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config: expected key = value at line " +
                                 std::to_string(line_no));
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      trim(key);
      trim(value);
      config.values_[section + "." + key] = value;
    }
    return config;
  }

  bool has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
  }

  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback = "") const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : it->second;
  }

  std::string require_string(const std::string& section,
                             const std::string& key) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end())
      throw std::runtime_error("config: missing required key [" + section +
                               "] " + key);
    return it->second;
  }

  double get_double(const std::string& section, const std::string& key,
                    double fallback) const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : std::stod(it->second);
  }

  long long get_int(const std::string& section, const std::string& key,
                    long long fallback) const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : std::stoll(it->second);
  }

  std::uint64_t get_seed(const std::string& section, const std::string& key,
                         std::uint64_t fallback) const {
    const auto it = values_.find(section + "." + key);
    return it == values_.end() ? fallback : std::stoull(it->second);
  }

  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const {
    const auto it = values_.find(section + "." + key);
    if (it == values_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::runtime_error("config: boolean expected for [" + section +
                             "] " + key);
  }

  void set(const std::string& section, const std::string& key,
           const std::string& value) {
    values_[section + "." + key] = value;
  }

 private:
  static void trim(std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    s = first == std::string::npos ? std::string()
                                   : s.substr(first, last - first + 1);
  }

  std::map<std::string, std::string> values_;
};

}  // namespace arcs

#endif  // ARCS_CONFIG_HPP
