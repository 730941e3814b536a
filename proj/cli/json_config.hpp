#pragma once

// Lets CLI11 read --config files written as flat JSON objects. Keys match long
// option names of the selected subcommand; underscores are accepted in place
// of dashes. The file is parsed after the command line, so flags win.

#include <algorithm>
#include <istream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    throw CLI::FileError("writing JSON configs is not supported");
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
    std::vector<std::string> parents;
    auto subs = root_->get_subcommands();
    if (!subs.empty()) parents.push_back(subs.front()->get_name());
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else if (value.is_object()) {
        throw CLI::ConfigError("config value for '" + key + "' must not be an object");
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* root_;

  static std::string scalar(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }
};
