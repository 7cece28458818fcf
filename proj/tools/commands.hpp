#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "report.hpp"

namespace anisoframe::cli {

// Records every bound option so the effective configuration can be written back out.
class Binder {
 public:
  explicit Binder(CLI::App* app) : app_(app) {}

  template <class T>
  void opt(const std::string& name, T& var, const std::string& help) {
    app_->add_option("--" + name, var, help)->capture_default_str();
    fields_.emplace_back(name, [&var] {
      if constexpr (std::is_floating_point_v<T>) {
        return num(var);
      } else {
        return Json(var);
      }
    });
  }

  Json effective() const {
    Json j = Json::object();
    for (const auto& [name, get] : fields_) j[name] = get();
    return j;
  }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<Json()>>> fields_;
};

struct Common {
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  std::string oracle = "exact";
  std::string config;
};

struct Outcome {
  bool pass = true;
  Json summary = Json::object();
};

struct Command {
  std::string name;
  std::string help;
  // Binds options; returns the runner, which owns the bound variables.
  std::function<std::function<Outcome(const Common&, const OutDir&)>(Binder&)> setup;
};

std::vector<Command> all_commands();

}  // namespace anisoframe::cli
