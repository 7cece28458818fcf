#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace anisoframe::cli {

using Json = nlohmann::ordered_json;

// Compact-free, deterministic rendering; every double goes through fmt17.
std::string dump_json(const Json& j, int indent = 2);
std::string dump_json_line(const Json& j);

// JSON value for a double, with inf/nan mapped to strings since JSON has no literal for them.
Json num(double v);
Json nums(const std::vector<double>& v);

class OutDir {
 public:
  explicit OutDir(std::filesystem::path root);
  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path path(const std::string& name) const;
  void write_text(const std::string& name, const std::string& text) const;
  void write_json(const std::string& name, const Json& j) const;
  void mark_failed(const std::string& message) const;
  void clear_failed() const;

 private:
  std::filesystem::path root_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  void add(const std::vector<double>& row);
  std::string str() const;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  bool step = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

// Self-contained SVG line plot.
std::string svg_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace anisoframe::cli
