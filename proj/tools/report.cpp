#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "anisoframe/errors.hpp"
#include "anisoframe/format.hpp"

namespace anisoframe::cli {

namespace {

void render(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent) * (depth + 1), ' ') : "";
  const std::string pad_close = indent > 0 ? std::string(static_cast<std::size_t>(indent) * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << Json(it.key()).dump() << sep;
        render(os, it.value(), indent, depth + 1);
      }
      os << nl << pad_close << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(), [](const Json& v) { return v.is_structured(); });
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << (flat ? (indent > 0 ? ", " : ",") : ",");
        if (!flat) os << nl << pad;
        first = false;
        render(os, v, indent, depth + 1);
      }
      if (!flat) os << nl << pad_close;
      os << ']';
      return;
    }
    case Json::value_t::number_float:
      os << fmt17(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  render(os, j, indent, 0);
  os << '\n';
  return os.str();
}

std::string dump_json_line(const Json& j) {
  std::ostringstream os;
  render(os, j, 0, 0);
  return os.str();
}

Json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json nums(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

OutDir::OutDir(std::filesystem::path root) : root_(std::move(root)) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw FormatError("cannot create output directory " + root_.string() + ": " + ec.message());
}

std::filesystem::path OutDir::path(const std::string& name) const { return root_ / name; }

void OutDir::write_text(const std::string& name, const std::string& text) const {
  std::ofstream os(path(name), std::ios::binary);
  if (!os) throw FormatError("cannot write " + path(name).string());
  os << text;
  if (!os) throw FormatError("write failed for " + path(name).string());
}

void OutDir::write_json(const std::string& name, const Json& j) const { write_text(name, dump_json(j)); }

void OutDir::mark_failed(const std::string& message) const {
  std::ofstream os(path("FAILED"), std::ios::binary);
  os << message << '\n';
}

void OutDir::clear_failed() const {
  std::error_code ec;
  std::filesystem::remove(path("FAILED"), ec);
}

void CsvTable::add(const std::vector<double>& row) {
  std::vector<std::string> cells;
  for (double v : row) cells.push_back(fmt17(v));
  rows.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_field(cells[i]);
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string svg_plot(const PlotSpec& spec, const std::vector<Series>& series) {
  constexpr double W = 640, H = 420, L = 70, R = 150, T = 40, B = 50;
  auto tx = [&](double v) { return spec.log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return spec.log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_x || x > 0) && (!spec.log_y || y > 0);
  };
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double v) { return L + (tx(v) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double v) { return H - B - (ty(v) - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(spec.title)
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4, fy = y0 + (y1 - y0) * k / 4;
    const double gx = L + (W - L - R) * k / 4, gy = H - B - (H - T - B) * k / 4;
    os << "<text x=\"" << gx << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
       << short_num(spec.log_x ? std::pow(10, fx) : fx) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << gy + 4 << "\" text-anchor=\"end\">"
       << short_num(spec.log_y ? std::pow(10, fy) : fy) << "</text>\n";
  }
  os << "<text x=\"" << L + (W - L - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
     << xml_escape(spec.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << T + (H - T - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << T + (H - T - B) / 2 << ")\">" << xml_escape(spec.y_label) << "</text>\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = colors[si % 6];
    std::ostringstream pts;
    bool have_prev = false;
    double prev_y = 0;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      if (s.step && have_prev) pts << short_num(px(s.x[i])) << ',' << short_num(py(prev_y)) << ' ';
      pts << short_num(px(s.x[i])) << ',' << short_num(py(s.y[i])) << ' ';
      have_prev = true;
      prev_y = s.y[i];
    }
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (si + 1) << "\" fill=\"" << color << "\">"
       << xml_escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace anisoframe::cli
