#include "twomode/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "twomode/error.hpp"

#ifndef TWOMODE_VERSION
#define TWOMODE_VERSION "0.0.0"
#endif

namespace twomode::report {

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw Error("write failed: " + path.string());
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

std::string fmt(double x, int prec = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

// About five round-numbered ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

}  // namespace

const char* tool_version() { return TWOMODE_VERSION; }

std::string format_number(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", *x);
  return buf;
}

CsvTable::CsvTable(std::string schema, int version, std::vector<std::string> columns)
    : schema_(std::move(schema)), version_(version), columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw DomainError("CSV row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(columns_.size()));
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  os << "# twomode " << schema_ << " v" << version_ << '\n';
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(columns_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["parameters"] = parameters;
  j["tool_version"] = tool_version();
  j["tolerances"] = tolerances;
  j["outputs"] = outputs;
  j["wall_time"] = wall_time;
  j["exit_code"] = exit_code;
  if (!error.empty()) j["error"] = error;
  j["finished_utc"] = utc_now();
  return j;
}

void RunManifest::write(const std::filesystem::path& path) const { write_text(path, to_json().dump(2) + "\n"); }

std::string SvgPlot::render() const {
  const double ml = 80, mr = 150, mt = 40, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!log_y || y > 0.0); };

  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series)
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const double y = log_y ? std::log10(s.y[i]) : s.y[i];
      xlo = std::min(xlo, s.x[i]);
      xhi = std::max(xhi, s.x[i]);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
  if (xhi == xlo) xlo -= 1, xhi += 1;
  if (log_y) {
    ylo = std::floor(ylo);
    yhi = std::ceil(yhi);
    if (yhi == ylo) yhi += 1;
  } else if (yhi == ylo) {
    ylo -= 1, yhi += 1;
  } else {
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad, yhi += pad;
  }
  auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * pw; };
  auto py = [&](double y) { return mt + (1.0 - (y - ylo) / (yhi - ylo)) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(title)
     << "</text>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : linear_ticks(xlo, xhi)) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(t) << "\" y2=\"" << mt + ph + 5
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << px(t) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  std::vector<double> yt;
  if (log_y) {
    const int every = std::max(1, static_cast<int>(std::ceil((yhi - ylo) / 8.0)));
    for (int e = static_cast<int>(ylo); e <= static_cast<int>(yhi); e += every) yt.push_back(e);
  } else {
    yt = linear_ticks(ylo, yhi);
  }
  for (double t : yt) {
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << ml << "\" y2=\"" << py(t)
       << "\" stroke=\"black\"/>\n";
    const std::string label = log_y ? "1e" + fmt(t) : fmt(t);
    os << "<text x=\"" << ml - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">" << escape_xml(xlabel)
     << "</text>\n";
  os << "<text transform=\"translate(18," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape_xml(ylabel) << "</text>\n";

  for (size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    std::ostringstream path;
    bool first = true;
    for (size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      const double X = px(s.x[i]), Y = py(log_y ? std::log10(s.y[i]) : s.y[i]);
      path << (first ? "M" : " L") << X << ' ' << Y;
      first = false;
      os << "<circle cx=\"" << X << "\" cy=\"" << Y << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }
    if (s.connect && !first)
      os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\"/>\n";
    const double ly = mt + 14 + 18 * si;
    os << "<circle cx=\"" << ml + pw + 14 << "\" cy=\"" << ly - 4 << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
    os << "<text x=\"" << ml + pw + 24 << "\" y=\"" << ly << "\">" << escape_xml(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void SvgPlot::write(const std::filesystem::path& path) const { write_text(path, render()); }

}  // namespace twomode::report
