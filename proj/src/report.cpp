#include "nmgauge/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nmgauge {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string csv_header() {
  return "suite,observable,parameters,estimate,error,reference,deviation,bound,margin,method,seed,pass,wall_time_s";
}

std::string csv_line(const ReportRow& r) {
  std::ostringstream os;
  os << quote(r.suite) << ',' << quote(r.observable) << ',' << quote(r.parameters) << ','
     << format_double(r.estimate) << ',' << format_double(r.error) << ',' << opt(r.reference) << ','
     << opt(r.deviation) << ',' << opt(r.bound) << ',' << opt(r.margin) << ',' << r.method << ',' << r.seed << ','
     << (r.pass ? "true" : "false") << ',' << format_double(r.wall_time);
  return os.str();
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = csv_header() + "\n";
  for (const auto& r : rows) out += csv_line(r) + "\n";
  return out;
}

json to_json(const std::vector<ReportRow>& rows, const json& resolved_config) {
  json doc;
  doc["config"] = resolved_config;
  doc["rows"] = json::array();
  for (const auto& r : rows) {
    doc["rows"].push_back({{"suite", r.suite},
                           {"observable", r.observable},
                           {"parameters", r.parameters},
                           {"estimate", r.estimate},
                           {"error", r.error},
                           {"reference", opt_json(r.reference)},
                           {"deviation", opt_json(r.deviation)},
                           {"bound", opt_json(r.bound)},
                           {"margin", opt_json(r.margin)},
                           {"method", r.method},
                           {"seed", r.seed},
                           {"pass", r.pass},
                           {"wall_time_s", r.wall_time}});
  }
  return doc;
}

EmittedFiles emit(const std::vector<ReportRow>& rows, const json& resolved_config, const std::filesystem::path& dir,
                  const std::string& prefix) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  EmittedFiles files{dir / (prefix + ".csv"), dir / (prefix + ".json")};
  {
    std::ofstream out(files.csv);
    if (!out) throw std::runtime_error("cannot write " + files.csv.string());
    out << to_csv(rows);
  }
  {
    std::ofstream out(files.json);
    if (!out) throw std::runtime_error("cannot write " + files.json.string());
    out << to_json(rows, resolved_config).dump(2) << '\n';
  }
  return files;
}

}  // namespace nmgauge
