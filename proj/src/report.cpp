#include "hamoracle/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hamoracle::report {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kSignificantDigits, v);
  return buf;
}

Json number(double v) {
  if (!std::isfinite(v)) return Json(format_number(v));
  return Json(round_significant(v));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

double round_significant(double v, int digits) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

ExperimentReport::ExperimentReport(std::string name) : name_(std::move(name)) {}

void ExperimentReport::add_scalar(Scalar s) { scalars_.push_back(std::move(s)); }

void ExperimentReport::add_value(const std::string& name, double value) {
  Scalar s;
  s.name = name;
  s.value = value;
  scalars_.push_back(std::move(s));
}

void ExperimentReport::add_check(const std::string& name, double value, double expected, double tolerance) {
  Scalar s;
  s.name = name;
  s.value = value;
  s.expected = expected;
  s.tolerance = tolerance;
  s.pass = std::isfinite(value) && std::abs(value - expected) <= tolerance;
  scalars_.push_back(std::move(s));
}

void ExperimentReport::add_range_check(const std::string& name, double value, std::optional<double> lower,
                                       std::optional<double> upper) {
  Scalar s;
  s.name = name;
  s.value = value;
  s.lower = lower;
  s.upper = upper;
  s.pass = std::isfinite(value) && (!lower || value >= *lower) && (!upper || value <= *upper);
  scalars_.push_back(std::move(s));
}

void ExperimentReport::add_flag(const std::string& name, bool ok) {
  Scalar s;
  s.name = name;
  s.value = ok ? 1.0 : 0.0;
  s.expected = 1.0;
  s.pass = ok;
  scalars_.push_back(std::move(s));
}

void ExperimentReport::add_table(Table t) {
  for (const auto& row : t.rows)
    if (row.size() != t.columns.size()) throw std::invalid_argument("table row width mismatch in " + t.name);
  tables_.push_back(std::move(t));
}

void ExperimentReport::set_metadata(const std::string& key, Json value) { metadata_[key] = std::move(value); }

void ExperimentReport::set_section(const std::string& key, Json value) {
  if (key == "name" || key == "scalars" || key == "curves" || key == "metadata" || key == "pass")
    throw std::invalid_argument("reserved report key " + key);
  sections_[key] = std::move(value);
}

const Scalar* ExperimentReport::find(const std::string& name) const {
  for (const Scalar& s : scalars_)
    if (s.name == name) return &s;
  return nullptr;
}

bool ExperimentReport::all_pass() const { return failures().empty(); }

std::vector<std::string> ExperimentReport::failures() const {
  std::vector<std::string> out;
  for (const Scalar& s : scalars_)
    if (s.pass && !*s.pass) out.push_back(s.name);
  return out;
}

Json ExperimentReport::to_json(bool timestamp) const {
  Json j = Json::object();
  j["name"] = name_;
  Json scalars = Json::object();
  for (const Scalar& s : scalars_) {
    Json e = Json::object();
    e["value"] = number(s.value);
    if (s.expected) e["expected"] = number(*s.expected);
    if (s.expected) e["tolerance"] = number(s.tolerance);
    if (s.lower) e["lower"] = number(*s.lower);
    if (s.upper) e["upper"] = number(*s.upper);
    if (s.pass) e["pass"] = *s.pass;
    scalars[s.name] = std::move(e);
  }
  j["scalars"] = std::move(scalars);
  Json tables = Json::object();
  for (const Table& t : tables_) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
      Json r = Json::array();
      for (double v : row) r.push_back(number(v));
      rows.push_back(std::move(r));
    }
    tables[t.name] = Json{{"columns", t.columns}, {"rows", std::move(rows)}};
  }
  j["curves"] = std::move(tables);
  for (const auto& [k, v] : sections_.items()) j[k] = v;
  Json meta = metadata_;
  meta["version"] = kVersion;
  meta["significant_digits"] = kSignificantDigits;
  if (timestamp) meta["timestamp"] = utc_timestamp();
  j["metadata"] = std::move(meta);
  j["pass"] = all_pass();
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  if (tables_.empty()) return {};
  const Table& t = tables_.front();
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv("HAMORACLE_OUT_DIR"); env && *env) return env;
  return std::filesystem::current_path();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

WrittenFiles write_report(const ExperimentReport& r, const std::filesystem::path& dir, bool csv) {
  WrittenFiles out;
  out.json = dir / (r.name() + ".json");
  write_atomic(out.json, r.to_json().dump(2) + "\n");
  if (csv) {
    out.csv = dir / (r.name() + ".csv");
    write_atomic(*out.csv, r.to_csv());
  }
  return out;
}

}  // namespace hamoracle::report
