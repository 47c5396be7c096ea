#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

// Named scalars, tables and metadata of one experiment, serialized to JSON
// (complete) and CSV (first table only).

namespace hamoracle::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "hamoracle 1.0.0";
inline constexpr int kSignificantDigits = 12;

double round_significant(double v, int digits = kSignificantDigits);

struct Scalar {
  std::string name;
  double value = 0.0;
  std::optional<double> expected;
  double tolerance = 0.0;
  std::optional<double> lower;
  std::optional<double> upper;
  // Empty for informational scalars.
  std::optional<bool> pass;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

class ExperimentReport {
 public:
  explicit ExperimentReport(std::string name);

  const std::string& name() const { return name_; }

  void add_scalar(Scalar s);
  void add_value(const std::string& name, double value);
  // Passes iff |value - expected| <= tolerance.
  void add_check(const std::string& name, double value, double expected, double tolerance);
  // Passes iff lower <= value <= upper (either side optional).
  void add_range_check(const std::string& name, double value, std::optional<double> lower,
                       std::optional<double> upper);
  void add_flag(const std::string& name, bool ok);
  void add_table(Table t);
  void set_metadata(const std::string& key, Json value);
  // Extra top-level JSON member, e.g. a control schedule.
  void set_section(const std::string& key, Json value);

  const std::vector<Scalar>& scalars() const { return scalars_; }
  const std::vector<Table>& tables() const { return tables_; }
  const Scalar* find(const std::string& name) const;

  bool all_pass() const;
  std::vector<std::string> failures() const;

  // timestamp = false omits the timestamp for byte-stable comparison.
  Json to_json(bool timestamp = true) const;
  std::string to_csv() const;

 private:
  std::string name_;
  std::vector<Scalar> scalars_;
  std::vector<Table> tables_;
  Json metadata_ = Json::object();
  Json sections_ = Json::object();
};

// --out, then HAMORACLE_OUT_DIR, then the working directory.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag);

// Writes to a temporary sibling and renames over the target.
void write_atomic(const std::filesystem::path& path, const std::string& content);

struct WrittenFiles {
  std::filesystem::path json;
  std::optional<std::filesystem::path> csv;
};

WrittenFiles write_report(const ExperimentReport& r, const std::filesystem::path& dir, bool csv);

}  // namespace hamoracle::report
