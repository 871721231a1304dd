#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mma {

/// Shortest round-trip text for a double (printf %.17g).
std::string format_double(double x);

/// Quotes a field when it contains a comma, quote, CR or LF (RFC 4180).
std::string csv_field(std::string_view text);

/// Writes RFC 4180 records terminated by CRLF.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

struct NumericCsv {
  std::vector<std::string> header;
  Eigen::MatrixXd values;
};

/// Parses a rectangular numeric CSV. Errors are ConfigError messages of the form
/// "<source>:<line>: <what>".
NumericCsv parse_numeric_csv(std::string_view text, bool has_header, const std::string& source = "<csv>");
NumericCsv read_numeric_csv(const std::filesystem::path& path, bool has_header);

/// Writes a matrix with an optional header row.
void write_numeric_csv(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& header = {});

}  // namespace mma
