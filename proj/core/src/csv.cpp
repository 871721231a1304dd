#include "mma/csv.hpp"

#include "mma/config.hpp"
#include "mma/errors.hpp"

#include <charconv>
#include <cstdio>

namespace mma {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << "\r\n";
}

namespace {

/// Splits RFC 4180 text into records. Each record remembers its starting line.
struct Record {
  std::size_t line;
  std::vector<std::string> fields;
};

std::vector<Record> split_records(std::string_view text, const std::string& source) {
  std::vector<Record> records;
  std::size_t i = 0;
  std::size_t line = 1;
  while (i < text.size()) {
    Record rec{line, {}};
    std::string field;
    bool quoted_field = false;
    for (;;) {
      if (i < text.size() && text[i] == '"' && field.empty() && !quoted_field) {
        quoted_field = true;
        ++i;
        for (;;) {
          if (i >= text.size()) throw ConfigError(source + ":" + std::to_string(rec.line) + ": unterminated quoted field");
          const char c = text[i++];
          if (c == '"') {
            if (i < text.size() && text[i] == '"') {
              field += '"';
              ++i;
              continue;
            }
            break;
          }
          if (c == '\n') ++line;
          field += c;
        }
        continue;
      }
      if (i >= text.size() || text[i] == '\n' || (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n')) {
        rec.fields.push_back(std::move(field));
        if (i < text.size()) i += text[i] == '\r' ? 2 : 1;
        ++line;
        break;
      }
      if (text[i] == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        quoted_field = false;
        ++i;
        continue;
      }
      if (quoted_field) {
        throw ConfigError(source + ":" + std::to_string(line) + ": unexpected character after closing quote");
      }
      field += text[i++];
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].find_first_not_of(" \t\r") == std::string::npos;
    if (!blank) records.push_back(std::move(rec));
  }
  return records;
}

double parse_number(std::string_view field, const std::string& where) {
  const auto b = field.find_first_not_of(" \t\r");
  const auto e = field.find_last_not_of(" \t\r");
  if (b == std::string_view::npos) throw ConfigError(where + ": empty field");
  field = field.substr(b, e - b + 1);
  const char* first = field.data() + (field.front() == '+' ? 1 : 0);
  const char* last = field.data() + field.size();
  double v = 0.0;
  const auto r = std::from_chars(first, last, v);
  if (r.ec != std::errc{} || r.ptr != last) {
    throw ConfigError(where + ": '" + std::string(field) + "' is not a number");
  }
  return v;
}

}  // namespace

NumericCsv parse_numeric_csv(std::string_view text, bool has_header, const std::string& source) {
  auto records = split_records(text, source);
  NumericCsv out;
  std::size_t first = 0;
  if (has_header) {
    if (records.empty()) throw ConfigError(source + ":1: missing header row");
    out.header = records[0].fields;
    first = 1;
  }
  if (records.size() <= first) throw ConfigError(source + ": no data rows");
  const std::size_t cols = records[first].fields.size();
  if (has_header && out.header.size() != cols) {
    throw ConfigError(source + ":" + std::to_string(records[first].line) + ": expected " +
                      std::to_string(out.header.size()) + " fields as in the header, found " + std::to_string(cols));
  }
  out.values.resize(static_cast<Eigen::Index>(records.size() - first), static_cast<Eigen::Index>(cols));
  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = source + ":" + std::to_string(rec.line);
    if (rec.fields.size() != cols) {
      throw ConfigError(where + ": expected " + std::to_string(cols) + " fields, found " +
                        std::to_string(rec.fields.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      out.values(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(c)) =
          parse_number(rec.fields[c], where + ": column " + std::to_string(c + 1));
    }
  }
  return out;
}

NumericCsv read_numeric_csv(const std::filesystem::path& path, bool has_header) {
  return parse_numeric_csv(read_text_file(path), has_header, path.string());
}

void write_numeric_csv(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& header) {
  CsvWriter w(out);
  if (!header.empty()) w.row(header);
  std::vector<std::string> fields(static_cast<std::size_t>(values.cols()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) fields[static_cast<std::size_t>(j)] = format_double(values(i, j));
    w.row(fields);
  }
}

}  // namespace mma
