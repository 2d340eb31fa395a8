#include "specstab/io/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "specstab/errors.hpp"

namespace specstab::io {

namespace fs = std::filesystem;

std::string format_full(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

bool needs_quotes(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

void append_field(std::string& out, const std::string& field) {
  if (!needs_quotes(field)) {
    out += field;
    return;
  }
  out += '"';
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    append_field(out, row[i]);
  }
  out += '\n';
}

}  // namespace

std::string render_csv(const CsvTable& t) {
  if (t.header.empty()) throw DomainError("render_csv: empty header");
  std::string out;
  append_row(out, t.header);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (t.rows[r].size() != t.header.size())
      throw DomainError("render_csv: row " + std::to_string(r + 1) + " has " +
                        std::to_string(t.rows[r].size()) + " fields, header has " +
                        std::to_string(t.header.size()));
    append_row(out, t.rows[r]);
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, field_open = false;
  int line_no = 1;

  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_open = false;
  };
  auto end_line = [&] {
    end_field();
    lines.push_back(row);
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
        if (c == '\n') ++line_no;
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        field_open = true;
        break;
      case ',':
        end_field();
        field_open = true;  // a field follows the separator, possibly empty
        break;
      case '\r':
        break;
      case '\n':
        end_line();
        ++line_no;
        break;
      default:
        field += c;
        field_open = true;
        break;
    }
  }
  if (quoted)
    throw ConfigError("csv line " + std::to_string(line_no) + ": unterminated quote");
  if (!field.empty() || field_open || !row.empty()) end_line();

  if (lines.empty()) throw ConfigError("csv line 1: missing header");
  CsvTable t;
  t.header = lines.front();
  for (std::size_t r = 1; r < lines.size(); ++r) {
    if (lines[r].size() != t.header.size())
      throw ConfigError("csv line " + std::to_string(r + 1) + ": expected " +
                        std::to_string(t.header.size()) + " fields, found " +
                        std::to_string(lines[r].size()));
    t.rows.push_back(lines[r]);
  }
  return t;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  const fs::path parent = path.parent_path();
  if (!parent.empty()) {
    fs::create_directories(parent, ec);
    if (ec) throw StateError("cannot create " + parent.string() + ": " + ec.message());
  }
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StateError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw StateError("short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw StateError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                           ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace specstab::io
