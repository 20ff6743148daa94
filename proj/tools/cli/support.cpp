#include "support.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace cli {

int exit_code(floqept_status s) {
  switch (s) {
    case FLOQEPT_OK: return 0;
    case FLOQEPT_ERR_INVALID_ARGUMENT:
    case FLOQEPT_ERR_VALIDATION: return 2;
    case FLOQEPT_ERR_NUMERICAL:
    case FLOQEPT_ERR_RANGE: return 3;
    case FLOQEPT_ERR_IO: return 4;
    case FLOQEPT_ERR_INTERNAL: return 5;
  }
  return 5;
}

void check(floqept_status s, const std::string& context) {
  if (s == FLOQEPT_OK) return;
  std::string msg = std::string(floqept_status_name(s)) + " error";
  if (!context.empty()) msg += " in " + context;
  msg += ": ";
  msg += floqept_last_error();
  throw CliError(exit_code(s), msg);
}

Config make_config() {
  floqept_config* c = nullptr;
  check(floqept_config_create(&c));
  return Config(c);
}

Config clone(const floqept_config* c) {
  floqept_config* out = nullptr;
  check(floqept_config_clone(c, &out));
  return Config(out);
}

double get(const floqept_config* c, const std::string& key) {
  double v = 0;
  check(floqept_config_get_double(c, key.c_str(), &v), key);
  return v;
}

void set(floqept_config* c, const std::string& key, double v) {
  check(floqept_config_set_double(c, key.c_str(), v), "setting " + key);
}

void set(floqept_config* c, const std::string& key, const std::string& v) {
  check(floqept_config_set(c, key.c_str(), v.c_str()), "setting " + key);
}

std::string format_config(const floqept_config* c) {
  std::size_t need = 0;
  check(floqept_config_format(c, nullptr, 0, &need));
  std::string buf(need, '\0');
  check(floqept_config_format(c, buf.data(), buf.size(), &need));
  buf.resize(need - 1);
  return buf;
}

json settings_json(const floqept_config* c) {
  json j = json::object();
  for (std::size_t i = 0; i < floqept_config_key_count(); ++i) {
    const std::string k = floqept_config_key(i);
    const double v = get(c, k);
    if (k == "n1" || k == "n2" || k == "truncation_m") j[k] = static_cast<long long>(v);
    else j[k] = v;
  }
  return j;
}

namespace {

double to_double(const std::string& s, const std::string& what) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw CliError(2, "cannot parse " + what + " value '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  if (text.find(':') != std::string::npos) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw CliError(2, "range '" + text + "' must be start:stop:step");
    const double a = to_double(parts[0], "range"), b = to_double(parts[1], "range"),
                 s = to_double(parts[2], "range");
    if (!(s > 0)) throw CliError(2, "range '" + text + "': step must be positive");
    if (b < a) throw CliError(2, "range '" + text + "': stop below start");
    const auto n = static_cast<std::size_t>(std::floor((b - a) / s + 1e-9)) + 1;
    if (n > 10'000'000) throw CliError(2, "range '" + text + "' has too many points");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a + static_cast<double>(i) * s;
    return out;
  }
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(p, "list"));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) {
    const double v = to_double(p, "integer list");
    if (std::trunc(v) != v || std::abs(v) > 1e6) throw CliError(2, "'" + p + "' is not an integer");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) body_ += ',';
    body_ += header[i];
  }
  body_ += '\n';
}

void CsvWriter::cell(const std::string& s) {
  if (in_row_) body_ += ',';
  ++in_row_;
  if (s.find_first_of(",\"\n") == std::string::npos) {
    body_ += s;
    return;
  }
  body_ += '"';
  for (char ch : s) {
    if (ch == '"') body_ += '"';
    body_ += ch == '\n' ? ' ' : ch;
  }
  body_ += '"';
}

CsvWriter& CsvWriter::operator<<(double v) {
  cell(fmt(v));
  return *this;
}

CsvWriter& CsvWriter::operator<<(int v) {
  cell(std::to_string(v));
  return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
  cell(v);
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("csv row has the wrong number of cells");
  body_ += '\n';
  in_row_ = 0;
  ++rows_;
}

void CsvWriter::write(const std::string& path) const { write_text(path, body_); }

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (first) {
      t.header = cells;
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw CliError(2, path + ": row " + std::to_string(t.rows.size() + 1) + " has " +
                              std::to_string(cells.size()) + " cells, header has " +
                              std::to_string(t.header.size()));
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw CliError(2, path + ": missing header row");
  return t;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliError(4, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw CliError(4, "failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(4, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw CliError(4, "cannot create output directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace cli
