#pragma once

#include <floqept/floqept.h>

#include <json.hpp>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cli {

using json = nlohmann::ordered_json;

// Carries the process exit code.
class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

int exit_code(floqept_status s);
// Throws CliError with the library's last message when s != OK.
void check(floqept_status s, const std::string& context = {});

struct ConfigDeleter {
  void operator()(floqept_config* c) const { floqept_config_destroy(c); }
};
using Config = std::unique_ptr<floqept_config, ConfigDeleter>;

Config make_config();
Config clone(const floqept_config* c);
double get(const floqept_config* c, const std::string& key);
void set(floqept_config* c, const std::string& key, double v);
void set(floqept_config* c, const std::string& key, const std::string& v);
std::string format_config(const floqept_config* c);
// Every setting as a JSON number.
json settings_json(const floqept_config* c);

// "start:stop:step" (inclusive stop) or a comma list.
std::vector<double> parse_range(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

std::string fmt(double v);  // 12 significant digits

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  CsvWriter& operator<<(double v);
  CsvWriter& operator<<(int v);
  CsvWriter& operator<<(const std::string& v);
  CsvWriter& operator<<(const char* v) { return *this << std::string(v); }
  void end_row();
  std::size_t rows() const { return rows_; }
  void write(const std::string& path) const;

 private:
  void cell(const std::string& s);
  std::size_t columns_;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
  std::string body_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  // Index of the named column; -1 when absent.
  int column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);
void ensure_dir(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& name);

}  // namespace cli
