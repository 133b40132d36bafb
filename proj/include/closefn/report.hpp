#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "closefn/error.hpp"
#include "closefn/serialize.hpp"

namespace closefn {

// Column order of every CSV the CLI writes, keyed by command and file.
// docs/csv_schema.json documents the same columns.
inline const std::map<std::string, std::vector<std::string>>& csv_columns() {
  static const std::map<std::string, std::vector<std::string>> cols = {
      {"certify/results.csv", {"rule", "applicable", "epsilon", "delta", "oracle_delta", "sound", "reason"}},
      {"oracle/results.csv", {"epsilon", "delta"}},
      {"sublevel-check/results.csv",
       {"probe", "epsilon", "delta", "definition_holds", "sublevel_holds", "worst_margin"}},
      {"calculus-check/results.csv", {"trial", "rule", "epsilon", "delta", "oracle_delta", "holds"}},
      {"erm/results.csv", {"experiment", "n", "replication", "seed", "delta_hat", "excess_risk"}},
      {"erm/rates.csv", {"experiment", "n", "mean_delta", "stderr_delta", "median_delta", "q90_delta", "mean_excess"}},
      {"online/results.csv",
       {"t", "sup_metric", "grad_metric", "min_metric", "cert_sup_delta", "cert_grad_delta", "cert_min_delta",
        "oracle_delta"}},
      {"online/trajectory.csv", {"t", "theta", "excess", "restarted"}},
      {"localize/results.csv", {"r", "raw", "psi"}},
  };
  return cols;
}

// 17 significant digits round-trip every binary64.
inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) {
    require(row.size() == header_.size(), ErrorCode::InvalidArgument, "CSV row width differs from header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t row_count() const { return rows_.size(); }

  std::string str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  require(EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) == 1, ErrorCode::IoError,
          "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

// Files of one run. summary.json and manifest.json are always written.
struct Report {
  std::map<std::string, CsvTable> tables;  // file name -> table
  Json summary = Json::object();
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(os), ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(static_cast<bool>(os), ErrorCode::IoError, "write failed for " + path.string());
}

// Writes every table, summary.json and a manifest with sizes and sha256 of
// the other files, in name order. Returns the manifest.
inline Json emit_report(const Report& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  require(!ec, ErrorCode::IoError, "cannot create output directory " + out_dir.string());
  std::map<std::string, std::string> files;
  for (const auto& [name, table] : report.tables) files[name] = table.str();
  files["summary.json"] = report.summary.dump(2) + "\n";
  Json listing = Json::array();
  for (const auto& [name, content] : files) {
    write_file(out_dir / name, content);
    listing.push_back({{"name", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }
  Json manifest = {{"files", listing}};
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return manifest;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(static_cast<bool>(is), ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline Json read_json(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

}  // namespace closefn
