#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "params.hpp"

namespace nlpa::cli {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// RFC 4180: CRLF records, fields quoted when they contain a comma, quote or
// line break.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

std::string fmt(double x);  // shortest round-trip form

// Written as manifest.json next to the outputs. `params_hash` identifies the
// run and is stamped into image comments; the manifest is the sidecar of the
// CSV and JSON outputs.
struct Manifest {
  std::string command;
  Params params;
  nlohmann::ordered_json resolved = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> outputs;  // file name, sha256

  std::string params_hash() const;
  void add_output(const std::string& dir, const std::string& name);
  nlohmann::ordered_json to_json() const;
  void write(const std::string& dir) const;
  static Manifest read(const std::string& path);
};

std::string artifact_version();

}  // namespace nlpa::cli
