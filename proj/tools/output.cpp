#include "output.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include "nlpa/errors.hpp"

namespace nlpa::cli {

namespace {

std::string hex(const unsigned char* d, unsigned n) {
  std::ostringstream o;
  for (unsigned i = 0; i < n; ++i) o << std::hex << std::setw(2) << std::setfill('0') << int(d[i]);
  return o.str();
}

std::string quote(const std::string& f) {
  if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
  std::string q = "\"";
  for (char c : f) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char d[EVP_MAX_MD_SIZE];
  unsigned n = 0;
  EVP_Digest(bytes.data(), bytes.size(), d, &n, EVP_sha256(), nullptr);
  return hex(d, n);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw Error(ErrorCode::Io, "cannot write " + path);
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << quote(fields[i]);
  out_ << "\r\n";
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error(ErrorCode::Io, "failed writing " + path_);
}

std::string fmt(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

std::string artifact_version() { return "1.0.0"; }

std::string Manifest::params_hash() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["params"] = params.to_json();
  return sha256_hex(j.dump());
}

void Manifest::add_output(const std::string& dir, const std::string& name) {
  outputs.emplace_back(name, sha256_file((std::filesystem::path(dir) / name).string()));
}

nlohmann::ordered_json Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["artifact"] = "nlpa";
  j["version"] = artifact_version();
  j["command"] = command;
  j["params"] = params.to_json();
  j["resolved"] = resolved;
  j["params_hash"] = params_hash();
  nlohmann::ordered_json o = nlohmann::ordered_json::object();
  for (const auto& [name, h] : outputs) o[name] = h;
  j["outputs"] = o;
  return j;
}

void Manifest::write(const std::string& dir) const {
  const auto path = (std::filesystem::path(dir) / "manifest.json").string();
  std::ofstream out(path, std::ios::binary);
  out << to_json().dump(2) << "\n";
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
}

Manifest Manifest::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read manifest " + path);
  nlohmann::json j;
  try {
    in >> j;
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.params = Params::from_json(j.at("params"));
    for (const auto& [k, v] : j.at("outputs").items()) m.outputs.emplace_back(k, v.get<std::string>());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("malformed manifest " + path + ": " + e.what());
  }
}

}  // namespace nlpa::cli
