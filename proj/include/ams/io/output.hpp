#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ams/ams.hpp"
#include "ams/dns.hpp"
#include "ams/stats.hpp"

namespace ams::io {

using Json = nlohmann::json;

/// Object id git would give a blob with this content: SHA-1 of "blob <len>\0" + content.
std::string git_blob_hash(std::string_view content);
std::string git_blob_hash_file(const std::string& path);

/// Hash of the configuration without the keys that cannot change results
/// (threads, output directory).
std::string config_hash(const Json& resolved);

/// One JSON-lines record; no wall-clock fields so reruns are byte-identical.
Json ams_record(const AmsOutcome& outcome, const std::string& configHash);

/// Minimal CSV table with a leading "# config-hash <id>" comment line.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  CsvTable& row(const std::vector<std::string>& cells);
  std::string render(const std::string& configHash) const;
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest decimal text that reads back to the same double.
std::string num(double v);
std::string num(std::uint64_t v);
std::string num(int v);

/// Writes result files into one directory and finally a manifest.json that
/// lists the command, the resolved configuration, the seed, the hashes of
/// the inputs and of every file written.
class RunWriter {
 public:
  RunWriter(std::string dir, std::string command, Json resolved);

  const std::string& dir() const { return dir_; }
  const std::string& hash() const { return hash_; }

  void add_input(const std::string& path);
  void write(const std::string& name, const std::string& content);
  void note(const std::string& key, Json value) { extra_[key] = std::move(value); }
  /// Writes manifest.json and returns its path.
  std::string finish();

 private:
  std::string dir_;
  std::string command_;
  Json resolved_;
  std::string hash_;
  std::map<std::string, std::string> inputs_;
  std::map<std::string, std::string> outputs_;
  Json extra_ = Json::object();
};

}  // namespace ams::io
