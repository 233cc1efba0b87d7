#include "ams/io/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "ams/error.hpp"

namespace ams::io {

namespace {

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), content.data(), content.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
    throw Error(ErrorKind::InternalInconsistency, "SHA-1 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[md[k] >> 4];
    out += hex[md[k] & 15];
  }
  return out;
}

std::string git_blob_hash_file(const std::string& path) { return git_blob_hash(read_all(path)); }

std::string config_hash(const Json& resolved) {
  Json c = resolved;
  c.erase("threads");
  c.erase("output");
  return git_blob_hash(c.dump());
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

Json ams_record(const AmsOutcome& o, const std::string& configHash) {
  Json j;
  j["realization"] = o.realization;
  j["seed"] = o.seed;
  j["N"] = o.N;
  j["n"] = o.n;
  j["alphaHat"] = o.alphaHat;
  j["K"] = o.K;
  j["r"] = o.r;
  j["extinction"] = o.extinction;
  j["levels"] = o.levels;
  j["killed"] = o.killed;
  j["durations"] = o.reactiveDurations;
  j["stepsInit"] = o.stepsInit;
  j["stepsBranch"] = o.stepsBranch;
  j["configHash"] = configHash;
  return j;
}

CsvTable& CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw Error(ErrorKind::InternalInconsistency, "CSV row width mismatch");
  rows_.push_back(cells);
  return *this;
}

std::string CsvTable::render(const std::string& configHash) const {
  std::string out = "# config-hash " + configHash + "\n";
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out += (k ? "," : "") + csv_cell(cells[k]);
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

RunWriter::RunWriter(std::string dir, std::string command, Json resolved)
    : dir_(std::move(dir)), command_(std::move(command)), resolved_(std::move(resolved)), hash_(config_hash(resolved_)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorKind::InvalidArgument, "cannot create output directory " + dir_ + ": " + ec.message());
}

void RunWriter::add_input(const std::string& path) { inputs_[path] = git_blob_hash_file(path); }

void RunWriter::write(const std::string& name, const std::string& content) {
  const std::string path = (std::filesystem::path(dir_) / name).string();
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  outputs_[name] = git_blob_hash(content);
}

std::string RunWriter::finish() {
  Json m;
  m["manifestVersion"] = 1;
  m["command"] = command_;
  m["seed"] = resolved_["masterSeed"];
  m["threads"] = resolved_["threads"];
  m["config"] = resolved_;
  m["configHash"] = hash_;
  m["inputs"] = inputs_;
  m["outputs"] = outputs_;
  for (auto it = extra_.begin(); it != extra_.end(); ++it) m[it.key()] = it.value();
  const std::string path = (std::filesystem::path(dir_) / "manifest.json").string();
  std::ofstream out(path, std::ios::binary);
  out << m.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  return path;
}

}  // namespace ams::io
