#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ams/models.hpp"
#include "ams/sde.hpp"
#include "ams/stats.hpp"
#include "ams/three_level.hpp"

namespace ams::io {

using Json = nlohmann::json;

enum class ValueType { Number, Integer, Unsigned, Boolean, String, Enum, NumberList, IntegerList, OptionalNumber };

/// One documented configuration key. Paths are dotted ("scheme.dt").
struct KeySpec {
  std::string path;
  ValueType type;
  Json fallback;
  std::string description;
  std::vector<std::string> choices;   // Enum only
  std::vector<std::string> commands;  // subcommands that read the key
};

/// Every key the configuration file may contain.
const std::vector<KeySpec>& config_schema();

/// Checks keys and types against the schema and fills in defaults.
/// Unknown keys, wrong types and bad enum values raise ConfigError.
Json resolve_config(const Json& user);

/// Reads a configuration file, or the "config" member of a run manifest.
Json load_config_file(const std::string& path);

/// Markdown reference page of all keys and defaults.
std::string config_reference_markdown();

struct ModelSection {
  ModelKind kind = ModelKind::Drift;
  double beta = 1.0;
  double mu = 0.3;
};

struct ProblemSection {
  CoordinateChoice coordinate = CoordinateChoice::Committor;
  DriftGeometry drift;
  double xC = -0.9;
  std::string committorGrid;
};

struct AmsSection {
  int N = 100;
  int n = 1;
  std::uint32_t realizations = 1;
  std::uint32_t firstRealization = 0;
  std::uint64_t maxIterations = 100'000'000ULL;
  std::uint64_t maxSteps = 1'000'000'000ULL;
  std::string variant = "generalized";
  bool brownianBridge = false;
};

struct CommittorSection {
  double spacing = 0.03;
  double tol = 1e-8;
  double x0 = -1.5, x1 = 1.5, y0 = -1.0, y1 = 2.0;
  bool setDirichlet = false;
  double monitoringDt = 0.0;
  int points1d = 2001;
};

struct SweepSection {
  std::vector<int> N;
  std::vector<double> dt;
  std::vector<double> beta;
  std::uint32_t realizations = 100;
  TauAsymptote tauAsymptote = TauAsymptote::Reference;
};

struct ThreeLevelSection {
  RatePreset preset = RatePreset::LinBeta;
  std::vector<double> cutoffs;
  double betaMin = 1.5, betaMax = 20.0, betaStep = 0.01;
};

/// Typed view of a resolved configuration.
struct ExperimentConfig {
  std::uint64_t masterSeed = 0;
  int threads = 1;
  std::string output = "out";
  ModelSection model;
  ProblemSection problem;
  IntegratorScheme scheme;
  AmsSection ams;
  std::uint64_t dnsM = 10000;
  std::uint64_t dnsMaxSteps = 1'000'000'000ULL;
  std::optional<double> referenceAlpha;
  std::optional<double> referenceTau;
  CommittorSection committor;
  SweepSection sweep;
  ThreeLevelSection threeLevel;
};

ExperimentConfig to_experiment(const Json& resolved);

}  // namespace ams::io
