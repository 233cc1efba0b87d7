#include "ams/io/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "ams/error.hpp"

namespace ams::io {

namespace {

const std::vector<std::string> kAll = {"run-ams", "run-dns", "committor", "ensemble-sweep", "three-level"};
const std::vector<std::string> kSim = {"run-ams", "run-dns", "committor", "ensemble-sweep"};
const std::vector<std::string> kAms = {"run-ams", "ensemble-sweep"};

std::vector<KeySpec> build_schema() {
  using V = ValueType;
  return {
      {"masterSeed", V::Unsigned, 0, "Master seed of every random stream; --seed overrides it.", {}, kAll},
      {"threads", V::Integer, 1, "Worker threads over realizations; --threads overrides it. Never changes results.",
       {}, kAll},
      {"output", V::String, "out", "Output directory; --out overrides it.", {}, kAll},

      {"model.name", V::Enum, "drift", "Benchmark model.", {"drift", "double_well", "triple_well", "two_saddles"},
       kSim},
      {"model.beta", V::Number, 1.0, "Inverse temperature beta.", {}, kSim},
      {"model.mu", V::Number, 0.3, "Drift velocity mu (drift model only).", {}, kSim},

      {"problem.coordinate", V::Enum, "committor",
       "Reaction coordinate. `committor` is the closed form (drift), the quadrature table (double well) or the "
       "grid read from problem.committorGrid (2-D models).",
       {"linear", "norm", "committor", "saddle_approx"}, kSim},
      {"problem.xA", V::Number, 0.0, "Drift model: boundary of A.", {}, kSim},
      {"problem.x0", V::Number, 1.0, "Drift model: starting point.", {}, kSim},
      {"problem.xB", V::Number, 2.0, "Drift model: boundary of B.", {}, kSim},
      {"problem.xC", V::Number, -0.9, "Double well: starting point.", {}, kSim},
      {"problem.committorGrid", V::String, "",
       "Grid file for the 2-D committor coordinate, as written by the committor command.", {}, kSim},

      {"scheme.kind", V::Enum, "euler", "Time integrator; order15 is 1-D only.", {"euler", "order15"}, kSim},
      {"scheme.dt", V::Number, 1e-4, "Time step.", {}, kSim},

      {"ams.N", V::Integer, 100, "Number of clones N.", {}, kAms},
      {"ams.n", V::Integer, 1, "Clones killed per iteration, 1 <= n <= N-1.", {}, kAms},
      {"ams.realizations", V::Unsigned, 1, "Independent AMS realizations R.", {}, {"run-ams"}},
      {"ams.firstRealization", V::Unsigned, 0, "Index of the first realization (for split ensembles).", {},
       {"run-ams"}},
      {"ams.maxIterations", V::Unsigned, 100000000, "Iteration budget of one realization.", {}, kAms},
      {"ams.maxSteps", V::Unsigned, 1000000000, "Step budget of one trajectory segment.", {}, kAms},
      {"ams.variant", V::Enum, "generalized",
       "`generalized`: kill all clones tied with the n-th level and branch strictly above it (unbiased). "
       "`literal`: kill exactly n, each branching at the first point reaching its own level.",
       {"generalized", "literal"}, kAms},
      {"ams.brownianBridge", V::Boolean, false, "Refine branch points with a Brownian bridge (1-D, Euler).", {},
       kAms},

      {"dns.M", V::Unsigned, 10000, "Number of direct-simulation trajectories.", {}, {"run-dns"}},
      {"dns.maxSteps", V::Unsigned, 1000000000, "Step budget of one trajectory.", {}, {"run-dns"}},

      {"reference.alpha", V::OptionalNumber, nullptr,
       "Reference crossing probability. When null: closed form (drift), quadrature (double well) or the committor "
       "grid averaged over rho_C (2-D, when a grid is given).",
       {}, kAms},
      {"reference.tau", V::OptionalNumber, nullptr, "Reference mean reactive duration for duration statistics.", {},
       {"ensemble-sweep"}},

      {"committor.spacing", V::Number, 0.03, "Grid spacing of the 2-D solver.", {}, {"committor", "ensemble-sweep"}},
      {"committor.tol", V::Number, 1e-8, "Residual tolerance of the 2-D solver.", {}, {"committor", "ensemble-sweep"}},
      {"committor.domain", V::NumberList, Json::array({-1.5, 1.5, -1.0, 2.0}), "Rectangle [x0, x1, y0, y1].", {},
       {"committor", "ensemble-sweep"}},
      {"committor.dirichlet", V::Enum, "points",
       "`points`: single nodes nearest (-1,0) and (1,0). `sets`: every node of the norm-coordinate sets A and B.",
       {"points", "sets"}, {"committor", "ensemble-sweep"}},
      {"committor.monitoringDt", V::Number, 0.0,
       "With `sets`, shrink A and B for paths monitored every monitoringDt (0 disables the shift).", {},
       {"committor", "ensemble-sweep"}},
      {"committor.points1d", V::Integer, 2001, "Table size for 1-D models.", {}, {"committor"}},

      {"sweep.N", V::IntegerList, Json::array(), "Values of N; empty means ams.N only.", {}, {"ensemble-sweep"}},
      {"sweep.dt", V::NumberList, Json::array(), "Values of dt; empty means scheme.dt only.", {}, {"ensemble-sweep"}},
      {"sweep.beta", V::NumberList, Json::array(), "Values of beta; empty means model.beta only.", {},
       {"ensemble-sweep"}},
      {"sweep.realizations", V::Unsigned, 100, "Realizations per sweep point.", {}, {"ensemble-sweep"}},
      {"sweep.tauAsymptote", V::Enum, "reference",
       "Limit used for the duration rate f_tau: reference.tau or the largest N.", {"reference", "largest_n"},
       {"ensemble-sweep"}},

      {"threeLevel.preset", V::Enum, "lin", "Rates A = B = 1/beta (lin) or 1/ln(beta) (log), C = exp(-beta).",
       {"lin", "log"}, {"three-level"}},
      {"threeLevel.cutoffs", V::NumberList, Json::array({100.0, 1000.0}), "Duration cut-offs Lambda.", {},
       {"three-level"}},
      {"threeLevel.betaMin", V::Number, 1.5, "Start of the beta grid.", {}, {"three-level"}},
      {"threeLevel.betaMax", V::Number, 20.0, "End of the beta grid.", {}, {"three-level"}},
      {"threeLevel.betaStep", V::Number, 0.01, "Step of the beta grid.", {}, {"three-level"}},
  };
}

std::string type_name(ValueType t) {
  switch (t) {
    case ValueType::Number: return "number";
    case ValueType::Integer: return "integer";
    case ValueType::Unsigned: return "unsigned integer";
    case ValueType::Boolean: return "boolean";
    case ValueType::String: return "string";
    case ValueType::Enum: return "string";
    case ValueType::NumberList: return "array of numbers";
    case ValueType::IntegerList: return "array of integers";
    case ValueType::OptionalNumber: return "number or null";
  }
  return "value";
}

bool type_matches(const KeySpec& spec, const Json& v) {
  switch (spec.type) {
    case ValueType::Number: return v.is_number();
    case ValueType::Integer: return v.is_number_integer();
    case ValueType::Unsigned: return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    case ValueType::Boolean: return v.is_boolean();
    case ValueType::String: return v.is_string();
    case ValueType::Enum:
      return v.is_string() &&
             std::find(spec.choices.begin(), spec.choices.end(), v.get<std::string>()) != spec.choices.end();
    case ValueType::NumberList:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
    case ValueType::IntegerList:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number_integer(); });
    case ValueType::OptionalNumber: return v.is_null() || v.is_number();
  }
  return false;
}

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) out += (k ? sep : "") + items[k];
  return out;
}

void check_object(const Json& node, const std::string& prefix, const std::map<std::string, const KeySpec*>& leaves,
                  const std::map<std::string, bool>& sections) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (const auto leaf = leaves.find(path); leaf != leaves.end()) {
      if (!type_matches(*leaf->second, it.value())) {
        std::string msg = "key '" + path + "' must be a " + type_name(leaf->second->type);
        if (leaf->second->type == ValueType::Enum) msg += " among {" + join(leaf->second->choices, ", ") + "}";
        throw Error(ErrorKind::ConfigError, msg);
      }
    } else if (sections.count(path)) {
      if (!it.value().is_object()) throw Error(ErrorKind::ConfigError, "section '" + path + "' must be an object");
      check_object(it.value(), path, leaves, sections);
    } else {
      throw Error(ErrorKind::ConfigError, "unknown key '" + path + "'");
    }
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::ConfigError, msg);
}

}  // namespace

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = build_schema();
  return schema;
}

Json resolve_config(const Json& user) {
  if (!user.is_object()) throw Error(ErrorKind::ConfigError, "configuration must be a JSON object");
  std::map<std::string, const KeySpec*> leaves;
  std::map<std::string, bool> sections;
  for (const auto& spec : config_schema()) {
    leaves[spec.path] = &spec;
    for (auto dot = spec.path.find('.'); dot != std::string::npos; dot = spec.path.find('.', dot + 1)) {
      sections[spec.path.substr(0, dot)] = true;
    }
  }
  check_object(user, "", leaves, sections);

  Json resolved = Json::object();
  for (const auto& spec : config_schema()) {
    std::string pointer = "/" + spec.path;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    const Json::json_pointer ptr(pointer);
    resolved[ptr] = user.contains(ptr) ? user.at(ptr) : spec.fallback;
  }

  const auto& r = resolved;
  require(r["model"]["beta"].get<double>() > 0.0, "model.beta must be positive");
  require(r["model"]["mu"].get<double>() >= 0.0, "model.mu must be nonnegative");
  require(r["scheme"]["dt"].get<double>() > 0.0, "scheme.dt must be positive");
  require(r["threads"].get<int>() >= 1, "threads must be at least 1");
  const int N = r["ams"]["N"].get<int>();
  const int n = r["ams"]["n"].get<int>();
  require(N >= 2, "ams.N must be at least 2");
  require(n >= 1 && n <= N - 1, "ams.n must lie in [1, ams.N - 1]");
  require(r["dns"]["M"].get<std::uint64_t>() >= 1, "dns.M must be at least 1");
  require(r["committor"]["domain"].size() == 4, "committor.domain needs four numbers");
  require(r["committor"]["spacing"].get<double>() > 0.0, "committor.spacing must be positive");
  require(r["committor"]["monitoringDt"].get<double>() >= 0.0, "committor.monitoringDt must be nonnegative");
  for (const auto& v : r["sweep"]["N"]) require(v.get<int>() >= 2, "sweep.N entries must be at least 2");
  for (const auto& v : r["sweep"]["dt"]) require(v.get<double>() > 0.0, "sweep.dt entries must be positive");
  for (const auto& v : r["sweep"]["beta"]) require(v.get<double>() > 0.0, "sweep.beta entries must be positive");
  for (const auto& v : r["threeLevel"]["cutoffs"]) require(v.get<double>() > 1.0, "cut-offs must exceed 1");
  require(r["threeLevel"]["betaStep"].get<double>() > 0.0, "threeLevel.betaStep must be positive");
  require(r["threeLevel"]["betaMax"].get<double>() > r["threeLevel"]["betaMin"].get<double>(),
          "threeLevel.betaMax must exceed threeLevel.betaMin");
  require(r["threeLevel"]["betaMin"].get<double>() > 1.0, "threeLevel.betaMin must exceed 1");
  return resolved;
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileNotFound, "configuration not found: " + path);
  Json doc;
  try {
    doc = Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  }
  // A run manifest carries the resolved configuration it was produced from.
  if (doc.is_object() && doc.contains("manifestVersion") && doc.contains("config")) return doc["config"];
  return doc;
}

std::string config_reference_markdown() {
  std::ostringstream out;
  out << "# Configuration reference\n\n"
      << "Generated by `amsctl defaults`. Configuration files are JSON objects (comments allowed).\n"
      << "Every key is optional; unknown keys are rejected. A `manifest.json` written by a run\n"
      << "is also accepted as a configuration and reproduces that run.\n\n"
      << "| key | type | default | used by | description |\n"
      << "|---|---|---|---|---|\n";
  for (const auto& spec : config_schema()) {
    std::string type = type_name(spec.type);
    if (spec.type == ValueType::Enum) type = "one of " + join(spec.choices, ", ");
    out << "| `" << spec.path << "` | " << type << " | `" << spec.fallback.dump() << "` | " << join(spec.commands, ", ")
        << " | " << spec.description << " |\n";
  }
  out << "\n## Example\n\n```json\n" << resolve_config(Json::object()).dump(2) << "\n```\n";
  return out.str();
}

ExperimentConfig to_experiment(const Json& r) {
  ExperimentConfig c;
  c.masterSeed = r["masterSeed"].get<std::uint64_t>();
  c.threads = r["threads"].get<int>();
  c.output = r["output"].get<std::string>();
  c.model.kind = model_kind_from_string(r["model"]["name"].get<std::string>());
  c.model.beta = r["model"]["beta"].get<double>();
  c.model.mu = r["model"]["mu"].get<double>();
  const auto& p = r["problem"];
  c.problem.coordinate = coordinate_choice_from_string(p["coordinate"].get<std::string>());
  c.problem.drift = {p["xA"].get<double>(), p["x0"].get<double>(), p["xB"].get<double>()};
  c.problem.xC = p["xC"].get<double>();
  c.problem.committorGrid = p["committorGrid"].get<std::string>();
  c.scheme.kind = scheme_kind_from_string(r["scheme"]["kind"].get<std::string>());
  c.scheme.dt = r["scheme"]["dt"].get<double>();
  const auto& a = r["ams"];
  c.ams.N = a["N"].get<int>();
  c.ams.n = a["n"].get<int>();
  c.ams.realizations = a["realizations"].get<std::uint32_t>();
  c.ams.firstRealization = a["firstRealization"].get<std::uint32_t>();
  c.ams.maxIterations = a["maxIterations"].get<std::uint64_t>();
  c.ams.maxSteps = a["maxSteps"].get<std::uint64_t>();
  c.ams.variant = a["variant"].get<std::string>();
  c.ams.brownianBridge = a["brownianBridge"].get<bool>();
  c.dnsM = r["dns"]["M"].get<std::uint64_t>();
  c.dnsMaxSteps = r["dns"]["maxSteps"].get<std::uint64_t>();
  if (!r["reference"]["alpha"].is_null()) c.referenceAlpha = r["reference"]["alpha"].get<double>();
  if (!r["reference"]["tau"].is_null()) c.referenceTau = r["reference"]["tau"].get<double>();
  const auto& q = r["committor"];
  c.committor.spacing = q["spacing"].get<double>();
  c.committor.tol = q["tol"].get<double>();
  c.committor.x0 = q["domain"][0].get<double>();
  c.committor.x1 = q["domain"][1].get<double>();
  c.committor.y0 = q["domain"][2].get<double>();
  c.committor.y1 = q["domain"][3].get<double>();
  c.committor.setDirichlet = q["dirichlet"].get<std::string>() == "sets";
  c.committor.monitoringDt = q["monitoringDt"].get<double>();
  c.committor.points1d = q["points1d"].get<int>();
  const auto& s = r["sweep"];
  c.sweep.N = s["N"].get<std::vector<int>>();
  c.sweep.dt = s["dt"].get<std::vector<double>>();
  c.sweep.beta = s["beta"].get<std::vector<double>>();
  c.sweep.realizations = s["realizations"].get<std::uint32_t>();
  c.sweep.tauAsymptote =
      s["tauAsymptote"].get<std::string>() == "reference" ? TauAsymptote::Reference : TauAsymptote::LargestN;
  const auto& t = r["threeLevel"];
  c.threeLevel.preset = rate_preset_from_string(t["preset"].get<std::string>());
  c.threeLevel.cutoffs = t["cutoffs"].get<std::vector<double>>();
  c.threeLevel.betaMin = t["betaMin"].get<double>();
  c.threeLevel.betaMax = t["betaMax"].get<double>();
  c.threeLevel.betaStep = t["betaStep"].get<double>();
  return c;
}

}  // namespace ams::io
