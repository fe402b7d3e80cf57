#include "pddcov/cli_config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "pddcov/pdd_rates.hpp"

namespace pddcov {
namespace cli {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& key, const std::string& why) {
  throw SchemaError("config key '" + key + "': " + why);
}

double require_number(const json& j, const std::string& key) {
  if (!j.is_number()) schema_fail(key, "expected a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) schema_fail(key, "expected an integer");
  return j.get<int>();
}

std::string timestamp_utc() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

std::string file_digest(const std::string& path) {
  return hex64(fnv1a(read_text_file(path)));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed on '" + path + "'");
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_alpha_string(const std::string& s) {
  if (s == "iid" || s == "inf") return kAlphaIid;
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    if (!(v > 0.0)) throw BadParam("alpha must be positive");
    return v;
  } catch (const std::logic_error&) {
    throw BadParam("alpha must be a positive number, 'iid', or 'inf'");
  }
}

std::string alpha_to_string(double alpha) {
  return std::isinf(alpha) ? "inf" : format_g17(alpha);
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("config root must be a JSON object");
  static const std::set<std::string> known{
      "model", "p",    "n",    "alpha",   "replications",  "methods",
      "h1",    "h2",   "grid", "seed",    "threads",       "cv_solver_tol",
      "cv_max_iter"};
  for (const auto& item : j.items()) {
    if (known.find(item.key()) == known.end()) {
      throw SchemaError("unknown config key '" + item.key() + "'");
    }
  }
  for (const std::string req : {"model", "p", "n", "alpha"}) {
    if (!j.contains(req)) schema_fail(req, "missing required key");
  }

  BenchConfig cfg;
  cfg.model = require_int(j.at("model"), "model");
  if (cfg.model < 1 || cfg.model > 4) schema_fail("model", "must be 1..4");
  cfg.p = require_int(j.at("p"), "p");
  if (cfg.p < 1) schema_fail("p", "must be positive");
  cfg.n = require_int(j.at("n"), "n");
  if (cfg.n < 2) schema_fail("n", "must be at least 2");

  const json& a = j.at("alpha");
  if (a.is_string()) {
    const std::string s = a.get<std::string>();
    if (s != "iid" && s != "inf") schema_fail("alpha", "must be 'iid'/'inf'");
    cfg.alpha = kAlphaIid;
  } else {
    cfg.alpha = require_number(a, "alpha");
    if (!(cfg.alpha > 0.0)) schema_fail("alpha", "must be positive");
  }

  if (j.contains("replications")) {
    cfg.replications = require_int(j.at("replications"), "replications");
    if (cfg.replications < 1) schema_fail("replications", "must be >= 1");
  }
  if (j.contains("methods")) {
    if (!j.at("methods").is_array()) schema_fail("methods", "expected array");
    for (const json& m : j.at("methods")) {
      if (!m.is_string()) schema_fail("methods", "expected strings");
      try {
        cfg.methods.push_back(parse_method(m.get<std::string>()));
      } catch (const BadParam& e) {
        schema_fail("methods", e.what());
      }
    }
  }
  if (j.contains("h1")) {
    cfg.h1 = require_int(j.at("h1"), "h1");
    if (cfg.h1 < 4) schema_fail("h1", "must be at least 4");
  }
  if (j.contains("h2")) {
    cfg.h2 = require_int(j.at("h2"), "h2");
    if (cfg.h2 < 0) schema_fail("h2", "must be nonnegative");
  }
  if (j.contains("grid")) {
    if (!j.at("grid").is_array()) schema_fail("grid", "expected array");
    double prev = 0.0;
    for (const json& v : j.at("grid")) {
      const double x = require_number(v, "grid");
      if (!(x > prev)) {
        schema_fail("grid", "must be strictly increasing and positive");
      }
      cfg.grid.values.push_back(x);
      prev = x;
    }
    if (cfg.grid.values.empty()) schema_fail("grid", "must be nonempty");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) schema_fail("seed", "expected int");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    cfg.threads = require_int(j.at("threads"), "threads");
    if (cfg.threads < 0) schema_fail("threads", "must be nonnegative");
  }
  if (j.contains("cv_solver_tol")) {
    cfg.cv_solver_tol = require_number(j.at("cv_solver_tol"), "cv_solver_tol");
    if (!(cfg.cv_solver_tol > 0.0) || cfg.cv_solver_tol > 1e-3) {
      schema_fail("cv_solver_tol", "must lie in (0, 1e-3]");
    }
  }
  if (j.contains("cv_max_iter")) {
    cfg.cv_max_iter = require_int(j.at("cv_max_iter"), "cv_max_iter");
    if (cfg.cv_max_iter < 1) schema_fail("cv_max_iter", "must be >= 1");
  }
  return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
  json parsed;
  try {
    parsed = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw SchemaError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return bench_config_from_json(parsed);
}

nlohmann::json bench_config_to_json(const BenchConfig& cfg) {
  json j;
  j["model"] = cfg.model;
  j["p"] = cfg.p;
  j["n"] = cfg.n;
  if (std::isinf(cfg.alpha)) {
    j["alpha"] = "inf";
  } else {
    j["alpha"] = cfg.alpha;
  }
  j["replications"] = cfg.replications;
  json methods = json::array();
  for (BenchMethod m : cfg.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["h1"] = cfg.h1;
  j["h2"] = cfg.h2;
  j["grid"] = cfg.grid.values;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;
  j["cv_solver_tol"] = cfg.cv_solver_tol;
  j["cv_max_iter"] = cfg.cv_max_iter;
  return j;
}

std::optional<std::uint64_t> env_seed_override() {
  const char* raw = std::getenv("PDDCOV_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') {
    throw BadParam("PDDCOV_SEED must be an unsigned integer");
  }
  return static_cast<std::uint64_t>(v);
}

nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& config, std::uint64_t seed,
                             const DigestList& inputs,
                             const DigestList& outputs) {
  json m;
  m["command"] = command;
  m["config"] = config;
  m["seed"] = seed;
  m["version"] = kVersion;
  json in = json::object();
  for (const auto& [path, digest] : inputs) in[path] = digest;
  json out = json::object();
  for (const auto& [path, digest] : outputs) out[path] = digest;
  m["inputs"] = in;
  m["outputs"] = out;
  m["digest"] = hex64(fnv1a(m.dump()));  // over everything except timestamp
  m["timestamp"] = timestamp_utc();
  return m;
}

std::string manifest_path_for(const std::string& out_path) {
  return out_path + ".manifest.json";
}

int exit_code_for(const Error& e) {
  static const std::set<std::string> usage{
      "BadParam", "BadInput",    "SchemaError", "IoError",
      "BadLag",   "TooFewLags",  "TooSmall",    "OutOfRange"};
  return usage.count(e.code()) ? 1 : 2;
}

nlohmann::json error_json(const Error& e, const std::string& command) {
  json j;
  j["error"] = e.code();
  j["message"] = e.what();
  j["command"] = command;
  if (const auto* nc = dynamic_cast<const NotConverged*>(&e)) {
    j["iterations"] = nc->iterations;
    j["residual"] = nc->residual;
  }
  if (const auto* zv = dynamic_cast<const ZeroVariance*>(&e)) {
    j["series"] = zv->index;
  }
  if (const auto* ff = dynamic_cast<const FitFailed*>(&e)) {
    j["max_rel_err"] = ff->max_rel_err;
  }
  return j;
}

}  // namespace cli
}  // namespace pddcov
