#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pddcov/bench.hpp"
#include "pddcov/errors.hpp"

namespace pddcov {
namespace cli {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a content digests: cheap, stable identifiers for manifest bookkeeping
// (not cryptographic).
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);
std::string file_digest(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// "%.17g" rendering used for all numeric text output
std::string format_g17(double v);

// alpha accepts a positive number, or "iid"/"inf" for independent columns
double parse_alpha_string(const std::string& s);
std::string alpha_to_string(double alpha);

// Benchmark JSON schema (flat): model, p, n, alpha, replications, methods,
// h1, h2, grid, seed, threads, cv_solver_tol, cv_max_iter. Unknown keys and
// out-of-domain values raise SchemaError naming the key.
BenchConfig bench_config_from_json(const nlohmann::json& j);
BenchConfig load_bench_config(const std::string& path);
nlohmann::json bench_config_to_json(const BenchConfig& cfg);

std::optional<std::uint64_t> env_seed_override();

using DigestList = std::vector<std::pair<std::string, std::string>>;

// Run record written next to every artifact: command, resolved config, seed,
// version, input/output digests, and a content digest over everything except
// the timestamp (so regenerated artifacts compare equal).
nlohmann::json make_manifest(const std::string& command,
                             const nlohmann::json& config, std::uint64_t seed,
                             const DigestList& inputs,
                             const DigestList& outputs);

// manifest path convention: <out>.manifest.json
std::string manifest_path_for(const std::string& out_path);

// exit 1 for configuration/usage problems, 2 for numerical failures
int exit_code_for(const Error& e);
nlohmann::json error_json(const Error& e, const std::string& command);

}  // namespace cli
}  // namespace pddcov
