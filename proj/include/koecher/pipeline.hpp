#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "koecher/elliptic_curves.hpp"
#include "koecher/hecke.hpp"
#include "koecher/matching.hpp"
#include "koecher/serialize.hpp"

namespace koecher {

inline constexpr const char* kToolVersion = "koecher-lab 1.0.0";

struct PipelineConfig {
  std::string fan_path;                // read instead of computing when set
  std::vector<Ideal> levels;
  Int prime_bound = 23;
  std::uint32_t field_prime = kFieldPrime;
  SearchParams search;
  bool run_curves = true;
  std::filesystem::path out_dir = "out";
  std::filesystem::path cache_dir;     // empty: no cache
  int jobs = 1;
  std::size_t max_rounds = 200;        // sharbly reduction rounds per Hecke image
  bool verify_cycles = true;

  /// Throws std::invalid_argument on nonpositive bounds or a coefficient prime too small to lift eigenvalues.
  void validate() const;
  /// Options that change results, as canonical JSON.
  Json identity() const;
  std::string hash() const;
};

/// "norm<=N", "norm=N", or a comma-separated list of generators such as "4*t^2-t-5".
std::vector<Ideal> parse_levels(const std::string& spec);

/// Failure of one pipeline stage; carries the stage name and a command that reproduces it.
struct StageError : std::runtime_error {
  StageError(std::string stage, std::string command, const std::string& what, int exit_code)
      : std::runtime_error(what), stage(std::move(stage)), command(std::move(command)), exit_code(exit_code) {}
  std::string stage;
  std::string command;
  int exit_code;
};

struct LevelResult {
  Ideal level;
  std::string type;
  int p1 = 0;
  std::array<int, 3> cells{};  // dimensions 2, 3, 4
  int h4 = 0;
  std::optional<int> eisenstein_expected;
  std::vector<HeckeAction> operators;
  std::vector<Eigenpacket> packets;
};

Json level_to_json(const LevelResult& r);
LevelResult level_from_json(const Json& j);

/// Fan database from the config's file, the cache, or a fresh classification.
FanDatabase obtain_fan(const PipelineConfig& cfg);
/// H^4 and, when with_hecke, the Hecke operators at good primes of norm <= prime_bound and the eigenpackets.
LevelResult compute_level(const FanDatabase& fan, const Ideal& level, const PipelineConfig& cfg, bool with_hecke);
/// compute_level behind the cache.
LevelResult obtain_level(const FanDatabase& fan, const Ideal& level, const PipelineConfig& cfg, bool with_hecke);
/// Curve search behind the cache; the JSON is the curves file.
Json obtain_curves(const PipelineConfig& cfg);

struct MatchOutput {
  std::vector<MatchReport> reports;
  std::vector<OldClass> old;
  std::vector<std::vector<Eigenpacket>> packets;  // after old-class marking
};
MatchOutput match_all(std::vector<LevelResult> levels, const std::vector<CurveClass>& curves);
Json match_to_json(const MatchOutput& m);

/// CSV renderers shaped like the published tables.
std::string eisenstein_csv(const std::vector<LevelResult>& levels);
std::string curves_csv(const std::vector<CurveClass>& classes, Int max_norm);
std::string match_csv(const MatchOutput& m);
std::string old_classes_csv(const MatchOutput& m);

/// Every stage; writes fan.json, levels/<norm>-<hnf>/level.json, curves.json, report.json and CSV tables.
std::filesystem::path run_pipeline(const PipelineConfig& cfg);

/// Writes JSON with the config hash and tool version embedded.
void write_artifact(const std::filesystem::path& path, Json body, const PipelineConfig& cfg);
Json read_json(const std::filesystem::path& path);
std::string level_dir_name(const Ideal& level);

}  // namespace koecher
