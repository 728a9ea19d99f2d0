#include "koecher/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

namespace koecher {

namespace fs = std::filesystem;

void PipelineConfig::validate() const {
  if (prime_bound < 1) throw std::invalid_argument("prime bound must be positive");
  if (search.box < 0 || search.disc_bound < 1 || search.conductor_bound < 1)
    throw std::invalid_argument("curve search bounds must be positive");
  if (jobs < 1) throw std::invalid_argument("jobs must be positive");
  if (max_rounds < 1) throw std::invalid_argument("reduction round cap must be positive");
  if (field_prime < 3 || field_prime >= (1u << 31)) throw std::invalid_argument("coefficient prime out of range");
  Int max_norm = 0;
  for (const auto& q : primes_up_to(prime_bound)) max_norm = std::max(max_norm, q.norm());
  // Hasse-window lifts and the Eisenstein value N(q) + 1 must be distinguishable modulo the prime.
  if (static_cast<double>(field_prime) <= 4 * std::sqrt(static_cast<double>(max_norm)) ||
      static_cast<Int>(field_prime) <= 2 * (max_norm + 1))
    throw std::invalid_argument("coefficient prime too small for the prime bound");
}

Json PipelineConfig::identity() const {
  Json levels_json = Json::array();
  for (const auto& l : levels) levels_json.push_back(l.hnf());
  return {{"version", kToolVersion},
          {"fan_path", fan_path},
          {"levels", levels_json},
          {"prime_bound", prime_bound},
          {"field_prime", field_prime},
          {"box", search.box},
          {"disc_bound", search.disc_bound},
          {"conductor_bound", search.conductor_bound},
          {"run_curves", run_curves},
          {"max_rounds", max_rounds},
          {"verify_cycles", verify_cycles}};
}

std::string PipelineConfig::hash() const { return sha256_hex(identity().dump()); }

std::vector<Ideal> parse_levels(const std::string& spec) {
  std::smatch m;
  static const std::regex range(R"(\s*norm\s*(<=|=)\s*(\d+)\s*)");
  std::vector<Ideal> out;
  if (std::regex_match(spec, m, range)) {
    Int n = std::stoll(m[2]);
    for (const auto& I : ideals_up_to(n))
      if (!I.is_unit() && (m[1] == "<=" || I.norm() == n)) out.push_back(I);
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    Ideal I = Ideal::principal(OElt::parse(item));
    if (I.is_unit()) throw std::invalid_argument("level must be a proper ideal: " + item);
    out.push_back(I);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void write_artifact(const fs::path& path, Json body, const PipelineConfig& cfg) {
  body["meta"] = {{"config_hash", cfg.hash()}, {"version", kToolVersion}};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body.dump(1) << "\n";
}

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return Json::parse(in);
}

std::string level_dir_name(const Ideal& level) {
  std::string s = std::to_string(level.norm());
  for (const auto& row : level.hnf())
    for (Int x : row) s += "_" + std::to_string(x);
  return s;
}

namespace {

std::optional<Json> cache_get(const PipelineConfig& cfg, const std::string& key) {
  if (cfg.cache_dir.empty()) return std::nullopt;
  fs::path p = cfg.cache_dir / (key + ".json");
  if (!fs::exists(p)) return std::nullopt;
  try {
    return read_json(p);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

void cache_put(const PipelineConfig& cfg, const std::string& key, const Json& j) {
  if (cfg.cache_dir.empty()) return;
  fs::create_directories(cfg.cache_dir);
  fs::path tmp = cfg.cache_dir / (key + ".tmp");
  {
    std::ofstream out(tmp);
    out << j.dump() << "\n";
  }
  fs::rename(tmp, cfg.cache_dir / (key + ".json"));
}

std::string fan_key(const PipelineConfig& cfg) {
  std::string source = cfg.fan_path.empty() ? "computed" : sha256_hex(read_json(cfg.fan_path).dump());
  return "fan-" + sha256_hex(std::string(kToolVersion) + "|fan|" + source);
}

}  // namespace

FanDatabase obtain_fan(const PipelineConfig& cfg) {
  if (!cfg.fan_path.empty()) return fan_from_json(read_json(cfg.fan_path));
  const std::string key = fan_key(cfg);
  if (auto j = cache_get(cfg, key)) return fan_from_json(*j);
  FanDatabase fan = classify_fan(cfg.jobs);
  cache_put(cfg, key, fan_to_json(fan));
  return fan;
}

Json level_to_json(const LevelResult& r) {
  Json ops = Json::array();
  for (const auto& op : r.operators) ops.push_back({{"prime", op.prime}, {"norm", op.prime.norm()}, {"matrix", op.matrix}});
  Json packets = Json::array();
  for (const auto& p : r.packets) packets.push_back(packet_to_json(p));
  Json j{{"kind", "koecher-level"},
         {"level", r.level},
         {"type", r.type},
         {"p1", r.p1},
         {"cells", r.cells},
         {"h4", r.h4},
         {"operators", ops},
         {"packets", packets}};
  if (r.eisenstein_expected) j["eisenstein_expected"] = *r.eisenstein_expected;
  if (!r.operators.empty()) {
    int eis = eisenstein_part(r.packets);
    j["eisenstein_found"] = eis;
    j["cuspidal_dim"] = r.h4 - eis;
  }
  return j;
}

LevelResult level_from_json(const Json& j) {
  if (j.value("kind", "") != "koecher-level") throw std::invalid_argument("not a level file");
  LevelResult r;
  r.level = j.at("level").get<Ideal>();
  r.type = j.at("type").get<std::string>();
  r.p1 = j.at("p1").get<int>();
  r.cells = j.at("cells").get<std::array<int, 3>>();
  r.h4 = j.at("h4").get<int>();
  if (j.contains("eisenstein_expected")) r.eisenstein_expected = j.at("eisenstein_expected").get<int>();
  for (const auto& op : j.at("operators")) r.operators.push_back({op.at("prime").get<PrimeIdeal>(), op.at("matrix").get<DenseMat>()});
  for (const auto& p : j.at("packets")) r.packets.push_back(packet_from_json(p));
  return r;
}

LevelResult compute_level(const FanDatabase& fan, const Ideal& level, const PipelineConfig& cfg, bool with_hecke) {
  LevelIdeal L(level);
  QuotientComplex cx(fan, L);
  Homology h(cx, cfg.field_prime);
  LevelResult r;
  r.level = level;
  r.type = L.type();
  r.p1 = L.p1_size();
  r.cells = {static_cast<int>(cx.cells(2).size()), static_cast<int>(cx.cells(3).size()),
             static_cast<int>(cx.cells(4).size())};
  r.h4 = h.dim();
  try {
    r.eisenstein_expected = eisenstein_dimension(L);
  } catch (const UnknownType&) {
  }
  if (!with_hecke) return r;
  const Fp& f = h.field();
  Reducer reducer(fan, cx, f);
  HeckeOptions opt;
  opt.verify_cycles = cfg.verify_cycles;
  opt.jobs = cfg.jobs;
  opt.max_rounds = cfg.max_rounds;
  for (const auto& q : primes_up_to(cfg.prime_bound)) {
    if (L.divides_level(q)) continue;
    r.operators.push_back({q, hecke_matrix(h, cx, reducer, q, opt)});
  }
  for (std::size_t a = 0; a < r.operators.size(); ++a)
    for (std::size_t b = a + 1; b < r.operators.size(); ++b)
      if (mat_mul(r.operators[a].matrix, r.operators[b].matrix, f) !=
          mat_mul(r.operators[b].matrix, r.operators[a].matrix, f))
        throw InvariantViolation("Hecke operators at " + r.operators[a].prime.gen.str() + " and " +
                                 r.operators[b].prime.gen.str() + " do not commute");
  r.packets = decompose(level, r.h4, r.operators, f);
  if (!r.operators.empty() && r.eisenstein_expected && eisenstein_part(r.packets) != *r.eisenstein_expected)
    throw InvariantViolation("Eisenstein dimension " + std::to_string(eisenstein_part(r.packets)) + " differs from " +
                             std::to_string(*r.eisenstein_expected) + " for type " + r.type);
  return r;
}

LevelResult obtain_level(const FanDatabase& fan, const Ideal& level, const PipelineConfig& cfg, bool with_hecke) {
  Json id{{"version", kToolVersion},
          {"fan", sha256_hex(fan_to_json(fan).dump())},
          {"level", level.hnf()},
          {"field_prime", cfg.field_prime},
          {"prime_bound", with_hecke ? cfg.prime_bound : 0},
          {"max_rounds", cfg.max_rounds},
          {"verify_cycles", cfg.verify_cycles}};
  const std::string key = "level-" + sha256_hex(id.dump());
  if (auto j = cache_get(cfg, key)) return level_from_json(*j);
  LevelResult r = compute_level(fan, level, cfg, with_hecke);
  cache_put(cfg, key, level_to_json(r));
  return r;
}

Json obtain_curves(const PipelineConfig& cfg) {
  Json id{{"version", kToolVersion},
          {"box", cfg.search.box},
          {"disc_bound", cfg.search.disc_bound},
          {"conductor_bound", cfg.search.conductor_bound}};
  const std::string key = "curves-" + sha256_hex(id.dump());
  if (auto j = cache_get(cfg, key)) return *j;
  SearchParams p = cfg.search;
  p.jobs = cfg.jobs;
  Json j = curves_to_json(search_box(p));
  cache_put(cfg, key, j);
  return j;
}

MatchOutput match_all(std::vector<LevelResult> levels, const std::vector<CurveClass>& curves) {
  std::sort(levels.begin(), levels.end(), [](const LevelResult& a, const LevelResult& b) { return a.level < b.level; });
  MatchOutput out;
  for (auto& l : levels) out.packets.push_back(l.packets);
  out.old = detect_old(out.packets);
  for (std::size_t i = 0; i < levels.size(); ++i) out.reports.push_back(match_level(levels[i].level, out.packets[i], curves));
  return out;
}

Json match_to_json(const MatchOutput& m) {
  Json reports = Json::array();
  for (const auto& r : m.reports) reports.push_back(report_to_json(r));
  Json old = Json::array();
  for (const auto& o : m.old) old.push_back({{"level", o.level}, {"source", o.source}, {"packet", o.packet}});
  return {{"kind", "koecher-report"}, {"levels", reports}, {"old_classes", old}};
}

std::string eisenstein_csv(const std::vector<LevelResult>& levels) {
  std::ostringstream s;
  s << "norm,generator,type,h4,eisenstein_expected,eisenstein_found,cuspidal\n";
  for (const auto& l : levels) {
    s << l.level.norm() << "," << l.level.generator().str() << "," << l.type << "," << l.h4 << ",";
    if (l.eisenstein_expected) s << *l.eisenstein_expected;
    s << ",";
    if (!l.operators.empty()) s << eisenstein_part(l.packets) << "," << l.h4 - eisenstein_part(l.packets);
    else s << ",";
    s << "\n";
  }
  return s.str();
}

std::string curves_csv(const std::vector<CurveClass>& classes, Int max_norm) {
  std::ostringstream s;
  s << "norm,conductor_generator,curve,members\n";
  for (const auto& c : classes) {
    if (c.conductor.norm() > max_norm) continue;
    s << c.conductor.norm() << "," << c.conductor.generator().str() << ",\"" << c.representative.str() << "\","
      << c.members << "\n";
  }
  return s.str();
}

std::string match_csv(const MatchOutput& m) {
  std::ostringstream s;
  s << "norm,generator,dimension,kind,eigenvalues,curve,ambiguous\n";
  for (const auto& r : m.reports)
    for (const auto& p : r.packets) {
      s << r.level.norm() << "," << r.level.generator().str() << "," << p.packet.dimension << ","
        << kind_name(p.packet.kind) << ",\"";
      bool first = true;
      for (const auto& e : p.packet.eigenvalues) {
        s << (first ? "" : " ") << e.prime.norm() << ":" << (e.value ? std::to_string(*e.value) : "?");
        first = false;
      }
      s << "\",\"" << (p.candidates.empty() ? "" : p.candidates.front().str()) << "\"," << (p.ambiguous ? 1 : 0) << "\n";
    }
  return s.str();
}

std::string old_classes_csv(const MatchOutput& m) {
  std::ostringstream s;
  s << "norm,generator,source_norm,source_generator\n";
  for (const auto& o : m.old)
    s << o.level.norm() << "," << o.level.generator().str() << "," << o.source.norm() << "," << o.source.generator().str()
      << "\n";
  return s.str();
}

namespace {

void write_text(const fs::path& p, const std::string& s) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << s;
}

template <class F>
auto stage(const std::string& name, const std::string& command, F&& body) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const InvariantViolation& e) {
    throw StageError(name, command, e.what(), 2);
  } catch (const HeuristicFailure& e) {
    throw StageError(name, command, e.what(), 3);
  } catch (const std::exception& e) {
    throw StageError(name, command, e.what(), 1);
  }
}

}  // namespace

fs::path run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const std::string common = " --field-prime " + std::to_string(cfg.field_prime) + " --prime-bound " +
                             std::to_string(cfg.prime_bound);
  FanDatabase fan = stage("fan", "koecher-lab fan --out fan.json", [&] { return obtain_fan(cfg); });
  write_artifact(cfg.out_dir / "fan.json", fan_to_json(fan), cfg);

  std::vector<LevelResult> levels;
  for (const auto& level : cfg.levels) {
    std::string cmd = "koecher-lab hecke --levels '" + level.generator().str() + "'" + common;
    LevelResult r = stage("hecke", cmd, [&] { return obtain_level(fan, level, cfg, true); });
    write_artifact(cfg.out_dir / "levels" / level_dir_name(level) / "level.json", level_to_json(r), cfg);
    levels.push_back(std::move(r));
  }
  write_text(cfg.out_dir / "eisenstein.csv", eisenstein_csv(levels));

  std::vector<CurveClass> classes;
  if (cfg.run_curves) {
    std::string cmd = "koecher-lab curves --box " + std::to_string(cfg.search.box) + " --disc-bound " +
                      std::to_string(cfg.search.disc_bound) + " --cond-bound " +
                      std::to_string(cfg.search.conductor_bound) + " --out curves.json";
    Json curves = stage("curves", cmd, [&] { return obtain_curves(cfg); });
    classes = classes_from_json(curves);
    write_artifact(cfg.out_dir / "curves.json", curves, cfg);
    write_text(cfg.out_dir / "curves.csv", curves_csv(classes, cfg.search.conductor_bound));
  }

  if (!levels.empty()) {
    std::string cmd = "koecher-lab match --h4-dir " + cfg.out_dir.string() + " --curves " +
                      (cfg.out_dir / "curves.json").string() + " --out report.json";
    MatchOutput m = stage("match", cmd, [&] { return match_all(levels, classes); });
    write_artifact(cfg.out_dir / "report.json", match_to_json(m), cfg);
    write_text(cfg.out_dir / "matches.csv", match_csv(m));
    write_text(cfg.out_dir / "old_classes.csv", old_classes_csv(m));
  }
  return cfg.out_dir;
}

}  // namespace koecher
