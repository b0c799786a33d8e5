// Copyright 2026 The csgtopo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "csgtopo_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csgtopo/bench.hpp"
#include "csgtopo/engine.hpp"
#include "csgtopo/error.hpp"
#include "csgtopo/knowledge_base.hpp"
#include "csgtopo/rules.hpp"
#include "csgtopo/scene.hpp"
#include "csgtopo/topology.hpp"

namespace csgtopo::cli {
namespace {

namespace fs = std::filesystem;

// Unreadable inputs, unwritable outputs and bad ids.
class InputFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  double epsilon = 0.0;
  double delta = 0.0;
  bool refine = false;
  std::string profile = "corrected";
  std::uint64_t seed = 42;
  int jobs = 1;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputFailure("cannot read '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputFailure("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw InputFailure("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw InputFailure("cannot replace '" + path.string() + "'");
  }
}

Scene load(const std::string& path, const Flags& flags) {
  if (!fs::exists(path)) throw InputFailure("scene file '" + path + "' does not exist");
  return load_scene(path, SceneOptions{flags.epsilon, flags.delta});
}

RelateOptions relate_options(const Scene& scene, const Flags& flags) {
  RelateOptions options = RelateOptions::defaults_for(scene.universe, flags.refine);
  if (flags.epsilon > 0) options.epsilon = flags.epsilon;
  if (flags.delta > 0) options.delta = flags.delta;
  return options;
}

EvaluationOptions evaluation_options(const Scene& scene, const Flags& flags) {
  EvaluationOptions options;
  options.relate = relate_options(scene, flags);
  options.jobs = flags.jobs;
  return options;
}

CharacteristicsProfile profile_of(const Flags& flags) { return *parse_profile(flags.profile); }

long long elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
      .count();
}

const SceneObject& find_object(const Scene& scene, const std::string& id) {
  for (const auto& o : scene.objects) {
    if (o.id == id) {
      if (!o.geometry) throw InputFailure("object '" + id + "' has no geometry");
      return o;
    }
  }
  throw InputFailure("unknown object id '" + id + "'");
}

int cmd_relate(const Flags& flags, const std::string& scene_path, const std::string& a,
               const std::string& b, std::ostream& out) {
  const Scene scene = load(scene_path, flags);
  const auto& x = find_object(scene, a);
  const auto& y = find_object(scene, b);
  out << to_string(relate(*x.geometry, *y.geometry, relate_options(scene, flags))) << '\n';
  return kOk;
}

int cmd_enrich(const Flags& flags, const std::string& scene_path, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  const Scene scene = load(scene_path, flags);
  KnowledgeBase kb = build_knowledge_base(scene, profile_of(flags));
  const auto start = std::chrono::steady_clock::now();
  const EnrichReport report = enrich_topology(kb, relate_options(scene, flags), flags.jobs);
  const long long ms = elapsed_ms(start);
  saturate(kb);
  const auto violations = check_consistency(kb);
  write_atomic(out_path, export_triples(kb));

  out << "pairs=" << report.pairs << " elapsed_ms=" << ms << '\n';
  out << "relations";
  for (const auto& [token, count] : report.counts) out << ' ' << token << '=' << count;
  out << '\n';
  out << "errors=" << report.errors.size() << " violations=" << violations.size() << '\n';
  for (const auto& e : report.errors) err << "pair " << e.a << ' ' << e.b << ": " << e.message << '\n';
  for (const auto& v : violations) err << "violation: " << v.to_string() << '\n';
  return kOk;
}

int cmd_rules(const Flags& flags, const std::string& scene_path, const std::string& rules_path,
              const std::string& out_path, std::string log_path, std::ostream& out) {
  const auto rules = parse_rules(read_file(rules_path));
  const Scene scene = load(scene_path, flags);
  KnowledgeBase kb = build_knowledge_base(scene, profile_of(flags));
  const EvaluationReport report = evaluate(rules, kb, evaluation_options(scene, flags));
  if (log_path.empty()) log_path = out_path + ".log";
  write_atomic(out_path, export_triples(kb));
  write_atomic(log_path, report.log_text());
  out << "rules=" << rules.size() << " rounds=" << report.rounds << " new_facts=" << report.new_facts
      << " relate_calls=" << report.relate_calls << '\n';
  return kOk;
}

int cmd_query(const Flags& flags, const std::string& scene_path, const std::string& query_path,
              const std::string& out_path, std::ostream& out) {
  const Query q = parse_query(read_file(query_path));
  const Scene scene = load(scene_path, flags);
  KnowledgeBase kb = build_knowledge_base(scene, profile_of(flags));
  saturate(kb);
  const QueryResult result = query(q, kb, evaluation_options(scene, flags));
  if (out_path.empty()) {
    out << result.to_tsv();
  } else {
    write_atomic(out_path, result.to_tsv());
    out << "rows=" << result.rows.size() << " relate_calls=" << result.relate_calls << '\n';
  }
  return kOk;
}

int cmd_validate(const Flags& flags, const std::string& scene_path, const std::string& rules_path,
                 const std::string& query_path, std::ostream& out) {
  const Scene scene = load(scene_path, flags);
  build_knowledge_base(scene, profile_of(flags));
  out << "scene ok: " << scene.objects.size() << " objects\n";
  if (!rules_path.empty()) {
    out << "rules ok: " << parse_rules(read_file(rules_path)).size() << " rules\n";
  }
  if (!query_path.empty()) {
    const Query q = parse_query(read_file(query_path));
    out << "query ok: " << q.select.size() << " columns\n";
  }
  return kOk;
}

int cmd_generate(const Flags& flags, const BoxSceneConfig& base, const std::string& out_path,
                 std::ostream& out) {
  BoxSceneConfig config = base;
  config.seed = flags.seed;
  write_atomic(out_path, box_scene_json(config));
  out << "boxes=" << config.count << " seed=" << config.seed << '\n';
  return kOk;
}

int cmd_bench(const Flags& flags, BenchConfig config, const std::string& csv_path, bool check,
              std::ostream& out, std::ostream& err) {
  config.seed = flags.seed;
  config.jobs = flags.jobs;
  const BenchResult result = run_bench(config, [&err](const BenchRow& row) {
    err << "n=" << row.n << " median_ms=" << row.median_ms << " cached_ms=" << row.cached_median_ms
        << " overlapping=" << row.overlapping_pairs << '\n';
  });
  if (csv_path.empty()) {
    out << result.to_csv();
  } else {
    write_atomic(csv_path, result.to_csv());
  }
  out << "jobs=" << result.jobs << '\n';
  if (!check) return kOk;
  const ScalingReport report = check_scaling(result);
  for (const auto& line : report.lines) out << line << '\n';
  out << "scaling " << (report.passed ? "PASS" : "FAIL") << '\n';
  return report.passed ? kOk : kInputError;
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ParseError*>(&error) != nullptr ||
      dynamic_cast<const QueryError*>(&error) != nullptr) {
    return kLanguageError;
  }
  if (dynamic_cast<const UnclassifiableMaskError*>(&error) != nullptr) return kInternalError;
  if (dynamic_cast<const Error*>(&error) != nullptr ||
      dynamic_cast<const InputFailure*>(&error) != nullptr) {
    return kInputError;
  }
  return kInternalError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qualitative 3D topology over CSG solids", "csgtopo"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--epsilon", flags.epsilon, "Octree resolution (default: universe extent / 1024)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--delta", flags.delta, "Shell-contact and thickening tolerance (default: 1e-3 * extent)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("--refine", flags.refine, "Refine disjoint/contains/inside into meet/covers/coveredBy");
  app.add_option("--profile", flags.profile, "Relation characteristics profile")
      ->check(CLI::IsMember({"paper", "corrected"}));
  app.add_option("--seed", flags.seed, "Random seed for generate and bench");
  app.add_option("--jobs", flags.jobs, "Worker threads for geometric evaluation")
      ->check(CLI::PositiveNumber);

  std::string scene_path, second, third, out_path, log_path, rules_path, query_path;

  auto* relate_cmd = app.add_subcommand("relate", "Print the relation between two objects");
  relate_cmd->add_option("scene", scene_path)->required();
  relate_cmd->add_option("a", second)->required();
  relate_cmd->add_option("b", third)->required();

  auto* enrich_cmd = app.add_subcommand("enrich", "Relate all object pairs and export triples");
  enrich_cmd->add_option("scene", scene_path)->required();
  enrich_cmd->add_option("out", out_path, "Triple file")->required();

  auto* rules_cmd = app.add_subcommand("rules", "Evaluate rules and export triples and the derivation log");
  rules_cmd->add_option("scene", scene_path)->required();
  rules_cmd->add_option("rules", rules_path)->required();
  rules_cmd->add_option("out", out_path, "Triple file")->required();
  rules_cmd->add_option("--log", log_path, "Derivation log (default: <out>.log)");

  auto* query_cmd = app.add_subcommand("query", "Run a select query and print TSV rows");
  query_cmd->add_option("scene", scene_path)->required();
  query_cmd->add_option("query", query_path)->required();
  query_cmd->add_option("--out", out_path, "Write rows to a file instead of standard output");

  auto* validate_cmd = app.add_subcommand("validate", "Check a scene and optionally rules and a query");
  validate_cmd->add_option("scene", scene_path)->required();
  validate_cmd->add_option("--rules", rules_path);
  validate_cmd->add_option("--query", query_path);

  BoxSceneConfig box_config;
  auto* generate_cmd = app.add_subcommand("generate", "Write a seeded random box scene");
  generate_cmd->add_option("out", out_path, "Scene file")->required();
  generate_cmd->add_option("--count", box_config.count, "Number of boxes")->required();
  generate_cmd->add_option("--min-edge", box_config.min_edge)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--max-edge", box_config.max_edge)->check(CLI::PositiveNumber);
  generate_cmd->add_option("--class", box_config.class_name);

  BenchConfig bench_config;
  std::string csv_path;
  bool check = false;
  auto* bench_cmd = app.add_subcommand("bench", "Time the all-pairs overlap query on generated scenes");
  bench_cmd->add_option("--sizes", bench_config.sizes, "Box counts")->delimiter(',');
  bench_cmd->add_option("--reps", bench_config.repetitions, "Repetitions per size (>= 3)");
  bench_cmd->add_option("--csv", csv_path, "Write the CSV to a file");
  bench_cmd->add_flag("--check", check, "Check the scaling shape; exit 2 on failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*relate_cmd) return cmd_relate(flags, scene_path, second, third, out);
    if (*enrich_cmd) return cmd_enrich(flags, scene_path, out_path, out, err);
    if (*rules_cmd) return cmd_rules(flags, scene_path, rules_path, out_path, log_path, out);
    if (*query_cmd) return cmd_query(flags, scene_path, query_path, out_path, out);
    if (*validate_cmd) return cmd_validate(flags, scene_path, rules_path, query_path, out);
    if (*generate_cmd) return cmd_generate(flags, box_config, out_path, out);
    if (*bench_cmd) return cmd_bench(flags, bench_config, csv_path, check, out, err);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    err << (code == kInternalError ? "internal error: " : "error: ") << e.what() << '\n';
    return code;
  }
  err << "internal error: no command ran\n";
  return kInternalError;
}

}  // namespace csgtopo::cli
