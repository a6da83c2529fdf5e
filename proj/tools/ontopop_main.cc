// Command-line driver: inspect, populate, evaluate, gen-fixture.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ontopop/error.h"
#include "ontopop/fixture.h"
#include "ontopop/pipeline.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Flag values that override the config file when given.
struct Overrides {
  std::string config;
  std::optional<std::string> embedding, format, ontology, corpus, taxonomy, gold,
      output, class_vector_method, averaging;
  std::optional<std::size_t> min_count, kmeans_max_iters, min_seeds;
  std::optional<std::uint64_t> kmeans_seed, split_seed;
  std::optional<double> threshold;
  std::vector<double> weights;
  bool no_lowercase = false;
  bool tune_threshold = false;
  bool strict = false;
  bool sequential = false;
};

void add_run_options(CLI::App &cmd, Overrides &o) {
  cmd.add_option("-c,--config", o.config, "JSON run configuration");
  cmd.add_option("--embedding", o.embedding, "word2vec model file");
  cmd.add_option("--format", o.format, "embedding format")
      ->check(CLI::IsMember({"text", "binary", "auto"}));
  cmd.add_option("--ontology", o.ontology, "ontology JSON");
  cmd.add_option("--corpus", o.corpus, "directory of .txt documents");
  cmd.add_option("--taxonomy", o.taxonomy, "taxonomy JSON (enables M3)");
  cmd.add_option("--gold", o.gold, "gold-standard JSON");
  cmd.add_option("-o,--output", o.output, "output directory");
  cmd.add_option("--min-count", o.min_count, "minimum candidate frequency");
  cmd.add_flag("--no-lowercase", o.no_lowercase, "keep corpus casing");
  cmd.add_option("--kmeans-seed", o.kmeans_seed, "k-means seed");
  cmd.add_option("--kmeans-max-iters", o.kmeans_max_iters, "k-means iteration cap");
  cmd.add_option("--min-seeds", o.min_seeds, "minimum usable seeds for M2");
  cmd.add_option("--split-seed", o.split_seed, "train/validation/test split seed");
  cmd.add_option("--threshold", o.threshold, "ensemble score threshold");
  cmd.add_flag("--tune-threshold", o.tune_threshold,
               "pick the threshold on the validation split");
  cmd.add_option("--weights", o.weights, "explicit M1..M5 weights")->expected(5);
  cmd.add_option("--class-vector-method", o.class_vector_method)
      ->check(CLI::IsMember({"centroid", "median"}));
  cmd.add_option("--averaging", o.averaging)->check(CLI::IsMember({"macro", "micro"}));
  cmd.add_flag("--strict", o.strict, "reject classes without seeds");
  cmd.add_flag("--sequential", o.sequential, "run the five models one after another");
}

ontopop::RunConfig build_config(const Overrides &o) {
  using namespace ontopop;
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.embedding) c.embedding = *o.embedding;
  if (o.format) c.embedding_format = parse_embedding_format(*o.format);
  if (o.ontology) c.ontology = *o.ontology;
  if (o.corpus) c.corpus = *o.corpus;
  if (o.taxonomy) c.taxonomy = *o.taxonomy;
  if (o.gold) c.gold = *o.gold;
  if (o.output) c.output = *o.output;
  if (o.min_count) c.min_count = *o.min_count;
  if (o.no_lowercase) c.lowercase = false;
  if (o.kmeans_seed) c.kmeans_seed = *o.kmeans_seed;
  if (o.kmeans_max_iters) c.kmeans_max_iters = *o.kmeans_max_iters;
  if (o.min_seeds) c.exclusion_min_seeds = *o.min_seeds;
  if (o.split_seed) c.split_seed = *o.split_seed;
  if (o.threshold) c.threshold = *o.threshold;
  if (o.tune_threshold) c.tune_threshold = true;
  if (!o.weights.empty()) c.weights = o.weights;
  if (o.class_vector_method) {
    c.class_vector_method = parse_aggregation_method(*o.class_vector_method);
  }
  if (o.averaging) c.averaging = *o.averaging == "micro" ? Averaging::kMicro : Averaging::kMacro;
  if (o.strict) c.strict = true;
  if (o.sequential) c.parallel = false;
  return c;
}

void print_warnings(const ontopop::Diagnostics &diag) {
  for (const auto &w : diag.warnings()) std::cerr << "warning: " << w << '\n';
}

int run_inspect(const Overrides &o) {
  const auto summary = ontopop::inspect(build_config(o));
  ontopop::print_inspect(summary, std::cout);
  print_warnings(summary.diagnostics);
  return kExitOk;
}

int run_populate(const Overrides &o) {
  const auto config = build_config(o);
  const auto result = ontopop::run_pipeline(config);
  ontopop::write_outputs(result, config);
  print_warnings(result.diagnostics);
  std::size_t total = 0;
  for (const auto &cls : result.populated.classes()) {
    std::cout << cls.id << ": " << cls.populated.size() << " populated\n";
    total += cls.populated.size();
  }
  std::cout << "candidates=" << result.corpus.candidates.size()
            << " populated=" << total << " weights=" << result.weight_source
            << " output=" << config.output.string() << '\n';
  if (result.report) std::cout << '\n' << ontopop::report_to_table(*result.report);
  return kExitOk;
}

int run_evaluate(const Overrides &o) {
  const auto config = build_config(o);
  ontopop::validate_config(config, ontopop::Command::kEvaluate);
  const auto result = ontopop::run_pipeline(config);
  print_warnings(result.diagnostics);
  if (!result.report) {
    std::cerr << "error: no candidates to evaluate\n";
    return kExitFailure;
  }
  ontopop::write_report(*result.report, config.output);
  std::cout << ontopop::report_to_table(*result.report);
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Semi-supervised ontology population with word embeddings"};
  app.require_subcommand(1);

  Overrides inspect_opts, populate_opts, evaluate_opts;
  auto *inspect = app.add_subcommand("inspect", "summarize the embedding model and ontology");
  add_run_options(*inspect, inspect_opts);
  auto *populate = app.add_subcommand("populate", "run all models and populate the ontology");
  add_run_options(*populate, populate_opts);
  auto *evaluate = app.add_subcommand("evaluate", "report P/R/F1 on the test split");
  add_run_options(*evaluate, evaluate_opts);

  ontopop::FixtureOptions fixture;
  std::string fixture_dir;
  auto *gen = app.add_subcommand("gen-fixture", "write a synthetic dataset");
  gen->add_option("out", fixture_dir, "output directory")->required();
  gen->add_option("--classes", fixture.classes)->check(CLI::Range(2, 1000));
  gen->add_option("--per-class", fixture.per_class);
  gen->add_option("--noise", fixture.noise)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", fixture.seed);
  gen->add_option("--dim", fixture.dimension)->check(CLI::PositiveNumber);
  gen->add_option("--seeds-per-class", fixture.seeds_per_class);
  gen->add_option("--filler", fixture.filler);
  gen->add_option("--min-count", fixture.min_count);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*inspect) return run_inspect(inspect_opts);
    if (*populate) return run_populate(populate_opts);
    if (*evaluate) return run_evaluate(evaluate_opts);
    if (*gen) {
      const auto fx = ontopop::generate_fixture(fixture);
      ontopop::write_fixture(fx, fixture_dir, fixture.min_count);
      std::cout << "wrote fixture to " << fixture_dir << " (dim="
                << fx.embeddings.dimension() << " vocab=" << fx.embeddings.size()
                << ")\n";
      return kExitOk;
    }
  } catch (const ontopop::ConfigError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
