#include "ontopop/pipeline.h"

#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <ostream>
#include <set>

#include "ontopop/error.h"
#include "ontopop/taxonomy.h"

namespace ontopop {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path &base,
                              const std::string &value) {
  std::filesystem::path p(value);
  if (p.is_absolute() || base.empty()) return p;
  return base / p;
}

json flatten(const json &doc) {
  json flat = json::object();
  for (const auto &[key, value] : doc.items()) {
    if (value.is_object() && (key == "kmeans" || key == "exclusion" || key == "split")) {
      for (const auto &[sub, v] : value.items()) flat[key + "." + sub] = v;
    } else {
      flat[key] = value;
    }
  }
  return flat;
}

std::string format_score(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

void require_file(const std::filesystem::path &path, const std::string &what) {
  if (path.empty()) throw ConfigError(what + " path is not set");
  if (!std::filesystem::exists(path)) {
    throw ConfigError(what + " not found: " + path.string());
  }
}

}  // namespace

RunConfig config_from_json(const json &doc, const std::filesystem::path &base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  static const std::set<std::string> kKnown = {
      "embedding", "format", "ontology", "corpus", "taxonomy", "gold", "output",
      "min_count", "lowercase", "kmeans.seed", "kmeans.max_iters", "linkage",
      "exclusion.min_seeds", "split.seed", "split.ratios", "threshold",
      "tune_threshold", "weights", "class_vector_method", "averaging", "strict",
      "parallel"};
  const json flat = flatten(doc);
  try {
    for (const auto &[key, value] : flat.items()) {
      if (!kKnown.count(key)) throw ConfigError("unknown config key '" + key + "'");
      if (key == "embedding") c.embedding = resolve(base_dir, value.get<std::string>());
      else if (key == "format") c.embedding_format = parse_embedding_format(value.get<std::string>());
      else if (key == "ontology") c.ontology = resolve(base_dir, value.get<std::string>());
      else if (key == "corpus") c.corpus = resolve(base_dir, value.get<std::string>());
      else if (key == "taxonomy") {
        if (!value.is_null()) c.taxonomy = resolve(base_dir, value.get<std::string>());
      } else if (key == "gold") {
        if (!value.is_null()) c.gold = resolve(base_dir, value.get<std::string>());
      } else if (key == "output") c.output = resolve(base_dir, value.get<std::string>());
      else if (key == "min_count") c.min_count = value.get<std::size_t>();
      else if (key == "lowercase") c.lowercase = value.get<bool>();
      else if (key == "kmeans.seed") c.kmeans_seed = value.get<std::uint64_t>();
      else if (key == "kmeans.max_iters") c.kmeans_max_iters = value.get<std::size_t>();
      else if (key == "linkage") c.linkage = value.get<std::string>();
      else if (key == "exclusion.min_seeds") c.exclusion_min_seeds = value.get<std::size_t>();
      else if (key == "split.seed") c.split_seed = value.get<std::uint64_t>();
      else if (key == "split.ratios") c.split_ratios = value.get<std::array<double, 3>>();
      else if (key == "threshold") c.threshold = value.get<double>();
      else if (key == "tune_threshold") c.tune_threshold = value.get<bool>();
      else if (key == "weights") {
        if (!value.is_null()) c.weights = normalize_weights(value.get<std::vector<double>>()).values;
      } else if (key == "class_vector_method") {
        c.class_vector_method = parse_aggregation_method(value.get<std::string>());
      } else if (key == "averaging") {
        const auto name = value.get<std::string>();
        if (name == "macro") c.averaging = Averaging::kMacro;
        else if (name == "micro") c.averaging = Averaging::kMicro;
        else throw ConfigError("averaging must be macro or micro");
      } else if (key == "strict") c.strict = value.get<bool>();
      else if (key == "parallel") c.parallel = value.get<bool>();
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("invalid config value: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not found: " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

json config_to_json(const RunConfig &c) {
  json doc = {
      {"embedding", c.embedding.string()},
      {"format", c.embedding_format == EmbeddingFormat::kText     ? "text"
                 : c.embedding_format == EmbeddingFormat::kBinary ? "binary"
                                                                  : "auto"},
      {"ontology", c.ontology.string()},
      {"corpus", c.corpus.string()},
      {"taxonomy", c.taxonomy ? json(c.taxonomy->string()) : json(nullptr)},
      {"gold", c.gold ? json(c.gold->string()) : json(nullptr)},
      {"output", c.output.string()},
      {"min_count", c.min_count},
      {"lowercase", c.lowercase},
      {"kmeans", {{"seed", c.kmeans_seed}, {"max_iters", c.kmeans_max_iters}}},
      {"linkage", c.linkage},
      {"exclusion", {{"min_seeds", c.exclusion_min_seeds}}},
      {"split", {{"seed", c.split_seed}, {"ratios", c.split_ratios}}},
      {"threshold", c.threshold},
      {"tune_threshold", c.tune_threshold},
      {"weights", c.weights ? json(*c.weights) : json(nullptr)},
      {"class_vector_method", std::string(to_string(c.class_vector_method))},
      {"averaging", c.averaging == Averaging::kMacro ? "macro" : "micro"},
      {"strict", c.strict},
      {"parallel", c.parallel}};
  return doc;
}

void validate_config(const RunConfig &config, Command command) {
  require_file(config.embedding, "embedding model");
  require_file(config.ontology, "ontology");
  if (command == Command::kInspect) return;

  if (config.corpus.empty() || !std::filesystem::is_directory(config.corpus)) {
    throw ConfigError("corpus directory not found: " + config.corpus.string());
  }
  if (config.taxonomy) require_file(*config.taxonomy, "taxonomy");
  if (config.gold) require_file(*config.gold, "gold standard");
  if (config.min_count < 1) throw ConfigError("min_count must be >= 1");
  if (config.linkage != "average") {
    throw ConfigError("linkage '" + config.linkage + "' unsupported (only average)");
  }
  if (config.exclusion_min_seeds < 2) throw ConfigError("exclusion.min_seeds must be >= 2");
  if (config.kmeans_max_iters < 1) throw ConfigError("kmeans.max_iters must be >= 1");
  if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
    throw ConfigError("threshold must lie in [0, 1]");
  }
  if (config.weights) {
    if (config.weights->size() != kCandidateModels.size()) {
      throw ConfigError("weights must have exactly 5 entries (M1..M5)");
    }
    normalize_weights(*config.weights);
  }
  if (command == Command::kEvaluate && !config.gold) {
    throw ConfigError("evaluate needs a gold standard (set 'gold')");
  }
  if (command == Command::kPopulate && !config.weights && !config.gold) {
    throw ConfigError(
        "no ensemble weight source: set 'weights' to a 5-vector or provide a "
        "'gold' standard so weights can be derived on the validation split");
  }
}

PipelineResult run_pipeline(const RunConfig &config) {
  validate_config(config, Command::kPopulate);
  PipelineResult result;
  Diagnostics &diag = result.diagnostics;

  const auto store = load_model(config.embedding, config.embedding_format, &diag);
  const auto ontology = load_ontology(config.ontology, &diag, config.strict);
  const auto documents = read_corpus_dir(config.corpus);
  std::optional<TaxonomyStore> taxonomy;
  if (config.taxonomy) taxonomy = load_taxonomy(*config.taxonomy);
  std::optional<GoldStandard> gold;
  if (config.gold) gold = load_gold(*config.gold);

  result.corpus = extract_candidates(
      documents, store, ontology, {config.min_count, config.lowercase, 0}, &diag);
  result.class_vectors =
      derive_class_vectors(ontology, store, config.class_vector_method, &diag);
  const auto &candidates = result.corpus.candidates;
  const auto &class_vectors = result.class_vectors;
  const auto class_ids = ontology.class_ids();

  // The five models share only immutable inputs; each reports into its own
  // diagnostics, merged in model order after the join.
  ClusterModelOptions cluster_options{{config.kmeans_seed, config.kmeans_max_iters}};
  std::array<Diagnostics, 5> model_diag;
  std::array<std::function<ModelOutput()>, 5> jobs = {
      [&] { return run_m1(candidates, class_vectors, store, &model_diag[0]); },
      [&] {
        return run_m2(candidates, ontology, store, {config.exclusion_min_seeds},
                      &model_diag[1]);
      },
      [&] {
        if (!taxonomy) {
          model_diag[2].warn("M3: no taxonomy configured, model skipped");
          return ModelOutput{ModelTag::kM3, {}};
        }
        return run_m3(ontology, *taxonomy, candidates, &model_diag[2]);
      },
      [&] {
        return run_m4(ontology, class_vectors, store, candidates, cluster_options,
                      &model_diag[3]);
      },
      [&] {
        return run_m5(ontology, class_vectors, store, candidates, cluster_options,
                      &model_diag[4]);
      }};
  if (config.parallel) {
    std::vector<std::future<ModelOutput>> futures;
    for (auto &job : jobs) futures.push_back(std::async(std::launch::async, job));
    for (auto &f : futures) result.outputs.push_back(f.get());
  } else {
    for (auto &job : jobs) result.outputs.push_back(job());
  }
  for (const auto &d : model_diag) diag.merge(d);

  result.populated = ontology;
  result.threshold = config.threshold;
  if (candidates.empty()) {
    diag.warn("no candidates: population is empty");
    if (config.weights) {
      result.weights = normalize_weights(*config.weights);
      result.weight_source = "config";
    }
    return result;
  }

  const EvaluationOptions eval_base{config.averaging, std::nullopt};
  if (gold) result.split = split_corpus(candidates, config.split_ratios, config.split_seed);
  auto scope_of = [](const std::vector<std::string> &words) {
    return std::set<std::string>(words.begin(), words.end());
  };

  if (config.weights) {
    result.weights = normalize_weights(*config.weights);
    result.weight_source = "config";
  } else {
    EvaluationOptions options = eval_base;
    options.scope = scope_of(result.split->validation);
    const auto validation =
        evaluate_models(result.outputs, *gold, ontology, options, nullptr);
    std::vector<double> f1s;
    for (ModelTag tag : kCandidateModels) {
      f1s.push_back(validation.per_model.at(std::string(to_string(tag))).f1);
    }
    result.weights = compute_weights(f1s);
    result.weight_source = "validation F1";
  }

  if (config.tune_threshold && gold) {
    EvaluationOptions options = eval_base;
    options.scope = scope_of(result.split->validation);
    double best_f1 = -1.0;
    for (int step = 0; step < 20; ++step) {
      const double t = step * 0.05;
      std::vector<ModelOutput> probe{
          run_ensemble(result.outputs, result.weights, class_ids, t)};
      const auto r = evaluate_models(probe, *gold, ontology, options, nullptr);
      if (r.ensemble->f1 > best_f1) {
        best_f1 = r.ensemble->f1;
        result.threshold = t;
      }
    }
  }

  result.ensemble = run_ensemble(result.outputs, result.weights, class_ids,
                                 result.threshold);
  for (const auto &token : candidates) {
    auto d = decide(token, result.outputs, result.weights, class_ids,
                    result.threshold);
    if (!d) continue;
    result.populated.add_populated(d->class_id,
                                   {token, std::move(d->models), d->score});
  }

  if (gold) {
    std::vector<ModelOutput> all = result.outputs;
    all.push_back(result.ensemble);
    EvaluationOptions options = eval_base;
    options.scope = scope_of(result.split->test);
    result.report = evaluate_models(all, *gold, ontology, options, &diag);
    result.report->weights = result.weights.values;
    result.report->weight_source = result.weight_source;
    result.report->threshold = result.threshold;
    result.report->split_sizes = {result.split->train.size(),
                                  result.split->validation.size(),
                                  result.split->test.size()};
  }
  return result;
}

void write_membership_tsv(const ModelOutput &output, std::ostream &out) {
  for (const auto &[instance, list] : output.memberships) {
    for (const auto &m : list) {
      out << instance << '\t' << m.class_id << '\t' << format_score(m.score) << '\n';
    }
  }
}

void write_report(const EvalReport &report, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  std::ofstream json_out(dir / "report.json", std::ios::trunc);
  std::ofstream text_out(dir / "report.txt", std::ios::trunc);
  if (!json_out || !text_out) throw IoError("cannot write report into " + dir.string());
  json_out << report_to_json(report).dump(2) << '\n';
  text_out << report_to_table(report);
}

void write_outputs(const PipelineResult &result, const RunConfig &config) {
  std::filesystem::create_directories(config.output);
  save_population(result.populated, config.output / "ontology.json");
  auto write_tsv = [&](const ModelOutput &output) {
    const auto path = config.output / (std::string(to_string(output.tag)) + ".tsv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_membership_tsv(output, out);
  };
  for (const auto &output : result.outputs) write_tsv(output);
  write_tsv(result.ensemble);
  if (result.report) write_report(*result.report, config.output);
}

InspectSummary inspect(const RunConfig &config) {
  validate_config(config, Command::kInspect);
  InspectSummary summary;
  const auto store =
      load_model(config.embedding, config.embedding_format, &summary.diagnostics);
  const auto ontology =
      load_ontology(config.ontology, &summary.diagnostics, config.strict);
  summary.dimension = store.dimension();
  summary.vocabulary = store.size();
  for (const auto &cls : ontology.classes()) {
    summary.seed_counts.emplace_back(cls.id, cls.seeds.size());
    for (const auto &seed : cls.seeds) {
      if (!store.contains(seed)) {
        summary.oov_seeds.push_back(seed);
        summary.diagnostics.warn("class '" + cls.id + "': seed '" + seed +
                                 "' is out of vocabulary");
      }
    }
  }
  return summary;
}

void print_inspect(const InspectSummary &summary, std::ostream &out) {
  out << "dim=" << summary.dimension << " vocab=" << summary.vocabulary << '\n';
  for (const auto &[id, count] : summary.seed_counts) {
    out << "class " << id << " seeds=" << count << '\n';
  }
  if (!summary.oov_seeds.empty()) {
    out << "oov seeds:";
    for (const auto &s : summary.oov_seeds) out << ' ' << s;
    out << '\n';
  }
}

}  // namespace ontopop
