// Copyright 2026 The typoclust Authors.
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

// typoclust: cluster XML document collections on selected elements and
// validate the clusters against reference typologies.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "typoclust/cluster.hpp"
#include "typoclust/error.hpp"
#include "typoclust/eval.hpp"
#include "typoclust/ingest.hpp"
#include "typoclust/lexical.hpp"
#include "typoclust/pipeline.hpp"
#include "typoclust/util.hpp"
#include "typoclust/vocab.hpp"

#ifndef TYPOCLUST_VERSION
#define TYPOCLUST_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace typoclust;

namespace {

std::vector<fs::path> files_with_extension(const fs::path& dir,
                                           const std::string& ext) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

void cmd_extract(const fs::path& config_path, const fs::path& corpus_dir,
                 const fs::path& out_dir) {
  const auto config = pipeline::ExperimentConfig::load(config_path);
  const auto corpus = ingest::load_corpus(corpus_dir);
  for (const auto& doc : corpus) {
    for (const auto& warning : doc.warnings()) {
      std::cerr << "warning: " << doc.doc_id() << ": " << warning << "\n";
    }
  }
  const pipeline::ExtractStage stage = pipeline::extract_tokens(corpus, config);
  std::size_t tokens = 0;
  for (const auto& doc : stage.docs) {
    std::string body;
    for (const auto& t : doc.tokens) body += t + "\n";
    tokens += doc.tokens.size();
    write_file(out_dir / (doc.doc_id + ".tok"), body);
  }
  nlohmann::ordered_json summary;
  summary["experiment"] = config.name;
  summary["retained"] = stage.docs.size();
  summary["excluded_docs"] = stage.excluded;
  summary["extracted"] = tokens;
  write_file(out_dir / "extract.json", summary.dump(2) + "\n");
}

void cmd_tag(const fs::path& tokens_dir, const fs::path& out_dir,
             const std::string& lexicon_path) {
  const lexical::FallbackTagger tagger(lexical::Lexicon::load(
      lexicon_path.empty() ? pipeline::default_lexicon_path()
                           : fs::path(lexicon_path)));
  for (const fs::path& file : files_with_extension(tokens_dir, ".tok")) {
    std::vector<std::string> tokens;
    for (const std::string& line : split_lines(read_file(file))) {
      if (!line.empty()) tokens.push_back(line);
    }
    const auto tagged = lexical::tag_tokens(tokens, tagger);
    write_file(out_dir / (file.stem().string() + ".tsv"),
               lexical::format_tagged_stream(tagged));
  }
}

void cmd_vectorize(const fs::path& tagged_dir, const fs::path& config_path,
                   const fs::path& out_dir) {
  const auto config = pipeline::ExperimentConfig::load(config_path);
  std::vector<pipeline::TaggedDoc> docs;
  for (const fs::path& file : files_with_extension(tagged_dir, ".tsv")) {
    docs.push_back({file.stem().string(),
                    lexical::TreeTaggerStream::load(file).stream()});
  }
  const auto stopwords =
      lexical::load_stopwords(config.stopwords ? *config.stopwords
                                               : pipeline::default_stopwords_path());
  const auto stage = pipeline::vectorize(docs, config, stopwords);
  write_file(out_dir / "matrix.csv", stage.build.matrix.to_csv());
  write_file(out_dir / "matrix.json",
             vocab::sidecar_json(stage.build, stage.stats));
}

void cmd_cluster(const fs::path& matrix_path, std::size_t k,
                 std::size_t restarts, std::uint64_t seed,
                 std::size_t max_iter, std::size_t top_words,
                 const std::string& out_dir) {
  const auto matrix = vocab::DocTermMatrix::from_csv(read_file(matrix_path));
  try {
    matrix.validate();
  } catch (const InvariantViolation& e) {
    throw DataError(matrix_path.string() + ": " + e.what());
  }
  cluster::ClusteringOptions options;
  options.k = k;
  options.restarts = restarts;
  options.seed = seed;
  options.max_iter = max_iter;
  const auto partition = cluster::run_clustering(matrix, options);
  const std::string csv =
      cluster::partition_to_csv(matrix.doc_ids(), partition.assignment);
  if (out_dir.empty()) {
    std::cout << csv;
    return;
  }
  const fs::path dir(out_dir);
  write_file(dir / "partition.csv", csv);
  write_file(dir / "partition.json", cluster::partition_metadata_json(partition));
  write_file(dir / "words.csv",
             cluster::words_to_csv(cluster::discriminative_words(
                 matrix, partition.assignment, k, top_words)));
}

void cmd_evaluate(const fs::path& partition_path,
                  const std::vector<std::string>& reference_paths,
                  std::string experiment, const std::string& weighting,
                  const std::string& json_path) {
  const auto partition = eval::parse_partition_csv(read_file(partition_path));
  std::vector<eval::ReferencePartition> refs;
  std::vector<std::string> names;
  for (const auto& p : reference_paths) {
    refs.push_back(eval::ReferencePartition::load(p));
    names.push_back(refs.back().name);
  }
  if (experiment.empty()) experiment = partition_path.stem().string();
  const std::vector<std::vector<eval::EvaluationReport>> rows = {eval::evaluate(
      experiment, partition.doc_ids, partition.assignment, partition.k, refs,
      eval::parse_f_weighting(weighting))};
  for (const auto& r : rows.front()) {
    if (r.error) std::cerr << "warning: " << *r.error << "\n";
  }
  std::cout << eval::report_csv(rows, names);
  if (!json_path.empty()) write_file(json_path, eval::report_json(rows));
}

void cmd_run_all(const std::vector<std::string>& config_paths,
                 const fs::path& corpus_dir, const fs::path& out_dir) {
  std::vector<pipeline::ExperimentConfig> configs;
  for (const auto& p : config_paths) {
    configs.push_back(pipeline::ExperimentConfig::load(p));
  }
  const auto resources = pipeline::Resources::load_default();
  pipeline::run_all(configs, corpus_dir, out_dir, resources);
  std::cout << read_file(out_dir / "report.txt");
}

void cmd_synth(const fs::path& spec_path, const fs::path& out_dir) {
  std::string text;
  try {
    text = read_file(spec_path);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  const auto spec = pipeline::SyntheticSpec::from_json(text);
  const auto docs = pipeline::generate_synthetic_corpus(spec, out_dir);
  std::cout << "wrote " << docs.size() << " documents to "
            << (out_dir / "corpus").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster homogeneous XML documents on selected elements and "
               "validate the clusters against reference typologies."};
  app.set_version_flag("--version", std::string("typoclust ") + TYPOCLUST_VERSION);
  app.require_subcommand(1);

  std::string config, corpus, out, tokens, tagged, lexicon, matrix, partition,
      experiment, weighting = "cluster", json_out, spec;
  std::vector<std::string> configs, references;
  std::size_t k = 0, restarts = 10, max_iter = 100, top_words = 10;
  std::uint64_t seed = 0;

  auto* extract = app.add_subcommand("extract", "Extract and tokenize selected element text");
  extract->add_option("--config", config, "Experiment config (JSON)")->required();
  extract->add_option("--corpus", corpus, "Directory of .xml documents")->required();
  extract->add_option("--out", out, "Output directory for <doc_id>.tok files")->required();

  auto* tag = app.add_subcommand("tag", "Tag token files with the built-in tagger");
  tag->add_option("--tokens", tokens, "Directory of .tok files")->required();
  tag->add_option("--out", out, "Output directory for .tsv streams")->required();
  tag->add_option("--lexicon", lexicon, "Lexicon file (default: bundled)");

  auto* vectorize = app.add_subcommand("vectorize", "Build the document-term matrix from tagged streams");
  vectorize->add_option("--tagged", tagged, "Directory of .tsv streams")->required();
  vectorize->add_option("--config", config, "Experiment config (JSON)")->required();
  vectorize->add_option("--out", out, "Output directory")->required();

  auto* cluster_cmd = app.add_subcommand("cluster", "Partition a document-term matrix");
  cluster_cmd->add_option("--matrix", matrix, "Matrix CSV")->required();
  cluster_cmd->add_option("--k", k, "Number of clusters")->required();
  cluster_cmd->add_option("--restarts", restarts, "Random restarts")->capture_default_str();
  cluster_cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
  cluster_cmd->add_option("--max-iter", max_iter, "Iteration cap per restart")->capture_default_str();
  cluster_cmd->add_option("--top-words", top_words, "Discriminative words per cluster")->capture_default_str();
  cluster_cmd->add_option("--out", out, "Output directory (default: partition CSV on stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "Score a partition against reference typologies");
  evaluate->add_option("--partition", partition, "Partition CSV (doc_id,cluster)")->required();
  evaluate->add_option("--reference", references, "Reference CSV (doc_id,label); repeatable")->required();
  evaluate->add_option("--experiment", experiment, "Row label (default: partition file stem)");
  evaluate->add_option("--f-weighting", weighting, "cluster or class")->capture_default_str();
  evaluate->add_option("--json", json_out, "Also write the JSON report here");

  auto* run_all = app.add_subcommand("run-all", "Run complete experiments");
  run_all->add_option("--config", configs, "Experiment config (JSON); repeatable")->required();
  run_all->add_option("--corpus", corpus, "Directory of .xml documents")->required();
  run_all->add_option("--out", out, "Output directory")->required();

  auto* synth = app.add_subcommand("synth", "Generate a planted-topic XML corpus");
  synth->add_option("--spec", spec, "Synthetic corpus spec (JSON)")->required();
  synth->add_option("--out", out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*extract) cmd_extract(config, corpus, out);
    else if (*tag) cmd_tag(tokens, out, lexicon);
    else if (*vectorize) cmd_vectorize(tagged, config, out);
    else if (*cluster_cmd) cmd_cluster(matrix, k, restarts, seed, max_iter, top_words, out);
    else if (*evaluate) cmd_evaluate(partition, references, experiment, weighting, json_out);
    else if (*run_all) cmd_run_all(configs, corpus, out);
    else if (*synth) cmd_synth(spec, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
