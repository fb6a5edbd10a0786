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

#ifndef TYPOCLUST_PIPELINE_HPP_
#define TYPOCLUST_PIPELINE_HPP_

// End-to-end experiments: extract -> tag/filter -> vectorize -> cluster ->
// evaluate -> report. Each stage is also exposed on its own so the CLI can
// stop and resume at file boundaries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typoclust/cluster.hpp"
#include "typoclust/eval.hpp"
#include "typoclust/ingest.hpp"
#include "typoclust/lexical.hpp"
#include "typoclust/vocab.hpp"

namespace typoclust::pipeline {

struct ExperimentConfig {
  std::string name;
  std::vector<std::string> selectors;
  lexical::LexicalFilter lexical_filter = lexical::LexicalFilter::kNouns;
  std::size_t min_df = 2;
  std::vector<std::size_t> k_values = {4, 5, 9};
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> references;
  std::optional<std::filesystem::path> normalization_map;
  std::optional<std::filesystem::path> tagged_stream_dir;
  std::optional<std::filesystem::path> stopwords;
  eval::FWeighting f_weighting = eval::FWeighting::kCluster;
  std::size_t top_words = 10;

  // Relative paths are resolved against base_dir. Unknown keys are rejected.
  // Throws UsageError.
  static ExperimentConfig from_json(std::string_view json,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);

  std::vector<ingest::ElementSelector> parsed_selectors() const;
};

// Bundled data directory, lexicon (TYPOCLUST_LEXICON overrides) and stopword
// list.
std::filesystem::path data_dir();
std::filesystem::path default_lexicon_path();
std::filesystem::path default_stopwords_path();

struct Resources {
  lexical::Lexicon lexicon;
  std::set<std::string> stopwords;

  static Resources load_default();
};

struct DocTokens {
  std::string doc_id;
  std::vector<std::string> tokens;
};

struct ExtractStage {
  std::vector<DocTokens> docs;
  std::vector<std::string> excluded;
};

ExtractStage extract_tokens(std::span<const ingest::RawDocument> corpus,
                            const ExperimentConfig& config);

struct TaggedDoc {
  std::string doc_id;
  std::vector<lexical::TaggedToken> tokens;
};

// Reads <tagged_dir>/<doc_id>.tsv when a directory is given, otherwise runs
// the fallback tagger. Without a tagger every token is passed through as
// OTHER with its lowercased surface as lemma.
std::vector<TaggedDoc> tag_documents(
    std::span<const DocTokens> docs, const lexical::Tagger& fallback,
    const std::optional<std::filesystem::path>& tagged_dir, bool use_tagger);

struct VectorizeStage {
  vocab::MatrixBuild build;
  vocab::CorpusStats stats;
};

VectorizeStage vectorize(std::span<const TaggedDoc> docs,
                         const ExperimentConfig& config,
                         const std::set<std::string>& stopwords);

struct ClusterRun {
  std::size_t k = 0;
  cluster::Partition partition;
  std::vector<cluster::DiscriminativeWord> words;
  std::vector<eval::EvaluationReport> evaluation;
};

struct ExperimentResult {
  std::string name;
  ExtractStage extraction;
  VectorizeStage vectorized;
  std::vector<ClusterRun> runs;
  std::vector<std::string> reference_names;
};

// Runs every stage for each k. When out_dir is set, writes
// <out_dir>/<name>/{matrix.csv,matrix.json,partition_k*.csv,
// partition_k*.json,words_k*.csv,evaluation.json}. Errors carry the stage.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const ingest::RawDocument> corpus,
                                const Resources& resources,
                                const std::optional<std::filesystem::path>& out_dir);

// Row label used in reports: "<name>-a" for the first k, "-b" next, ...
std::string experiment_row_label(std::string_view name, std::size_t k_index);

// Table-1 style: experiment,projects,extracted,selected,vocabulary.
std::string stats_csv(std::span<const ExperimentResult> results);
std::string stats_text(std::span<const ExperimentResult> results);

// Runs all configs over one corpus and writes report.csv, report.txt,
// report.json and stats.csv under out_dir.
std::vector<ExperimentResult> run_all(std::span<const ExperimentConfig> configs,
                                      const std::filesystem::path& corpus_dir,
                                      const std::filesystem::path& out_dir,
                                      const Resources& resources);

struct SyntheticSpec {
  std::size_t n_topics = 3;
  std::size_t docs_per_topic = 20;
  std::size_t topic_vocab_size = 30;
  std::size_t shared_vocab_size = 60;
  std::size_t doc_length = 120;
  double noise_ratio = 0.0;
  std::uint64_t seed = 0;

  // Throws UsageError on invalid values or unknown keys.
  static SyntheticSpec from_json(std::string_view json);
  void validate() const;
};

struct SyntheticDoc {
  std::string doc_id;
  std::string label;
  std::string xml;
};

// Documents shaped like an activity report (raweb/presentation and
// raweb/foundation); each token comes from the shared vocabulary with
// probability noise_ratio and from the document's topic vocabulary otherwise.
std::vector<SyntheticDoc> synthesize(const SyntheticSpec& spec);

// Writes <out_dir>/corpus/<doc_id>.xml and <out_dir>/planted.csv.
std::vector<SyntheticDoc> generate_synthetic_corpus(
    const SyntheticSpec& spec, const std::filesystem::path& out_dir);

std::string reference_csv(std::span<const SyntheticDoc> docs);

}  // namespace typoclust::pipeline

#endif  // TYPOCLUST_PIPELINE_HPP_
