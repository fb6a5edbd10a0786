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

#include "typoclust/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "json.hpp"
#include "typoclust/error.hpp"
#include "typoclust/random.hpp"
#include "typoclust/util.hpp"

#ifndef TYPOCLUST_DATA_DIR
#define TYPOCLUST_DATA_DIR "data"
#endif

namespace typoclust::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Re-raises library errors with the stage prefixed, keeping the error class
// that decides the exit code.
template <typename Fn>
auto in_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InvalidK& e) {
    throw StageError<InvalidK>(stage, e.what());
  } catch (const EmptyVocabulary& e) {
    throw StageError<EmptyVocabulary>(stage, e.what());
  } catch (const UsageError& e) {
    throw StageError<UsageError>(stage, e.what());
  } catch (const DataError& e) {
    throw StageError<DataError>(stage, e.what());
  } catch (const InvariantViolation& e) {
    throw StageError<InvariantViolation>(stage, e.what());
  }
}

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

std::size_t positive(const json& j, const char* key) {
  if (!j.is_number_integer() || j.get<long long>() < 1) {
    throw UsageError(std::string("'") + key + "' must be a positive integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text,
                                             const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> known = {
      "name",          "selectors",  "lexical_filter",    "min_df",
      "k_values",      "restarts",   "max_iter",          "seed",
      "references",    "normalization_map", "tagged_stream_dir",
      "stopwords",     "f_weighting", "top_words"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw UsageError("config: unknown key '" + key + "'");
  }
  for (const char* key : {"name", "selectors", "lexical_filter"}) {
    if (!j.contains(key)) {
      throw UsageError(std::string("config: missing '") + key + "'");
    }
  }
  ExperimentConfig config;
  try {
    config.name = j["name"].get<std::string>();
    config.selectors = j["selectors"].get<std::vector<std::string>>();
    config.lexical_filter =
        lexical::parse_lexical_filter(j["lexical_filter"].get<std::string>());
    if (j.contains("min_df")) config.min_df = positive(j["min_df"], "min_df");
    if (j.contains("k_values")) {
      if (!j["k_values"].is_array()) throw UsageError("'k_values' must be a list");
      config.k_values.clear();
      for (const auto& k : j["k_values"]) {
        config.k_values.push_back(positive(k, "k_values"));
      }
    }
    if (j.contains("restarts")) {
      config.restarts = positive(j["restarts"], "restarts");
    }
    if (j.contains("max_iter")) {
      config.max_iter = positive(j["max_iter"], "max_iter");
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_integer() || j["seed"].get<long long>() < 0) {
        throw UsageError("'seed' must be a non-negative integer");
      }
      config.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("references")) {
      for (const auto& r : j["references"]) {
        config.references.push_back(resolve(base_dir, r.get<std::string>()));
      }
    }
    if (j.contains("normalization_map")) {
      config.normalization_map =
          resolve(base_dir, j["normalization_map"].get<std::string>());
    }
    if (j.contains("tagged_stream_dir")) {
      config.tagged_stream_dir =
          resolve(base_dir, j["tagged_stream_dir"].get<std::string>());
    }
    if (j.contains("stopwords")) {
      config.stopwords = resolve(base_dir, j["stopwords"].get<std::string>());
    }
    if (j.contains("f_weighting")) {
      config.f_weighting =
          eval::parse_f_weighting(j["f_weighting"].get<std::string>());
    }
    if (j.contains("top_words")) {
      config.top_words = positive(j["top_words"], "top_words");
    }
  } catch (const json::exception& e) {
    throw UsageError("config '" + config.name + "': " + e.what());
  }
  if (config.name.empty() ||
      config.name.find_first_of("/\\") != std::string::npos) {
    throw UsageError("config: 'name' must be non-empty and contain no slash");
  }
  if (config.selectors.empty()) throw UsageError("config: no selectors");
  if (config.k_values.empty()) throw UsageError("config: 'k_values' is empty");
  config.parsed_selectors();
  return config;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  return from_json(text, path.parent_path());
}

std::vector<ingest::ElementSelector> ExperimentConfig::parsed_selectors() const {
  std::vector<ingest::ElementSelector> out;
  for (const std::string& s : selectors) {
    out.push_back(ingest::ElementSelector::parse(s));
  }
  return out;
}

fs::path data_dir() { return fs::path(TYPOCLUST_DATA_DIR); }

fs::path default_lexicon_path() {
  if (const char* env = std::getenv("TYPOCLUST_LEXICON"); env && *env) {
    return fs::path(env);
  }
  return data_dir() / "lexicon.tsv";
}

fs::path default_stopwords_path() { return data_dir() / "stopwords.txt"; }

Resources Resources::load_default() {
  return Resources{lexical::Lexicon::load(default_lexicon_path()),
                   lexical::load_stopwords(default_stopwords_path())};
}

ExtractStage extract_tokens(std::span<const ingest::RawDocument> corpus,
                            const ExperimentConfig& config) {
  const auto selectors = config.parsed_selectors();
  ingest::ExtractionResult extraction =
      ingest::extract_experiment_texts(corpus, selectors);
  ExtractStage stage;
  stage.excluded = std::move(extraction.excluded);
  for (const ingest::ExtractedText& text : extraction.texts) {
    DocTokens doc{text.doc_id, {}};
    for (const std::string& fragment : text.fragments) {
      auto tokens = lexical::tokenize(fragment);
      std::move(tokens.begin(), tokens.end(), std::back_inserter(doc.tokens));
    }
    stage.docs.push_back(std::move(doc));
  }
  return stage;
}

std::vector<TaggedDoc> tag_documents(std::span<const DocTokens> docs,
                                     const lexical::Tagger& fallback,
                                     const std::optional<fs::path>& tagged_dir,
                                     bool use_tagger) {
  std::vector<TaggedDoc> out;
  out.reserve(docs.size());
  for (const DocTokens& doc : docs) {
    TaggedDoc tagged{doc.doc_id, {}};
    if (!use_tagger) {
      for (const std::string& t : doc.tokens) {
        tagged.tokens.push_back(
            {t, "UNK", lexical::PosCategory::kOther, ascii_lower(t)});
      }
    } else if (tagged_dir) {
      const fs::path file = *tagged_dir / (doc.doc_id + ".tsv");
      try {
        const auto stream = lexical::TreeTaggerStream::load(file);
        tagged.tokens = lexical::tag_tokens(doc.tokens, stream);
      } catch (const TaggerStreamMismatch& e) {
        throw TaggerStreamMismatch(file.string() + ": " + e.what());
      }
    } else {
      tagged.tokens = lexical::tag_tokens(doc.tokens, fallback);
    }
    out.push_back(std::move(tagged));
  }
  return out;
}

VectorizeStage vectorize(std::span<const TaggedDoc> docs,
                         const ExperimentConfig& config,
                         const std::set<std::string>& stopwords) {
  std::optional<lexical::NormalizationMap> map;
  if (config.lexical_filter == lexical::LexicalFilter::kConferenceNames) {
    map = config.normalization_map
              ? lexical::NormalizationMap::load(*config.normalization_map)
              : lexical::NormalizationMap{};
  }
  const lexical::LexicalFilterSpec spec =
      lexical::make_filter_spec(config.lexical_filter, stopwords, map);

  VectorizeStage stage;
  std::vector<vocab::DocLemmas> lemmas;
  for (const TaggedDoc& doc : docs) {
    stage.stats.extracted += doc.tokens.size();
    vocab::DocLemmas entry{doc.doc_id, {}};
    if (spec.normalization) {
      std::vector<std::string> surfaces;
      for (const auto& t : doc.tokens) surfaces.push_back(t.surface);
      std::vector<lexical::TaggedToken> normalized;
      for (std::string& t :
           lexical::normalize_conference_names(surfaces, *spec.normalization)) {
        normalized.push_back({t, "UNK", lexical::PosCategory::kOther, t});
      }
      entry.lemmas = lexical::filter_tokens(normalized, spec);
    } else {
      entry.lemmas = lexical::filter_tokens(doc.tokens, spec);
    }
    stage.stats.selected += entry.lemmas.size();
    lemmas.push_back(std::move(entry));
  }
  const vocab::Vocabulary vocabulary =
      vocab::build_vocabulary(lemmas, config.min_df);
  stage.build = vocab::build_matrix(lemmas, vocabulary);
  stage.stats.projects = stage.build.matrix.rows();
  stage.stats.vocabulary = stage.build.matrix.cols();
  return stage;
}

std::string experiment_row_label(std::string_view name, std::size_t k_index) {
  std::string suffix;
  if (k_index < 26) {
    suffix = std::string(1, static_cast<char>('a' + k_index));
  } else {
    suffix = std::to_string(k_index + 1);
  }
  return std::string(name) + "-" + suffix;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                std::span<const ingest::RawDocument> corpus,
                                const Resources& resources,
                                const std::optional<fs::path>& out_dir) {
  ExperimentResult result;
  result.name = config.name;
  const std::string prefix = config.name + ": ";

  result.extraction = in_stage(prefix + "extract", [&] {
    return extract_tokens(corpus, config);
  });

  const bool use_tagger =
      config.lexical_filter != lexical::LexicalFilter::kConferenceNames;
  const lexical::FallbackTagger fallback(resources.lexicon);
  const auto tagged = in_stage(prefix + "tag", [&] {
    return tag_documents(result.extraction.docs, fallback,
                         config.tagged_stream_dir, use_tagger);
  });

  result.vectorized = in_stage(prefix + "vectorize", [&] {
    const std::set<std::string> stopwords =
        config.stopwords ? lexical::load_stopwords(*config.stopwords)
                         : resources.stopwords;
    return vectorize(tagged, config, stopwords);
  });
  const vocab::DocTermMatrix& matrix = result.vectorized.build.matrix;

  const auto references = in_stage(prefix + "evaluate", [&] {
    std::vector<eval::ReferencePartition> refs;
    for (const fs::path& p : config.references) {
      refs.push_back(eval::ReferencePartition::load(p));
    }
    return refs;
  });
  for (const auto& ref : references) result.reference_names.push_back(ref.name);

  const std::uint64_t cluster_seed = derive_seed(config.seed, "cluster");
  for (std::size_t idx = 0; idx < config.k_values.size(); ++idx) {
    const std::size_t k = config.k_values[idx];
    ClusterRun run;
    run.k = k;
    const std::string stage = prefix + "cluster (k=" + std::to_string(k) + ")";
    in_stage(stage, [&] {
      cluster::ClusteringOptions options;
      options.k = k;
      options.restarts = config.restarts;
      options.max_iter = config.max_iter;
      options.seed = cluster_seed;
      run.partition = cluster::run_clustering(matrix, options);
      run.words = cluster::discriminative_words(matrix, run.partition.assignment,
                                                k, config.top_words);
    });
    run.evaluation = in_stage(prefix + "evaluate", [&] {
      return eval::evaluate(experiment_row_label(config.name, idx),
                            matrix.doc_ids(), run.partition.assignment, k,
                            references, config.f_weighting);
    });
    result.runs.push_back(std::move(run));
  }

  if (out_dir) {
    in_stage(prefix + "write", [&] {
      const fs::path dir = *out_dir / config.name;
      write_file(dir / "matrix.csv", matrix.to_csv());
      write_file(dir / "matrix.json",
                 vocab::sidecar_json(result.vectorized.build,
                                     result.vectorized.stats));
      std::vector<std::vector<eval::EvaluationReport>> rows;
      for (const ClusterRun& run : result.runs) {
        const std::string k = std::to_string(run.k);
        write_file(dir / ("partition_k" + k + ".csv"),
                   cluster::partition_to_csv(matrix.doc_ids(),
                                             run.partition.assignment));
        write_file(dir / ("partition_k" + k + ".json"),
                   cluster::partition_metadata_json(run.partition));
        write_file(dir / ("words_k" + k + ".csv"),
                   cluster::words_to_csv(run.words));
        rows.push_back(run.evaluation);
      }
      write_file(dir / "evaluation.json", eval::report_json(rows));
    });
  }
  return result;
}

std::string stats_csv(std::span<const ExperimentResult> results) {
  std::string out = "experiment,projects,extracted,selected,vocabulary\n";
  for (const ExperimentResult& r : results) {
    const vocab::CorpusStats& s = r.vectorized.stats;
    out += csv::join_row({r.name, std::to_string(s.projects),
                          std::to_string(s.extracted),
                          std::to_string(s.selected),
                          std::to_string(s.vocabulary)});
    out += '\n';
  }
  return out;
}

std::string stats_text(std::span<const ExperimentResult> results) {
  std::vector<std::vector<std::string>> table = {
      {"Experiment", "projects", "extracted words", "selected words",
       "vocabulary"}};
  for (const ExperimentResult& r : results) {
    const vocab::CorpusStats& s = r.vectorized.stats;
    table.push_back({r.name, std::to_string(s.projects),
                     std::to_string(s.extracted), std::to_string(s.selected),
                     std::to_string(s.vocabulary)});
  }
  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      const std::string pad(width[c] - table[r][c].size(), ' ');
      if (c > 0) line += "  ";
      line += c == 0 ? table[r][c] + pad : pad + table[r][c];
    }
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
    }
  }
  return out;
}

std::vector<ExperimentResult> run_all(std::span<const ExperimentConfig> configs,
                                      const fs::path& corpus_dir,
                                      const fs::path& out_dir,
                                      const Resources& resources) {
  const auto corpus =
      in_stage("ingest", [&] { return ingest::load_corpus(corpus_dir); });
  if (corpus.size() < 2) {
    // Clustering needs k <= documents; surface it where it bites.
    for (const ExperimentConfig& config : configs) {
      in_stage(config.name + ": cluster", [&] {
        throw InvalidK("corpus has " + std::to_string(corpus.size()) +
                       " document(s); at least 2 are required");
      });
    }
  }

  std::vector<ExperimentResult> results;
  for (const ExperimentConfig& config : configs) {
    results.push_back(run_experiment(config, corpus, resources, out_dir));
  }

  std::vector<std::string> reference_names;
  std::vector<std::vector<eval::EvaluationReport>> rows;
  for (const ExperimentResult& r : results) {
    for (const std::string& name : r.reference_names) {
      if (std::find(reference_names.begin(), reference_names.end(), name) ==
          reference_names.end()) {
        reference_names.push_back(name);
      }
    }
    for (const ClusterRun& run : r.runs) rows.push_back(run.evaluation);
  }

  write_file(out_dir / "report.csv", eval::report_csv(rows, reference_names));
  write_file(out_dir / "report.json", eval::report_json(rows));
  write_file(out_dir / "stats.csv", stats_csv(results));
  write_file(out_dir / "report.txt",
             "Size of data\n\n" + stats_text(results) +
                 "\nExternal validity\n\n" +
                 eval::report_text(rows, reference_names));
  return results;
}

SyntheticSpec SyntheticSpec::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("synthetic spec: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("synthetic spec must be an object");
  SyntheticSpec spec;
  const std::map<std::string, std::size_t*> sizes = {
      {"n_topics", &spec.n_topics},
      {"docs_per_topic", &spec.docs_per_topic},
      {"topic_vocab_size", &spec.topic_vocab_size},
      {"shared_vocab_size", &spec.shared_vocab_size},
      {"doc_length", &spec.doc_length}};
  for (const auto& [key, value] : j.items()) {
    if (const auto it = sizes.find(key); it != sizes.end()) {
      *it->second = positive(value, key.c_str());
    } else if (key == "noise_ratio") {
      if (!value.is_number()) throw UsageError("'noise_ratio' must be a number");
      spec.noise_ratio = value.get<double>();
    } else if (key == "seed") {
      if (!value.is_number_integer() || value.get<long long>() < 0) {
        throw UsageError("'seed' must be a non-negative integer");
      }
      spec.seed = value.get<std::uint64_t>();
    } else {
      throw UsageError("synthetic spec: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

void SyntheticSpec::validate() const {
  if (n_topics < 1 || docs_per_topic < 1 || topic_vocab_size < 1 ||
      shared_vocab_size < 1 || doc_length < 1) {
    throw UsageError("synthetic spec: all sizes must be positive");
  }
  if (!(noise_ratio >= 0.0 && noise_ratio <= 1.0)) {
    throw UsageError("synthetic spec: noise_ratio must lie in [0, 1]");
  }
}

namespace {

// Fixed-width base-26 code, so that concatenated codes stay distinct.
std::string letters(std::size_t value, std::size_t width) {
  std::string out(width, 'a');
  for (std::size_t i = 0; i < width; ++i) {
    out[width - 1 - i] = static_cast<char>('a' + value % 26);
    value /= 26;
  }
  return out;
}

std::size_t letter_width(std::size_t count) {
  std::size_t width = 1;
  for (std::size_t span = 26; span < count; span *= 26) ++width;
  return width;
}

std::string paragraph(std::span<const std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
    if (i % 12 == 11 || i + 1 == words.size()) out += '.';
  }
  return out;
}

}  // namespace

std::vector<SyntheticDoc> synthesize(const SyntheticSpec& spec) {
  spec.validate();
  // Pseudo-words end in "-ation" so the fallback tagger reads them as nouns.
  const std::size_t tw = letter_width(spec.n_topics);
  const std::size_t vw = letter_width(
      std::max(spec.topic_vocab_size, spec.shared_vocab_size));
  std::vector<std::vector<std::string>> topic_words(spec.n_topics);
  for (std::size_t t = 0; t < spec.n_topics; ++t) {
    for (std::size_t w = 0; w < spec.topic_vocab_size; ++w) {
      topic_words[t].push_back("top" + letters(t, tw) + "x" + letters(w, vw) +
                               "ation");
    }
  }
  std::vector<std::string> shared_words;
  for (std::size_t w = 0; w < spec.shared_vocab_size; ++w) {
    shared_words.push_back("com" + letters(w, vw) + "ation");
  }

  Rng rng(spec.seed);
  const std::size_t total = spec.n_topics * spec.docs_per_topic;
  const std::size_t id_width = std::to_string(total).size();
  std::vector<SyntheticDoc> docs;
  docs.reserve(total);
  for (std::size_t d = 0; d < total; ++d) {
    const std::size_t topic = d / spec.docs_per_topic;
    std::string number = std::to_string(d + 1);
    number.insert(0, id_width - number.size(), '0');
    SyntheticDoc doc{"doc" + number, "topic" + std::to_string(topic + 1), {}};

    std::vector<std::string> words;
    words.reserve(spec.doc_length);
    for (std::size_t i = 0; i < spec.doc_length; ++i) {
      if (rng.uniform01() < spec.noise_ratio) {
        words.push_back(shared_words[rng.uniform_index(shared_words.size())]);
      } else {
        const auto& pool = topic_words[topic];
        words.push_back(pool[rng.uniform_index(pool.size())]);
      }
    }
    const std::size_t half = (words.size() + 1) / 2;
    const std::span<const std::string> all(words);
    doc.xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
              "<raweb year=\"2003\">\n"
              "  <header><shortname>" + doc.doc_id + "</shortname></header>\n"
              "  <presentation>\n    <p>" + paragraph(all.first(half)) +
              "</p>\n  </presentation>\n"
              "  <foundation>\n    <p>" + paragraph(all.subspan(half)) +
              "</p>\n  </foundation>\n"
              "</raweb>\n";
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::string reference_csv(std::span<const SyntheticDoc> docs) {
  std::string out = "doc_id,label\n";
  for (const SyntheticDoc& doc : docs) {
    out += csv::join_row({doc.doc_id, doc.label}) + "\n";
  }
  return out;
}

std::vector<SyntheticDoc> generate_synthetic_corpus(const SyntheticSpec& spec,
                                                    const fs::path& out_dir) {
  std::vector<SyntheticDoc> docs = synthesize(spec);
  for (const SyntheticDoc& doc : docs) {
    write_file(out_dir / "corpus" / (doc.doc_id + ".xml"), doc.xml);
  }
  write_file(out_dir / "planted.csv", reference_csv(docs));
  return docs;
}

}  // namespace typoclust::pipeline
