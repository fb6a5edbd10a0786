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

#include "typoclust/vocab.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "json.hpp"
#include "typoclust/error.hpp"
#include "typoclust/util.hpp"

namespace typoclust::vocab {

std::size_t Vocabulary::index_of(std::string_view word) const {
  const auto it = std::lower_bound(words.begin(), words.end(), word);
  if (it == words.end() || *it != word) return npos;
  return static_cast<std::size_t>(it - words.begin());
}

Vocabulary build_vocabulary(std::span<const DocLemmas> docs,
                            std::size_t min_df) {
  if (min_df < 1) throw UsageError("min_df must be at least 1");
  std::map<std::string, std::size_t> df;
  for (const DocLemmas& doc : docs) {
    const std::set<std::string> distinct(doc.lemmas.begin(), doc.lemmas.end());
    for (const std::string& lemma : distinct) ++df[lemma];
  }
  Vocabulary vocab;
  for (const auto& [word, count] : df) {
    if (count >= min_df) {
      vocab.words.push_back(word);
      vocab.df.push_back(count);
    }
  }
  if (vocab.words.empty()) {
    throw EmptyVocabulary("no word is used by at least " +
                          std::to_string(min_df) + " documents");
  }
  return vocab;
}

DocTermMatrix::DocTermMatrix(std::vector<std::string> doc_ids,
                             std::vector<std::string> words,
                             std::vector<Count> counts)
    : doc_ids_(std::move(doc_ids)),
      words_(std::move(words)),
      counts_(std::move(counts)) {
  if (counts_.size() != doc_ids_.size() * words_.size()) {
    throw InvariantViolation("count table does not match its dimensions");
  }
  row_totals_.assign(doc_ids_.size(), 0);
  col_totals_.assign(words_.size(), 0);
  for (std::size_t r = 0; r < doc_ids_.size(); ++r) {
    for (std::size_t c = 0; c < words_.size(); ++c) {
      const Count v = counts_[r * words_.size() + c];
      if (v < 0) throw InvariantViolation("negative count");
      row_totals_[r] += v;
      col_totals_[c] += v;
      grand_total_ += v;
    }
  }
}

std::vector<double> DocTermMatrix::column_marginals() const {
  std::vector<double> c(cols());
  for (std::size_t j = 0; j < cols(); ++j) {
    c[j] = static_cast<double>(col_totals_[j]) /
           static_cast<double>(grand_total_);
  }
  return c;
}

void DocTermMatrix::validate() const {
  Count sum_rows = 0;
  Count sum_cols = 0;
  for (std::size_t r = 0; r < rows(); ++r) {
    Count s = 0;
    for (Count v : row(r)) s += v;
    if (s != row_totals_[r]) throw InvariantViolation("row total mismatch");
    if (s <= 0) {
      throw InvariantViolation("empty row for document " + doc_ids_[r]);
    }
    sum_rows += s;
  }
  for (std::size_t c = 0; c < cols(); ++c) {
    Count s = 0;
    for (std::size_t r = 0; r < rows(); ++r) s += at(r, c);
    if (s != col_totals_[c]) throw InvariantViolation("column total mismatch");
    if (s <= 0) throw InvariantViolation("empty column for word " + words_[c]);
    sum_cols += s;
  }
  if (sum_rows != grand_total_ || sum_cols != grand_total_) {
    throw InvariantViolation("grand total mismatch");
  }
}

std::string DocTermMatrix::to_csv() const {
  std::string out = "doc_id";
  for (const std::string& w : words_) {
    out += ',';
    out += csv::escape(w);
  }
  out += '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    out += csv::escape(doc_ids_[r]);
    for (Count v : row(r)) {
      out += ',';
      out += std::to_string(v);
    }
    out += '\n';
  }
  return out;
}

DocTermMatrix DocTermMatrix::from_csv(std::string_view text) {
  const auto records = csv::parse(text);
  if (records.empty() || records.front().empty() ||
      records.front().front() != "doc_id") {
    throw DataError("matrix CSV must start with a 'doc_id,...' header");
  }
  std::vector<std::string> words(records.front().begin() + 1,
                                 records.front().end());
  std::vector<std::string> doc_ids;
  std::vector<Count> counts;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != words.size() + 1) {
      throw DataError("matrix CSV row " + std::to_string(r + 1) + " has " +
                      std::to_string(rec.size()) + " fields, expected " +
                      std::to_string(words.size() + 1));
    }
    doc_ids.push_back(rec[0]);
    for (std::size_t c = 1; c < rec.size(); ++c) {
      Count v = 0;
      const std::string& f = rec[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size() || v < 0) {
        throw DataError("matrix CSV row " + std::to_string(r + 1) +
                        ": bad count '" + f + "'");
      }
      counts.push_back(v);
    }
  }
  return DocTermMatrix(std::move(doc_ids), std::move(words),
                       std::move(counts));
}

MatrixBuild build_matrix(std::span<const DocLemmas> docs,
                         const Vocabulary& vocab) {
  if (vocab.words.empty()) throw EmptyVocabulary("empty vocabulary");
  const std::size_t p = vocab.size();
  MatrixBuild build;
  std::vector<std::string> doc_ids;
  std::vector<Count> counts;
  std::vector<Count> col_totals(p, 0);
  for (const DocLemmas& doc : docs) {
    std::vector<Count> row(p, 0);
    Count total = 0;
    for (const std::string& lemma : doc.lemmas) {
      const std::size_t j = vocab.index_of(lemma);
      if (j == Vocabulary::npos) continue;
      ++row[j];
      ++total;
    }
    if (total == 0) {
      build.excluded_docs.push_back(doc.doc_id);
      continue;
    }
    for (std::size_t j = 0; j < p; ++j) col_totals[j] += row[j];
    doc_ids.push_back(doc.doc_id);
    counts.insert(counts.end(), row.begin(), row.end());
  }

  std::vector<std::size_t> kept;
  std::vector<std::string> words;
  for (std::size_t j = 0; j < p; ++j) {
    if (col_totals[j] > 0) {
      kept.push_back(j);
      words.push_back(vocab.words[j]);
    } else {
      build.excluded_words.push_back(vocab.words[j]);
    }
  }
  if (kept.size() != p) {
    std::vector<Count> compact;
    compact.reserve(doc_ids.size() * kept.size());
    for (std::size_t r = 0; r < doc_ids.size(); ++r) {
      for (std::size_t j : kept) compact.push_back(counts[r * p + j]);
    }
    counts = std::move(compact);
  }
  build.matrix = DocTermMatrix(std::move(doc_ids), std::move(words),
                               std::move(counts));
  return build;
}

std::string sidecar_json(const MatrixBuild& build, const CorpusStats& stats) {
  nlohmann::ordered_json j;
  j["excluded_docs"] = build.excluded_docs;
  j["excluded_words"] = build.excluded_words;
  j["stats"] = {{"projects", stats.projects},
                {"extracted", stats.extracted},
                {"selected", stats.selected},
                {"vocabulary", stats.vocabulary}};
  return j.dump(2) + "\n";
}

}  // namespace typoclust::vocab
