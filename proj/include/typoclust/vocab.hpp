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

#ifndef TYPOCLUST_VOCAB_HPP_
#define TYPOCLUST_VOCAB_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace typoclust::vocab {

using Count = std::int64_t;

struct DocLemmas {
  std::string doc_id;
  std::vector<std::string> lemmas;
};

struct Vocabulary {
  std::vector<std::string> words;  // sorted, distinct
  std::vector<std::size_t> df;     // documents containing words[j]

  std::size_t size() const { return words.size(); }
  // Index of a word, or npos.
  std::size_t index_of(std::string_view word) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Keeps lemmas present in at least min_df distinct documents, ordered
// lexicographically. Throws UsageError for min_df < 1 and EmptyVocabulary
// when nothing survives.
Vocabulary build_vocabulary(std::span<const DocLemmas> docs,
                            std::size_t min_df);

// Table-1 style size counters for one experiment.
struct CorpusStats {
  std::size_t projects = 0;    // documents in the matrix
  std::size_t extracted = 0;   // tokens before lexical filtering
  std::size_t selected = 0;    // lemmas after filtering, before pruning
  std::size_t vocabulary = 0;  // columns of the matrix
};

// Dense document x word count table with its margins.
class DocTermMatrix {
 public:
  DocTermMatrix() = default;
  // Computes the margins; throws InvariantViolation when counts has the
  // wrong size or a negative entry.
  DocTermMatrix(std::vector<std::string> doc_ids,
                std::vector<std::string> words, std::vector<Count> counts);

  std::size_t rows() const { return doc_ids_.size(); }
  std::size_t cols() const { return words_.size(); }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  const std::vector<std::string>& words() const { return words_; }

  Count at(std::size_t row, std::size_t col) const {
    return counts_[row * words_.size() + col];
  }
  std::span<const Count> row(std::size_t r) const {
    return {counts_.data() + r * words_.size(), words_.size()};
  }
  const std::vector<Count>& row_totals() const { return row_totals_; }
  const std::vector<Count>& col_totals() const { return col_totals_; }
  Count grand_total() const { return grand_total_; }

  // Corpus word frequencies n_.j / N.
  std::vector<double> column_marginals() const;

  // Checks margins against the cells and that no row or column is empty.
  // Throws InvariantViolation.
  void validate() const;

  // Header "doc_id,<word1>,...", one row of integer counts per document.
  std::string to_csv() const;
  // Throws DataError on malformed input.
  static DocTermMatrix from_csv(std::string_view text);

 private:
  std::vector<std::string> doc_ids_;
  std::vector<std::string> words_;
  std::vector<Count> counts_;
  std::vector<Count> row_totals_;
  std::vector<Count> col_totals_;
  Count grand_total_ = 0;
};

struct MatrixBuild {
  DocTermMatrix matrix;
  std::vector<std::string> excluded_docs;   // rows that came out empty
  std::vector<std::string> excluded_words;  // columns that came out empty
};

// Counts vocabulary words per document; drops empty rows, then empty
// columns, and reports both.
MatrixBuild build_matrix(std::span<const DocLemmas> docs,
                         const Vocabulary& vocab);

// Sidecar {"excluded_docs":[...],"stats":{...}}.
std::string sidecar_json(const MatrixBuild& build, const CorpusStats& stats);

}  // namespace typoclust::vocab

#endif  // TYPOCLUST_VOCAB_HPP_
