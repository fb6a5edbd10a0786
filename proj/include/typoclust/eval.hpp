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

#ifndef TYPOCLUST_EVAL_HPP_
#define TYPOCLUST_EVAL_HPP_

// External validity: compares an emergent partition against reference
// typologies with the clustering F-measure and the corrected (adjusted) Rand
// index.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace typoclust::eval {

using Count = std::int64_t;

struct ReferencePartition {
  std::string name;
  std::map<std::string, std::string> labels;  // doc_id -> group

  // CSV "doc_id,label"; the header line is optional. The name defaults to
  // the file stem. Throws DataError on an empty or malformed file.
  static ReferencePartition load(const std::filesystem::path& path);
  static ReferencePartition parse(std::string_view csv, std::string name);
};

// Rows are reference groups, columns are clusters.
class ContingencyTable {
 public:
  ContingencyTable() = default;
  ContingencyTable(std::size_t rows, std::size_t cols,
                   std::vector<Count> cells);

  // Cross-tabulates two label vectors of equal length.
  static ContingencyTable from_labels(std::span<const std::size_t> groups,
                                      std::span<const std::size_t> clusters);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Count at(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
  const std::vector<Count>& row_sums() const { return row_sums_; }
  const std::vector<Count>& col_sums() const { return col_sums_; }
  Count total() const { return total_; }

  // Labels for display; empty when built from raw cells.
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Count> cells_;
  std::vector<Count> row_sums_;
  std::vector<Count> col_sums_;
  Count total_ = 0;
};

struct Crosstab {
  ContingencyTable table;
  std::size_t excluded = 0;  // partitioned documents without a label
};

// Counts documents per (reference group, cluster) over documents that are
// both labeled and partitioned. Groups are ordered by label, clusters by id.
// Throws NoOverlap.
Crosstab contingency_table(const ReferencePartition& reference,
                           std::span<const std::string> doc_ids,
                           std::span<const std::size_t> assignment);

enum class FWeighting {
  kCluster,  // sum_j n_.j/n * max_i F(i,j)
  kClass,    // sum_i n_i./n * max_j F(i,j)
};

// "cluster" or "class". Throws UsageError.
FWeighting parse_f_weighting(std::string_view name);

// Harmonic mean of recall n_ij/n_i. and precision n_ij/n_.j; 0 when n_ij = 0.
double pair_f(const ContingencyTable& table, std::size_t i, std::size_t j);

double f_measure(const ContingencyTable& table,
                 FWeighting weighting = FWeighting::kCluster);

// Hubert-Arabie corrected Rand index, evaluated in exact rational
// arithmetic. When the chance-corrected denominator vanishes (both
// partitions all-singletons or both a single block) the result is 1 if the
// partitions coincide up to relabeling and 0 otherwise.
double corrected_rand(const ContingencyTable& table);

struct EvaluationReport {
  std::string experiment;
  std::size_t k = 0;
  std::string reference;
  double f = 0.0;
  double rand = 0.0;
  ContingencyTable table;
  std::size_t excluded = 0;
  // Set when the row could not be computed (e.g. no overlapping documents).
  std::optional<std::string> error;
};

// One report per reference. A NoOverlap failure becomes a failed row.
std::vector<EvaluationReport> evaluate(
    std::string_view experiment, std::span<const std::string> doc_ids,
    std::span<const std::size_t> assignment, std::size_t k,
    std::span<const ReferencePartition> references,
    FWeighting weighting = FWeighting::kCluster);

// Reads "doc_id,cluster" (header optional).
struct PartitionFile {
  std::vector<std::string> doc_ids;
  std::vector<std::size_t> assignment;
  std::size_t k = 0;  // number of distinct cluster ids
};
PartitionFile parse_partition_csv(std::string_view csv);

// Table-shaped report: experiment,k,F_<ref>,Rand_<ref>,... with values
// rounded to `decimals`. Reference columns follow `reference_names`; missing
// or failed entries print as NA.
std::string report_csv(std::span<const std::vector<EvaluationReport>> rows,
                       std::span<const std::string> reference_names,
                       int decimals = 4);

// Fixed-width text version with two decimals.
std::string report_text(std::span<const std::vector<EvaluationReport>> rows,
                        std::span<const std::string> reference_names);

// Full-precision JSON including contingency tables.
std::string report_json(std::span<const std::vector<EvaluationReport>> rows);

}  // namespace typoclust::eval

#endif  // TYPOCLUST_EVAL_HPP_
