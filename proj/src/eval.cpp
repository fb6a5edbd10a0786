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

#include "typoclust/eval.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "json.hpp"
#include "typoclust/error.hpp"
#include "typoclust/util.hpp"

namespace typoclust::eval {

namespace mp = boost::multiprecision;

ReferencePartition ReferencePartition::parse(std::string_view csv_text,
                                             std::string name) {
  ReferencePartition ref{std::move(name), {}};
  const auto records = csv::parse(csv_text);
  std::size_t first = 0;
  if (!records.empty() && records[0].size() == 2 &&
      records[0][0] == "doc_id" && records[0][1] == "label") {
    first = 1;
  }
  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != 2 || rec[0].empty()) {
      throw DataError("reference " + ref.name + " line " +
                      std::to_string(r + 1) + ": expected doc_id,label");
    }
    const auto [it, inserted] = ref.labels.emplace(rec[0], rec[1]);
    if (!inserted) {
      throw DataError("reference " + ref.name + ": duplicate doc_id '" +
                      rec[0] + "'");
    }
  }
  if (ref.labels.empty()) {
    throw DataError("reference " + ref.name + " has no labels");
  }
  return ref;
}

ReferencePartition ReferencePartition::load(
    const std::filesystem::path& path) {
  return parse(read_file(path), path.stem().string());
}

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols,
                                   std::vector<Count> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
  if (cells_.size() != rows_ * cols_) {
    throw InvariantViolation("contingency table size mismatch");
  }
  row_sums_.assign(rows_, 0);
  col_sums_.assign(cols_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const Count v = at(i, j);
      if (v < 0) throw InvariantViolation("negative contingency cell");
      row_sums_[i] += v;
      col_sums_[j] += v;
      total_ += v;
    }
  }
}

ContingencyTable ContingencyTable::from_labels(
    std::span<const std::size_t> groups, std::span<const std::size_t> clusters) {
  if (groups.size() != clusters.size()) {
    throw InvariantViolation("label vectors differ in length");
  }
  std::size_t r = 0;
  std::size_t k = 0;
  for (std::size_t g : groups) r = std::max(r, g + 1);
  for (std::size_t c : clusters) k = std::max(k, c + 1);
  std::vector<Count> cells(r * k, 0);
  for (std::size_t s = 0; s < groups.size(); ++s) {
    ++cells[groups[s] * k + clusters[s]];
  }
  return ContingencyTable(r, k, std::move(cells));
}

Crosstab contingency_table(const ReferencePartition& reference,
                           std::span<const std::string> doc_ids,
                           std::span<const std::size_t> assignment) {
  if (doc_ids.size() != assignment.size()) {
    throw InvariantViolation("doc_ids and assignment differ in length");
  }
  std::set<std::string> groups;
  std::set<std::size_t> clusters;
  std::size_t excluded = 0;
  for (std::size_t s = 0; s < doc_ids.size(); ++s) {
    const auto it = reference.labels.find(doc_ids[s]);
    if (it == reference.labels.end()) {
      ++excluded;
      continue;
    }
    groups.insert(it->second);
    clusters.insert(assignment[s]);
  }
  if (groups.empty()) {
    throw NoOverlap("reference " + reference.name +
                    " labels none of the partitioned documents");
  }
  const std::vector<std::string> group_list(groups.begin(), groups.end());
  const std::vector<std::size_t> cluster_list(clusters.begin(), clusters.end());
  std::vector<Count> cells(group_list.size() * cluster_list.size(), 0);
  for (std::size_t s = 0; s < doc_ids.size(); ++s) {
    const auto it = reference.labels.find(doc_ids[s]);
    if (it == reference.labels.end()) continue;
    const auto i = static_cast<std::size_t>(
        std::lower_bound(group_list.begin(), group_list.end(), it->second) -
        group_list.begin());
    const auto j = static_cast<std::size_t>(
        std::lower_bound(cluster_list.begin(), cluster_list.end(),
                         assignment[s]) -
        cluster_list.begin());
    ++cells[i * cluster_list.size() + j];
  }
  Crosstab result{ContingencyTable(group_list.size(), cluster_list.size(),
                                   std::move(cells)),
                  excluded};
  result.table.row_labels = group_list;
  for (std::size_t c : cluster_list) {
    result.table.col_labels.push_back(std::to_string(c));
  }
  return result;
}

FWeighting parse_f_weighting(std::string_view name) {
  if (name == "cluster") return FWeighting::kCluster;
  if (name == "class") return FWeighting::kClass;
  throw UsageError("f_weighting must be 'cluster' or 'class'");
}

double pair_f(const ContingencyTable& table, std::size_t i, std::size_t j) {
  const Count nij = table.at(i, j);
  if (nij == 0) return 0.0;
  const double recall =
      static_cast<double>(nij) / static_cast<double>(table.row_sums()[i]);
  const double precision =
      static_cast<double>(nij) / static_cast<double>(table.col_sums()[j]);
  return 2.0 * recall * precision / (recall + precision);
}

double f_measure(const ContingencyTable& table, FWeighting weighting) {
  if (table.total() <= 0) throw DegenerateInput("empty contingency table");
  const double n = static_cast<double>(table.total());
  double f = 0.0;
  if (weighting == FWeighting::kCluster) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (table.col_sums()[j] == 0) continue;
      double best = 0.0;
      for (std::size_t i = 0; i < table.rows(); ++i) {
        best = std::max(best, pair_f(table, i, j));
      }
      f += static_cast<double>(table.col_sums()[j]) * best;
    }
  } else {
    for (std::size_t i = 0; i < table.rows(); ++i) {
      if (table.row_sums()[i] == 0) continue;
      double best = 0.0;
      for (std::size_t j = 0; j < table.cols(); ++j) {
        best = std::max(best, pair_f(table, i, j));
      }
      f += static_cast<double>(table.row_sums()[i]) * best;
    }
  }
  // Dividing once keeps identical partitions at exactly 1.
  return f / n;
}

namespace {

mp::cpp_int choose2(Count m) {
  mp::cpp_int v = m;
  return v * (v - 1) / 2;
}

// Every non-empty row and column holds exactly one non-zero cell.
bool same_partition(const ContingencyTable& table) {
  for (std::size_t i = 0; i < table.rows(); ++i) {
    std::size_t nonzero = 0;
    for (std::size_t j = 0; j < table.cols(); ++j) nonzero += table.at(i, j) != 0;
    if (nonzero > 1) return false;
  }
  for (std::size_t j = 0; j < table.cols(); ++j) {
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < table.rows(); ++i) nonzero += table.at(i, j) != 0;
    if (nonzero > 1) return false;
  }
  return true;
}

}  // namespace

double corrected_rand(const ContingencyTable& table) {
  mp::cpp_int pairs_both = 0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      pairs_both += choose2(table.at(i, j));
    }
  }
  mp::cpp_int pairs_rows = 0;
  for (Count v : table.row_sums()) pairs_rows += choose2(v);
  mp::cpp_int pairs_cols = 0;
  for (Count v : table.col_sums()) pairs_cols += choose2(v);
  const mp::cpp_int pairs_all = choose2(table.total());

  // Both sides of the index multiplied by 2 * C(n,2) to stay in integers.
  const mp::cpp_int product = pairs_rows * pairs_cols;
  const mp::cpp_int numerator = 2 * (pairs_both * pairs_all - product);
  const mp::cpp_int denominator =
      (pairs_rows + pairs_cols) * pairs_all - 2 * product;
  if (denominator == 0) return same_partition(table) ? 1.0 : 0.0;
  const mp::cpp_rational ratio(numerator, denominator);
  return ratio.convert_to<double>();
}

std::vector<EvaluationReport> evaluate(
    std::string_view experiment, std::span<const std::string> doc_ids,
    std::span<const std::size_t> assignment, std::size_t k,
    std::span<const ReferencePartition> references, FWeighting weighting) {
  std::vector<EvaluationReport> reports;
  for (const ReferencePartition& ref : references) {
    EvaluationReport report;
    report.experiment = std::string(experiment);
    report.k = k;
    report.reference = ref.name;
    try {
      Crosstab crosstab = contingency_table(ref, doc_ids, assignment);
      report.f = f_measure(crosstab.table, weighting);
      report.rand = corrected_rand(crosstab.table);
      report.table = std::move(crosstab.table);
      report.excluded = crosstab.excluded;
    } catch (const NoOverlap& e) {
      report.error = e.what();
      report.excluded = doc_ids.size();
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

PartitionFile parse_partition_csv(std::string_view csv_text) {
  PartitionFile file;
  const auto records = csv::parse(csv_text);
  std::size_t first = 0;
  if (!records.empty() && records[0].size() == 2 &&
      records[0][0] == "doc_id" && records[0][1] == "cluster") {
    first = 1;
  }
  std::set<std::size_t> ids;
  for (std::size_t r = first; r < records.size(); ++r) {
    const auto& rec = records[r];
    std::size_t cluster = 0;
    const std::string& f = rec.size() == 2 ? rec[1] : std::string();
    const auto [ptr, ec] =
        std::from_chars(f.data(), f.data() + f.size(), cluster);
    if (rec.size() != 2 || rec[0].empty() || f.empty() || ec != std::errc() ||
        ptr != f.data() + f.size()) {
      throw DataError("partition line " + std::to_string(r + 1) +
                      ": expected doc_id,cluster");
    }
    file.doc_ids.push_back(rec[0]);
    file.assignment.push_back(cluster);
    ids.insert(cluster);
  }
  if (file.doc_ids.empty()) throw DataError("partition file is empty");
  file.k = ids.size();
  return file;
}

namespace {

const EvaluationReport* find_report(const std::vector<EvaluationReport>& row,
                                    const std::string& reference) {
  for (const EvaluationReport& r : row) {
    if (r.reference == reference) return &r;
  }
  return nullptr;
}

}  // namespace

std::string report_csv(std::span<const std::vector<EvaluationReport>> rows,
                       std::span<const std::string> reference_names,
                       int decimals) {
  std::vector<std::string> header = {"experiment", "k"};
  for (const std::string& name : reference_names) {
    header.push_back("F_" + name);
    header.push_back("Rand_" + name);
  }
  std::string out = csv::join_row(header) + "\n";
  for (const auto& row : rows) {
    if (row.empty()) continue;
    std::vector<std::string> fields = {row.front().experiment,
                                       std::to_string(row.front().k)};
    for (const std::string& name : reference_names) {
      const EvaluationReport* r = find_report(row, name);
      if (r == nullptr || r->error) {
        fields.insert(fields.end(), {"NA", "NA"});
      } else {
        fields.push_back(format_fixed(r->f, decimals));
        fields.push_back(format_fixed(r->rand, decimals));
      }
    }
    out += csv::join_row(fields) + "\n";
  }
  return out;
}

std::string report_text(std::span<const std::vector<EvaluationReport>> rows,
                        std::span<const std::string> reference_names) {
  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header = {"Exp.", "Nb. of clusters"};
  for (const std::string& name : reference_names) {
    header.push_back("F " + name);
    header.push_back("Rand " + name);
  }
  table.push_back(header);
  for (const auto& row : rows) {
    if (row.empty()) continue;
    std::vector<std::string> cells = {row.front().experiment,
                                      std::to_string(row.front().k)};
    for (const std::string& name : reference_names) {
      const EvaluationReport* r = find_report(row, name);
      if (r == nullptr || r->error) {
        cells.insert(cells.end(), {"NA", "NA"});
      } else {
        cells.push_back(format_fixed(r->f, 2));
        cells.push_back(format_fixed(r->rand, 2));
      }
    }
    table.push_back(cells);
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& cells : table) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      width[c] = std::max(width[c], cells[c].size());
    }
  }
  std::string out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < table[r].size(); ++c) {
      const std::string& cell = table[r][c];
      const std::string pad(width[c] - cell.size(), ' ');
      if (c > 0) line += "  ";
      // Left-align the experiment name, right-align numbers.
      line += c == 0 ? cell + pad : pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
    }
  }
  return out;
}

std::string report_json(std::span<const std::vector<EvaluationReport>> rows) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    if (row.empty()) continue;
    nlohmann::ordered_json entry;
    entry["experiment"] = row.front().experiment;
    entry["k"] = row.front().k;
    nlohmann::ordered_json refs = nlohmann::ordered_json::array();
    for (const EvaluationReport& r : row) {
      nlohmann::ordered_json item;
      item["reference"] = r.reference;
      if (r.error) {
        item["error"] = *r.error;
      } else {
        item["F"] = r.f;
        item["Rand"] = r.rand;
        nlohmann::ordered_json cells = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < r.table.rows(); ++i) {
          std::vector<Count> line;
          for (std::size_t j = 0; j < r.table.cols(); ++j) {
            line.push_back(r.table.at(i, j));
          }
          cells.push_back(line);
        }
        item["contingency"] = {{"groups", r.table.row_labels},
                               {"clusters", r.table.col_labels},
                               {"cells", cells}};
      }
      item["excluded_docs"] = r.excluded;
      refs.push_back(item);
    }
    entry["references"] = refs;
    out.push_back(entry);
  }
  return out.dump(2) + "\n";
}

}  // namespace typoclust::eval
