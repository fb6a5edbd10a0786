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

#ifndef TYPOCLUST_CLUSTER_HPP_
#define TYPOCLUST_CLUSTER_HPP_

// Dynamic-clusters partitioning of a document-term count table: documents go
// to the prototype whose profile is nearest in chi-squared distance, and each
// prototype is the summed count vector of its members.
//
// The criterion minimized is the within-cluster inertia
//
//   W = sum_i sum_{s in C_i} (x_s. / N) * d2(s, g_i)
//
// where d2 is the chi-squared distance between the row profile of s and the
// profile of g_i, weighted by the inverse corpus frequency of each word. With
// these masses the summed-count prototype is the minimizer of W for a fixed
// assignment, so both half-steps are non-increasing in W.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typoclust/vocab.hpp"

namespace typoclust::cluster {

using vocab::Count;
using vocab::DocTermMatrix;

struct Prototype {
  std::vector<Count> g;  // summed member counts
  Count mass = 0;        // sum of g

  static Prototype from_row(std::span<const Count> row);
};

// d2 = sum_j (x_j / x_total - g_j / mass)^2 / c_j.
// Throws DegenerateInput for a zero row total or a zero prototype mass.
double chi2_distance(std::span<const Count> row, Count row_total,
                     const Prototype& proto,
                     std::span<const double> col_marginals);

// Componentwise sums of member rows. Throws EmptyCluster naming the first
// cluster without members.
std::vector<Prototype> compute_prototypes(const DocTermMatrix& matrix,
                                          std::span<const std::size_t> assignment,
                                          std::size_t k);

// Nearest prototype per document; ties go to the lowest cluster index.
std::vector<std::size_t> assign_step(const DocTermMatrix& matrix,
                                     std::span<const Prototype> prototypes,
                                     std::span<const double> col_marginals);

double inertia(const DocTermMatrix& matrix,
               std::span<const std::size_t> assignment,
               std::span<const Prototype> prototypes,
               std::span<const double> col_marginals);

struct ClusteringOptions {
  std::size_t k = 2;
  std::size_t restarts = 10;
  std::size_t max_iter = 100;
  std::uint64_t seed = 0;
  // Run restarts on separate threads. The result does not depend on it.
  bool parallel = true;
};

struct RestartTrace {
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t repairs = 0;   // empty clusters refilled
  std::vector<double> inertia;  // W after every prototype update
};

struct Partition {
  std::vector<std::size_t> assignment;  // cluster id per matrix row
  std::size_t k = 0;
  double inertia = 0.0;
  std::uint64_t seed = 0;
  std::size_t best_restart = 0;
  std::vector<RestartTrace> restarts;
};

// Best of `restarts` runs, each seeded with seed + restart index and
// initialized from k distinct documents. Throws InvalidK.
Partition run_clustering(const DocTermMatrix& matrix,
                         const ClusteringOptions& options);

struct DiscriminativeWord {
  std::string word;
  std::size_t cluster = 0;
  std::size_t rank = 0;  // 1-based within the cluster
  double score = 0.0;
  double cluster_profile_freq = 0.0;  // g_ij / g_i.
  double corpus_freq = 0.0;           // n_.j / N
};

// Words over-represented in each cluster, ranked by their contribution
// (g_i./N) * (p_ij - c_j)^2 / c_j to the cluster x word chi-squared
// statistic. At most top_n per cluster.
std::vector<DiscriminativeWord> discriminative_words(
    const DocTermMatrix& matrix, std::span<const std::size_t> assignment,
    std::size_t k, std::size_t top_n);

// "doc_id,cluster" with header.
std::string partition_to_csv(std::span<const std::string> doc_ids,
                             std::span<const std::size_t> assignment);

// {"k":..,"seed":..,"restarts":..,"inertia":..,"iterations_per_restart":[..]}
std::string partition_metadata_json(const Partition& partition);

// "cluster,rank,word,score" with header.
std::string words_to_csv(std::span<const DiscriminativeWord> words);

}  // namespace typoclust::cluster

#endif  // TYPOCLUST_CLUSTER_HPP_
