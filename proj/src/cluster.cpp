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

#include "typoclust/cluster.hpp"

#include <algorithm>
#include <future>

#include "json.hpp"
#include "typoclust/error.hpp"
#include "typoclust/random.hpp"
#include "typoclust/util.hpp"

namespace typoclust::cluster {

Prototype Prototype::from_row(std::span<const Count> row) {
  Prototype p;
  p.g.assign(row.begin(), row.end());
  for (Count v : row) p.mass += v;
  return p;
}

double chi2_distance(std::span<const Count> row, Count row_total,
                     const Prototype& proto,
                     std::span<const double> col_marginals) {
  if (row_total <= 0) throw DegenerateInput("document with zero total");
  if (proto.mass <= 0) throw DegenerateInput("prototype with zero mass");
  if (row.size() != proto.g.size() || row.size() != col_marginals.size()) {
    throw InvariantViolation("chi2_distance: dimension mismatch");
  }
  const double row_mass = static_cast<double>(row_total);
  const double proto_mass = static_cast<double>(proto.mass);
  double d2 = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double diff = static_cast<double>(row[j]) / row_mass -
                        static_cast<double>(proto.g[j]) / proto_mass;
    d2 += diff * diff / col_marginals[j];
  }
  return d2;
}

std::vector<Prototype> compute_prototypes(
    const DocTermMatrix& matrix, std::span<const std::size_t> assignment,
    std::size_t k) {
  if (assignment.size() != matrix.rows()) {
    throw InvariantViolation("assignment does not cover every document");
  }
  std::vector<Prototype> protos(k);
  for (Prototype& p : protos) p.g.assign(matrix.cols(), 0);
  for (std::size_t s = 0; s < matrix.rows(); ++s) {
    const std::size_t i = assignment[s];
    if (i >= k) throw InvariantViolation("cluster id out of range");
    Prototype& p = protos[i];
    const auto row = matrix.row(s);
    for (std::size_t j = 0; j < row.size(); ++j) p.g[j] += row[j];
    p.mass += matrix.row_totals()[s];
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (protos[i].mass == 0) {
      throw EmptyCluster("cluster " + std::to_string(i) + " has no documents",
                         i);
    }
  }
  return protos;
}

std::vector<std::size_t> assign_step(const DocTermMatrix& matrix,
                                     std::span<const Prototype> prototypes,
                                     std::span<const double> col_marginals) {
  std::vector<std::size_t> assignment(matrix.rows(), 0);
  for (std::size_t s = 0; s < matrix.rows(); ++s) {
    double best = 0.0;
    for (std::size_t i = 0; i < prototypes.size(); ++i) {
      const double d = chi2_distance(matrix.row(s), matrix.row_totals()[s],
                                     prototypes[i], col_marginals);
      if (i == 0 || d < best) {
        best = d;
        assignment[s] = i;
      }
    }
  }
  return assignment;
}

double inertia(const DocTermMatrix& matrix,
               std::span<const std::size_t> assignment,
               std::span<const Prototype> prototypes,
               std::span<const double> col_marginals) {
  const double n = static_cast<double>(matrix.grand_total());
  double w = 0.0;
  for (std::size_t s = 0; s < matrix.rows(); ++s) {
    const double mass = static_cast<double>(matrix.row_totals()[s]) / n;
    w += mass * chi2_distance(matrix.row(s), matrix.row_totals()[s],
                              prototypes[assignment[s]], col_marginals);
  }
  return w;
}

namespace {

// Moves, for every empty cluster, the document contributing most to W (among
// clusters that can spare one) into it as a singleton.
std::size_t repair_empty_clusters(const DocTermMatrix& matrix,
                                  std::vector<std::size_t>& assignment,
                                  std::span<const Prototype> prototypes,
                                  std::span<const double> col_marginals) {
  const std::size_t k = prototypes.size();
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignment) ++sizes[a];
  if (std::find(sizes.begin(), sizes.end(), 0) == sizes.end()) return 0;

  const double n = static_cast<double>(matrix.grand_total());
  std::vector<double> contribution(matrix.rows());
  for (std::size_t s = 0; s < matrix.rows(); ++s) {
    contribution[s] =
        static_cast<double>(matrix.row_totals()[s]) / n *
        chi2_distance(matrix.row(s), matrix.row_totals()[s],
                      prototypes[assignment[s]], col_marginals);
  }
  std::size_t repairs = 0;
  for (std::size_t e = 0; e < k; ++e) {
    if (sizes[e] != 0) continue;
    std::size_t pick = matrix.rows();
    for (std::size_t s = 0; s < matrix.rows(); ++s) {
      if (sizes[assignment[s]] < 2) continue;
      if (pick == matrix.rows() || contribution[s] > contribution[pick]) {
        pick = s;
      }
    }
    if (pick == matrix.rows()) {
      throw InvariantViolation("no document available to refill cluster " +
                               std::to_string(e));
    }
    --sizes[assignment[pick]];
    assignment[pick] = e;
    sizes[e] = 1;
    contribution[pick] = 0.0;
    ++repairs;
  }
  return repairs;
}

struct RestartResult {
  RestartTrace trace;
  std::vector<std::size_t> assignment;
};

RestartResult run_restart(const DocTermMatrix& matrix,
                          std::span<const double> col_marginals,
                          std::size_t k, std::size_t max_iter,
                          std::uint64_t seed) {
  RestartResult result;
  result.trace.seed = seed;
  Rng rng(seed);
  std::vector<Prototype> protos;
  for (std::size_t s : rng.sample_without_replacement(matrix.rows(), k)) {
    protos.push_back(Prototype::from_row(matrix.row(s)));
  }

  std::vector<std::size_t>& current = result.assignment;
  RestartTrace& trace = result.trace;
  bool have_assignment = false;
  while (trace.iterations < max_iter) {
    std::vector<std::size_t> next =
        assign_step(matrix, protos, col_marginals);
    ++trace.iterations;
    trace.repairs +=
        repair_empty_clusters(matrix, next, protos, col_marginals);
    if (have_assignment && next == current) {
      trace.converged = true;
      break;
    }
    current = std::move(next);
    have_assignment = true;
    protos = compute_prototypes(matrix, current, k);
    trace.inertia.push_back(inertia(matrix, current, protos, col_marginals));
  }
  return result;
}

}  // namespace

Partition run_clustering(const DocTermMatrix& matrix,
                         const ClusteringOptions& options) {
  const std::size_t n = matrix.rows();
  if (options.k < 1 || options.k > n) {
    throw InvalidK("k = " + std::to_string(options.k) + " with " +
                   std::to_string(n) + " documents (need 1 <= k <= " +
                   std::to_string(n) + ")");
  }
  if (options.restarts < 1) throw UsageError("restarts must be positive");
  if (options.max_iter < 1) throw UsageError("max_iter must be positive");
  matrix.validate();
  const std::vector<double> c = matrix.column_marginals();

  std::vector<RestartResult> results(options.restarts);
  if (options.parallel && options.restarts > 1) {
    std::vector<std::future<RestartResult>> futures;
    futures.reserve(options.restarts);
    for (std::size_t r = 0; r < options.restarts; ++r) {
      futures.push_back(std::async(std::launch::async, [&, r] {
        return run_restart(matrix, c, options.k, options.max_iter,
                           options.seed + r);
      }));
    }
    for (std::size_t r = 0; r < options.restarts; ++r) {
      results[r] = futures[r].get();
    }
  } else {
    for (std::size_t r = 0; r < options.restarts; ++r) {
      results[r] = run_restart(matrix, c, options.k, options.max_iter,
                               options.seed + r);
    }
  }

  Partition best;
  best.k = options.k;
  best.seed = options.seed;
  for (std::size_t r = 0; r < results.size(); ++r) {
    const double w = results[r].trace.inertia.back();
    if (r == 0 || w < best.inertia) {
      best.inertia = w;
      best.best_restart = r;
      best.assignment = results[r].assignment;
    }
  }
  for (RestartResult& r : results) best.restarts.push_back(std::move(r.trace));
  return best;
}

std::vector<DiscriminativeWord> discriminative_words(
    const DocTermMatrix& matrix, std::span<const std::size_t> assignment,
    std::size_t k, std::size_t top_n) {
  const auto protos = compute_prototypes(matrix, assignment, k);
  const std::vector<double> c = matrix.column_marginals();
  const double n = static_cast<double>(matrix.grand_total());
  std::vector<DiscriminativeWord> out;
  for (std::size_t i = 0; i < k; ++i) {
    const double mass = static_cast<double>(protos[i].mass);
    std::vector<DiscriminativeWord> candidates;
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      const double p = static_cast<double>(protos[i].g[j]) / mass;
      if (!(p > c[j])) continue;
      const double diff = p - c[j];
      candidates.push_back({matrix.words()[j], i, 0,
                            mass / n * diff * diff / c[j], p, c[j]});
    }
    // Ties keep vocabulary order.
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) {
                       return a.score > b.score;
                     });
    if (candidates.size() > top_n) candidates.resize(top_n);
    for (std::size_t r = 0; r < candidates.size(); ++r) {
      candidates[r].rank = r + 1;
      out.push_back(std::move(candidates[r]));
    }
  }
  return out;
}

std::string partition_to_csv(std::span<const std::string> doc_ids,
                             std::span<const std::size_t> assignment) {
  std::string out = "doc_id,cluster\n";
  for (std::size_t s = 0; s < doc_ids.size(); ++s) {
    out += csv::escape(doc_ids[s]);
    out += ',';
    out += std::to_string(assignment[s]);
    out += '\n';
  }
  return out;
}

std::string partition_metadata_json(const Partition& partition) {
  nlohmann::ordered_json j;
  j["k"] = partition.k;
  j["seed"] = partition.seed;
  j["restarts"] = partition.restarts.size();
  j["inertia"] = partition.inertia;
  std::vector<std::size_t> iterations;
  for (const RestartTrace& t : partition.restarts) {
    iterations.push_back(t.iterations);
  }
  j["iterations_per_restart"] = iterations;
  return j.dump(2) + "\n";
}

std::string words_to_csv(std::span<const DiscriminativeWord> words) {
  std::string out = "cluster,rank,word,score\n";
  for (const DiscriminativeWord& w : words) {
    out += std::to_string(w.cluster);
    out += ',';
    out += std::to_string(w.rank);
    out += ',';
    out += csv::escape(w.word);
    out += ',';
    out += format_fixed(w.score, 6);
    out += '\n';
  }
  return out;
}

}  // namespace typoclust::cluster
