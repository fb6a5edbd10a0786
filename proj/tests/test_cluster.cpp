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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "typoclust/cluster.hpp"
#include "typoclust/error.hpp"
#include "typoclust/eval.hpp"
#include "typoclust/random.hpp"

using namespace typoclust;
using namespace typoclust::cluster;
using vocab::Count;
using vocab::DocTermMatrix;

namespace {

DocTermMatrix make(std::size_t rows, std::size_t cols,
                   std::vector<Count> cells) {
  std::vector<std::string> ids, words;
  for (std::size_t r = 0; r < rows; ++r) ids.push_back("d" + std::to_string(r));
  for (std::size_t c = 0; c < cols; ++c) words.push_back("w" + std::to_string(c));
  return DocTermMatrix(ids, words, std::move(cells));
}

// Random matrix with no empty row or column.
DocTermMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::vector<Count> cells(rows * cols, 0);
  for (auto& v : cells) {
    if (rng.uniform_index(3) == 0) v = static_cast<Count>(rng.uniform_index(6));
  }
  for (std::size_t r = 0; r < rows; ++r) {
    cells[r * cols + rng.uniform_index(cols)] += 1;
  }
  for (std::size_t c = 0; c < cols; ++c) {
    cells[rng.uniform_index(rows) * cols + c] += 1;
  }
  return make(rows, cols, std::move(cells));
}

std::vector<Count> row_vec(const DocTermMatrix& m, std::size_t r) {
  const auto row = m.row(r);
  return {row.begin(), row.end()};
}

double oracle_inertia(const DocTermMatrix& m,
                      const std::vector<std::size_t>& a, std::size_t k) {
  const auto c = m.column_marginals();
  std::vector<std::vector<Count>> g(k, std::vector<Count>(m.cols(), 0));
  for (std::size_t s = 0; s < m.rows(); ++s)
    for (std::size_t j = 0; j < m.cols(); ++j) g[a[s]][j] += m.at(s, j);
  double w = 0;
  for (std::size_t s = 0; s < m.rows(); ++s) {
    w += static_cast<double>(m.row_totals()[s]) / m.grand_total() *
         oracle::chi2(row_vec(m, s), g[a[s]], c);
  }
  return w;
}

double corrected_rand(const std::vector<std::size_t>& a,
                      const std::vector<std::size_t>& b) {
  return eval::corrected_rand(eval::ContingencyTable::from_labels(a, b));
}

// topics x per_topic docs, each topic with its own block of words.
DocTermMatrix planted(Rng& rng, std::size_t topics, std::size_t per_topic,
                      std::size_t words_per_topic,
                      std::vector<std::size_t>& truth) {
  const std::size_t rows = topics * per_topic;
  const std::size_t cols = topics * words_per_topic;
  std::vector<Count> cells(rows * cols, 0);
  truth.clear();
  for (std::size_t t = 0; t < topics; ++t)
    for (std::size_t d = 0; d < per_topic; ++d) {
      const std::size_t r = t * per_topic + d;
      truth.push_back(t);
      for (std::size_t x = 0; x < 30; ++x) {
        const std::size_t w = t * words_per_topic + rng.uniform_index(words_per_topic);
        ++cells[r * cols + w];
      }
    }
  // make sure no column is empty
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t t = c / words_per_topic;
    cells[(t * per_topic) * cols + c] += 1;
  }
  return make(rows, cols, std::move(cells));
}

}  // namespace

TEST_CASE("chi-squared distance") {
  const std::vector<double> c = {0.5, 0.5};
  const std::vector<Count> r11 = {1, 1};
  const Prototype p22{{2, 2}, 4};
  CHECK(chi2_distance(r11, 2, p22, c) == 0.0);

  const std::vector<Count> r20 = {2, 0};
  const Prototype p02{{0, 2}, 2};
  CHECK(chi2_distance(r20, 2, p02, c) == doctest::Approx(4.0).epsilon(1e-15));

  const std::vector<Count> r = {3, 1};
  CHECK(chi2_distance(r, 4, Prototype::from_row(r), c) == 0.0);

  CHECK_THROWS_AS(chi2_distance(std::vector<Count>{0, 0}, 0, p22, c),
                  DegenerateInput);
  CHECK_THROWS_AS(chi2_distance(r, 4, Prototype{{0, 0}, 0}, c), DegenerateInput);
  CHECK_THROWS_AS(chi2_distance(r, 4, Prototype{{1, 1, 1}, 3}, c),
                  InvariantViolation);
}

TEST_CASE("prototypes are summed counts") {
  const DocTermMatrix m = make(3, 3, {1, 2, 0, 0, 1, 3, 5, 0, 0});
  const std::vector<std::size_t> a = {0, 0, 1};
  const auto p = compute_prototypes(m, a, 2);
  CHECK(p[0].g == std::vector<Count>{1, 3, 3});
  CHECK(p[0].mass == 7);
  CHECK(p[1].g == std::vector<Count>{5, 0, 0});

  const std::vector<std::size_t> one = {0, 0, 0};
  CHECK(compute_prototypes(m, one, 1)[0].g == m.col_totals());

  const std::vector<std::size_t> gap = {0, 0, 2};
  try {
    compute_prototypes(m, gap, 3);
    FAIL("expected EmptyCluster");
  } catch (const EmptyCluster& e) {
    CHECK(e.cluster() == 1);
  }
}

TEST_CASE("assignment") {
  const DocTermMatrix m = make(2, 2, {3, 0, 0, 4});
  const std::vector<Prototype> p = {Prototype{{1, 0}, 1}, Prototype{{0, 1}, 1}};
  const auto c = m.column_marginals();
  CHECK(assign_step(m, p, c) == std::vector<std::size_t>{0, 1});

  // equidistant document goes to the lower index
  const DocTermMatrix tie = make(1, 2, {1, 1});
  const std::vector<Prototype> q = {Prototype{{1, 0}, 1}, Prototype{{0, 1}, 1}};
  const std::vector<double> half = {0.5, 0.5};
  CHECK(assign_step(tie, q, half) == std::vector<std::size_t>{0});
  const std::vector<Prototype> q2 = {q[1], q[0]};
  CHECK(assign_step(tie, q2, half) == std::vector<std::size_t>{0});
}

TEST_CASE("assignment matches a brute-force argmin") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const DocTermMatrix m = random_matrix(rng, 5, 3);
    const auto c = m.column_marginals();
    std::vector<Prototype> protos;
    for (std::size_t i = 0; i < 2; ++i) {
      Prototype p;
      p.g.resize(3);
      for (auto& v : p.g) v = static_cast<Count>(rng.uniform_index(5));
      p.g[rng.uniform_index(3)] += 1;
      for (auto v : p.g) p.mass += v;
      protos.push_back(p);
    }
    const auto got = assign_step(m, protos, c);
    for (std::size_t s = 0; s < m.rows(); ++s) {
      const double d0 = oracle::chi2(row_vec(m, s), protos[0].g, c);
      const double d1 = oracle::chi2(row_vec(m, s), protos[1].g, c);
      const std::size_t want = d1 < d0 ? 1 : 0;
      // allow the oracle's rounding to disagree only on near-ties
      if (std::abs(d0 - d1) > 1e-12) CHECK(got[s] == want);
      // no document can do better by switching
      const double mine = oracle::chi2(row_vec(m, s), protos[got[s]].g, c);
      CHECK(mine <= std::min(d0, d1) + 1e-12);
    }
  }
}

TEST_CASE("inertia matches the oracle") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const DocTermMatrix m = random_matrix(rng, 6, 4);
    std::vector<std::size_t> a = {0, 1, 2, 0, 1, 2};
    const auto protos = compute_prototypes(m, a, 3);
    CHECK(inertia(m, a, protos, m.column_marginals()) ==
          doctest::Approx(oracle_inertia(m, a, 3)).epsilon(1e-12));
  }
}

TEST_CASE("k extremes") {
  Rng rng(9);
  const DocTermMatrix m = random_matrix(rng, 6, 5);
  ClusteringOptions o;
  o.k = 6;
  o.restarts = 3;
  const Partition all = run_clustering(m, o);
  CHECK(all.inertia == doctest::Approx(0.0).epsilon(1e-15));
  std::vector<std::size_t> sorted = all.assignment;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});

  o.k = 1;
  const Partition one = run_clustering(m, o);
  CHECK(std::all_of(one.assignment.begin(), one.assignment.end(),
                    [](std::size_t a) { return a == 0; }));
  CHECK(compute_prototypes(m, one.assignment, 1)[0].g == m.col_totals());

  o.k = 0;
  CHECK_THROWS_AS(run_clustering(m, o), InvalidK);
  o.k = 7;
  CHECK_THROWS_AS(run_clustering(m, o), InvalidK);
}

TEST_CASE("planted two-topic corpus is recovered for every seed") {
  Rng rng(10);
  std::vector<std::size_t> truth;
  const DocTermMatrix m = planted(rng, 2, 10, 10, truth);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ClusteringOptions o;
    o.k = 2;
    o.seed = seed;
    const Partition p = run_clustering(m, o);
    CHECK(corrected_rand(truth, p.assignment) == 1.0);
  }
  // the planted partition is a fixed point
  const auto protos = compute_prototypes(m, truth, 2);
  CHECK(assign_step(m, protos, m.column_marginals()) == truth);
}

TEST_CASE("trace and determinism") {
  Rng rng(12);
  const DocTermMatrix m = random_matrix(rng, 30, 12);
  ClusteringOptions o;
  o.k = 4;
  o.seed = 99;
  const Partition a = run_clustering(m, o);
  o.parallel = false;
  const Partition b = run_clustering(m, o);
  CHECK(a.assignment == b.assignment);
  CHECK(a.inertia == b.inertia);
  CHECK(a.best_restart == b.best_restart);
  REQUIRE(a.restarts.size() == 10);
  for (std::size_t r = 0; r < a.restarts.size(); ++r) {
    const RestartTrace& t = a.restarts[r];
    CHECK(t.seed == 99 + r);
    CHECK(t.converged);
    for (std::size_t i = 1; i < t.inertia.size(); ++i) {
      CHECK(t.inertia[i] <= t.inertia[i - 1] + 1e-12);
    }
    CHECK(a.inertia <= t.inertia.back());
  }
  CHECK(a.inertia == a.restarts[a.best_restart].inertia.back());

  const auto meta = nlohmann::json::parse(partition_metadata_json(a));
  CHECK(meta["k"] == 4);
  CHECK(meta["seed"] == 99);
  CHECK(meta["restarts"] == 10);
  CHECK(meta["iterations_per_restart"].size() == 10);
}

TEST_CASE("small instances against exhaustive enumeration") {
  Rng rng(13);
  int optimal = 0, total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng.uniform_index(5);
    const std::size_t k = 2 + rng.uniform_index(2);
    const DocTermMatrix m = random_matrix(rng, n, 4);
    double best = std::numeric_limits<double>::infinity();
    oracle::for_each_set_partition(n, k, [&](const std::vector<std::size_t>& a) {
      best = std::min(best, oracle_inertia(m, a, k));
    });
    ClusteringOptions o;
    o.k = k;
    o.restarts = 50;
    o.seed = static_cast<std::uint64_t>(trial);
    const Partition p = run_clustering(m, o);
    CHECK(p.inertia >= best - 1e-9);
    CHECK(p.inertia <= best + 1e-9);
    CHECK(p.inertia == doctest::Approx(oracle_inertia(m, p.assignment, k)).epsilon(1e-12));
    // the result is a fixed point of assign/update
    const auto protos = compute_prototypes(m, p.assignment, k);
    CHECK(assign_step(m, protos, m.column_marginals()) == p.assignment);
    ++total;
    if (p.inertia <= best + 1e-9) ++optimal;
  }
  MESSAGE("global optimum reached on " << optimal << "/" << total);

  // separable instances: the optimum is found
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::size_t> truth;
    const DocTermMatrix m = planted(rng, 2, 4, 3, truth);
    double best = std::numeric_limits<double>::infinity();
    oracle::for_each_set_partition(8, 2, [&](const std::vector<std::size_t>& a) {
      best = std::min(best, oracle_inertia(m, a, 2));
    });
    ClusteringOptions o;
    o.k = 2;
    o.restarts = 50;
    o.seed = static_cast<std::uint64_t>(trial);
    const Partition p = run_clustering(m, o);
    CHECK(p.inertia == doctest::Approx(best).epsilon(1e-9));
    CHECK(corrected_rand(truth, p.assignment) == 1.0);
  }
}

TEST_CASE("discriminative words") {
  const DocTermMatrix m = make(4, 2, {4, 0, 4, 0, 0, 4, 0, 4});
  const std::vector<std::size_t> a = {0, 0, 1, 1};
  const auto words = discriminative_words(m, a, 2, 5);
  REQUIRE(words.size() == 2);
  CHECK(words[0].cluster == 0);
  CHECK(words[0].word == "w0");
  CHECK(words[0].rank == 1);
  CHECK(words[0].score == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(words[1].cluster == 1);
  CHECK(words[1].word == "w1");

  // a word spread evenly over clusters scores zero and is left out
  const DocTermMatrix u = make(4, 3, {4, 0, 1, 4, 0, 1, 0, 4, 1, 0, 4, 1});
  const auto uw = discriminative_words(u, a, 2, 5);
  for (const auto& w : uw) CHECK(w.word != "w2");
  CHECK(uw.size() == 2);

  const std::string csv = words_to_csv(words);
  CHECK(csv.rfind("cluster,rank,word,score\n0,1,w0,0.250000\n", 0) == 0);
}

TEST_CASE("partition csv") {
  const std::vector<std::string> ids = {"a", "b"};
  const std::vector<std::size_t> a = {1, 0};
  CHECK(partition_to_csv(ids, a) == "doc_id,cluster\na,1\nb,0\n");
}
