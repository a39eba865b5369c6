// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/ranking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <thread>

#include "lesioneval/rng.hpp"
#include "lesioneval/stats.hpp"

namespace lesioneval {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

int subset_index(const SubsetKey& key) {
  if (key.tracer == Tracer::FDG) return key.center == Center::UKT ? 0 : 2;
  return key.center == Center::LMU ? 1 : 3;
}

SubsetKey subset_from_index(int index) {
  switch (index) {
    case 0: return {Tracer::FDG, Center::UKT};
    case 1: return {Tracer::PSMA, Center::LMU};
    case 2: return {Tracer::FDG, Center::LMU};
    case 3: return {Tracer::PSMA, Center::UKT};
  }
  fail(ErrKind::InvalidArgument, "subset index out of range");
}

std::string to_string(const SubsetKey& key) {
  std::string s = key.tracer == Tracer::FDG ? "FDG" : "PSMA";
  s += key.center == Center::UKT ? "_UKT" : "_LMU";
  return s;
}

SubsetKey subset_from_string(const std::string& text) {
  if (text == "FDG_UKT") return {Tracer::FDG, Center::UKT};
  if (text == "PSMA_LMU") return {Tracer::PSMA, Center::LMU};
  if (text == "FDG_LMU") return {Tracer::FDG, Center::LMU};
  if (text == "PSMA_UKT") return {Tracer::PSMA, Center::UKT};
  fail(ErrKind::SchemaViolation, "unknown subset '" + text + "'");
}

const char* to_string(Metric m) {
  switch (m) {
    case Metric::dsc: return "dsc";
    case Metric::fpv: return "fpv";
    case Metric::fnv: return "fnv";
  }
  return "?";
}

bool higher_is_better(Metric m) { return m == Metric::dsc; }

void RankWeights::validate() const {
  if (!(w_dsc > 0.0) || !(w_fpv > 0.0) || !(w_fnv > 0.0))
    fail(ErrKind::InvalidArgument, "rank weights must be positive");
  if (std::fabs(w_dsc + w_fpv + w_fnv - 1.0) > 1e-9)
    fail(ErrKind::InvalidArgument, "rank weights must sum to 1");
}

double RankWeights::weight(Metric m) const {
  switch (m) {
    case Metric::dsc: return w_dsc;
    case Metric::fpv: return w_fpv;
    case Metric::fnv: return w_fnv;
  }
  return 0.0;
}

RankMethod rank_method_from_string(const std::string& s) {
  if (s == "R1") return RankMethod::R1;
  if (s == "R2") return RankMethod::R2;
  if (s == "R3") return RankMethod::R3;
  if (s == "R4") return RankMethod::R4;
  if (s == "R5") return RankMethod::R5;
  fail(ErrKind::InvalidArgument, "unknown ranking method '" + s + "'");
}

const char* to_string(RankMethod m) {
  switch (m) {
    case RankMethod::R1: return "R1";
    case RankMethod::R2: return "R2";
    case RankMethod::R3: return "R3";
    case RankMethod::R4: return "R4";
    case RankMethod::R5: return "R5";
  }
  return "?";
}

const RankRow& RankTable::row(const std::string& algorithm) const {
  for (const auto& r : rows)
    if (r.algorithm == algorithm) return r;
  fail(ErrKind::InvalidArgument, "no such algorithm in rank table: " + algorithm);
}

namespace {

double metric_value(const MetricTriplet& t, Metric m) {
  switch (m) {
    case Metric::dsc: return t.dsc ? *t.dsc : kNaN;
    case Metric::fpv: return t.fpv_ml;
    case Metric::fnv: return t.fnv_ml ? *t.fnv_ml : kNaN;
  }
  return kNaN;
}

bool metric_present(const MetricTriplet& t, Metric m) {
  switch (m) {
    case Metric::dsc: return t.dsc.has_value();
    case Metric::fpv: return true;
    case Metric::fnv: return t.fnv_ml.has_value();
  }
  return false;
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

AlgorithmSummary aggregate_subsets(const AlgorithmCases& algorithm, bool use_median) {
  AlgorithmSummary out;
  out.name = algorithm.name;
  out.team = algorithm.team.empty() ? algorithm.name : algorithm.team;
  out.reference = algorithm.reference;

  for (int s = 0; s < kNumSubsets; ++s) {
    std::array<std::vector<double>, kNumMetrics> values;
    for (const auto& rec : algorithm.cases) {
      if (rec.subset != s) continue;
      for (Metric m : kMetrics)
        if (metric_present(rec.metrics, m))
          values[static_cast<int>(m)].push_back(metric_value(rec.metrics, m));
    }
    if (values[static_cast<int>(Metric::fpv)].empty())
      fail(ErrKind::EmptySubset, "no cases in subset " + to_string(subset_from_index(s)));
    if (values[static_cast<int>(Metric::dsc)].empty())
      fail(ErrKind::EmptySubset,
           "no lesion-positive cases in subset " + to_string(subset_from_index(s)));
    for (Metric m : kMetrics) {
      const auto& v = values[static_cast<int>(m)];
      double agg = use_median ? median_of(v)
                              : std::accumulate(v.begin(), v.end(), 0.0) /
                                    static_cast<double>(v.size());
      out.value[static_cast<int>(m)][s] = agg;
    }
  }
  return out;
}

void require_at_least_two(std::size_t n) {
  if (n < 2) fail(ErrKind::InsufficientAlgorithms, "ranking needs at least 2 algorithms");
}

/// Shared tail of every scheme: given per-(metric, subset) rank statistics,
/// average over subsets, combine with weights, order rows, assign positions.
RankTable finish_table(RankMethod method, const RankWeights& weights, std::vector<RankRow> rows) {
  for (auto& row : rows) {
    for (Metric m : kMetrics) {
      int mi = static_cast<int>(m);
      double sum = 0.0;
      for (int s = 0; s < kNumSubsets; ++s) sum += row.subset_rank[mi][s];
      row.metric_rank[mi] = sum / kNumSubsets;
    }
    row.weighted_rank = weights.w_dsc * row.metric_rank[static_cast<int>(Metric::dsc)] +
                        weights.w_fpv * row.metric_rank[static_cast<int>(Metric::fpv)] +
                        weights.w_fnv * row.metric_rank[static_cast<int>(Metric::fnv)];
  }

  std::vector<double> weighted(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) weighted[i] = rows[i].weighted_rank;
  std::vector<double> final_ranks = average_ranks(weighted, true);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].final_rank = final_ranks[i];

  std::sort(rows.begin(), rows.end(), [](const RankRow& a, const RankRow& b) {
    if (a.weighted_rank != b.weighted_rank) return a.weighted_rank < b.weighted_rank;
    return a.algorithm < b.algorithm;
  });

  // teams are positioned by their best algorithm; reference rows are ranked
  // but never positioned
  std::map<std::string, std::pair<double, std::size_t>> best;  // team -> (weighted, row idx)
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].reference) continue;
    auto it = best.find(rows[i].team);
    if (it == best.end() || rows[i].weighted_rank < it->second.first)
      best[rows[i].team] = {rows[i].weighted_rank, i};
  }
  std::vector<std::pair<double, std::string>> order;
  for (const auto& [team, entry] : best) order.push_back({entry.first, team});
  std::sort(order.begin(), order.end());
  int position = 0;
  for (const auto& [w, team] : order) {
    (void)w;
    rows[best[team].second].position = ++position;
  }

  RankTable table;
  table.method = method;
  table.weights = weights;
  table.rows = std::move(rows);
  return table;
}

std::vector<RankRow> make_rows(const std::vector<AlgorithmSummary>& summaries) {
  std::vector<RankRow> rows(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    rows[i].algorithm = summaries[i].name;
    rows[i].team = summaries[i].team.empty() ? summaries[i].name : summaries[i].team;
    rows[i].reference = summaries[i].reference;
    for (auto& per_metric : rows[i].subset_value)
      per_metric.fill(kNaN);
  }
  return rows;
}

/// Cases grouped by subset, identical across algorithms (validated).
struct CaseGrid {
  // [subset] -> list of case positions; positions index into each algorithm's
  // canonical (sorted by case_id) record vector
  std::array<std::vector<std::size_t>, kNumSubsets> by_subset;
  std::vector<std::vector<CaseRecord>> records;  // [algorithm][position]
};

CaseGrid build_case_grid(const std::vector<AlgorithmCases>& algorithms) {
  require_at_least_two(algorithms.size());
  for (std::size_t a = 0; a < algorithms.size(); ++a)
    for (std::size_t b = a + 1; b < algorithms.size(); ++b)
      if (algorithms[a].name == algorithms[b].name)
        fail(ErrKind::InvalidArgument, "duplicate algorithm name '" + algorithms[a].name + "'");
  CaseGrid grid;
  grid.records.resize(algorithms.size());
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    grid.records[a] = algorithms[a].cases;
    std::sort(grid.records[a].begin(), grid.records[a].end(),
              [](const CaseRecord& x, const CaseRecord& y) { return x.case_id < y.case_id; });
  }
  const auto& first = grid.records[0];
  for (std::size_t a = 1; a < algorithms.size(); ++a) {
    const auto& cur = grid.records[a];
    if (cur.size() != first.size())
      fail(ErrKind::InvalidArgument, "algorithms cover different case sets");
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i].case_id != first[i].case_id || cur[i].subset != first[i].subset)
        fail(ErrKind::InvalidArgument, "algorithms cover different case sets");
      for (Metric m : kMetrics)
        if (metric_present(cur[i].metrics, m) != metric_present(first[i].metrics, m))
          fail(ErrKind::InvalidArgument,
               "inconsistent lesion-negative flags across algorithms for case " + cur[i].case_id);
    }
  }
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i].subset < 0 || first[i].subset >= kNumSubsets)
      fail(ErrKind::InvalidArgument, "subset index out of range");
    grid.by_subset[first[i].subset].push_back(i);
  }
  for (int s = 0; s < kNumSubsets; ++s)
    if (grid.by_subset[s].empty())
      fail(ErrKind::EmptySubset, "no cases in subset " + to_string(subset_from_index(s)));
  return grid;
}

RankTable rank_from_summaries(RankMethod method, const std::vector<AlgorithmSummary>& summaries,
                              const RankWeights& weights) {
  require_at_least_two(summaries.size());
  weights.validate();
  std::vector<RankRow> rows = make_rows(summaries);

  for (Metric m : kMetrics) {
    int mi = static_cast<int>(m);
    for (int s = 0; s < kNumSubsets; ++s) {
      std::vector<double> values(summaries.size());
      for (std::size_t i = 0; i < summaries.size(); ++i) values[i] = summaries[i].value[mi][s];
      std::vector<double> ranks = average_ranks(values, !higher_is_better(m));
      for (std::size_t i = 0; i < summaries.size(); ++i) {
        rows[i].subset_value[mi][s] = values[i];
        rows[i].subset_rank[mi][s] = ranks[i];
      }
    }
  }
  return finish_table(method, weights, std::move(rows));
}

RankTable aggregate_then_rank(const std::vector<AlgorithmSummary>& summaries,
                              const RankWeights& weights) {
  require_at_least_two(summaries.size());
  weights.validate();
  std::vector<RankRow> rows = make_rows(summaries);

  for (Metric m : kMetrics) {
    int mi = static_cast<int>(m);
    std::vector<double> aggregate(summaries.size());
    for (std::size_t i = 0; i < summaries.size(); ++i) {
      double sum = 0.0;
      for (int s = 0; s < kNumSubsets; ++s) sum += summaries[i].value[mi][s];
      aggregate[i] = sum / kNumSubsets;
    }
    std::vector<double> ranks = average_ranks(aggregate, !higher_is_better(m));
    // the single cross-subset rank plays the role of all four subset ranks
    for (std::size_t i = 0; i < summaries.size(); ++i)
      for (int s = 0; s < kNumSubsets; ++s) {
        rows[i].subset_value[mi][s] = summaries[i].value[mi][s];
        rows[i].subset_rank[mi][s] = ranks[i];
      }
  }
  return finish_table(RankMethod::R2, weights, std::move(rows));
}

RankTable case_then_aggregate(const std::vector<AlgorithmCases>& algorithms,
                              const RankWeights& weights) {
  weights.validate();
  CaseGrid grid = build_case_grid(algorithms);
  std::vector<RankRow> rows(algorithms.size());
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    rows[a].algorithm = algorithms[a].name;
    rows[a].team = algorithms[a].team.empty() ? algorithms[a].name : algorithms[a].team;
    rows[a].reference = algorithms[a].reference;
    for (auto& per_metric : rows[a].subset_value) per_metric.fill(kNaN);
  }

  for (Metric m : kMetrics) {
    int mi = static_cast<int>(m);
    for (int s = 0; s < kNumSubsets; ++s) {
      std::vector<double> rank_sum(algorithms.size(), 0.0);
      std::int64_t n_cases = 0;
      for (std::size_t pos : grid.by_subset[s]) {
        if (!metric_present(grid.records[0][pos].metrics, m)) continue;
        std::vector<double> values(algorithms.size());
        for (std::size_t a = 0; a < algorithms.size(); ++a)
          values[a] = metric_value(grid.records[a][pos].metrics, m);
        std::vector<double> ranks = average_ranks(values, !higher_is_better(m));
        for (std::size_t a = 0; a < algorithms.size(); ++a) rank_sum[a] += ranks[a];
        ++n_cases;
      }
      if (n_cases == 0)
        fail(ErrKind::EmptySubset, "no cases carry metric " + std::string(to_string(m)) +
                                       " in subset " + to_string(subset_from_index(s)));
      for (std::size_t a = 0; a < algorithms.size(); ++a)
        rows[a].subset_rank[mi][s] = rank_sum[a] / static_cast<double>(n_cases);
    }
  }
  return finish_table(RankMethod::R4, weights, std::move(rows));
}

}  // namespace

AlgorithmSummary subset_means(const AlgorithmCases& algorithm) {
  return aggregate_subsets(algorithm, false);
}

AlgorithmSummary subset_medians(const AlgorithmCases& algorithm) {
  return aggregate_subsets(algorithm, true);
}

RankTable official_ranking(const std::vector<AlgorithmSummary>& summaries,
                           const RankWeights& weights) {
  return rank_from_summaries(RankMethod::R1, summaries, weights);
}

RankTable test_then_rank(const std::vector<AlgorithmCases>& algorithms, const RankWeights& weights,
                         const TestThenRankConfig& cfg) {
  weights.validate();
  CaseGrid grid = build_case_grid(algorithms);
  std::size_t K = algorithms.size();

  std::vector<RankRow> rows(K);
  for (std::size_t a = 0; a < K; ++a) {
    rows[a].algorithm = algorithms[a].name;
    rows[a].team = algorithms[a].team.empty() ? algorithms[a].name : algorithms[a].team;
    rows[a].reference = algorithms[a].reference;
    for (auto& per_metric : rows[a].subset_value) per_metric.fill(kNaN);
  }

  // raw one-sided p-values for every ordered pair, per metric and subset
  struct PairTest {
    std::size_t a, b;
    int metric, subset;
    double p;
  };
  std::vector<PairTest> tests;
  for (Metric m : kMetrics) {
    for (int s = 0; s < kNumSubsets; ++s) {
      for (std::size_t a = 0; a < K; ++a) {
        for (std::size_t b = 0; b < K; ++b) {
          if (a == b) continue;
          std::vector<double> xa, xb;
          for (std::size_t pos : grid.by_subset[s]) {
            if (!metric_present(grid.records[0][pos].metrics, m)) continue;
            xa.push_back(metric_value(grid.records[a][pos].metrics, m));
            xb.push_back(metric_value(grid.records[b][pos].metrics, m));
          }
          double p = 1.0;
          try {
            p = wilcoxon_signed_rank(xa, xb,
                                     higher_is_better(m) ? Alternative::greater
                                                         : Alternative::less);
          } catch (const EvalError& e) {
            if (e.kind() != ErrKind::TooFewPairs) throw;  // ties everywhere: no evidence
          }
          tests.push_back({a, b, static_cast<int>(m), s, p});
        }
      }
    }
  }

  // Holm correction within the configured family
  auto family_id = [&](const PairTest& t) -> int {
    switch (cfg.family) {
      case HolmFamily::metric_subset: return t.metric * kNumSubsets + t.subset;
      case HolmFamily::metric: return t.metric;
      case HolmFamily::all: return 0;
    }
    return 0;
  };
  std::map<int, std::vector<std::size_t>> families;
  for (std::size_t i = 0; i < tests.size(); ++i) families[family_id(tests[i])].push_back(i);
  std::vector<double> adjusted(tests.size(), 1.0);
  for (const auto& [fid, idx] : families) {
    (void)fid;
    std::vector<double> raw(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) raw[i] = tests[idx[i]].p;
    std::vector<double> adj = holm_adjust(raw);
    for (std::size_t i = 0; i < idx.size(); ++i) adjusted[idx[i]] = adj[i];
  }

  // win counts -> per-(metric, subset) ranks
  for (Metric m : kMetrics) {
    int mi = static_cast<int>(m);
    for (int s = 0; s < kNumSubsets; ++s) {
      std::vector<double> wins(K, 0.0);
      for (std::size_t i = 0; i < tests.size(); ++i) {
        const auto& t = tests[i];
        if (t.metric != mi || t.subset != s) continue;
        if (adjusted[i] < cfg.alpha) wins[t.a] += 1.0;
      }
      std::vector<double> ranks = average_ranks(wins, false);  // more wins = better
      for (std::size_t a = 0; a < K; ++a) rows[a].subset_rank[mi][s] = ranks[a];
    }
  }
  return finish_table(RankMethod::R5, weights, std::move(rows));
}

RankTable rank_variant(const std::vector<AlgorithmCases>& algorithms, RankMethod method,
                       const RankWeights& weights, const TestThenRankConfig& ttr) {
  require_at_least_two(algorithms.size());
  switch (method) {
    case RankMethod::R1:
    case RankMethod::R2:
    case RankMethod::R3: {
      std::vector<AlgorithmSummary> summaries;
      summaries.reserve(algorithms.size());
      for (const auto& a : algorithms)
        summaries.push_back(method == RankMethod::R3 ? subset_medians(a) : subset_means(a));
      if (method == RankMethod::R2) return aggregate_then_rank(summaries, weights);
      return rank_from_summaries(method, summaries, weights);
    }
    case RankMethod::R4: return case_then_aggregate(algorithms, weights);
    case RankMethod::R5: return test_then_rank(algorithms, weights, ttr);
  }
  fail(ErrKind::InvalidArgument, "unknown ranking method");
}

BootstrapSummary bootstrap_ranks(const std::vector<AlgorithmCases>& algorithms, std::int64_t B,
                                 std::uint64_t seed, const RankWeights& weights, int workers) {
  if (B < 1) fail(ErrKind::InvalidArgument, "need at least one bootstrap replicate");
  weights.validate();
  CaseGrid grid = build_case_grid(algorithms);
  std::size_t K = algorithms.size();

  // validate aggregability once on the full data (clear error up front)
  for (const auto& a : algorithms) subset_means(a);

  BootstrapSummary out;
  out.replicates = B;
  out.seed = seed;
  out.weights = weights;
  out.algorithms.resize(K);
  for (std::size_t a = 0; a < K; ++a) {
    out.algorithms[a].name = algorithms[a].name;
    out.algorithms[a].ranks.assign(static_cast<std::size_t>(B), 0.0);
  }

  auto run_replicate = [&](std::int64_t r) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    // same resampled case multiset for every algorithm, per subset
    std::array<std::vector<std::size_t>, kNumSubsets> picks;
    for (int s = 0; s < kNumSubsets; ++s) {
      std::size_t n = grid.by_subset[s].size();
      picks[s].resize(n);
      for (std::size_t i = 0; i < n; ++i)
        picks[s][i] = grid.by_subset[s][rng.bounded(static_cast<std::uint64_t>(n))];
    }

    std::vector<AlgorithmSummary> summaries(K);
    for (std::size_t a = 0; a < K; ++a) {
      AlgorithmSummary& sm = summaries[a];
      sm.name = algorithms[a].name;
      sm.team = algorithms[a].team;
      sm.reference = algorithms[a].reference;
      for (int s = 0; s < kNumSubsets; ++s) {
        std::array<double, kNumMetrics> sum{};
        std::array<std::int64_t, kNumMetrics> cnt{};
        for (std::size_t pos : picks[s]) {
          const MetricTriplet& t = grid.records[a][pos].metrics;
          for (Metric m : kMetrics) {
            if (!metric_present(t, m)) continue;
            sum[static_cast<int>(m)] += metric_value(t, m);
            ++cnt[static_cast<int>(m)];
          }
        }
        for (Metric m : kMetrics) {
          int mi = static_cast<int>(m);
          if (cnt[mi] == 0)
            fail(ErrKind::EmptySubset, "bootstrap resample lost all lesion-positive cases in " +
                                           to_string(subset_from_index(s)));
          sm.value[mi][s] = sum[mi] / static_cast<double>(cnt[mi]);
        }
      }
    }

    RankTable table = rank_from_summaries(RankMethod::R1, summaries, weights);
    for (const auto& row : table.rows) {
      for (std::size_t a = 0; a < K; ++a) {
        if (algorithms[a].name == row.algorithm) {
          out.algorithms[a].ranks[static_cast<std::size_t>(r)] = row.final_rank;
          break;
        }
      }
    }
  };

  workers = std::max(1, workers);
  if (workers == 1) {
    for (std::int64_t r = 0; r < B; ++r) run_replicate(r);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::int64_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (;;) {
            std::int64_t r = next.fetch_add(1);
            if (r >= B) return;
            run_replicate(r);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  for (auto& alg : out.algorithms) {
    std::vector<double> sorted = alg.ranks;
    std::sort(sorted.begin(), sorted.end());
    alg.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(B);
    alg.q025 = quantile_sorted(sorted, 0.025);
    alg.q25 = quantile_sorted(sorted, 0.25);
    alg.median = quantile_sorted(sorted, 0.5);
    alg.q75 = quantile_sorted(sorted, 0.75);
    alg.q975 = quantile_sorted(sorted, 0.975);
    alg.rank1_share = static_cast<double>(std::count(sorted.begin(), sorted.end(), 1.0)) /
                      static_cast<double>(B);
  }
  return out;
}

ClassificationSummary classification_summary(const std::vector<CaseFlags>& cases) {
  if (cases.empty()) fail(ErrKind::InvalidArgument, "no cases");
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (const auto& c : cases) {
    if (!c.reference_empty)
      c.prediction_empty ? ++fn : ++tp;
    else
      c.prediction_empty ? ++tn : ++fp;
  }
  return classification_from_counts(tp, fn, tn, fp);
}

ClassificationSummary classification_from_counts(std::int64_t tp, std::int64_t fn, std::int64_t tn,
                                                 std::int64_t fp) {
  ClassificationSummary out;
  out.tp = tp;
  out.fn = fn;
  out.tn = tn;
  out.fp = fp;
  std::int64_t pos = tp + fn, neg = tn + fp;
  if (pos > 0) out.sensitivity = static_cast<double>(tp) / static_cast<double>(pos);
  if (neg > 0) out.specificity = static_cast<double>(tn) / static_cast<double>(neg);
  if (pos + neg > 0)
    out.accuracy = static_cast<double>(tp + tn) / static_cast<double>(pos + neg);
  return out;
}

}  // namespace lesioneval
