// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Each criterion prints one [PASS]/[FAIL] line; run the
// binary directly or via `ctest -R acceptance --output-on-failure`.
#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "lesioneval/evaluate.hpp"
#include "lesioneval/reports.hpp"
#include "lesioneval/rng.hpp"
#include "lesioneval/synth.hpp"
#include "lesioneval/volume_io.hpp"
#include "leaderboard_fixture.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace lesioneval;
using testutil::close;

namespace fs = std::filesystem;

namespace {

struct Criterion {
  std::string label;
  std::chrono::steady_clock::time_point start;
  bool passed = false;

  explicit Criterion(std::string text)
      : label(std::move(text)), start(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  ~Criterion() {
    std::printf("[%s] %s (%.2fs)\n", passed ? "PASS" : "FAIL", label.c_str(), seconds());
    std::fflush(stdout);
  }
};

std::vector<AlgorithmSummary> fixture_summaries(bool with_ensemble) {
  std::vector<AlgorithmSummary> out;
  auto push = [&](const fixture::LeaderboardRow& row) {
    AlgorithmSummary s;
    s.name = row.name;
    s.team = row.team;
    s.reference = row.reference;
    for (int sub = 0; sub < kNumSubsets; ++sub) {
      s.value[static_cast<int>(Metric::dsc)][sub] = row.dsc[static_cast<std::size_t>(sub)];
      s.value[static_cast<int>(Metric::fnv)][sub] = row.fnv[static_cast<std::size_t>(sub)];
      s.value[static_cast<int>(Metric::fpv)][sub] = row.fpv[static_cast<std::size_t>(sub)];
    }
    out.push_back(s);
  };
  for (const auto& row : fixture::official_rows()) push(row);
  if (with_ensemble) push(fixture::ensemble_row());
  return out;
}

}  // namespace

TEST_CASE("C1 leaderboard reproduction") {
  Criterion crit("C1 leaderboard reproduction (official table + ensemble)");

  RankTable table = official_ranking(fixture_summaries(false));
  REQUIRE(table.rows.size() == 29);

  for (const auto& row : fixture::official_rows()) {
    const RankRow& got = table.row(row.name);
    double dsc_avg = 0.0, fnv_avg = 0.0, fpv_avg = 0.0;
    for (int sub = 0; sub < kNumSubsets; ++sub) {
      auto s = static_cast<std::size_t>(sub);
      // every parenthesized subset rank
      CHECK(got.subset_rank[static_cast<int>(Metric::dsc)][sub] == row.dsc_rank[s]);
      CHECK(got.subset_rank[static_cast<int>(Metric::fnv)][sub] == row.fnv_rank[s]);
      CHECK(got.subset_rank[static_cast<int>(Metric::fpv)][sub] == row.fpv_rank[s]);
      dsc_avg += row.dsc_rank[s];
      fnv_avg += row.fnv_rank[s];
      fpv_avg += row.fpv_rank[s];
    }
    // per-metric average ranks
    CHECK(close(got.metric_rank[static_cast<int>(Metric::dsc)], dsc_avg / 4.0, 1e-9));
    CHECK(close(got.metric_rank[static_cast<int>(Metric::fnv)], fnv_avg / 4.0, 1e-9));
    CHECK(close(got.metric_rank[static_cast<int>(Metric::fpv)], fpv_avg / 4.0, 1e-9));
    // weighted final rank, before rounding, at 1e-9
    CHECK(std::abs(got.weighted_rank - row.weighted) <= 1e-9);
    CHECK(got.position == row.position);
  }
  // spot anchors exactly as published (4-decimal display is half-even)
  CHECK(std::abs(table.row("LesionTracer A").weighted_rank - 6.0625) <= 1e-9);
  CHECK(std::abs(table.row("IKIM A").weighted_rank - 8.40625) <= 1e-9);
  CHECK(format_fixed4(table.row("IKIM A").weighted_rank) == "8.4062");
  CHECK(std::abs(table.row("HussainAlasmawi A").weighted_rank - 8.4375) <= 1e-9);
  CHECK(format_fixed4(table.row("Maxsh A").weighted_rank) == "19.5312");

  // the post-hoc ensemble ranked alongside all 29 algorithms
  RankTable with_ensemble = official_ranking(fixture_summaries(true));
  const RankRow& ens = with_ensemble.row("top5 ensemble");
  CHECK(close(ens.metric_rank[static_cast<int>(Metric::dsc)], 3.5, 1e-9));
  CHECK(close(ens.metric_rank[static_cast<int>(Metric::fnv)], 3.0, 1e-9));
  CHECK(close(ens.metric_rank[static_cast<int>(Metric::fpv)], 8.25, 1e-9));
  CHECK(std::abs(ens.weighted_rank - 4.5625) <= 1e-9);
  CHECK(with_ensemble.rows[0].algorithm == "top5 ensemble");  // first position

  // emitted leaderboard carries the published 4-decimal weighted ranks
  std::string csv = leaderboard_to_csv(table);
  CHECK(csv.find("LesionTracer A,LesionTracer,1,6.0625") != std::string::npos);
  CHECK(csv.find("IKIM A,IKIM,2,8.4062") != std::string::npos);
  CHECK(csv.find("HussainAlasmawi A,HussainAlasmawi,3,8.4375") != std::string::npos);
  CHECK(csv.find("Maxsh A,Maxsh,15,19.5312") != std::string::npos);

  CHECK(crit.seconds() < 1.0);
  crit.passed = true;
}

TEST_CASE("C2 patient-level classification reproduction") {
  Criterion crit("C2 classification reproduction (sens/spec/acc anchors)");

  // 156 lesion-positive, 44 lesion-negative test cases
  ClassificationSummary most_sensitive = classification_from_counts(152, 156 - 152, 12, 44 - 12);
  CHECK(std::abs(most_sensitive.sensitivity - 0.97) <= 0.005 + 1e-12);
  CHECK(std::abs(most_sensitive.specificity - 0.27) <= 0.005 + 1e-12);
  CHECK(std::abs(most_sensitive.accuracy - 0.82) <= 0.005 + 1e-12);

  ClassificationSummary most_specific = classification_from_counts(144, 156 - 144, 35, 44 - 35);
  CHECK(std::abs(most_specific.sensitivity - 0.92) <= 0.005 + 1e-12);
  CHECK(std::abs(most_specific.specificity - 0.80) <= 0.005 + 1e-12);
  CHECK(std::abs(most_specific.accuracy - 0.90) <= 0.005 + 1e-12);

  crit.passed = true;
}

TEST_CASE("C3 metric oracle equivalence") {
  Criterion crit("C3 metric equivalence vs brute-force oracle (>=500 random mask pairs)");

  SplitMix64 rng(0xC3);
  const double spacings[4] = {0.5, 1.0, 2.0, 2.5};  // dyadic squares stay exact
  const int connectivities[3] = {6, 18, 26};

  std::vector<std::pair<LabelVolume, LabelVolume>> f1_batch;
  std::vector<OverlapTable> f1_tables;
  int trials = 0;
  for (; trials < 520; ++trials) {
    GridGeometry g(3 + static_cast<std::int64_t>(rng.bounded(10)),
                   3 + static_cast<std::int64_t>(rng.bounded(10)),
                   3 + static_cast<std::int64_t>(rng.bounded(10)),
                   spacings[rng.bounded(4)], spacings[rng.bounded(4)], spacings[rng.bounded(4)]);
    double fill = 0.1 + 0.4 * rng.uniform();
    LabelVolume ref = oracle::random_mask(g, fill, rng.next());
    LabelVolume pred = oracle::random_mask(g, fill, rng.next());
    int conn = connectivities[rng.bounded(3)];
    Connectivity connectivity = connectivity_from_int(conn);

    auto ref_labels = label_components(ref, connectivity);
    auto pred_labels = label_components(pred, connectivity);
    OverlapTable ot = overlap_table(ref_labels, pred_labels);

    CHECK(close(fpv(ot), oracle::fpv(ref, pred, conn)));
    CHECK(close(fnv(ot), oracle::fnv(ref, pred, conn)));
    CHECK(close(volume_ratio(ref, pred), oracle::volume_ratio(ref, pred, 0.012)));
    CHECK(close(dsc_all(ref, pred), oracle::dsc_all(ref, pred)));

    if (!ref.empty_mask()) {
      CHECK(close(dsc(ref, pred), oracle::dsc(ref, pred)));
      CHECK(close(nsd(ref, pred), oracle::nsd(ref, pred, 1.0, false)));
      CHECK(close(cc_dsc(ref_labels, pred), oracle::cc_dsc(ref, pred, conn)));
    }
    if (!ref.empty_mask() || !pred.empty_mask())
      CHECK(close(volumetric_similarity(ref, pred), oracle::volumetric_similarity(ref, pred)));

    for (auto mc : {MatchCriterion::one_voxel(), MatchCriterion::iou(0.1),
                    MatchCriterion::iou(0.25)}) {
      oracle::Match om{mc.kind == MatchCriterion::Kind::one_voxel, mc.tau};
      DetectionFlags flags = detection_flags(ot, mc);
      std::vector<bool> want_ref = oracle::detected_refs(ref, pred, conn, om);
      std::vector<bool> want_pred = oracle::matched_preds(ref, pred, conn, om);
      CHECK(flags.ref_detected == want_ref);
      CHECK(flags.pred_matched == want_pred);

      TaxonomyCounts tax = error_taxonomy(ot, mc);
      oracle::Taxonomy want_tax = oracle::taxonomy(ref, pred, conn, om);
      CHECK(tax.cd == want_tax.cd);
      CHECK(tax.fa == want_tax.fa);
      CHECK(tax.df == want_tax.df);
      CHECK(tax.m == want_tax.m);
      CHECK(tax.s == want_tax.s);
      CHECK(tax.sm == want_tax.sm);
    }

    PanopticResult pq = panoptic(ot, 0.1);
    oracle::Panoptic want_pq = oracle::panoptic(ref, pred, conn, 0.1);
    CHECK(pq.tp == want_pq.tp);
    CHECK(pq.fp == want_pq.fp);
    CHECK(pq.fn == want_pq.fn);
    CHECK(close(pq.sq, want_pq.sq));
    CHECK(close(pq.rq, want_pq.rq));
    CHECK(close(pq.pq, want_pq.pq));

    // pooled F1 over batches of 20 cases, fixed 18-connectivity pooling
    if (conn == 18) {
      f1_batch.push_back({ref, pred});
      f1_tables.push_back(ot);
      if (f1_batch.size() == 20) {
        for (auto mc : {MatchCriterion::one_voxel(), MatchCriterion::iou(0.25)}) {
          oracle::Match om{mc.kind == MatchCriterion::Kind::one_voxel, mc.tau};
          CHECK(close(pooled_f1(f1_tables, mc), oracle::pooled_f1(f1_batch, 18, om)));
        }
        f1_batch.clear();
        f1_tables.clear();
      }
    }
  }
  CHECK(trials >= 500);
  CHECK(crit.seconds() < 60.0);
  crit.passed = true;
}

TEST_CASE("C4 connected components correctness") {
  Criterion crit("C4 components vs flood-fill oracle (10k 3^3) + count monotonicity (1k 16^3)");

  // randomized agreement on tiny grids, all three connectivities
  GridGeometry tiny(3, 3, 3);
  SplitMix64 rng(0xC4);
  for (int trial = 0; trial < 10000; ++trial) {
    LabelVolume mask = oracle::random_mask(tiny, 0.05 + 0.9 * rng.uniform(), rng.next());
    for (int conn : {6, 18, 26}) {
      ComponentLabeling got = label_components(mask, connectivity_from_int(conn));
      auto want = oracle::flood_components(mask, conn);
      REQUIRE(static_cast<std::size_t>(got.count) == want.size());
      std::vector<std::vector<std::int64_t>> got_groups(static_cast<std::size_t>(got.count));
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(got.labels.size()); ++i)
        if (got.labels[static_cast<std::size_t>(i)])
          got_groups[static_cast<std::size_t>(got.labels[static_cast<std::size_t>(i)] - 1)]
              .push_back(i);
      CHECK(got_groups == want);
    }
  }

  // cc6 >= cc18 >= cc26, the ordering the reference-instance ablation shows
  GridGeometry grid16(16, 16, 16);
  for (int trial = 0; trial < 1000; ++trial) {
    LabelVolume mask = oracle::random_mask(grid16, 0.1 + 0.5 * rng.uniform(), rng.next());
    std::int32_t c6 = label_components(mask, Connectivity::c6).count;
    std::int32_t c18 = label_components(mask, Connectivity::c18).count;
    std::int32_t c26 = label_components(mask, Connectivity::c26).count;
    CHECK(c6 >= c18);
    CHECK(c18 >= c26);
  }
  crit.passed = true;
}

TEST_CASE("C5 Wilcoxon exactness and Holm correctness") {
  Criterion crit("C5 Wilcoxon = 2^n enumeration (n<=10); Holm vs step-down oracle (1k vectors)");

  SplitMix64 rng(0xC5);
  // n below 5 is outside the contract (TooFewPairs); verify 5..10 against
  // full sign enumeration, ties included
  for (int n = 5; n <= 10; ++n) {
    int done = 0;
    while (done < 120) {
      std::vector<double> x, y;
      for (int i = 0; i < n; ++i) {
        x.push_back(std::floor(rng.uniform(-4.0, 4.0) * 4.0) / 4.0);
        y.push_back(std::floor(rng.uniform(-4.0, 4.0) * 4.0) / 4.0);
      }
      int effective = 0;
      for (int i = 0; i < n; ++i)
        effective += x[static_cast<std::size_t>(i)] != y[static_cast<std::size_t>(i)];
      if (effective < 5) continue;
      ++done;
      for (auto alt : {Alternative::greater, Alternative::less, Alternative::two_sided}) {
        double got = wilcoxon_signed_rank(x, y, alt);
        double want = oracle::wilcoxon_enumerated(x, y, alt);
        CHECK(std::abs(got - want) <= 1e-12);
      }
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t m = 1 + rng.bounded(16);
    std::vector<double> p(m);
    for (auto& v : p) v = std::floor(rng.uniform() * 50.0) / 50.0;  // heavy ties
    std::vector<double> got = holm_adjust(p);
    std::vector<double> want = oracle::holm_quadratic(p);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < m; ++i) CHECK(close(got[i], want[i]));
  }
  crit.passed = true;
}

TEST_CASE("C6 bootstrap determinism and dominance") {
  Criterion crit("C6 bootstrap B=200: bitwise reproducible, dominant holds rank 1");

  // 3-algorithm synthetic challenge, 4 subsets x 20 cases, strict dominance
  SplitMix64 rng(0xC6);
  std::vector<std::array<double, 3>> base(4 * 20);
  for (auto& b : base) b = {rng.uniform(), rng.uniform(), rng.uniform()};
  auto make = [&](const std::string& name, double dsc_level, double vol_level) {
    AlgorithmCases out;
    out.name = name;
    for (int s = 0; s < kNumSubsets; ++s)
      for (int i = 0; i < 20; ++i) {
        const auto& b = base[static_cast<std::size_t>(s * 20 + i)];
        CaseRecord rec;
        rec.case_id = "s" + std::to_string(s) + "_c" + std::to_string(i);
        rec.subset = s;
        rec.metrics.dsc = dsc_level + 0.05 * b[0];
        rec.metrics.fpv_ml = vol_level + b[1];
        rec.metrics.fnv_ml = vol_level + b[2];
        out.cases.push_back(rec);
      }
    return out;
  };
  // dominant strictly better on every case and metric
  std::vector<AlgorithmCases> algs{make("mid", 0.60, 1.5), make("dominant", 0.85, 0.0),
                                   make("weak", 0.40, 3.0)};

  BootstrapSummary a = bootstrap_ranks(algs, 200, 2024, {}, 1);
  BootstrapSummary b = bootstrap_ranks(algs, 200, 2024, {}, 8);
  BootstrapSummary c = bootstrap_ranks(algs, 200, 2024, {}, 3);
  for (std::size_t i = 0; i < a.algorithms.size(); ++i) {
    CHECK(a.algorithms[i].ranks == b.algorithms[i].ranks);
    CHECK(a.algorithms[i].ranks == c.algorithms[i].ranks);
  }
  CHECK(bootstrap_to_json(a) == bootstrap_to_json(b));
  CHECK(bootstrap_to_csv(a) == bootstrap_to_csv(c));

  CHECK(a.algorithms[1].name == "dominant");
  CHECK(a.algorithms[1].rank1_share == 1.0);
  for (double r : a.algorithms[1].ranks) CHECK(r == 1.0);

  CHECK(crit.seconds() < 30.0);
  crit.passed = true;
}

TEST_CASE("C7 sensitivity sweep shape and taxonomy conservation") {
  Criterion crit("C7 sweep monotone in tau; taxonomy conserved; marginal overlaps halve");

  std::vector<double> taus;
  for (int i = 1; i <= 50; ++i) taus.push_back(i / 100.0);

  // randomized synthetic population
  SynthParams params;
  params.grid = GridGeometry(28, 28, 28, 2.0, 2.0, 2.0);
  params.lesion_count_min = 1;
  params.lesion_count_max = 4;
  params.radius_mm_min = 2.5;
  params.radius_mm_max = 6.5;
  params.algorithms = {{"rough", 0, 1, 0.2, 1.0}};
  std::vector<OverlapTable> tables;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    SynthCase c = synth_case(params, seed);
    tables.push_back(overlap_table(label_components(c.reference, Connectivity::c18),
                                   label_components(c.predictions[0], Connectivity::c18)));
  }
  auto curve = sensitivity_sweep(tables, taus);
  REQUIRE(curve.size() == taus.size() + 1);
  for (std::size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].sensitivity <= curve[i - 1].sensitivity);
  for (const auto& ot : tables) {
    for (const auto& pt : curve) {
      TaxonomyCounts t = error_taxonomy(ot, pt.criterion);
      CHECK(t.cd + t.df + t.refs_in_clusters == ot.n_ref);
      CHECK(t.cd + t.fa + t.preds_in_clusters == ot.n_pred);
    }
  }

  // constructed population: half exact copies, half single-voxel touches
  GridGeometry g(24, 24, 1);
  std::vector<OverlapTable> marginal;
  for (int k = 0; k < 10; ++k) {
    LabelVolume ref(g), pred(g);
    for (std::int64_t x = 0; x < 10; ++x) {
      ref.set(x, 0, 0, 1);
      pred.set(x, 0, 0, 1);  // exact copy
      ref.set(x, 10, 0, 1);
    }
    for (std::int64_t x = 9; x < 14; ++x) pred.set(x, 10, 0, 1);  // one-voxel touch
    marginal.push_back(overlap_table(label_components(ref, Connectivity::c18),
                                     label_components(pred, Connectivity::c18)));
  }
  auto mcurve = sensitivity_sweep(marginal, taus);
  double at_one_voxel = mcurve.front().sensitivity;
  double at_half = mcurve.back().sensitivity;
  CHECK(mcurve.back().criterion.tau == 0.5);
  CHECK(at_one_voxel == 1.0);
  CHECK(at_half <= 0.5 * at_one_voxel);
  crit.passed = true;
}

TEST_CASE("C8 end-to-end pipeline via the CLI") {
  Criterion crit("C8 synth -> evaluate -> rank -> bootstrap -> sweep, byte-identical re-run");

  const char* cli = std::getenv("LESIONEVAL_CLI");
  REQUIRE_MESSAGE(cli != nullptr,
                  "LESIONEVAL_CLI must point at the lesioneval binary (ctest sets it)");

  fs::path root = fs::temp_directory_path() / "lesioneval_acceptance_e2e";
  fs::remove_all(root);
  fs::create_directories(root);

  auto run = [&](const std::string& args) {
    std::string cmd = std::string(cli) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return status == 0 ? 0 : 1;
  };
  auto read_all = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), (p.string() + " must exist"));
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  };

  std::string data = (root / "data").string();
  REQUIRE(run("synth --cases 20 --seed 11 --out " + data) == 0);

  for (int pass = 1; pass <= 2; ++pass) {
    std::string tag = std::to_string(pass);
    REQUIRE(run("evaluate --manifest " + data + "/manifest.json --out " +
                (root / ("run" + tag)).string()) == 0);
    REQUIRE(run("rank --metrics " + (root / ("run" + tag)).string() +
                "/metrics.csv --method R1 --weights 0.5,0.25,0.25 --out " +
                (root / ("rank" + tag)).string()) == 0);
    REQUIRE(run("bootstrap --metrics " + (root / ("run" + tag)).string() +
                "/metrics.csv --replicates 200 --seed 7 --out " +
                (root / ("boot" + tag)).string()) == 0);
    REQUIRE(run("sweep --metrics-dir " + (root / ("run" + tag)).string() +
                " --taus 0.05:0.5:0.05 --out " + (root / ("sweep" + tag)).string()) == 0);
  }

  // schema checks
  std::string metrics = read_all(root / "run1" / "metrics.csv");
  std::size_t rows = static_cast<std::size_t>(std::count(metrics.begin(), metrics.end(), '\n'));
  CHECK(rows == 1 + 80 * 3);  // header + 4 subsets x 20 cases x 3 algorithms
  {
    nlohmann::json lb = nlohmann::json::parse(read_all(root / "rank1" / "leaderboard.json"));
    CHECK(lb["method"] == "R1");
    CHECK(lb["rows"].size() == 3);
    double rank_sum = 0.0;
    for (const auto& r : lb["rows"]) rank_sum += r["final_rank"].get<double>();
    CHECK(close(rank_sum, 6.0));
    nlohmann::json boot = nlohmann::json::parse(read_all(root / "boot1" / "bootstrap.json"));
    CHECK(boot["replicates"] == 200);
    CHECK(boot["algorithms"].size() == 3);
    nlohmann::json sweep = nlohmann::json::parse(read_all(root / "sweep1" / "sweep.json"));
    CHECK(sweep["sensitivity"].size() == 11);  // one_voxel + 10 taus
    CHECK(sweep["taxonomy"].size() == 11);
    CHECK(sweep["deciles"].size() == 2);  // volume and suv_max
    // sweep sensitivities non-increasing
    double prev = 2.0;
    for (const auto& pt : sweep["sensitivity"]) {
      double s = pt["sensitivity"].get<double>();
      CHECK(s <= prev + 1e-15);
      prev = s;
    }
  }

  // re-run is byte-identical
  for (const auto& [dir, file] :
       std::vector<std::pair<std::string, std::string>>{{"run", "metrics.csv"},
                                                        {"run", "classification.json"},
                                                        {"rank", "leaderboard.csv"},
                                                        {"rank", "leaderboard.json"},
                                                        {"boot", "bootstrap.json"},
                                                        {"boot", "bootstrap.csv"},
                                                        {"sweep", "sweep.json"}}) {
    CHECK_MESSAGE(read_all(root / (dir + "1") / file) == read_all(root / (dir + "2") / file),
                  (dir + "/" + file + " differs between identical runs"));
  }

  fs::remove_all(root);
  CHECK(crit.seconds() < 120.0);
  crit.passed = true;
}
