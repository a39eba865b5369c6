// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver: synth -> evaluate -> rank/bootstrap/sweep pipelines,
// plus mask utilities (ensemble voting, region ablation).
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lesioneval/evaluate.hpp"
#include "lesioneval/reports.hpp"
#include "lesioneval/rng.hpp"
#include "lesioneval/synth.hpp"
#include "lesioneval/volume_io.hpp"

namespace fs = std::filesystem;
using namespace lesioneval;

namespace {

RankWeights parse_weights(const std::string& text) {
  RankWeights w;
  if (text.empty()) return w;
  double vals[3];
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &vals[0], &vals[1], &vals[2]) != 3)
    fail(ErrKind::InvalidArgument, "--weights expects w_dsc,w_fpv,w_fnv");
  w.w_dsc = vals[0];
  w.w_fpv = vals[1];
  w.w_fnv = vals[2];
  w.validate();
  return w;
}

std::vector<double> parse_tau_grid(const std::string& text) {
  if (text.empty()) return EvaluationConfig::default_sweep_taus();
  double start = 0.0, stop = 0.0, step = 0.0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
    fail(ErrKind::InvalidArgument, "--taus expects start:stop:step");
  if (!(step > 0.0)) fail(ErrKind::InvalidArgument, "tau step must be > 0");
  std::vector<double> taus;
  for (int i = 0;; ++i) {
    double t = start + step * i;
    if (t > stop + 1e-12) break;
    taus.push_back(std::min(t, stop));
  }
  return taus;
}

BoxRegion parse_box(const std::string& text) {
  long long v[6];
  if (std::sscanf(text.c_str(), "%lld:%lld,%lld:%lld,%lld:%lld", &v[0], &v[1], &v[2], &v[3],
                  &v[4], &v[5]) != 6)
    fail(ErrKind::InvalidArgument, "--box expects x0:x1,y0:y1,z0:z1");
  return BoxRegion{{v[0], v[2], v[4]}, {v[1], v[3], v[5]}};
}

EvaluationConfig load_config(const std::string& path) {
  EvaluationConfig cfg;
  if (path.empty()) return cfg;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrKind::SchemaViolation, std::string("config: ") + e.what());
  }
  cfg.connectivity = connectivity_from_int(j.value("connectivity", 18));
  cfg.nsd.tolerance = j.value("nsd_tolerance", 1.0);
  cfg.nsd.use_spacing_mm = j.value("nsd_use_spacing_mm", false);
  cfg.ratio.epsilon_ml = j.value("ratio_epsilon_ml", 0.012);
  cfg.pq_tau = j.value("pq_tau", 0.1);
  cfg.workers = j.value("workers", 0);
  cfg.seed = j.value("seed", 0);
  return cfg;
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')
                              ? c
                              : '_';
  return out;
}

// drop case ids that are not present (successfully) for every algorithm so
// the ranking always sees paired data
std::size_t drop_incomplete_cases(std::vector<AlgorithmCases>& algorithms) {
  if (algorithms.empty()) return 0;
  std::map<std::string, std::size_t> seen;
  for (const auto& alg : algorithms)
    for (const auto& rec : alg.cases) ++seen[rec.case_id];
  std::set<std::string> complete;
  for (const auto& [id, n] : seen)
    if (n == algorithms.size()) complete.insert(id);
  std::size_t dropped = seen.size() - complete.size();
  for (auto& alg : algorithms) {
    std::vector<CaseRecord> kept;
    for (auto& rec : alg.cases)
      if (complete.count(rec.case_id)) kept.push_back(std::move(rec));
    alg.cases = std::move(kept);
  }
  return dropped;
}

int cmd_evaluate(const std::string& manifest_path, const std::string& config_path,
                 const std::string& out_dir, int workers, int connectivity) {
  EvaluationConfig cfg = load_config(config_path);
  if (workers > 0) cfg.workers = workers;
  if (connectivity > 0) cfg.connectivity = connectivity_from_int(connectivity);

  CaseManifest manifest = load_manifest_file(manifest_path);
  EvaluationResult result = evaluate_all(manifest, cfg);

  fs::create_directories(out_dir);
  fs::create_directories(fs::path(out_dir) / "overlaps");
  write_text_file((fs::path(out_dir) / "metrics.csv").string(), metrics_to_csv(result.rows));
  for (const auto& rec : result.overlaps) {
    std::string name = safe_name(rec.case_id) + "__" + safe_name(rec.algorithm) + ".json";
    write_text_file((fs::path(out_dir) / "overlaps" / name).string(),
                    overlap_record_to_json(rec));
  }

  std::map<std::string, std::vector<CaseFlags>> flags;
  for (const auto& row : result.rows)
    if (row.error.empty())
      flags[row.algorithm].push_back({row.reference_empty, row.prediction_empty});
  std::vector<std::pair<std::string, ClassificationSummary>> classification;
  for (const auto& [alg, f] : flags) classification.push_back({alg, classification_summary(f)});
  write_text_file((fs::path(out_dir) / "classification.json").string(),
                  classification_to_json(classification));

  std::size_t failures = 0;
  for (const auto& row : result.rows) failures += !row.error.empty();
  std::cout << "evaluated " << result.rows.size() << " rows (" << failures << " failed) -> "
            << out_dir << "\n";
  return 0;
}

int cmd_rank(const std::string& metrics_path, const std::string& method_str,
             const std::string& weights_str, const std::string& teams_path,
             const std::string& out_dir) {
  RankWeights weights = parse_weights(weights_str);
  RankMethod method = rank_method_from_string(method_str);
  std::vector<AlgorithmCases> algorithms = algorithm_cases_from_csv(read_text_file(metrics_path));
  std::size_t dropped = drop_incomplete_cases(algorithms);
  if (dropped > 0)
    std::cerr << "warning: dropped " << dropped << " case(s) not evaluated for every algorithm\n";

  if (!teams_path.empty()) {
    nlohmann::json teams = nlohmann::json::parse(read_text_file(teams_path));
    for (auto& alg : algorithms) {
      if (!teams.contains(alg.name)) continue;
      alg.team = teams[alg.name].value("team", alg.name);
      alg.reference = teams[alg.name].value("reference", false);
    }
  }

  RankTable table = rank_variant(algorithms, method, weights);
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "leaderboard.csv").string(), leaderboard_to_csv(table));
  write_text_file((fs::path(out_dir) / "leaderboard.json").string(), rank_table_to_json(table));
  std::cout << "ranked " << table.rows.size() << " algorithms (" << method_str << ") -> "
            << out_dir << "\n";
  return 0;
}

int cmd_bootstrap(const std::string& metrics_path, std::int64_t replicates, std::uint64_t seed,
                  const std::string& weights_str, int workers, const std::string& out_dir) {
  RankWeights weights = parse_weights(weights_str);
  std::vector<AlgorithmCases> algorithms = algorithm_cases_from_csv(read_text_file(metrics_path));
  drop_incomplete_cases(algorithms);
  BootstrapSummary summary =
      bootstrap_ranks(algorithms, replicates, seed, weights, resolve_workers(workers));
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "bootstrap.json").string(), bootstrap_to_json(summary));
  write_text_file((fs::path(out_dir) / "bootstrap.csv").string(), bootstrap_to_csv(summary));
  std::cout << "bootstrap n=" << replicates << " over " << summary.algorithms.size()
            << " algorithms -> " << out_dir << "\n";
  return 0;
}

int cmd_sweep(const std::string& metrics_dir, const std::string& taus_str,
              const std::string& out_dir) {
  std::vector<double> taus = parse_tau_grid(taus_str);
  fs::path overlaps = fs::path(metrics_dir) / "overlaps";
  if (!fs::is_directory(overlaps)) overlaps = metrics_dir;  // allow pointing at the dir itself

  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(overlaps))
    if (entry.path().extension() == ".json") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrKind::MissingFile, "no overlap records under " + overlaps.string());

  std::vector<CaseOverlapRecord> records;
  for (const auto& f : files) records.push_back(overlap_record_from_json(read_text_file(f)));

  std::vector<OverlapTable> tables;
  for (const auto& r : records) tables.push_back(r.table);
  auto curve = sensitivity_sweep(tables, taus);

  std::vector<std::pair<std::string, TaxonomyCounts>> taxonomy;
  {
    auto add = [&](const std::string& tag, const MatchCriterion& crit) {
      TaxonomyCounts total;
      for (const auto& t : tables) {
        TaxonomyCounts c = error_taxonomy(t, crit);
        total.cd += c.cd;
        total.fa += c.fa;
        total.df += c.df;
        total.m += c.m;
        total.s += c.s;
        total.sm += c.sm;
      }
      taxonomy.push_back({tag, total});
    };
    add("one_voxel", MatchCriterion::one_voxel());
    for (double t : taus) add(format_double(t), MatchCriterion::iou(t));
  }

  // pooled lesions for decile stratification at the one-voxel criterion
  std::vector<std::pair<std::string, DecileReport>> deciles;
  {
    std::vector<LesionSample> by_volume = lesion_samples(records, DecileAxis::volume);
    if (by_volume.size() >= 10) deciles.push_back({"volume_ml", stratified_sensitivity(by_volume)});
    try {
      std::vector<LesionSample> by_suv = lesion_samples(records, DecileAxis::suv_max);
      if (by_suv.size() >= 10) deciles.push_back({"suv_max", stratified_sensitivity(by_suv)});
    } catch (const EvalError& e) {
      if (e.kind() != ErrKind::MissingIntensity) throw;
      std::cerr << "note: suv_max deciles skipped (" << e.what() << ")\n";
    }
  }

  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "sweep.json").string(),
                  sweep_to_json(curve, taxonomy, deciles));
  std::cout << "sweep over " << tables.size() << " overlap records, " << curve.size()
            << " criteria -> " << out_dir << "\n";
  return 0;
}

int cmd_ensemble(const std::string& inputs_str, const std::string& out_path) {
  std::vector<std::string> paths;
  std::string cur;
  for (char c : inputs_str) {
    if (c == ',') {
      if (!cur.empty()) paths.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) paths.push_back(cur);

  std::vector<LabelVolume> masks;
  for (const auto& p : paths) masks.push_back(to_label(read_volume_file(p)));
  LabelVolume vote = majority_vote(masks);
  std::vector<double> voxels(vote.voxels.begin(), vote.voxels.end());
  write_volume_file(out_path, vote.geometry, voxels, VoxelDtype::u8);
  std::cout << "ensemble of " << masks.size() << " masks -> " << out_path << "\n";
  return 0;
}

int cmd_synth(const std::string& params_path, int cases_per_subset, std::uint64_t seed,
              const std::string& out_dir, const std::string& format) {
  SynthParams params;
  if (!params_path.empty()) {
    params = synth_params_from_json(read_text_file(params_path));
  } else {
    params.grid = GridGeometry(32, 32, 32, 2.0, 2.0, 2.0);
    params.lesion_count_min = 1;
    params.lesion_count_max = 4;
    params.radius_mm_min = 2.5;
    params.radius_mm_max = 7.0;
    params.lesion_negative_prob = 0.15;
    params.algorithms = {
        {"alg_fine", 0, 0, 0.05, 0.3},
        {"alg_mid", 0, 1, 0.15, 1.0},
        {"alg_coarse", 1, 0, 0.30, 2.0},
    };
  }
  if (cases_per_subset < 1) fail(ErrKind::InvalidArgument, "--cases must be >= 1");
  std::string ext = format == "rawjson" ? ".rawjson" : ".nii";

  fs::create_directories(fs::path(out_dir) / "refs");
  fs::create_directories(fs::path(out_dir) / "suv");
  for (const auto& alg : params.algorithms)
    fs::create_directories(fs::path(out_dir) / "preds" / safe_name(alg.name));

  CaseManifest manifest;
  int case_counter = 0;
  for (int s = 0; s < kNumSubsets; ++s) {
    for (int i = 0; i < cases_per_subset; ++i, ++case_counter) {
      SubsetKey subset = subset_from_index(s);
      char id[64];
      std::snprintf(id, sizeof(id), "%s_%03d", to_string(subset).c_str(), i);
      SynthCase c = synth_case(params, derive_seed(seed, static_cast<std::uint64_t>(case_counter)));

      ManifestEntry entry;
      entry.case_id = id;
      entry.subset = subset;
      std::string ref_rel = "refs/" + std::string(id) + ext;
      std::string suv_rel = "suv/" + std::string(id) + ext;
      {
        std::vector<double> voxels(c.reference.voxels.begin(), c.reference.voxels.end());
        write_volume_file((fs::path(out_dir) / ref_rel).string(), params.grid, voxels,
                          VoxelDtype::u8);
      }
      write_volume_file((fs::path(out_dir) / suv_rel).string(), params.grid, c.intensity.voxels,
                        VoxelDtype::f32);
      entry.reference_path = ref_rel;
      entry.intensity_path = suv_rel;
      for (std::size_t a = 0; a < params.algorithms.size(); ++a) {
        std::string rel =
            "preds/" + safe_name(params.algorithms[a].name) + "/" + std::string(id) + ext;
        std::vector<double> voxels(c.predictions[a].voxels.begin(), c.predictions[a].voxels.end());
        write_volume_file((fs::path(out_dir) / rel).string(), params.grid, voxels, VoxelDtype::u8);
        entry.prediction_paths[params.algorithms[a].name] = rel;
      }
      manifest.entries.push_back(entry);
    }
  }
  write_text_file((fs::path(out_dir) / "manifest.json").string(), manifest_to_json(manifest));
  std::cout << "synthesized " << manifest.entries.size() << " cases x "
            << params.algorithms.size() << " algorithms -> " << out_dir << "\n";
  return 0;
}

int cmd_ablate(const std::string& input, const std::string& output, const std::string& box_str) {
  BoxRegion region = parse_box(box_str);
  RawVolume raw = read_volume_file(input);
  LabelVolume mask = to_label(raw);
  LabelVolume out = exclude_region(mask, region);
  std::vector<double> voxels(out.voxels.begin(), out.voxels.end());
  write_volume_file(output, out.geometry, voxels, VoxelDtype::u8);
  std::cout << "excluded region removed " << (mask.foreground_count() - out.foreground_count())
            << " foreground voxels -> " << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PET/CT lesion-segmentation challenge evaluation toolkit"};
  app.require_subcommand(1);

  // evaluate
  std::string manifest_path, config_path, out_dir;
  int workers = 0, connectivity = 0;
  auto* evaluate = app.add_subcommand("evaluate", "run per-case metrics over a manifest");
  evaluate->add_option("--manifest", manifest_path, "manifest JSON")->required();
  evaluate->add_option("--config", config_path, "evaluation config JSON");
  evaluate->add_option("--out", out_dir, "output directory")->required();
  evaluate->add_option("--workers", workers, "worker threads (env LESIONEVAL_WORKERS overrides)");
  evaluate->add_option("--connectivity", connectivity, "6, 18 or 26");

  // rank
  std::string metrics_path, method_str = "R1", weights_str, teams_path, rank_out;
  auto* rank = app.add_subcommand("rank", "rank algorithms from a metrics table");
  rank->add_option("--metrics", metrics_path, "metrics.csv from evaluate")->required();
  rank->add_option("--method", method_str, "R1|R2|R3|R4|R5");
  rank->add_option("--weights", weights_str, "w_dsc,w_fpv,w_fnv (default 0.5,0.25,0.25)");
  rank->add_option("--teams", teams_path, "algorithm->team/reference JSON");
  rank->add_option("--out", rank_out, "output directory")->required();

  // bootstrap
  std::string boot_metrics, boot_weights, boot_out;
  std::int64_t replicates = 2000;
  std::uint64_t boot_seed = 0;
  int boot_workers = 0;
  auto* bootstrap = app.add_subcommand("bootstrap", "rank stability under case resampling");
  bootstrap->add_option("--metrics", boot_metrics, "metrics.csv from evaluate")->required();
  bootstrap->add_option("--replicates", replicates, "bootstrap replicates (default 2000)");
  bootstrap->add_option("--seed", boot_seed, "RNG seed")->required();
  bootstrap->add_option("--weights", boot_weights, "w_dsc,w_fpv,w_fnv");
  bootstrap->add_option("--workers", boot_workers, "worker threads");
  bootstrap->add_option("--out", boot_out, "output directory")->required();

  // sweep
  std::string sweep_dir, taus_str, sweep_out;
  auto* sweep = app.add_subcommand("sweep", "detection sensitivity and error taxonomy vs tau");
  sweep->add_option("--metrics-dir", sweep_dir, "evaluate output directory")->required();
  sweep->add_option("--taus", taus_str, "start:stop:step (default 0.01:0.5:0.01)");
  sweep->add_option("--out", sweep_out, "output directory")->required();

  // ensemble
  std::string ensemble_inputs, ensemble_out;
  auto* ensemble = app.add_subcommand("ensemble", "voxelwise majority vote");
  ensemble->add_option("--inputs", ensemble_inputs, "comma-separated mask paths")->required();
  ensemble->add_option("--out", ensemble_out, "output mask path")->required();

  // synth
  std::string synth_params, synth_out, synth_format = "nii";
  int synth_cases = 0;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic challenge");
  synth->add_option("--params", synth_params, "synthesis parameters JSON");
  synth->add_option("--cases", synth_cases, "cases per subset")->required();
  synth->add_option("--seed", synth_seed, "RNG seed")->required();
  synth->add_option("--format", synth_format, "nii|rawjson");
  synth->add_option("--out", synth_out, "output directory")->required();

  // ablate-region
  std::string ablate_in, ablate_out, ablate_box;
  auto* ablate = app.add_subcommand("ablate-region", "zero a box region of a mask");
  ablate->add_option("--input", ablate_in, "input mask")->required();
  ablate->add_option("--out", ablate_out, "output mask")->required();
  ablate->add_option("--box", ablate_box, "x0:x1,y0:y1,z0:z1 (inclusive)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (evaluate->parsed())
      return cmd_evaluate(manifest_path, config_path, out_dir, workers, connectivity);
    if (rank->parsed()) return cmd_rank(metrics_path, method_str, weights_str, teams_path, rank_out);
    if (bootstrap->parsed())
      return cmd_bootstrap(boot_metrics, replicates, boot_seed, boot_weights, boot_workers,
                           boot_out);
    if (sweep->parsed()) return cmd_sweep(sweep_dir, taus_str, sweep_out);
    if (ensemble->parsed()) return cmd_ensemble(ensemble_inputs, ensemble_out);
    if (synth->parsed())
      return cmd_synth(synth_params, synth_cases, synth_seed, synth_out, synth_format);
    if (ablate->parsed()) return cmd_ablate(ablate_in, ablate_out, ablate_box);
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
