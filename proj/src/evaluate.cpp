// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "lesioneval/volume_io.hpp"

namespace lesioneval {

std::vector<double> EvaluationConfig::default_sweep_taus() {
  std::vector<double> taus;
  for (int i = 1; i <= 50; ++i) taus.push_back(static_cast<double>(i) / 100.0);
  return taus;
}

int resolve_workers(int configured) {
  if (const char* env = std::getenv("LESIONEVAL_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  if (configured > 0) return configured;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

CaseMetrics evaluate_case(const std::string& case_id, const SubsetKey& subset,
                          const std::string& algorithm, const LabelVolume& reference,
                          const LabelVolume& prediction, const IntensityVolume* intensity,
                          const EvaluationConfig& cfg, CaseOverlapRecord* overlap_out) {
  require_same_geometry(reference.geometry, prediction.geometry);
  if (intensity) require_same_geometry(reference.geometry, intensity->geometry);

  CaseMetrics out;
  out.case_id = case_id;
  out.subset = subset;
  out.algorithm = algorithm;

  ComponentLabeling ref_labels = label_components(reference, cfg.connectivity);
  ComponentLabeling pred_labels = label_components(prediction, cfg.connectivity);
  OverlapTable ot = overlap_table(ref_labels, pred_labels);

  out.n_ref = ref_labels.count;
  out.n_pred = pred_labels.count;
  out.reference_empty = ref_labels.count == 0;
  out.prediction_empty = pred_labels.count == 0;

  double v_ml = reference.geometry.voxel_volume_ml();
  std::int64_t ref_voxels = 0, pred_voxels = 0;
  for (auto s : ref_labels.sizes) ref_voxels += s;
  for (auto s : pred_labels.sizes) pred_voxels += s;
  out.ref_tmtv_ml = static_cast<double>(ref_voxels) * v_ml;
  out.pred_volume_ml = static_cast<double>(pred_voxels) * v_ml;

  out.dsc_all = dsc_all(reference, prediction);
  out.fpv_ml = fpv(ot);
  out.volume_diff_ml = volume_difference(reference, prediction);
  out.volume_ratio = volume_ratio(reference, prediction, cfg.ratio);
  if (!out.reference_empty || !out.prediction_empty)
    out.vs = volumetric_similarity(reference, prediction);

  if (!out.reference_empty) {
    // lesion-positive path; empty references are evaluated through FPV only
    out.dsc = dsc(reference, prediction);
    out.fnv_ml = fnv(ot);
    out.nsd = nsd(reference, prediction, cfg.nsd);
    out.cc_dsc = cc_dsc(ref_labels, prediction);
  }

  DetectionFlags flags = detection_flags(ot, MatchCriterion::one_voxel());
  out.detected_refs = flags.detected_count();
  out.matched_preds = flags.matched_count();
  out.taxonomy = error_taxonomy(ot, MatchCriterion::one_voxel());
  out.panoptic = panoptic(ot, cfg.pq_tau);

  if (overlap_out) {
    overlap_out->case_id = case_id;
    overlap_out->subset = subset;
    overlap_out->algorithm = algorithm;
    overlap_out->table = std::move(ot);
    ComponentStats stats = component_stats(ref_labels, intensity);
    overlap_out->ref_volume_ml = stats.volume_ml;
    overlap_out->ref_suv_max = stats.suv_max;
  }
  return out;
}

EvaluationResult evaluate_all(const CaseManifest& manifest, const EvaluationConfig& cfg) {
  struct Job {
    std::size_t entry;
    std::string algorithm;
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < manifest.entries.size(); ++e)
    for (const auto& [alg, path] : manifest.entries[e].prediction_paths) {
      (void)path;
      jobs.push_back({e, alg});
    }

  std::vector<CaseMetrics> rows(jobs.size());
  std::vector<CaseOverlapRecord> overlaps(jobs.size());
  std::vector<char> overlap_ok(jobs.size(), 0);

  auto run_job = [&](std::size_t j) {
    const ManifestEntry& entry = manifest.entries[jobs[j].entry];
    const std::string& alg = jobs[j].algorithm;
    try {
      LabelVolume reference = to_label(read_volume_file(entry.reference_path));
      LabelVolume prediction = to_label(read_volume_file(entry.prediction_paths.at(alg)));
      IntensityVolume intensity;
      const IntensityVolume* intensity_ptr = nullptr;
      if (entry.intensity_path) {
        intensity = to_intensity(read_volume_file(*entry.intensity_path));
        intensity_ptr = &intensity;
      }
      rows[j] = evaluate_case(entry.case_id, entry.subset, alg, reference, prediction,
                              intensity_ptr, cfg, &overlaps[j]);
      overlap_ok[j] = 1;
    } catch (const std::exception& e) {
      CaseMetrics failed;
      failed.case_id = entry.case_id;
      failed.subset = entry.subset;
      failed.algorithm = alg;
      failed.error = e.what();
      rows[j] = std::move(failed);
    }
  };

  int workers = resolve_workers(cfg.workers);
  if (workers <= 1 || jobs.size() <= 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t j = next.fetch_add(1);
          if (j >= jobs.size()) return;
          run_job(j);
        }
      });
    for (auto& t : pool) t.join();
  }

  std::vector<std::size_t> order(jobs.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a].case_id != rows[b].case_id) return rows[a].case_id < rows[b].case_id;
    return rows[a].algorithm < rows[b].algorithm;
  });

  EvaluationResult out;
  std::size_t failures = 0;
  for (std::size_t j : order) {
    if (!rows[j].error.empty()) ++failures;
    else if (overlap_ok[j]) out.overlaps.push_back(std::move(overlaps[j]));
    out.rows.push_back(std::move(rows[j]));
  }
  if (!out.rows.empty() && failures == out.rows.size())
    fail(ErrKind::EmptyPopulation, "every case failed to evaluate");
  return out;
}

std::vector<LesionSample> lesion_samples(const std::vector<CaseOverlapRecord>& records,
                                         DecileAxis axis) {
  std::vector<LesionSample> out;
  for (const auto& rec : records) {
    if (axis == DecileAxis::suv_max &&
        rec.ref_suv_max.size() != rec.ref_volume_ml.size())
      fail(ErrKind::MissingIntensity,
           "case " + rec.case_id + " was evaluated without an intensity volume");
    DetectionFlags flags = detection_flags(rec.table, MatchCriterion::one_voxel());
    for (std::size_t i = 0; i < rec.ref_volume_ml.size(); ++i) {
      double value = axis == DecileAxis::volume ? rec.ref_volume_ml[i] : rec.ref_suv_max[i];
      out.push_back({value, flags.ref_detected[i]});
    }
  }
  return out;
}

LabelVolume majority_vote(const std::vector<LabelVolume>& masks) {
  if (masks.size() < 2) fail(ErrKind::TooFewMasks, "majority vote needs at least 2 masks");
  for (std::size_t i = 1; i < masks.size(); ++i)
    require_same_geometry(masks[0].geometry, masks[i].geometry);

  LabelVolume out(masks[0].geometry);
  std::size_t n = out.voxels.size();
  std::size_t k = masks.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t votes = 0;
    for (std::size_t m = 0; m < k; ++m) votes += masks[m].voxels[i] != 0;
    out.voxels[i] = 2 * votes > k ? 1 : 0;
  }
  return out;
}

}  // namespace lesioneval
