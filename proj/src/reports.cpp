// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace lesioneval {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrKind::IoFailure, "cannot open for write: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) fail(ErrKind::IoFailure, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrKind::MissingFile, path);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string opt_str(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrKind::SchemaViolation, "bad number in metrics table: '" + s + "'");
  return v;
}

const char* kMetricsHeader =
    "case_id,subset,algorithm,error,ref_empty,pred_empty,n_ref,n_pred,ref_tmtv_ml,"
    "pred_volume_ml,dsc,dsc_all,fpv_ml,fnv_ml,nsd,vs,volume_diff_ml,volume_ratio,cc_dsc,"
    "detected_refs,matched_preds,cd,fa,df,m,s,sm,pq,sq,rq,pq_tp,pq_fp,pq_fn";

}  // namespace

std::string metrics_to_csv(const std::vector<CaseMetrics>& rows) {
  std::ostringstream out;
  out << kMetricsHeader << "\n";
  for (const auto& r : rows) {
    out << csv_quote(r.case_id) << ',' << to_string(r.subset) << ',' << csv_quote(r.algorithm)
        << ',' << csv_quote(r.error) << ',';
    if (!r.error.empty()) {
      // failed rows carry identification only
      for (int i = 0; i < 28; ++i) out << ',';
      out << "\n";
      continue;
    }
    out << (r.reference_empty ? 1 : 0) << ',' << (r.prediction_empty ? 1 : 0) << ',' << r.n_ref
        << ',' << r.n_pred << ',' << format_double(r.ref_tmtv_ml) << ','
        << format_double(r.pred_volume_ml) << ',' << opt_str(r.dsc) << ','
        << format_double(r.dsc_all) << ',' << format_double(r.fpv_ml) << ',' << opt_str(r.fnv_ml)
        << ',' << opt_str(r.nsd) << ',' << opt_str(r.vs) << ',' << format_double(r.volume_diff_ml)
        << ',' << format_double(r.volume_ratio) << ',' << opt_str(r.cc_dsc) << ','
        << r.detected_refs << ',' << r.matched_preds << ',' << r.taxonomy.cd << ',' << r.taxonomy.fa
        << ',' << r.taxonomy.df << ',' << r.taxonomy.m << ',' << r.taxonomy.s << ','
        << r.taxonomy.sm << ',' << format_double(r.panoptic.pq) << ','
        << format_double(r.panoptic.sq) << ',' << format_double(r.panoptic.rq) << ','
        << r.panoptic.tp << ',' << r.panoptic.fp << ',' << r.panoptic.fn << "\n";
  }
  return out.str();
}

namespace {

struct MetricsRow {
  std::map<std::string, std::string> fields;
};

std::vector<MetricsRow> parse_metrics_csv(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrKind::SchemaViolation, "metrics table is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = csv_split(line);
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = csv_split(line);
    if (fields.size() != header.size())
      fail(ErrKind::SchemaViolation, "metrics row has wrong number of columns");
    MetricsRow row;
    for (std::size_t i = 0; i < header.size(); ++i) row.fields[header[i]] = fields[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::string& field(const MetricsRow& row, const std::string& name) {
  auto it = row.fields.find(name);
  if (it == row.fields.end())
    fail(ErrKind::SchemaViolation, "metrics table lacks column '" + name + "'");
  return it->second;
}

}  // namespace

std::vector<AlgorithmCases> algorithm_cases_from_csv(const std::string& csv_text) {
  std::map<std::string, AlgorithmCases> by_alg;
  for (const auto& row : parse_metrics_csv(csv_text)) {
    if (!field(row, "error").empty()) continue;  // failed rows carry no metrics
    CaseRecord rec;
    rec.case_id = field(row, "case_id");
    rec.subset = subset_index(subset_from_string(field(row, "subset")));
    const std::string& d = field(row, "dsc");
    if (!d.empty()) rec.metrics.dsc = parse_double(d);
    rec.metrics.fpv_ml = parse_double(field(row, "fpv_ml"));
    const std::string& f = field(row, "fnv_ml");
    if (!f.empty()) rec.metrics.fnv_ml = parse_double(f);
    const std::string& alg = field(row, "algorithm");
    auto& bucket = by_alg[alg];
    bucket.name = alg;
    bucket.cases.push_back(std::move(rec));
  }
  std::vector<AlgorithmCases> out;
  for (auto& [name, cases] : by_alg) {
    (void)name;
    out.push_back(std::move(cases));
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<CaseFlags>>> case_flags_from_csv(
    const std::string& csv_text) {
  std::map<std::string, std::vector<CaseFlags>> by_alg;
  for (const auto& row : parse_metrics_csv(csv_text)) {
    if (!field(row, "error").empty()) continue;
    CaseFlags flags;
    flags.reference_empty = field(row, "ref_empty") == "1";
    flags.prediction_empty = field(row, "pred_empty") == "1";
    by_alg[field(row, "algorithm")].push_back(flags);
  }
  return {by_alg.begin(), by_alg.end()};
}

std::string leaderboard_to_csv(const RankTable& table) {
  // metric presentation order mirrors the official table: DSC, FNV, FPV
  static const Metric order[3] = {Metric::dsc, Metric::fnv, Metric::fpv};
  std::ostringstream out;
  out << "algorithm,team,position,weighted_rank";
  for (Metric m : order) {
    for (int s = 0; s < kNumSubsets; ++s) {
      std::string tag = std::string(to_string(m)) + "_" + to_string(subset_from_index(s));
      out << ',' << tag << ',' << tag << "_rank";
    }
    out << ',' << to_string(m) << "_rank";
  }
  out << "\n";
  for (const auto& row : table.rows) {
    out << csv_quote(row.algorithm) << ',' << csv_quote(row.team) << ',';
    if (row.position > 0) out << row.position;
    out << ',' << format_fixed4(row.weighted_rank);
    for (Metric m : order) {
      int mi = static_cast<int>(m);
      for (int s = 0; s < kNumSubsets; ++s) {
        double v = row.subset_value[mi][s];
        out << ',' << (std::isnan(v) ? std::string() : format_fixed4(v)) << ','
            << format_fixed4(row.subset_rank[mi][s]);
      }
      out << ',' << format_fixed4(row.metric_rank[mi]);
    }
    out << "\n";
  }
  return out.str();
}

std::string rank_table_to_json(const RankTable& table) {
  nlohmann::json root;
  root["method"] = to_string(table.method);
  root["weights"] = {{"dsc", table.weights.w_dsc},
                     {"fpv", table.weights.w_fpv},
                     {"fnv", table.weights.w_fnv}};
  root["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r;
    r["algorithm"] = row.algorithm;
    r["team"] = row.team;
    r["reference"] = row.reference;
    if (row.position > 0) r["position"] = row.position;
    r["weighted_rank"] = row.weighted_rank;
    r["final_rank"] = row.final_rank;
    for (Metric m : kMetrics) {
      int mi = static_cast<int>(m);
      nlohmann::json metric;
      metric["rank"] = row.metric_rank[mi];
      metric["subset_rank"] = row.subset_rank[mi];
      nlohmann::json values = nlohmann::json::array();
      for (int s = 0; s < kNumSubsets; ++s) {
        double v = row.subset_value[mi][s];
        if (std::isnan(v)) values.push_back(nullptr);
        else values.push_back(v);
      }
      metric["subset_value"] = values;
      r[to_string(m)] = metric;
    }
    root["rows"].push_back(r);
  }
  return root.dump(2) + "\n";
}

std::string bootstrap_to_json(const BootstrapSummary& summary) {
  nlohmann::json root;
  root["replicates"] = summary.replicates;
  root["seed"] = summary.seed;
  root["weights"] = {{"dsc", summary.weights.w_dsc},
                     {"fpv", summary.weights.w_fpv},
                     {"fnv", summary.weights.w_fnv}};
  root["algorithms"] = nlohmann::json::array();
  for (const auto& alg : summary.algorithms) {
    nlohmann::json a;
    a["name"] = alg.name;
    a["mean"] = alg.mean;
    a["q025"] = alg.q025;
    a["q25"] = alg.q25;
    a["median"] = alg.median;
    a["q75"] = alg.q75;
    a["q975"] = alg.q975;
    a["rank1_share"] = alg.rank1_share;
    root["algorithms"].push_back(a);
  }
  return root.dump(2) + "\n";
}

std::string bootstrap_to_csv(const BootstrapSummary& summary) {
  std::ostringstream out;
  out << "algorithm,mean,q025,q25,median,q75,q975,rank1_share\n";
  for (const auto& alg : summary.algorithms) {
    out << csv_quote(alg.name) << ',' << format_double(alg.mean) << ',' << format_double(alg.q025)
        << ',' << format_double(alg.q25) << ',' << format_double(alg.median) << ','
        << format_double(alg.q75) << ',' << format_double(alg.q975) << ','
        << format_double(alg.rank1_share) << "\n";
  }
  return out.str();
}

namespace {

std::string criterion_tag(const MatchCriterion& crit) {
  return crit.kind == MatchCriterion::Kind::one_voxel ? "one_voxel" : format_double(crit.tau);
}

}  // namespace

std::string sweep_to_json(const std::vector<SweepPoint>& sensitivity,
                          const std::vector<std::pair<std::string, TaxonomyCounts>>& taxonomy,
                          const std::vector<std::pair<std::string, DecileReport>>& deciles) {
  nlohmann::json root;
  root["sensitivity"] = nlohmann::json::array();
  for (const auto& pt : sensitivity) {
    nlohmann::json p;
    p["criterion"] = criterion_tag(pt.criterion);
    p["detected"] = pt.detected;
    p["total"] = pt.total;
    p["sensitivity"] = pt.sensitivity;
    root["sensitivity"].push_back(p);
  }
  root["taxonomy"] = nlohmann::json::array();
  for (const auto& [tag, t] : taxonomy) {
    nlohmann::json p;
    p["criterion"] = tag;
    p["cd"] = t.cd;
    p["fa"] = t.fa;
    p["df"] = t.df;
    p["m"] = t.m;
    p["s"] = t.s;
    p["sm"] = t.sm;
    root["taxonomy"].push_back(p);
  }
  root["deciles"] = nlohmann::json::array();
  for (const auto& [axis, report] : deciles) {
    nlohmann::json p;
    p["axis"] = axis;
    p["edges"] = report.edges;
    p["total"] = report.total;
    p["detected"] = report.detected;
    nlohmann::json sens = nlohmann::json::array();
    for (double s : report.sensitivity) {
      if (std::isnan(s)) sens.push_back(nullptr);
      else sens.push_back(s);
    }
    p["sensitivity"] = sens;
    root["deciles"].push_back(p);
  }
  return root.dump(2) + "\n";
}

std::string classification_to_json(
    const std::vector<std::pair<std::string, ClassificationSummary>>& per_algorithm) {
  nlohmann::json root = nlohmann::json::array();
  for (const auto& [name, c] : per_algorithm) {
    nlohmann::json a;
    a["algorithm"] = name;
    a["tp"] = c.tp;
    a["tn"] = c.tn;
    a["fp"] = c.fp;
    a["fn"] = c.fn;
    a["sensitivity"] = c.sensitivity;
    a["specificity"] = c.specificity;
    a["accuracy"] = c.accuracy;
    root.push_back(a);
  }
  return root.dump(2) + "\n";
}

std::string overlap_record_to_json(const CaseOverlapRecord& record) {
  nlohmann::json root;
  root["case_id"] = record.case_id;
  root["subset"] = to_string(record.subset);
  root["algorithm"] = record.algorithm;
  root["voxel_volume_ml"] = record.table.voxel_volume_ml;
  root["n_ref"] = record.table.n_ref;
  root["n_pred"] = record.table.n_pred;
  root["ref_sizes"] = record.table.ref_sizes;
  root["pred_sizes"] = record.table.pred_sizes;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [key, n] : record.table.entries)
    entries.push_back({key.first, key.second, n});
  root["entries"] = entries;
  root["ref_volume_ml"] = record.ref_volume_ml;
  if (record.ref_suv_max.empty())
    root["ref_suv_max"] = nullptr;
  else
    root["ref_suv_max"] = record.ref_suv_max;
  return root.dump() + "\n";
}

CaseOverlapRecord overlap_record_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrKind::SchemaViolation, std::string("overlap record: ") + e.what());
  }
  CaseOverlapRecord out;
  out.case_id = j.at("case_id").get<std::string>();
  out.subset = subset_from_string(j.at("subset").get<std::string>());
  out.algorithm = j.at("algorithm").get<std::string>();
  out.table.voxel_volume_ml = j.at("voxel_volume_ml").get<double>();
  out.table.n_ref = j.at("n_ref").get<std::int32_t>();
  out.table.n_pred = j.at("n_pred").get<std::int32_t>();
  out.table.ref_sizes = j.at("ref_sizes").get<std::vector<std::int64_t>>();
  out.table.pred_sizes = j.at("pred_sizes").get<std::vector<std::int64_t>>();
  for (const auto& e : j.at("entries"))
    out.table.entries[{e[0].get<std::int32_t>(), e[1].get<std::int32_t>()}] =
        e[2].get<std::int64_t>();
  out.ref_volume_ml = j.at("ref_volume_ml").get<std::vector<double>>();
  if (!j.at("ref_suv_max").is_null())
    out.ref_suv_max = j.at("ref_suv_max").get<std::vector<double>>();
  return out;
}

}  // namespace lesioneval
