// SPDX-License-Identifier: Apache-2.0
#include "lesioneval/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

namespace lesioneval {

namespace fs = std::filesystem;

std::vector<std::string> CaseManifest::algorithms() const {
  std::set<std::string> names;
  for (const auto& e : entries)
    for (const auto& [name, path] : e.prediction_paths) {
      (void)path;
      names.insert(name);
    }
  return {names.begin(), names.end()};
}

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return p.lexically_normal().string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

std::string require_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    fail(ErrKind::SchemaViolation, std::string("manifest entry needs string field '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

CaseManifest load_manifest(const std::string& json_text, const std::string& base_dir) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrKind::SchemaViolation, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!root.is_object() || !root.contains("cases") || !root["cases"].is_array())
    fail(ErrKind::SchemaViolation, "manifest must be an object with a 'cases' array");

  CaseManifest out;
  out.schema_version = root.value("schema_version", 1);
  if (out.schema_version != 1)
    fail(ErrKind::SchemaViolation,
         "unsupported schema_version " + std::to_string(out.schema_version));

  std::set<std::string> seen_ids;
  for (const auto& c : root["cases"]) {
    if (!c.is_object()) fail(ErrKind::SchemaViolation, "case entries must be objects");
    ManifestEntry entry;
    entry.case_id = require_string(c, "case_id");
    if (!seen_ids.insert(entry.case_id).second)
      fail(ErrKind::DuplicateCase, "duplicate case_id '" + entry.case_id + "'");
    entry.subset = subset_from_string(require_string(c, "subset"));
    entry.reference_path = resolve(base_dir, require_string(c, "reference"));
    if (c.contains("intensity")) {
      if (!c["intensity"].is_string())
        fail(ErrKind::SchemaViolation, "'intensity' must be a string path");
      entry.intensity_path = resolve(base_dir, c["intensity"].get<std::string>());
    }
    if (!c.contains("predictions") || !c["predictions"].is_object())
      fail(ErrKind::SchemaViolation, "case entry needs a 'predictions' object");
    for (const auto& [alg, path] : c["predictions"].items()) {
      if (!path.is_string()) fail(ErrKind::SchemaViolation, "prediction paths must be strings");
      entry.prediction_paths[alg] = resolve(base_dir, path.get<std::string>());
    }

    if (!fs::exists(entry.reference_path))
      fail(ErrKind::MissingFile, entry.reference_path);
    if (entry.intensity_path && !fs::exists(*entry.intensity_path))
      fail(ErrKind::MissingFile, *entry.intensity_path);
    for (const auto& [alg, path] : entry.prediction_paths) {
      (void)alg;
      if (!fs::exists(path)) fail(ErrKind::MissingFile, path);
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

CaseManifest load_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrKind::MissingFile, path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_manifest(text, fs::path(path).parent_path().string());
}

std::string manifest_to_json(const CaseManifest& manifest) {
  nlohmann::json root;
  root["schema_version"] = manifest.schema_version;
  root["cases"] = nlohmann::json::array();
  for (const auto& e : manifest.entries) {
    nlohmann::json c;
    c["case_id"] = e.case_id;
    c["subset"] = to_string(e.subset);
    c["reference"] = e.reference_path;
    if (e.intensity_path) c["intensity"] = *e.intensity_path;
    c["predictions"] = nlohmann::json::object();
    for (const auto& [alg, path] : e.prediction_paths) c["predictions"][alg] = path;
    root["cases"].push_back(c);
  }
  return root.dump(2) + "\n";
}

}  // namespace lesioneval
