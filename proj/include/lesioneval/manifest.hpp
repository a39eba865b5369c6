// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lesioneval/ranking.hpp"

namespace lesioneval {

struct ManifestEntry {
  std::string case_id;
  SubsetKey subset;
  std::string reference_path;
  std::optional<std::string> intensity_path;
  std::map<std::string, std::string> prediction_paths;  // algorithm -> path
};

struct CaseManifest {
  int schema_version = 1;
  std::vector<ManifestEntry> entries;

  /// Algorithm names appearing in any entry, sorted.
  std::vector<std::string> algorithms() const;
};

/// Parse and validate a manifest. Relative paths are resolved against
/// base_dir; every referenced file must exist.
CaseManifest load_manifest(const std::string& json_text, const std::string& base_dir);
CaseManifest load_manifest_file(const std::string& path);

std::string manifest_to_json(const CaseManifest& manifest);

}  // namespace lesioneval
