#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bugcast/history.hpp"
#include "bugcast/szz.hpp"

namespace bugcast {

// The six process metrics of one (file, commit) change event.
struct FeatureVector {
  std::uint64_t n_authors = 0;  // distinct authors over the file's events so far
  double age_days = 0.0;        // days since the file's previous event, 0 at birth
  std::uint64_t n_changes = 0;  // events so far, including this one
  std::uint64_t loc = 0;        // post-image lines
  std::uint64_t lines_added = 0;
  std::uint64_t lines_deleted = 0;

  bool operator==(const FeatureVector&) const = default;
};

struct FeatureRow {
  std::string commit_hash;
  std::string path;
  ChangeKind change_kind = ChangeKind::modified;
  FeatureVector features;
};

// Walks events in history order, following renames; counts continue across a
// rename and restart when a deleted path is re-added.
std::vector<FeatureRow> compute_features(const History& history);

struct LabeledSample {
  std::string commit_hash;
  std::string path;
  std::uint64_t n_authors = 0;
  double age_days = 0.0;
  std::uint64_t n_changes = 0;
  std::uint64_t loc = 0;
  std::uint64_t lines_added = 0;
  std::uint64_t lines_deleted = 0;
  int buggy = 0;

  bool operator==(const LabeledSample&) const = default;
};

struct Dataset {
  std::vector<LabeledSample> samples;

  // Fixed feature order; also the CSV column order.
  static constexpr std::array<std::string_view, 6> feature_names{
      "n_authors", "age_days", "n_changes", "loc", "lines_added", "lines_deleted"};

  std::array<double, 6> feature_values(std::size_t i) const;
  std::vector<int> labels() const;
};

struct JoinStats {
  std::size_t missing_labels = 0;     // feature rows without a label, defaulted clean
  std::size_t deleted_excluded = 0;   // deletion events dropped
};

// Inner join of features with labels, in history order. Deletion events are
// excluded; rows without a label default to clean and are counted.
Dataset build_dataset(const std::vector<FeatureRow>& features, const LabelMap& labels,
                      JoinStats* stats = nullptr);

// dataset.csv, exact header:
// commit_hash,path,n_authors,age_days,n_changes,loc,lines_added,lines_deleted,buggy
void write_dataset_csv(const Dataset& dataset, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace bugcast
