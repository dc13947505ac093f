#include "bugcast/dataset.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "bugcast/errors.hpp"
#include "csv.hpp"

namespace bugcast {

namespace {

constexpr std::string_view kDatasetHeader =
    "commit_hash,path,n_authors,age_days,n_changes,loc,lines_added,lines_deleted,buggy";

struct FileState {
  std::set<std::string> authors;
  std::uint64_t n_changes = 0;
  std::int64_t last_timestamp = 0;
};

}  // namespace

std::vector<FeatureRow> compute_features(const History& history) {
  std::unordered_map<std::string, const CommitMeta*> commits;
  for (const auto& c : history.commits) commits.emplace(c.hash, &c);

  std::unordered_map<std::string, std::size_t> commit_order;
  for (std::size_t i = 0; i < history.commits.size(); ++i) {
    commit_order.emplace(history.commits[i].hash, i);
  }

  // Events grouped by commit, processed in history order. Within one commit
  // the pre-commit states are read first and written back afterwards, so an
  // A->B rename plus a fresh A in the same commit cannot interfere.
  std::map<std::size_t, std::vector<const FileChangeEvent*>> by_commit;
  for (const auto& e : history.events) {
    auto it = commit_order.find(e.commit_hash);
    if (it == commit_order.end()) throw InternalError("event with unknown commit " + e.commit_hash);
    by_commit[it->second].push_back(&e);
  }

  std::vector<FeatureRow> rows;
  rows.reserve(history.events.size());
  std::unordered_map<std::string, FileState> states;

  for (const auto& [order, events] : by_commit) {
    const CommitMeta& commit = *commits.at(history.commits[order].hash);

    struct Update {
      std::string path;
      FileState state;
      bool remove = false;
    };
    std::vector<Update> updates;

    for (const FileChangeEvent* event : events) {
      const std::string& source_path =
          event->change_kind == ChangeKind::renamed ? *event->old_path : event->path;

      FileState state;
      if (event->change_kind != ChangeKind::added) {
        auto it = states.find(source_path);
        if (it != states.end()) state = it->second;
      }

      FeatureRow row;
      row.commit_hash = event->commit_hash;
      row.path = event->path;
      row.change_kind = event->change_kind;
      row.features.age_days =
          state.n_changes == 0
              ? 0.0
              : static_cast<double>(std::max<std::int64_t>(0, commit.timestamp - state.last_timestamp)) /
                    86400.0;

      state.authors.insert(commit.author_id);
      state.n_changes += 1;
      state.last_timestamp = commit.timestamp;

      row.features.n_authors = state.authors.size();
      row.features.n_changes = state.n_changes;
      row.features.loc = event->loc_after;
      row.features.lines_added = event->lines_added;
      row.features.lines_deleted = event->lines_deleted;
      rows.push_back(std::move(row));

      if (event->change_kind == ChangeKind::renamed) {
        updates.push_back({source_path, {}, true});
      }
      if (event->change_kind == ChangeKind::deleted) {
        updates.push_back({event->path, {}, true});
      } else {
        updates.push_back({event->path, std::move(state), false});
      }
    }

    // Removals first so an A->B / B->A swap cannot erase a fresh write.
    for (const auto& u : updates) {
      if (u.remove) states.erase(u.path);
    }
    for (auto& u : updates) {
      if (!u.remove) states[u.path] = std::move(u.state);
    }
  }
  return rows;
}

std::array<double, 6> Dataset::feature_values(std::size_t i) const {
  const LabeledSample& s = samples.at(i);
  return {static_cast<double>(s.n_authors), s.age_days,      static_cast<double>(s.n_changes),
          static_cast<double>(s.loc),       static_cast<double>(s.lines_added),
          static_cast<double>(s.lines_deleted)};
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.buggy);
  return out;
}

Dataset build_dataset(const std::vector<FeatureRow>& features, const LabelMap& labels,
                      JoinStats* stats) {
  Dataset dataset;
  dataset.samples.reserve(features.size());
  std::set<std::pair<std::string_view, std::string_view>> seen;

  for (const auto& row : features) {
    if (row.change_kind == ChangeKind::deleted) {
      if (stats) ++stats->deleted_excluded;
      continue;
    }
    if (!seen.emplace(row.commit_hash, row.path).second) {
      throw DataError("duplicate sample (" + row.commit_hash + ", " + row.path + ")");
    }
    int buggy = 0;
    auto it = labels.find({row.commit_hash, row.path});
    if (it == labels.end()) {
      if (stats) ++stats->missing_labels;
    } else {
      buggy = it->second;
    }
    dataset.samples.push_back({row.commit_hash, row.path, row.features.n_authors,
                               row.features.age_days, row.features.n_changes, row.features.loc,
                               row.features.lines_added, row.features.lines_deleted, buggy});
  }
  return dataset;
}

void write_dataset_csv(const Dataset& dataset, std::ostream& out) {
  out << kDatasetHeader << '\n';
  for (const auto& s : dataset.samples) {
    out << detail::csv_field(s.commit_hash) << ',' << detail::csv_field(s.path) << ','
        << s.n_authors << ',' << detail::format_double(s.age_days) << ',' << s.n_changes << ','
        << s.loc << ',' << s.lines_added << ',' << s.lines_deleted << ',' << s.buggy << '\n';
  }
}

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("dataset csv is empty");
  if (line != kDatasetHeader) throw DataError("unexpected dataset csv header: " + line);

  Dataset dataset;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = detail::parse_csv_line(line);
    if (fields.size() != 9) {
      throw DataError("dataset csv line " + std::to_string(lineno) + ": expected 9 fields");
    }
    LabeledSample s;
    s.commit_hash = fields[0];
    s.path = fields[1];
    s.n_authors = detail::parse_u64(fields[2], "n_authors");
    s.age_days = detail::parse_double(fields[3], "age_days");
    s.n_changes = detail::parse_u64(fields[4], "n_changes");
    s.loc = detail::parse_u64(fields[5], "loc");
    s.lines_added = detail::parse_u64(fields[6], "lines_added");
    s.lines_deleted = detail::parse_u64(fields[7], "lines_deleted");
    s.buggy = static_cast<int>(detail::parse_u64(fields[8], "buggy"));
    if (s.buggy != 0 && s.buggy != 1) {
      throw DataError("dataset csv line " + std::to_string(lineno) + ": buggy must be 0/1");
    }
    dataset.samples.push_back(std::move(s));
  }
  return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  write_dataset_csv(dataset, out);
  if (!out.flush()) throw DataError("failed writing: " + path);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  return read_dataset_csv(in);
}

}  // namespace bugcast
