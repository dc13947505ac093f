#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bugcast/history.hpp"

namespace bugcast {

// How bug-fixing commits are recognized in commit messages.
struct FixHeuristic {
  // Matched at word starts on the lowercased message, so "fixed" and
  // "bugfix" hit while "prefix" does not.
  std::vector<std::string> keywords{"fix", "bug", "defect", "fault", "patch", "error"};
  // Issue keys are matched on the original message (case-sensitive).
  std::string issue_pattern{R"([A-Z][A-Z0-9]+-[0-9]+)"};
};

struct BugIntroduction {
  std::string introducing_commit;
  std::string fixing_commit;
  std::string path;  // path as known at the introducing commit

  auto operator<=>(const BugIntroduction&) const = default;
};

// Hashes of commits whose message matches the heuristic.
// Throws ConfigError when the heuristic is invalid (empty keywords, bad regex).
std::set<std::string> identify_fix_commits(const History& history, const FixHeuristic& heuristic);

// Blames every non-cosmetic line deleted or modified by `fix_commit`
// (relative to its first parent) and reports the distinct originating
// (commit, path) pairs. Files under a test/tests path segment are skipped,
// as are introductions that have no matching change event in `history`.
// Throws RootFixCommit when the fix has no parent.
std::set<BugIntroduction> locate_bug_introducers(const std::string& repo_path,
                                                 const History& history,
                                                 const std::string& fix_commit);

struct LabelStats {
  std::size_t fix_commits = 0;
  std::size_t root_fixes_skipped = 0;
  std::size_t ungrounded_dropped = 0;  // blamed outside the mined history
};

// Full SZZ pass: identify fixes, locate introducers for each (root fixes are
// skipped with a warning counted in stats).
std::set<BugIntroduction> run_szz(const std::string& repo_path, const History& history,
                                  const FixHeuristic& heuristic, LabelStats* stats = nullptr);

using LabelKey = std::pair<std::string, std::string>;  // (commit_hash, path)
using LabelMap = std::map<LabelKey, int>;

// One entry per file-change event: 1 iff some introduction names it.
// Throws UnknownIntroduction for introductions not present in history.
LabelMap label_samples(const History& history, const std::set<BugIntroduction>& introductions);

bool is_test_path(std::string_view path);

// labels.csv: commit_hash,path,buggy
void write_labels_csv(const LabelMap& labels, std::ostream& out);
LabelMap read_labels_csv(std::istream& in);
void save_labels(const LabelMap& labels, const std::string& path);
LabelMap load_labels(const std::string& path);

}  // namespace bugcast
