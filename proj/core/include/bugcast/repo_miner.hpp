#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bugcast/history.hpp"

namespace bugcast {

// Extracts the first-parent change history of `branch`, oldest commit first.
// Merge commits contribute their first-parent diff only; renames are detected
// at 50% similarity; binary files produce events with zero line counts.
//
// Throws NotARepository, UnknownBranch, CorruptObject.
History walk_history(const std::string& repo_path, const std::string& branch);

// Maps each requested line (1-based, at `commit`) to the commit that last
// modified it, following renames under first-parent semantics.
//
// Throws PathAbsentAtCommit, LineOutOfRange.
std::map<std::size_t, std::string> blame_lines(const std::string& repo_path,
                                               const std::string& path,
                                               const std::string& commit,
                                               const std::set<std::size_t>& lines);

struct BlameOrigin {
  std::string commit;
  std::string path;  // the file's name in the originating commit
};

// blame_lines plus the originating path of each line.
std::map<std::size_t, BlameOrigin> blame_origins(const std::string& repo_path,
                                                 const std::string& path,
                                                 const std::string& commit,
                                                 const std::set<std::size_t>& lines);

// One line removed from the pre-image of a diff.
struct DeletedLine {
  std::size_t old_lineno = 0;  // 1-based line number in the old blob
  std::string content;
};

struct FileDeletions {
  std::string old_path;  // path in the old commit
  std::string new_path;  // path in the new commit (empty when deleted)
  std::vector<DeletedLine> deleted;
};

// Per-file deleted/modified lines of `commit` relative to `parent`
// (rename detection at 50%). The substrate for bug-introducer location.
std::vector<FileDeletions> diff_deleted_lines(const std::string& repo_path,
                                              const std::string& parent,
                                              const std::string& commit);

}  // namespace bugcast
