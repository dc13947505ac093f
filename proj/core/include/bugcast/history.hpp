#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bugcast {

struct CommitMeta {
  std::string hash;                        // 40-hex
  std::string author_id;                   // "name <email>", lowercased
  std::int64_t timestamp = 0;              // committer time, seconds since epoch (UTC)
  std::vector<std::string> parent_hashes;  // empty for root commits
  std::string message;

  bool operator==(const CommitMeta&) const = default;
};

enum class ChangeKind { added, modified, deleted, renamed };

std::string_view to_string(ChangeKind kind);
ChangeKind change_kind_from_string(std::string_view s);

struct FileChangeEvent {
  std::string commit_hash;
  std::string path;  // post-image path (old path for deletions)
  ChangeKind change_kind = ChangeKind::modified;
  std::uint64_t lines_added = 0;
  std::uint64_t lines_deleted = 0;
  std::uint64_t loc_after = 0;          // post-image line count, 0 when deleted or binary
  std::optional<std::string> old_path;  // set iff renamed

  bool operator==(const FileChangeEvent&) const = default;
};

// Commits in first-parent order (oldest first) with their file events grouped
// per commit in diff order. Immutable once mined; safe to share.
struct History {
  std::vector<CommitMeta> commits;
  std::vector<FileChangeEvent> events;

  const CommitMeta* find_commit(std::string_view hash) const;
  // Position of a commit in history order, or npos.
  std::size_t commit_index(std::string_view hash) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Throws InternalError when an invariant is broken (unknown event commit,
// non-renamed event with old_path, deletion with loc_after > 0, ...).
void validate(const History& history);

// JSON-Lines: one commit record per line followed by its event records.
void write_history_jsonl(const History& history, std::ostream& out);
History read_history_jsonl(std::istream& in);

void save_history(const History& history, const std::string& path);
History load_history(const std::string& path);

}  // namespace bugcast
