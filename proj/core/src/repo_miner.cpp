#include "bugcast/repo_miner.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>

#include "bugcast/errors.hpp"
#include "subprocess.hpp"

namespace bugcast {

namespace {

using detail::CommandResult;
using detail::PipeProcess;
using detail::run_command;

constexpr std::string_view kNullSha = "0000000000000000000000000000000000000000";

CommandResult git(const std::string& repo, std::vector<std::string> args) {
  std::vector<std::string> argv{"git", "-C", repo};
  for (auto& a : args) argv.push_back(std::move(a));
  return run_command(argv);
}

std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

std::string ascii_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Undoes git's C-style path quoting ("a\tb", "\303\251", ...).
std::string unquote_git_path(std::string_view s) {
  if (s.size() < 2 || s.front() != '"' || s.back() != '"') return std::string(s);
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    char c = s[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    ++i;
    if (i >= s.size() - 1) break;
    char e = s[i];
    switch (e) {
      case 'a': out.push_back('\a'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 't': out.push_back('\t'); break;
      case 'v': out.push_back('\v'); break;
      case '\\': out.push_back('\\'); break;
      case '"': out.push_back('"'); break;
      default:
        if (e >= '0' && e <= '7') {
          int v = 0;
          std::size_t digits = 0;
          while (digits < 3 && i + 1 < s.size() && s[i] >= '0' && s[i] <= '7') {
            v = v * 8 + (s[i] - '0');
            ++i;
            ++digits;
          }
          --i;
          out.push_back(static_cast<char>(v));
        } else {
          out.push_back(e);
        }
    }
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_count(std::string_view s, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InternalError(std::string("cannot parse ") + what + ": " + std::string(s));
  }
  return value;
}

void ensure_repository(const std::string& repo) {
  auto res = git(repo, {"rev-parse", "--git-dir"});
  if (!res.ok()) throw NotARepository(repo);
}

std::string resolve_commitish(const std::string& repo, const std::string& name) {
  auto res = git(repo, {"rev-parse", "--verify", "--quiet", name + "^{commit}"});
  if (!res.ok()) return {};
  return strip_trailing_newlines(res.out);
}

// Raw diff entry (":oldmode newmode oldsha newsha STATUS\tpath[\tpath2]").
struct RawEntry {
  std::string old_mode;
  std::string new_mode;
  std::string new_sha;
  char status = 'M';
  std::string path;      // post-image path (old path for deletions)
  std::string old_path;  // set for renames
};

RawEntry parse_raw_line(std::string_view line) {
  // line starts with ':'
  auto tab = line.find('\t');
  if (tab == std::string_view::npos) throw InternalError("malformed raw diff line");
  std::string_view head = line.substr(1, tab - 1);
  std::string_view paths = line.substr(tab + 1);

  auto fields = split(head, ' ');
  if (fields.size() < 5) throw InternalError("malformed raw diff header");

  RawEntry entry;
  entry.old_mode = std::string(fields[0]);
  entry.new_mode = std::string(fields[1]);
  entry.new_sha = std::string(fields[3]);
  entry.status = fields[4].empty() ? 'M' : fields[4][0];

  auto path_fields = split(paths, '\t');
  if (entry.status == 'R' || entry.status == 'C') {
    if (path_fields.size() != 2) throw InternalError("rename entry without two paths");
    entry.old_path = unquote_git_path(path_fields[0]);
    entry.path = unquote_git_path(path_fields[1]);
  } else {
    entry.path = unquote_git_path(path_fields[0]);
  }
  return entry;
}

struct NumstatEntry {
  bool binary = false;
  std::uint64_t added = 0;
  std::uint64_t deleted = 0;
};

NumstatEntry parse_numstat_line(std::string_view line) {
  auto t1 = line.find('\t');
  auto t2 = line.find('\t', t1 + 1);
  if (t1 == std::string_view::npos || t2 == std::string_view::npos) {
    throw InternalError("malformed numstat line");
  }
  std::string_view added = line.substr(0, t1);
  std::string_view deleted = line.substr(t1 + 1, t2 - t1 - 1);
  NumstatEntry entry;
  if (added == "-" || deleted == "-") {
    entry.binary = true;
  } else {
    entry.added = parse_count(added, "numstat added");
    entry.deleted = parse_count(deleted, "numstat deleted");
  }
  return entry;
}

// Counts lines of a blob the way numstat does: a final unterminated line counts.
class BlobLineCounter {
 public:
  explicit BlobLineCounter(const std::string& repo)
      : proc_({"git", "-C", repo, "cat-file", "--batch"}) {}

  std::uint64_t count_lines(const std::string& sha) {
    proc_.write_line(sha);
    std::string header = proc_.read_line();
    auto fields = split(header, ' ');
    if (fields.size() < 3 || fields[1] != "blob") {
      throw CorruptObject(sha, "cat-file: " + header);
    }
    std::size_t size = parse_count(fields[2], "blob size");
    std::string content = proc_.read_exact(size);
    proc_.read_exact(1);  // trailing LF of the batch protocol
    if (content.empty()) return 0;
    std::uint64_t lines = static_cast<std::uint64_t>(std::count(content.begin(), content.end(), '\n'));
    if (content.back() != '\n') ++lines;
    return lines;
  }

 private:
  PipeProcess proc_;
};

std::vector<CommitMeta> read_commit_metadata(const std::string& repo, const std::string& branch) {
  auto res = git(repo, {"log", branch, "--first-parent", "--reverse", "-z",
                        "--format=%H%x1f%P%x1f%an%x1f%ae%x1f%ct%x1f%B"});
  if (!res.ok()) {
    if (res.err.find("bad object") != std::string::npos ||
        res.err.find("could not read") != std::string::npos ||
        res.err.find("corrupt") != std::string::npos) {
      throw CorruptObject(branch, strip_trailing_newlines(res.err));
    }
    throw RepoError("git log failed: " + strip_trailing_newlines(res.err));
  }

  std::vector<CommitMeta> commits;
  for (std::string_view record : split(res.out, '\0')) {
    if (record.empty()) continue;
    auto fields = split(record, '\x1f');
    if (fields.size() != 6) throw InternalError("malformed log record");
    CommitMeta c;
    c.hash = std::string(fields[0]);
    if (!fields[1].empty()) {
      for (auto p : split(fields[1], ' ')) c.parent_hashes.emplace_back(p);
    }
    c.author_id = ascii_lower(std::string(fields[2])) + " <" + ascii_lower(std::string(fields[3])) + ">";
    c.timestamp = static_cast<std::int64_t>(parse_count(fields[4], "timestamp"));
    c.message = strip_trailing_newlines(std::string(fields[5]));
    commits.push_back(std::move(c));
  }
  return commits;
}

}  // namespace

History walk_history(const std::string& repo_path, const std::string& branch) {
  ensure_repository(repo_path);
  if (resolve_commitish(repo_path, "HEAD").empty() &&
      git(repo_path, {"rev-list", "-n", "1", "--all"}).out.empty()) {
    throw NotARepository("no HEAD in " + repo_path);
  }
  if (resolve_commitish(repo_path, branch).empty()) throw UnknownBranch(branch);

  History history;
  history.commits = read_commit_metadata(repo_path, branch);

  // Diff stream: one %x01<hash> header per commit, then raw entries and
  // numstat entries for the same file list, pairable by position.
  auto res = git(repo_path, {"log", branch, "--first-parent", "--reverse",
                             "--diff-merges=first-parent", "--find-renames=50%", "--raw",
                             "--numstat", "--no-abbrev", "--format=%x01%H"});
  if (!res.ok()) {
    throw RepoError("git log --raw failed: " + strip_trailing_newlines(res.err));
  }

  BlobLineCounter counter(repo_path);

  std::string current_commit;
  std::vector<RawEntry> raw_entries;
  std::vector<NumstatEntry> numstat_entries;

  auto flush_commit = [&]() {
    if (current_commit.empty()) return;
    if (raw_entries.size() != numstat_entries.size()) {
      throw InternalError("raw/numstat entry count mismatch at " + current_commit);
    }
    for (std::size_t i = 0; i < raw_entries.size(); ++i) {
      const RawEntry& raw = raw_entries[i];
      const NumstatEntry& stat = numstat_entries[i];
      if (raw.old_mode == "160000" || raw.new_mode == "160000") continue;  // gitlinks

      FileChangeEvent event;
      event.commit_hash = current_commit;
      event.path = raw.path;
      switch (raw.status) {
        case 'A':
        case 'C':
          event.change_kind = ChangeKind::added;
          break;
        case 'D':
          event.change_kind = ChangeKind::deleted;
          break;
        case 'R':
          event.change_kind = ChangeKind::renamed;
          event.old_path = raw.old_path;
          break;
        default:  // M, T
          event.change_kind = ChangeKind::modified;
      }
      if (!stat.binary) {
        event.lines_added = stat.added;
        event.lines_deleted = stat.deleted;
      }
      if (event.change_kind != ChangeKind::deleted && !stat.binary &&
          raw.new_sha != kNullSha) {
        event.loc_after = counter.count_lines(raw.new_sha);
      }
      history.events.push_back(std::move(event));
    }
    raw_entries.clear();
    numstat_entries.clear();
  };

  std::size_t pos = 0;
  while (pos < res.out.size()) {
    std::size_t eol = res.out.find('\n', pos);
    if (eol == std::string::npos) eol = res.out.size();
    std::string_view line(res.out.data() + pos, eol - pos);
    pos = eol + 1;

    if (line.empty()) continue;
    if (line[0] == '\x01') {
      flush_commit();
      current_commit = std::string(line.substr(1));
    } else if (line[0] == ':') {
      raw_entries.push_back(parse_raw_line(line));
    } else {
      numstat_entries.push_back(parse_numstat_line(line));
    }
  }
  flush_commit();

  validate(history);
  return history;
}

namespace {

std::map<std::size_t, BlameOrigin> parse_blame(const std::string& repo_path,
                                               const std::string& path,
                                               const std::string& commit) {
  auto res = git(repo_path, {"blame", "--first-parent", "--line-porcelain", commit, "--", path});
  if (!res.ok()) {
    if (res.err.find("no such path") != std::string::npos) {
      throw PathAbsentAtCommit(path, commit);
    }
    throw RepoError("git blame failed: " + strip_trailing_newlines(res.err));
  }

  // --line-porcelain: "<sha> <orig> <final> [span]", full headers (among them
  // "filename <path-at-origin>"), then one tab-prefixed content line.
  std::map<std::size_t, BlameOrigin> origins;
  std::size_t current_line = 0;
  bool in_entry = false;
  for (std::string_view line : split(res.out, '\n')) {
    if (line.empty()) continue;
    if (line[0] == '\t') {
      in_entry = false;
      continue;
    }
    if (!in_entry && line.size() > 41 && line[40] == ' ') {
      auto fields = split(line, ' ');
      if (fields.size() >= 3 && fields[0].size() == 40) {
        current_line = parse_count(fields[2], "blame line number");
        origins[current_line].commit = std::string(fields[0]);
        in_entry = true;
        continue;
      }
    }
    if (in_entry && line.rfind("filename ", 0) == 0) {
      origins[current_line].path = unquote_git_path(line.substr(9));
    }
  }
  return origins;
}

}  // namespace

std::map<std::size_t, BlameOrigin> blame_origins(const std::string& repo_path,
                                                 const std::string& path,
                                                 const std::string& commit,
                                                 const std::set<std::size_t>& lines) {
  ensure_repository(repo_path);
  auto origins = parse_blame(repo_path, path, commit);
  std::size_t total_lines = origins.empty() ? 0 : origins.rbegin()->first;

  std::map<std::size_t, BlameOrigin> result;
  for (std::size_t line : lines) {
    auto it = origins.find(line);
    if (it == origins.end()) throw LineOutOfRange(line, total_lines);
    result[line] = it->second;
  }
  return result;
}

std::map<std::size_t, std::string> blame_lines(const std::string& repo_path,
                                               const std::string& path,
                                               const std::string& commit,
                                               const std::set<std::size_t>& lines) {
  std::map<std::size_t, std::string> result;
  for (auto& [line, origin] : blame_origins(repo_path, path, commit, lines)) {
    result[line] = std::move(origin.commit);
  }
  return result;
}

std::vector<FileDeletions> diff_deleted_lines(const std::string& repo_path,
                                              const std::string& parent,
                                              const std::string& commit) {
  ensure_repository(repo_path);
  auto res = git(repo_path, {"diff", "-U0", "--find-renames=50%", parent, commit});
  if (!res.ok()) {
    throw RepoError("git diff failed: " + strip_trailing_newlines(res.err));
  }

  std::vector<FileDeletions> files;
  FileDeletions* current = nullptr;
  std::size_t old_lineno = 0;
  std::size_t old_remaining = 0;
  std::size_t new_remaining = 0;

  auto parse_range = [](std::string_view range) -> std::pair<std::size_t, std::size_t> {
    auto comma = range.find(',');
    if (comma == std::string_view::npos) return {parse_count(range, "hunk start"), 1};
    return {parse_count(range.substr(0, comma), "hunk start"),
            parse_count(range.substr(comma + 1), "hunk count")};
  };

  for (std::string_view line : split(res.out, '\n')) {
    if (old_remaining > 0 || new_remaining > 0) {
      // Inside a hunk the leading character is authoritative; header-like
      // content ("--- x" as a deleted "-- x") must not end the file section.
      if (!line.empty() && line[0] == '\\') continue;  // "\ No newline at end of file"
      if (!line.empty() && line[0] == '-' && old_remaining > 0) {
        if (current) current->deleted.push_back({old_lineno, std::string(line.substr(1))});
        ++old_lineno;
        --old_remaining;
        continue;
      }
      if (!line.empty() && line[0] == '+' && new_remaining > 0) {
        --new_remaining;
        continue;
      }
      if (!line.empty() && line[0] == ' ') {
        ++old_lineno;
        if (old_remaining > 0) --old_remaining;
        if (new_remaining > 0) --new_remaining;
        continue;
      }
      old_remaining = new_remaining = 0;  // fall through to header handling
    }

    if (line.rfind("diff --git ", 0) == 0) {
      files.emplace_back();
      current = &files.back();
    } else if (line.rfind("--- ", 0) == 0 && current) {
      std::string_view p = line.substr(4);
      if (p != "/dev/null") current->old_path = unquote_git_path(p.substr(2));  // strip "a/"
    } else if (line.rfind("+++ ", 0) == 0 && current) {
      std::string_view p = line.substr(4);
      if (p != "/dev/null") current->new_path = unquote_git_path(p.substr(2));  // strip "b/"
    } else if (line.rfind("@@ -", 0) == 0 && current) {
      // @@ -l[,c] +l'[,c'] @@
      std::string_view body = line.substr(4);
      auto space = body.find(' ');
      auto [old_start, old_count] = parse_range(body.substr(0, space));
      std::string_view rest = body.substr(space + 1);
      if (!rest.empty() && rest[0] == '+') rest.remove_prefix(1);
      auto [new_start, new_count] = parse_range(rest.substr(0, rest.find(' ')));
      (void)new_start;
      old_lineno = old_start;
      old_remaining = old_count;
      new_remaining = new_count;
    }
  }

  std::erase_if(files, [](const FileDeletions& f) { return f.old_path.empty(); });
  return files;
}

}  // namespace bugcast
