#include "bugcast/szz.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_set>

#include "bugcast/errors.hpp"
#include "bugcast/repo_miner.hpp"
#include "csv.hpp"

namespace bugcast {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// True when `keyword` occurs starting at a word boundary. "fixed" and
// "bugfix" match their keywords; "prefix" does not.
bool contains_keyword(const std::string& lower_message, const std::string& keyword) {
  std::size_t pos = 0;
  while ((pos = lower_message.find(keyword, pos)) != std::string::npos) {
    if (pos == 0 || !is_word_char(lower_message[pos - 1])) return true;
    pos += 1;
  }
  return false;
}

std::string ascii_lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool whitespace_only(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

using EventKey = std::pair<std::string_view, std::string_view>;

std::set<EventKey> event_index(const History& history) {
  std::set<EventKey> index;
  for (const auto& e : history.events) index.emplace(e.commit_hash, e.path);
  return index;
}

std::set<BugIntroduction> locate_with_index(const std::string& repo_path, const History& history,
                                            const CommitMeta& fix, const std::set<EventKey>& index,
                                            LabelStats* stats) {
  if (fix.parent_hashes.empty()) throw RootFixCommit(fix.hash);
  const std::string& parent = fix.parent_hashes.front();

  std::set<BugIntroduction> introductions;
  for (const auto& file : diff_deleted_lines(repo_path, parent, fix.hash)) {
    if (is_test_path(file.old_path) || (!file.new_path.empty() && is_test_path(file.new_path))) {
      continue;
    }
    std::set<std::size_t> lines;
    for (const auto& del : file.deleted) {
      if (whitespace_only(del.content)) continue;  // cosmetic
      lines.insert(del.old_lineno);
    }
    if (lines.empty()) continue;

    for (const auto& [line, origin] : blame_origins(repo_path, file.old_path, parent, lines)) {
      (void)line;
      if (!index.count({origin.commit, origin.path})) {
        // Blamed outside the mined first-parent history (e.g. beyond a
        // shallow boundary); cannot be labeled, so it is dropped.
        if (stats) ++stats->ungrounded_dropped;
        continue;
      }
      introductions.insert({origin.commit, fix.hash, origin.path});
    }
  }
  (void)history;
  return introductions;
}

}  // namespace

bool is_test_path(std::string_view path) {
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t pos = path.find('/', start);
    std::string_view segment =
        pos == std::string_view::npos ? path.substr(start) : path.substr(start, pos - start);
    if (segment == "test" || segment == "tests") return true;
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return false;
}

std::set<std::string> identify_fix_commits(const History& history, const FixHeuristic& heuristic) {
  if (heuristic.keywords.empty()) throw ConfigError("fix heuristic needs at least one keyword");
  std::regex issue_re;
  try {
    issue_re = std::regex(heuristic.issue_pattern);
  } catch (const std::regex_error& e) {
    throw ConfigError("invalid issue pattern '" + heuristic.issue_pattern + "': " + e.what());
  }

  std::vector<std::string> keywords;
  keywords.reserve(heuristic.keywords.size());
  for (const auto& k : heuristic.keywords) keywords.push_back(ascii_lower(k));

  std::set<std::string> fixes;
  for (const auto& commit : history.commits) {
    const std::string lower = ascii_lower(commit.message);
    bool is_fix = std::any_of(keywords.begin(), keywords.end(), [&](const std::string& k) {
      return contains_keyword(lower, k);
    });
    if (!is_fix) is_fix = std::regex_search(commit.message, issue_re);
    if (is_fix) fixes.insert(commit.hash);
  }
  return fixes;
}

std::set<BugIntroduction> locate_bug_introducers(const std::string& repo_path,
                                                 const History& history,
                                                 const std::string& fix_commit) {
  const CommitMeta* fix = history.find_commit(fix_commit);
  if (!fix) throw DataError("fix commit not in history: " + fix_commit);
  auto index = event_index(history);
  return locate_with_index(repo_path, history, *fix, index, nullptr);
}

std::set<BugIntroduction> run_szz(const std::string& repo_path, const History& history,
                                  const FixHeuristic& heuristic, LabelStats* stats) {
  auto fixes = identify_fix_commits(history, heuristic);
  auto index = event_index(history);

  std::set<BugIntroduction> introductions;
  for (const auto& commit : history.commits) {  // history order, deterministic
    if (!fixes.count(commit.hash)) continue;
    if (stats) ++stats->fix_commits;
    if (commit.parent_hashes.empty()) {
      if (stats) ++stats->root_fixes_skipped;
      continue;
    }
    auto found = locate_with_index(repo_path, history, commit, index, stats);
    introductions.insert(found.begin(), found.end());
  }
  return introductions;
}

LabelMap label_samples(const History& history, const std::set<BugIntroduction>& introductions) {
  LabelMap labels;
  for (const auto& e : history.events) labels[{e.commit_hash, e.path}] = 0;

  for (const auto& intro : introductions) {
    auto it = labels.find({intro.introducing_commit, intro.path});
    if (it == labels.end()) throw UnknownIntroduction(intro.introducing_commit, intro.path);
    it->second = 1;
  }
  return labels;
}

void write_labels_csv(const LabelMap& labels, std::ostream& out) {
  out << "commit_hash,path,buggy\n";
  for (const auto& [key, buggy] : labels) {
    out << detail::csv_field(key.first) << ',' << detail::csv_field(key.second) << ',' << buggy
        << '\n';
  }
}

LabelMap read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("labels csv is empty");
  if (line != "commit_hash,path,buggy") throw DataError("unexpected labels csv header: " + line);

  LabelMap labels;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto fields = detail::parse_csv_line(line);
    if (fields.size() != 3) {
      throw DataError("labels csv line " + std::to_string(lineno) + ": expected 3 fields");
    }
    int buggy = static_cast<int>(detail::parse_u64(fields[2], "buggy flag"));
    if (buggy != 0 && buggy != 1) {
      throw DataError("labels csv line " + std::to_string(lineno) + ": buggy must be 0/1");
    }
    labels[{fields[0], fields[1]}] = buggy;
  }
  return labels;
}

void save_labels(const LabelMap& labels, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  write_labels_csv(labels, out);
  if (!out.flush()) throw DataError("failed writing: " + path);
}

LabelMap load_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  return read_labels_csv(in);
}

}  // namespace bugcast
