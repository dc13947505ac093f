#include "bugcast/history.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "bugcast/errors.hpp"

namespace bugcast {

namespace {

using nlohmann::json;

bool is_full_hash(std::string_view s) {
  if (s.size() != 40) return false;
  for (char c : s) {
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!hex) return false;
  }
  return true;
}

std::string dump_line(const json& j) {
  // Invalid UTF-8 in commit messages is replaced, not fatal.
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace

std::string_view to_string(ChangeKind kind) {
  switch (kind) {
    case ChangeKind::added:
      return "added";
    case ChangeKind::modified:
      return "modified";
    case ChangeKind::deleted:
      return "deleted";
    case ChangeKind::renamed:
      return "renamed";
  }
  throw InternalError("unreachable change kind");
}

ChangeKind change_kind_from_string(std::string_view s) {
  if (s == "added") return ChangeKind::added;
  if (s == "modified") return ChangeKind::modified;
  if (s == "deleted") return ChangeKind::deleted;
  if (s == "renamed") return ChangeKind::renamed;
  throw DataError("unknown change kind: " + std::string(s));
}

const CommitMeta* History::find_commit(std::string_view hash) const {
  for (const auto& c : commits) {
    if (c.hash == hash) return &c;
  }
  return nullptr;
}

std::size_t History::commit_index(std::string_view hash) const {
  for (std::size_t i = 0; i < commits.size(); ++i) {
    if (commits[i].hash == hash) return i;
  }
  return npos;
}

void validate(const History& history) {
  std::unordered_set<std::string_view> seen;
  for (const auto& c : history.commits) {
    if (!is_full_hash(c.hash)) throw InternalError("malformed commit hash: " + c.hash);
    if (!seen.insert(c.hash).second) throw InternalError("duplicate commit hash: " + c.hash);
    if (c.timestamp < 0) throw InternalError("negative timestamp on " + c.hash);
  }
  for (const auto& e : history.events) {
    if (!seen.count(e.commit_hash)) {
      throw InternalError("event references unknown commit " + e.commit_hash);
    }
    if (e.old_path.has_value() != (e.change_kind == ChangeKind::renamed)) {
      throw InternalError("old_path must be set iff renamed: " + e.path);
    }
    if (e.change_kind == ChangeKind::deleted && e.loc_after != 0) {
      throw InternalError("deleted event with loc_after > 0: " + e.path);
    }
  }
}

void write_history_jsonl(const History& history, std::ostream& out) {
  std::unordered_map<std::string_view, std::vector<const FileChangeEvent*>> by_commit;
  for (const auto& e : history.events) by_commit[e.commit_hash].push_back(&e);

  for (const auto& c : history.commits) {
    json jc{{"type", "commit"},
            {"hash", c.hash},
            {"author_id", c.author_id},
            {"timestamp", c.timestamp},
            {"parent_hashes", c.parent_hashes},
            {"message", c.message}};
    out << dump_line(jc) << '\n';
    auto it = by_commit.find(c.hash);
    if (it == by_commit.end()) continue;
    for (const FileChangeEvent* e : it->second) {
      json je{{"type", "event"},
              {"commit_hash", e->commit_hash},
              {"path", e->path},
              {"change_kind", std::string(to_string(e->change_kind))},
              {"lines_added", e->lines_added},
              {"lines_deleted", e->lines_deleted},
              {"loc_after", e->loc_after}};
      if (e->old_path) je["old_path"] = *e->old_path;
      out << dump_line(je) << '\n';
    }
  }
}

History read_history_jsonl(std::istream& in) {
  History history;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DataError("history line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "commit") {
      CommitMeta c;
      c.hash = j.at("hash").get<std::string>();
      c.author_id = j.at("author_id").get<std::string>();
      c.timestamp = j.at("timestamp").get<std::int64_t>();
      c.parent_hashes = j.at("parent_hashes").get<std::vector<std::string>>();
      c.message = j.at("message").get<std::string>();
      history.commits.push_back(std::move(c));
    } else if (type == "event") {
      FileChangeEvent e;
      e.commit_hash = j.at("commit_hash").get<std::string>();
      e.path = j.at("path").get<std::string>();
      e.change_kind = change_kind_from_string(j.at("change_kind").get<std::string>());
      e.lines_added = j.at("lines_added").get<std::uint64_t>();
      e.lines_deleted = j.at("lines_deleted").get<std::uint64_t>();
      e.loc_after = j.at("loc_after").get<std::uint64_t>();
      if (j.contains("old_path")) e.old_path = j.at("old_path").get<std::string>();
      history.events.push_back(std::move(e));
    } else {
      throw DataError("history line " + std::to_string(lineno) + ": unknown record type");
    }
  }
  validate(history);
  return history;
}

void save_history(const History& history, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  write_history_jsonl(history, out);
  if (!out.flush()) throw DataError("failed writing: " + path);
}

History load_history(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  return read_history_jsonl(in);
}

}  // namespace bugcast
