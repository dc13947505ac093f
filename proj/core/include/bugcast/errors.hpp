#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bugcast {

// Error categories map to CLI exit codes:
//   ConfigError=2, RepoError=3, DataError=4, InternalError=5.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class RepoError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class InternalError : public Error {
 public:
  using Error::Error;
};

// --- repository mining ---

class NotARepository : public RepoError {
 public:
  explicit NotARepository(const std::string& what) : RepoError("not a git repository: " + what) {}
};

class UnknownBranch : public RepoError {
 public:
  explicit UnknownBranch(const std::string& branch) : RepoError("unknown branch: " + branch) {}
};

class CorruptObject : public RepoError {
 public:
  explicit CorruptObject(const std::string& hash, const std::string& detail)
      : RepoError("corrupt object " + hash + ": " + detail), hash_(hash) {}
  const std::string& hash() const { return hash_; }

 private:
  std::string hash_;
};

class PathAbsentAtCommit : public RepoError {
 public:
  PathAbsentAtCommit(const std::string& path, const std::string& commit)
      : RepoError("no such path " + path + " at " + commit) {}
};

class LineOutOfRange : public RepoError {
 public:
  LineOutOfRange(std::size_t line, std::size_t file_lines)
      : RepoError("line " + std::to_string(line) + " out of range (file has " +
                  std::to_string(file_lines) + " lines)") {}
};

// --- labeling ---

class RootFixCommit : public DataError {
 public:
  explicit RootFixCommit(const std::string& hash)
      : DataError("fix commit " + hash + " has no parent") {}
};

class UnknownIntroduction : public DataError {
 public:
  UnknownIntroduction(const std::string& commit, const std::string& path)
      : DataError("bug introduction (" + commit + ", " + path + ") not present in history") {}
};

// --- preprocessing / training ---

class TooFewSamples : public DataError {
 public:
  TooFewSamples(int class_label, std::size_t count, std::size_t k)
      : DataError("class " + std::to_string(class_label) + " has " + std::to_string(count) +
                  " samples, fewer than k=" + std::to_string(k)),
        class_label_(class_label),
        count_(count) {}
  int class_label() const { return class_label_; }
  std::size_t count() const { return count_; }

 private:
  int class_label_;
  std::size_t count_;
};

class EmptyTrainingSet : public DataError {
 public:
  EmptyTrainingSet() : DataError("training set is empty") {}
};

class DegenerateMinority : public DataError {
 public:
  explicit DegenerateMinority(std::size_t count)
      : DataError("minority class has " + std::to_string(count) +
                  " samples, SMOTE needs at least 2") {}
};

class KTooLarge : public DataError {
 public:
  KTooLarge(std::size_t k, std::size_t n)
      : DataError("k=" + std::to_string(k) + " exceeds training size " + std::to_string(n)) {}
};

class SingleClassTrainingSet : public DataError {
 public:
  SingleClassTrainingSet() : DataError("training set contains a single class") {}
};

// --- evaluation ---

class EmptyEvaluationSet : public DataError {
 public:
  EmptyEvaluationSet() : DataError("evaluation set is empty") {}
};

class LengthMismatch : public DataError {
 public:
  LengthMismatch(std::size_t a, std::size_t b)
      : DataError("sequence lengths differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

class SingleClassEvaluationSet : public DataError {
 public:
  SingleClassEvaluationSet() : DataError("AUC needs both classes in the evaluation set") {}
};

class NoMembers : public DataError {
 public:
  NoMembers() : DataError("voting requires at least one member") {}
};

}  // namespace bugcast
