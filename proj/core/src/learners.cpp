#include <algorithm>

#include "bugcast/errors.hpp"
#include "bugcast/learners.hpp"

namespace bugcast {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::cart:
      return "cart";
    case ModelKind::knn:
      return "knn";
    case ModelKind::lda:
      return "lda";
    case ModelKind::logreg:
      return "lr";
    case ModelKind::gnb:
      return "nb";
    case ModelKind::rf:
      return "rf";
    case ModelKind::svm:
      return "svm";
    case ModelKind::vote:
      return "vote";
  }
  throw InternalError("unreachable model kind");
}

ModelKind model_kind_from_string(std::string_view name) {
  if (name == "cart") return ModelKind::cart;
  if (name == "knn") return ModelKind::knn;
  if (name == "lda") return ModelKind::lda;
  if (name == "lr" || name == "logreg") return ModelKind::logreg;
  if (name == "nb" || name == "gnb") return ModelKind::gnb;
  if (name == "rf") return ModelKind::rf;
  if (name == "svm") return ModelKind::svm;
  if (name == "vote") return ModelKind::vote;
  throw ConfigError("unknown model name: " + std::string(name));
}

std::vector<ModelKind> parse_model_list(std::string_view spec) {
  if (spec == "all") {
    return {ModelKind::gnb, ModelKind::cart, ModelKind::knn,  ModelKind::lda,
            ModelKind::logreg, ModelKind::svm, ModelKind::rf, ModelKind::vote};
  }
  std::vector<ModelKind> kinds;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t pos = spec.find(',', start);
    std::string_view item =
        pos == std::string_view::npos ? spec.substr(start) : spec.substr(start, pos - start);
    if (!item.empty()) {
      ModelKind kind = model_kind_from_string(item);
      if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) kinds.push_back(kind);
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (kinds.empty()) throw ConfigError("empty model list");
  return kinds;
}

}  // namespace bugcast
