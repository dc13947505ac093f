#pragma once

#include <array>
#include <span>
#include <vector>

#include "bugcast/learners.hpp"

namespace bugcast {

enum class VoteScheme { soft, hard };

std::string_view to_string(VoteScheme scheme);
VoteScheme vote_scheme_from_string(std::string_view s);

struct VotingSpec {
  // The seven base learners, in report order.
  std::vector<ModelKind> members{ModelKind::gnb, ModelKind::cart, ModelKind::knn,
                                 ModelKind::lda, ModelKind::logreg, ModelKind::svm,
                                 ModelKind::rf};
  VoteScheme scheme = VoteScheme::soft;
  std::vector<double> weights;  // empty = uniform

  void validate() const;  // throws ConfigError
};

// Weighted arithmetic mean of member probability vectors, renormalized.
// Throws NoMembers.
std::array<double, 2> soft_vote(std::span<const std::array<double, 2>> member_probabilities,
                                std::span<const double> weights);

// Class with the greatest total vote weight; tie -> class 0. Throws NoMembers.
int hard_vote(std::span<const int> member_votes, std::span<const double> weights);

class VoteModel final : public Classifier {
 public:
  VoteModel(std::vector<ClassifierPtr> members, std::vector<double> weights, VoteScheme scheme);
  ModelKind kind() const override { return ModelKind::vote; }
  // Soft: weighted mean of member probabilities. Hard: weighted vote shares.
  std::array<double, 2> predict_proba(std::span<const double> x) const override;

  const std::vector<ClassifierPtr>& members() const { return members_; }

 private:
  std::vector<ClassifierPtr> members_;
  std::vector<double> weights_;
  VoteScheme scheme_;
};

}  // namespace bugcast
