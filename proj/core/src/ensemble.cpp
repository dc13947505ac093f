#include "bugcast/ensemble.hpp"

#include <algorithm>

#include "bugcast/errors.hpp"

namespace bugcast {

std::string_view to_string(VoteScheme scheme) {
  return scheme == VoteScheme::soft ? "soft" : "hard";
}

VoteScheme vote_scheme_from_string(std::string_view s) {
  if (s == "soft") return VoteScheme::soft;
  if (s == "hard") return VoteScheme::hard;
  throw ConfigError("unknown vote scheme: " + std::string(s));
}

void VotingSpec::validate() const {
  if (members.size() < 2) throw ConfigError("vote.members needs at least 2 members");
  if (std::find(members.begin(), members.end(), ModelKind::vote) != members.end()) {
    throw ConfigError("vote cannot be its own member");
  }
  if (!weights.empty()) {
    if (weights.size() != members.size()) {
      throw ConfigError("vote.weights length must match vote.members");
    }
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw ConfigError("vote.weights must be non-negative");
      total += w;
    }
    if (total <= 0.0) throw ConfigError("vote.weights must sum to a positive value");
  }
}

std::array<double, 2> soft_vote(std::span<const std::array<double, 2>> member_probabilities,
                                std::span<const double> weights) {
  if (member_probabilities.empty()) throw NoMembers();
  if (!weights.empty() && weights.size() != member_probabilities.size()) {
    throw LengthMismatch(weights.size(), member_probabilities.size());
  }

  std::array<double, 2> sum{0.0, 0.0};
  for (std::size_t i = 0; i < member_probabilities.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    sum[0] += w * member_probabilities[i][0];
    sum[1] += w * member_probabilities[i][1];
  }
  // Renormalize so member vectors that sum to 1 +/- eps cannot drift.
  const double z = sum[0] + sum[1];
  if (z <= 0.0) throw DataError("vote weights sum to zero");
  return {sum[0] / z, sum[1] / z};
}

int hard_vote(std::span<const int> member_votes, std::span<const double> weights) {
  if (member_votes.empty()) throw NoMembers();
  if (!weights.empty() && weights.size() != member_votes.size()) {
    throw LengthMismatch(weights.size(), member_votes.size());
  }

  std::array<double, 2> tally{0.0, 0.0};
  for (std::size_t i = 0; i < member_votes.size(); ++i) {
    tally[member_votes[i] == 1 ? 1 : 0] += weights.empty() ? 1.0 : weights[i];
  }
  return tally[1] > tally[0] ? 1 : 0;
}

VoteModel::VoteModel(std::vector<ClassifierPtr> members, std::vector<double> weights,
                     VoteScheme scheme)
    : members_(std::move(members)), weights_(std::move(weights)), scheme_(scheme) {
  if (members_.empty()) throw NoMembers();
  if (!weights_.empty() && weights_.size() != members_.size()) {
    throw LengthMismatch(weights_.size(), members_.size());
  }
}

std::array<double, 2> VoteModel::predict_proba(std::span<const double> x) const {
  if (scheme_ == VoteScheme::soft) {
    std::vector<std::array<double, 2>> probabilities;
    probabilities.reserve(members_.size());
    for (const auto& member : members_) probabilities.push_back(member->predict_proba(x));
    return soft_vote(probabilities, weights_);
  }

  // Hard voting: weighted vote shares double as a score for AUC; argmax of
  // the shares agrees with hard_vote's tie rule.
  std::array<double, 2> tally{0.0, 0.0};
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const double w = weights_.empty() ? 1.0 : weights_[i];
    tally[members_[i]->predict(x)] += w;
  }
  const double z = tally[0] + tally[1];
  if (z <= 0.0) throw DataError("vote weights sum to zero");
  return {tally[0] / z, tally[1] / z};
}

}  // namespace bugcast
