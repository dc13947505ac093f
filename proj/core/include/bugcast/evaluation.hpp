#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bugcast/ensemble.hpp"
#include "bugcast/learners.hpp"
#include "bugcast/matrix.hpp"
#include "bugcast/preprocess.hpp"

namespace bugcast {

struct ConfusionCounts {
  std::size_t tp = 0;  // class 1 (buggy) is positive
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  static ConfusionCounts from(std::span<const int> labels, std::span<const int> predicted);
};

enum class Averaging { weighted, binary };

struct CoreMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

// Support-weighted per-class averaging with 0/0 -> 0. Weighted recall equals
// accuracy by construction (sum_c support_c * (TP_c/support_c) = correct).
CoreMetrics weighted_metrics(std::span<const int> labels, std::span<const int> predicted);
// Positive-class-only metrics, for comparison runs.
CoreMetrics binary_metrics(std::span<const int> labels, std::span<const int> predicted);
CoreMetrics classification_metrics(std::span<const int> labels, std::span<const int> predicted,
                                   Averaging averaging);

// Mann-Whitney AUC by rank sum, ties counted as 0.5, O(n log n).
// Throws SingleClassEvaluationSet when only one class is present.
double roc_auc(std::span<const double> positive_scores, std::span<const int> labels);

struct MetricSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::optional<double> auc;  // absent when the evaluated set is single-class
};

struct FoldMetrics {
  MetricSummary validation;
  MetricSummary training;  // real training rows, scaled, pre-SMOTE
};

struct ModelEvaluation {
  std::vector<FoldMetrics> per_fold;
  MetricSummary mean_validation;
  MetricSummary mean_training;
  std::size_t auc_defined_folds = 0;        // folds contributing to the AUC mean
  std::size_t train_auc_defined_folds = 0;
};

struct PreprocessSettings {
  bool smote = true;
  std::size_t smote_k = 5;
};

struct EvaluationSettings {
  PreprocessSettings preprocess;
  Averaging averaging = Averaging::weighted;
};

struct EvaluationReport {
  std::string dataset;
  std::uint64_t seed = 0;
  std::size_t folds = 0;
  Averaging averaging = Averaging::weighted;
  bool smote = true;
  std::size_t smote_k = 5;
  std::vector<std::pair<std::string, ModelEvaluation>> models;
};

// One fold's fitted pipeline: scaler from the training partition, then the
// requested models trained on the scaled (and SMOTE-balanced) partition.
// Reads only `train_idx` rows of `data` -- the leakage-guard tests wrap
// `data` in a tracing double to assert exactly that.
struct FittedFold {
  Scaler scaler;
  std::vector<std::pair<ModelKind, ClassifierPtr>> models;
};

FittedFold fit_fold(const RowAccess& data, std::span<const std::size_t> train_idx,
                    const std::vector<ModelKind>& requested, const VotingSpec& vote,
                    const HyperParams& hp, const PreprocessSettings& prep,
                    std::uint64_t fold_seed);

// The k-fold driver: per fold fit -> predict on the untouched validation
// partition -> accumulate per-fold and mean metrics per model.
EvaluationReport cross_validate(const RowAccess& data, const FoldPlan& plan,
                                const std::vector<ModelKind>& models, const VotingSpec& vote,
                                const HyperParams& hp, const EvaluationSettings& settings,
                                const std::string& dataset_name);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const std::string& text);
// Per-model table with the five metric columns.
std::string report_to_markdown(const EvaluationReport& report);

void save_report_json(const EvaluationReport& report, const std::string& path);
EvaluationReport load_report_json(const std::string& path);

}  // namespace bugcast
