#include "bugcast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "bugcast/errors.hpp"
#include "bugcast/rng.hpp"

namespace bugcast {

namespace {

using nlohmann::json;

// Seed-stream tags within one fold.
constexpr std::uint64_t kSmoteStream = 1;
constexpr std::uint64_t kRfStream = 2;

// Display order mirrors the usual results-table layout.
constexpr std::array<ModelKind, 8> kDisplayOrder{
    ModelKind::gnb, ModelKind::cart, ModelKind::knn, ModelKind::lda,
    ModelKind::logreg, ModelKind::svm, ModelKind::rf, ModelKind::vote};

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

ConfusionCounts ConfusionCounts::from(std::span<const int> labels, std::span<const int> predicted) {
  if (labels.size() != predicted.size()) throw LengthMismatch(labels.size(), predicted.size());
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == 1;
    const bool guessed = predicted[i] == 1;
    if (actual && guessed) ++c.tp;
    else if (!actual && guessed) ++c.fp;
    else if (actual && !guessed) ++c.fn;
    else ++c.tn;
  }
  return c;
}

CoreMetrics classification_metrics(std::span<const int> labels, std::span<const int> predicted,
                                   Averaging averaging) {
  if (labels.empty()) throw EmptyEvaluationSet();
  const ConfusionCounts c = ConfusionCounts::from(labels, predicted);
  const double n = static_cast<double>(c.total());

  const double precision1 = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  const double recall1 = safe_div(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  const double f1_1 = safe_div(2.0 * precision1 * recall1, precision1 + recall1);
  const double accuracy = static_cast<double>(c.tp + c.tn) / n;

  if (averaging == Averaging::binary) {
    return {precision1, recall1, f1_1, accuracy};
  }

  const double precision0 = safe_div(static_cast<double>(c.tn), static_cast<double>(c.tn + c.fn));
  const double recall0 = safe_div(static_cast<double>(c.tn), static_cast<double>(c.tn + c.fp));
  const double f1_0 = safe_div(2.0 * precision0 * recall0, precision0 + recall0);

  const double support1 = static_cast<double>(c.tp + c.fn);
  const double support0 = static_cast<double>(c.tn + c.fp);

  CoreMetrics m;
  m.precision = (support0 * precision0 + support1 * precision1) / n;
  // sum_c support_c * (TP_c / support_c) telescopes to (tp + tn), so the
  // support-weighted recall IS the accuracy; computing it that way keeps the
  // identity exact in floating point as well.
  m.recall = accuracy;
  m.f1 = (support0 * f1_0 + support1 * f1_1) / n;
  m.accuracy = accuracy;
  return m;
}

CoreMetrics weighted_metrics(std::span<const int> labels, std::span<const int> predicted) {
  return classification_metrics(labels, predicted, Averaging::weighted);
}

CoreMetrics binary_metrics(std::span<const int> labels, std::span<const int> predicted) {
  return classification_metrics(labels, predicted, Averaging::binary);
}

double roc_auc(std::span<const double> positive_scores, std::span<const int> labels) {
  if (positive_scores.size() != labels.size()) {
    throw LengthMismatch(positive_scores.size(), labels.size());
  }
  if (labels.empty()) throw EmptyEvaluationSet();

  const std::size_t n = labels.size();
  std::size_t n1 = 0;
  for (int label : labels) n1 += label == 1 ? 1 : 0;
  const std::size_t n0 = n - n1;
  if (n1 == 0 || n0 == 0) throw SingleClassEvaluationSet();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return positive_scores[a] < positive_scores[b];
  });

  // Average ranks over tie groups; U = R1 - n1(n1+1)/2.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && positive_scores[order[j + 1]] == positive_scores[order[i]]) ++j;
    const double average_rank = static_cast<double>(i + 1 + j + 1) / 2.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += average_rank;
    }
    i = j + 1;
  }

  const double u = positive_rank_sum -
                   static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
  return u / (static_cast<double>(n1) * static_cast<double>(n0));
}

namespace {

ClassifierPtr fit_base(ModelKind kind, const Matrix& x, std::span<const int> y,
                       const HyperParams& hp, std::uint64_t fold_seed) {
  switch (kind) {
    case ModelKind::cart:
      return fit_cart(x, y, hp);
    case ModelKind::knn:
      return fit_knn(x, y, hp);
    case ModelKind::lda:
      return fit_lda(x, y, hp);
    case ModelKind::logreg:
      return fit_logreg(x, y, hp);
    case ModelKind::gnb:
      return fit_gnb(x, y, hp);
    case ModelKind::rf:
      return fit_rf(x, y, mix_seed(fold_seed, kRfStream), hp);
    case ModelKind::svm:
      return fit_svm(x, y, hp);
    case ModelKind::vote:
      throw InternalError("vote is not a base model");
  }
  throw InternalError("unreachable model kind");
}

MetricSummary evaluate_model(const Classifier& model, const Matrix& x, std::span<const int> y,
                             Averaging averaging) {
  std::vector<int> predicted(x.rows());
  std::vector<double> scores(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto p = model.predict_proba(x.row(i));
    predicted[i] = p[1] > p[0] ? 1 : 0;
    scores[i] = p[1];
  }

  const CoreMetrics core = classification_metrics(y, predicted, averaging);
  MetricSummary summary;
  summary.precision = core.precision;
  summary.recall = core.recall;
  summary.f1 = core.f1;
  summary.accuracy = core.accuracy;

  const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
  const bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
  if (has0 && has1) summary.auc = roc_auc(scores, y);
  return summary;
}

MetricSummary mean_summary(const std::vector<MetricSummary>& folds, std::size_t* auc_defined) {
  MetricSummary mean;
  double auc_sum = 0.0;
  std::size_t auc_count = 0;
  for (const auto& f : folds) {
    mean.precision += f.precision;
    mean.recall += f.recall;
    mean.f1 += f.f1;
    mean.accuracy += f.accuracy;
    if (f.auc) {
      auc_sum += *f.auc;
      ++auc_count;
    }
  }
  const double k = static_cast<double>(folds.size());
  mean.precision /= k;
  mean.recall /= k;
  mean.f1 /= k;
  mean.accuracy /= k;
  if (auc_count > 0) mean.auc = auc_sum / static_cast<double>(auc_count);
  if (auc_defined) *auc_defined = auc_count;
  return mean;
}

}  // namespace

FittedFold fit_fold(const RowAccess& data, std::span<const std::size_t> train_idx,
                    const std::vector<ModelKind>& requested, const VotingSpec& vote,
                    const HyperParams& hp, const PreprocessSettings& prep,
                    std::uint64_t fold_seed) {
  auto [train_x, train_y] = gather_rows(data, train_idx);

  FittedFold fitted;
  fitted.scaler = fit_scaler(train_x);
  Matrix scaled = apply_scaler(fitted.scaler, train_x);

  Matrix fit_x = scaled;
  std::vector<int> fit_y = train_y;
  if (prep.smote) {
    auto [aug_x, aug_y] =
        smote_oversample(scaled, train_y, prep.smote_k, mix_seed(fold_seed, kSmoteStream));
    fit_x = std::move(aug_x);
    fit_y = std::move(aug_y);
  }

  const bool vote_requested =
      std::find(requested.begin(), requested.end(), ModelKind::vote) != requested.end();

  // Base fits are shared between the singles and the ensemble members; the
  // data, hyperparameters and derived seeds are identical either way.
  std::vector<ModelKind> base_kinds;
  for (ModelKind kind : kDisplayOrder) {
    if (kind == ModelKind::vote) continue;
    const bool wanted =
        std::find(requested.begin(), requested.end(), kind) != requested.end() ||
        (vote_requested &&
         std::find(vote.members.begin(), vote.members.end(), kind) != vote.members.end());
    if (wanted) base_kinds.push_back(kind);
  }

  std::map<ModelKind, ClassifierPtr> fitted_bases;
  for (ModelKind kind : base_kinds) {
    fitted_bases[kind] = fit_base(kind, fit_x, fit_y, hp, fold_seed);
  }

  ClassifierPtr vote_model;
  if (vote_requested) {
    std::vector<ClassifierPtr> members;
    members.reserve(vote.members.size());
    for (ModelKind kind : vote.members) members.push_back(fitted_bases.at(kind));
    vote_model = std::make_shared<VoteModel>(std::move(members), vote.weights, vote.scheme);
  }

  for (ModelKind kind : requested) {
    fitted.models.emplace_back(kind,
                               kind == ModelKind::vote ? vote_model : fitted_bases.at(kind));
  }
  return fitted;
}

EvaluationReport cross_validate(const RowAccess& data, const FoldPlan& plan,
                                const std::vector<ModelKind>& models, const VotingSpec& vote,
                                const HyperParams& hp, const EvaluationSettings& settings,
                                const std::string& dataset_name) {
  if (models.empty()) throw ConfigError("no models requested");
  if (plan.assignment.size() != data.size()) {
    throw LengthMismatch(plan.assignment.size(), data.size());
  }
  vote.validate();

  std::map<ModelKind, std::vector<FoldMetrics>> collected;

  for (std::size_t fold = 0; fold < plan.k; ++fold) {
    const auto train_idx = plan.train_indices(fold);
    const auto val_idx = plan.fold_indices(fold);
    const std::uint64_t fold_seed = mix_seed(plan.seed, fold);

    FittedFold fitted = fit_fold(data, train_idx, models, vote, hp, settings.preprocess, fold_seed);

    auto [train_x_raw, train_y] = gather_rows(data, train_idx);
    auto [val_x_raw, val_y] = gather_rows(data, val_idx);
    const Matrix train_x = apply_scaler(fitted.scaler, train_x_raw);
    const Matrix val_x = apply_scaler(fitted.scaler, val_x_raw);

    for (const auto& [kind, model] : fitted.models) {
      FoldMetrics metrics;
      metrics.validation = evaluate_model(*model, val_x, val_y, settings.averaging);
      metrics.training = evaluate_model(*model, train_x, train_y, settings.averaging);
      collected[kind].push_back(metrics);
    }
  }

  EvaluationReport report;
  report.dataset = dataset_name;
  report.seed = plan.seed;
  report.folds = plan.k;
  report.averaging = settings.averaging;
  report.smote = settings.preprocess.smote;
  report.smote_k = settings.preprocess.smote_k;

  for (ModelKind kind : models) {
    ModelEvaluation evaluation;
    evaluation.per_fold = collected.at(kind);

    std::vector<MetricSummary> val_folds;
    std::vector<MetricSummary> train_folds;
    for (const auto& f : evaluation.per_fold) {
      val_folds.push_back(f.validation);
      train_folds.push_back(f.training);
    }
    evaluation.mean_validation = mean_summary(val_folds, &evaluation.auc_defined_folds);
    evaluation.mean_training = mean_summary(train_folds, &evaluation.train_auc_defined_folds);
    report.models.emplace_back(std::string(to_string(kind)), std::move(evaluation));
  }
  return report;
}

namespace {

json summary_to_json(const MetricSummary& s) {
  json j{{"precision", s.precision},
         {"recall", s.recall},
         {"f1", s.f1},
         {"accuracy", s.accuracy}};
  if (s.auc) {
    j["auc"] = *s.auc;
  } else {
    j["auc"] = nullptr;
  }
  return j;
}

MetricSummary summary_from_json(const json& j) {
  MetricSummary s;
  s.precision = j.at("precision").get<double>();
  s.recall = j.at("recall").get<double>();
  s.f1 = j.at("f1").get<double>();
  s.accuracy = j.at("accuracy").get<double>();
  if (!j.at("auc").is_null()) s.auc = j.at("auc").get<double>();
  return s;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report) {
  json models = json::object();
  for (const auto& [name, evaluation] : report.models) {
    json per_fold = json::array();
    json train_per_fold = json::array();
    for (std::size_t f = 0; f < evaluation.per_fold.size(); ++f) {
      json v = summary_to_json(evaluation.per_fold[f].validation);
      v["fold"] = f;
      per_fold.push_back(std::move(v));
      json t = summary_to_json(evaluation.per_fold[f].training);
      t["fold"] = f;
      train_per_fold.push_back(std::move(t));
    }
    models[name] = json{{"mean", summary_to_json(evaluation.mean_validation)},
                        {"per_fold", std::move(per_fold)},
                        {"auc_defined_folds", evaluation.auc_defined_folds},
                        {"train_metrics",
                         json{{"mean", summary_to_json(evaluation.mean_training)},
                              {"per_fold", std::move(train_per_fold)},
                              {"auc_defined_folds", evaluation.train_auc_defined_folds}}}};
  }

  json j{{"dataset", report.dataset},
         {"seed", report.seed},
         {"folds", report.folds},
         {"averaging", report.averaging == Averaging::weighted ? "weighted" : "binary"},
         {"smote", report.smote},
         {"smote_k", report.smote_k},
         {"models", std::move(models)}};
  return j.dump(2) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid report json: ") + e.what());
  }

  EvaluationReport report;
  report.dataset = j.at("dataset").get<std::string>();
  report.seed = j.at("seed").get<std::uint64_t>();
  report.folds = j.at("folds").get<std::size_t>();
  report.averaging =
      j.at("averaging").get<std::string>() == "binary" ? Averaging::binary : Averaging::weighted;
  report.smote = j.at("smote").get<bool>();
  report.smote_k = j.at("smote_k").get<std::size_t>();

  const json& models = j.at("models");
  for (ModelKind kind : kDisplayOrder) {
    const std::string name(to_string(kind));
    if (!models.contains(name)) continue;
    const json& m = models.at(name);

    ModelEvaluation evaluation;
    evaluation.mean_validation = summary_from_json(m.at("mean"));
    evaluation.auc_defined_folds = m.at("auc_defined_folds").get<std::size_t>();
    const json& train = m.at("train_metrics");
    evaluation.mean_training = summary_from_json(train.at("mean"));
    evaluation.train_auc_defined_folds = train.at("auc_defined_folds").get<std::size_t>();

    const json& folds = m.at("per_fold");
    const json& train_folds = train.at("per_fold");
    for (std::size_t f = 0; f < folds.size(); ++f) {
      FoldMetrics metrics;
      metrics.validation = summary_from_json(folds.at(f));
      if (f < train_folds.size()) metrics.training = summary_from_json(train_folds.at(f));
      evaluation.per_fold.push_back(metrics);
    }
    report.models.emplace_back(name, std::move(evaluation));
  }
  return report;
}

std::string report_to_markdown(const EvaluationReport& report) {
  std::map<std::string, const ModelEvaluation*> by_name;
  for (const auto& [name, evaluation] : report.models) by_name[name] = &evaluation;

  std::ostringstream out;
  out << "# Evaluation report\n\n";
  out << "Dataset: `" << report.dataset << "`  \n";
  out << "Folds: " << report.folds << ", seed: " << report.seed << ", SMOTE: "
      << (report.smote ? "on" : "off") << ", averaging: "
      << (report.averaging == Averaging::weighted ? "weighted" : "binary") << "\n\n";
  out << "| Model | Precision | Recall | F1 | Accuracy | AUC |\n";
  out << "|-------|-----------|--------|----|----------|-----|\n";

  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return std::string(buf);
  };
  auto display_name = [](ModelKind kind) -> std::string {
    std::string name(to_string(kind));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return name;
  };

  for (ModelKind kind : kDisplayOrder) {
    auto it = by_name.find(std::string(to_string(kind)));
    if (it == by_name.end()) continue;
    const MetricSummary& m = it->second->mean_validation;
    out << "| " << display_name(kind) << " | " << fmt(m.precision) << " | " << fmt(m.recall)
        << " | " << fmt(m.f1) << " | " << fmt(m.accuracy) << " | "
        << (m.auc ? fmt(*m.auc) : std::string("n/a")) << " |\n";
  }
  out << "\nAUC means are over folds whose validation partition contains both classes.\n";
  return out.str();
}

void save_report_json(const EvaluationReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << report_to_json(report);
  if (!out.flush()) throw DataError("failed writing: " + path);
}

EvaluationReport load_report_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return report_from_json(buffer.str());
}

}  // namespace bugcast
