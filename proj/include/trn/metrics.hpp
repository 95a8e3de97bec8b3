#ifndef TRN_METRICS_HPP
#define TRN_METRICS_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "trn/corpus.hpp"

namespace trn {

// Predicted answer word indices per question id (sorted unique).
using PredictionMap = std::map<std::string, std::vector<int>>;

// Set-overlap F1 between predicted and gold word sets. Both-empty returns
// 1.0 (official TORQUE evaluator convention; this dominates consistency on
// sparse questions).
double question_f1(const std::vector<int>& pred, const std::vector<int>& gold);

bool exact_match(const std::vector<int>& pred, const std::vector<int>& gold);

// F1 >= 0.8 decided in exact integer arithmetic on set counts, so the 0.8
// boundary is never subject to floating-point noise: 2i/(p+g) >= 4/5 iff
// 10i >= 4(p+g). Both empty counts as passing.
bool f1_at_threshold(const std::vector<int>& pred, const std::vector<int>& gold);

// Fraction of groups whose every member question has F1 >= 0.8.
double group_consistency(const Corpus& corpus, const PredictionMap& predictions);

// Fraction of passages whose every question (across all groups) has F1 >= 0.8.
double passage_consistency(const Corpus& corpus, const PredictionMap& predictions);

struct MetricsReport {
  double macro_f1 = 0.0;
  double em = 0.0;
  double consistency_c = 0.0;
  double consistency_cp = 0.0;
  std::map<std::string, double> per_question_f1;
  std::map<std::string, bool> per_question_em;
  std::map<std::string, bool> per_group_consistent;
  std::map<std::string, bool> per_passage_consistent;

  nlohmann::json to_json() const;
};

// Computes the four headline numbers plus breakdowns. Throws EvaluationError
// naming the first missing question id.
MetricsReport evaluate_predictions(const Corpus& corpus, const PredictionMap& predictions);

}  // namespace trn

#endif
