#include "trn/metrics.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "trn/errors.hpp"

namespace trn {

using nlohmann::json;

namespace {

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  // both sorted unique
  int count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

const std::vector<int>& prediction_for(const PredictionMap& predictions, const std::string& qid) {
  auto it = predictions.find(qid);
  if (it == predictions.end())
    throw EvaluationError("no prediction for question " + qid);
  return it->second;
}

}  // namespace

double question_f1(const std::vector<int>& pred, const std::vector<int>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  const int inter = intersection_size(pred, gold);
  const int denom = static_cast<int>(pred.size() + gold.size());
  return denom == 0 ? 1.0 : 2.0 * inter / denom;
}

bool exact_match(const std::vector<int>& pred, const std::vector<int>& gold) {
  return pred == gold;
}

bool f1_at_threshold(const std::vector<int>& pred, const std::vector<int>& gold) {
  if (pred.empty() && gold.empty()) return true;
  const long inter = intersection_size(pred, gold);
  const long denom = static_cast<long>(pred.size() + gold.size());
  return 10 * inter >= 4 * denom;
}

double group_consistency(const Corpus& corpus, const PredictionMap& predictions) {
  if (corpus.groups.empty()) return 0.0;
  int consistent = 0;
  for (const auto& g : corpus.groups) {
    bool all_pass = true;
    for (const auto& qid : g.question_ids) {
      const Question* q = corpus.find_question(qid);
      if (!q) throw EvaluationError("group " + g.id + " references unknown question " + qid);
      if (!f1_at_threshold(prediction_for(predictions, qid), q->gold_answers)) {
        all_pass = false;
        break;
      }
    }
    if (all_pass) ++consistent;
  }
  return static_cast<double>(consistent) / static_cast<double>(corpus.groups.size());
}

double passage_consistency(const Corpus& corpus, const PredictionMap& predictions) {
  if (corpus.passages.empty()) return 0.0;
  int consistent = 0;
  for (const auto& p : corpus.passages) {
    bool all_pass = true;
    for (const auto& q : corpus.questions) {
      if (q.passage_id != p.id) continue;
      if (!f1_at_threshold(prediction_for(predictions, q.id), q.gold_answers)) {
        all_pass = false;
        break;
      }
    }
    if (all_pass) ++consistent;
  }
  return static_cast<double>(consistent) / static_cast<double>(corpus.passages.size());
}

MetricsReport evaluate_predictions(const Corpus& corpus, const PredictionMap& predictions) {
  MetricsReport report;
  if (corpus.questions.empty()) throw EvaluationError("gold corpus contains no questions");

  double f1_sum = 0.0;
  int em_count = 0;
  for (const auto& q : corpus.questions) {
    const auto& pred = prediction_for(predictions, q.id);
    const double f1 = question_f1(pred, q.gold_answers);
    const bool em = exact_match(pred, q.gold_answers);
    f1_sum += f1;
    em_count += em ? 1 : 0;
    report.per_question_f1[q.id] = f1;
    report.per_question_em[q.id] = em;
  }
  report.macro_f1 = f1_sum / static_cast<double>(corpus.questions.size());
  report.em = static_cast<double>(em_count) / static_cast<double>(corpus.questions.size());

  for (const auto& g : corpus.groups) {
    bool all_pass = true;
    for (const auto& qid : g.question_ids) {
      const Question* q = corpus.find_question(qid);
      if (!f1_at_threshold(prediction_for(predictions, qid), q->gold_answers)) all_pass = false;
    }
    report.per_group_consistent[g.id] = all_pass;
  }
  for (const auto& p : corpus.passages) {
    bool all_pass = true;
    for (const auto& q : corpus.questions)
      if (q.passage_id == p.id &&
          !f1_at_threshold(prediction_for(predictions, q.id), q.gold_answers))
        all_pass = false;
    report.per_passage_consistent[p.id] = all_pass;
  }
  report.consistency_c = group_consistency(corpus, predictions);
  report.consistency_cp = passage_consistency(corpus, predictions);
  return report;
}

json MetricsReport::to_json() const {
  json j;
  j["macro_f1"] = macro_f1;
  j["em"] = em;
  j["consistency_c"] = consistency_c;
  j["consistency_cp"] = consistency_cp;
  j["per_question"] = json::object();
  for (const auto& [qid, f1] : per_question_f1)
    j["per_question"][qid] = {{"f1", f1}, {"em", per_question_em.at(qid)}};
  j["per_group"] = json::object();
  for (const auto& [gid, ok] : per_group_consistent) j["per_group"][gid] = ok;
  j["per_passage"] = json::object();
  for (const auto& [pid, ok] : per_passage_consistent) j["per_passage"][pid] = ok;
  return j;
}

}  // namespace trn
