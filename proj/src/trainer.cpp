#include "trn/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trn/errors.hpp"

namespace trn {

using ag::Value;
using nlohmann::json;

ag::Value compute_loss(const std::vector<ag::Value>& extract_logits,
                       const std::vector<ag::Value>& chain_logits,
                       const std::vector<std::vector<int>>& labels) {
  if (extract_logits.empty() || extract_logits.size() != chain_logits.size() ||
      extract_logits.size() != labels.size())
    throw Error("compute_loss: logits/labels arity mismatch");
  std::vector<int> flat;
  for (const auto& l : labels) flat.insert(flat.end(), l.begin(), l.end());
  const int c = extract_logits.front()->val.shape.back();
  auto flatten = [&](const std::vector<Value>& logits) {
    return ag::reshape(ag::stack0(logits), {static_cast<int>(flat.size()), c});
  };
  auto loss_extract = ag::cross_entropy(flatten(extract_logits), flat);
  auto loss_chain = ag::cross_entropy(flatten(chain_logits), flat);
  return ag::scale(ag::add(loss_extract, loss_chain), 0.5);
}

namespace {

// Parse trees are cached per distinct word sequence; passages repeat across
// their group's questions.
class ParseCache {
 public:
  explicit ParseCache(const DependencyParser& parser) : parser_(parser) {}
  const DepTree& tree_for(const std::string& key, const std::vector<text::Word>& words) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, parser_.parse(words)).first->second;
  }

 private:
  const DependencyParser& parser_;
  std::map<std::string, DepTree> cache_;
};

}  // namespace

std::vector<PreparedGroup> prepare_torque_groups(const Corpus& corpus, const Vocabulary& vocab,
                                                 const DependencyParser& parser,
                                                 int max_seq_len) {
  ParseCache cache(parser);
  std::vector<PreparedGroup> out;
  std::vector<const QuestionGroup*> groups;
  for (const auto& g : corpus.groups) groups.push_back(&g);
  std::sort(groups.begin(), groups.end(),
            [](const QuestionGroup* a, const QuestionGroup* b) { return a->id < b->id; });

  for (const QuestionGroup* g : groups) {
    const Passage* passage = corpus.find_passage(g->passage_id);
    if (!passage) throw ValidationError("group " + g->id + ": unknown passage " + g->passage_id);
    PreparedGroup pg;
    pg.group_id = g->id;
    pg.passage_id = g->passage_id;
    const DepTree& p_tree = cache.tree_for("p::" + passage->id, passage->words);
    for (const auto& qid : g->question_ids) {
      const Question* q = corpus.find_question(qid);
      if (!q) throw ValidationError("group " + g->id + ": unknown question " + qid);
      PreparedQuestion pq;
      pq.question_id = qid;
      pq.input = build_model_input(*q, *passage, vocab, max_seq_len);
      const DepTree& q_tree = cache.tree_for("q::" + qid, pq.input.question_words);
      pq.graph = build_joint_graph(q_tree, p_tree);
      pq.gold_answers = q->gold_answers;
      pq.word_labels.assign(passage->words.size(), 0);
      for (int a : q->gold_answers) pq.word_labels[static_cast<size_t>(a)] = 1;
      pg.members.push_back(std::move(pq));
    }
    out.push_back(std::move(pg));
  }
  return out;
}

std::vector<PreparedGroup> prepare_tbdense_groups(const std::vector<RelationInstance>& instances,
                                                  const Vocabulary& vocab,
                                                  const DependencyParser& parser,
                                                  int max_seq_len) {
  ParseCache cache(parser);
  std::map<std::string, const RelationInstance*> by_id;
  for (const auto& inst : instances) {
    if (!by_id.emplace(inst.id, &inst).second)
      throw ValidationError("duplicate TB-Dense instance id: " + inst.id);
  }
  std::vector<PreparedGroup> out;
  for (const auto& g : group_instances(instances)) {
    PreparedGroup pg;
    pg.group_id = g.id;
    pg.passage_id = g.passage_id;
    for (const auto& iid : g.question_ids) {
      const RelationInstance* inst = by_id.at(iid);
      PreparedQuestion pq;
      pq.question_id = iid;
      pq.input = format_tbdense_input(*inst, vocab, max_seq_len);
      const DepTree& p_tree = cache.tree_for("p::" + inst->segment_id, inst->words);
      const DepTree& q_tree =
          cache.tree_for("q::" + iid, pq.input.question_words);
      pq.graph = build_joint_graph(q_tree, p_tree);
      pq.class_label = static_cast<int>(inst->label);
      pq.event2_word = inst->event2;
      pg.members.push_back(std::move(pq));
    }
    out.push_back(std::move(pg));
  }
  return out;
}

namespace {

double dev_metric(TrnModel& model, const std::vector<PreparedGroup>& dev_groups,
                  const Corpus* dev_corpus) {
  if (dev_groups.empty()) return 0.0;
  if (model.config().task == "tbdense") {
    auto preds = classify(model, dev_groups);
    return tbdense_accuracy(dev_groups, preds);
  }
  auto records = infer(model, dev_groups);
  if (!dev_corpus) throw Error("torque training requires a dev corpus for metrics");
  return evaluate_predictions(*dev_corpus, predictions_to_map(records)).macro_f1;
}

}  // namespace

TrainResult train_model(TrnModel& model, const RunConfig& cfg,
                        const std::vector<PreparedGroup>& train_groups,
                        const std::vector<PreparedGroup>& dev_groups, const Corpus* dev_corpus,
                        const std::string& checkpoint_path, std::ostream* log) {
  if (train_groups.empty()) throw TrainingError("no training groups");
  nn::Rng shuffle_rng(nn::Rng(cfg.seed).fork(3));
  nn::Adam optimizer(model.params(),
                     {cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps,
                      cfg.weight_decay});

  const int accum = cfg.gradient_accumulation;
  const int64_t steps_per_epoch =
      (static_cast<int64_t>(train_groups.size()) + accum - 1) / accum;
  const int64_t total_steps = steps_per_epoch * cfg.max_epochs;
  const int64_t warmup_steps = static_cast<int64_t>(cfg.warmup_ratio * total_steps);

  auto lr_scale = [&](int64_t step) {
    if (warmup_steps > 0 && step < warmup_steps)
      return static_cast<double>(step + 1) / static_cast<double>(warmup_steps);
    if (cfg.lr_schedule == "constant") return 1.0;
    const auto remaining = total_steps - step;
    return std::max(0.0, static_cast<double>(remaining) /
                             static_cast<double>(std::max<int64_t>(1, total_steps - warmup_steps)));
  };

  TrainResult result;
  result.checkpoint_path = checkpoint_path;
  int64_t step = 0;
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const auto order = shuffle_rng.permutation(static_cast<int>(train_groups.size()));
    double epoch_loss = 0.0;
    double pending_loss = 0.0;
    int pending = 0;
    model.params().zero_grad();
    for (size_t oi = 0; oi < order.size(); ++oi) {
      const auto& group = train_groups[static_cast<size_t>(order[oi])];
      auto fwd = model.forward_group(group, /*training=*/true);
      auto loss = model.group_loss(fwd, group);
      const double loss_value = loss->val.v[0];
      if (!std::isfinite(loss_value))
        throw TrainingError("non-finite loss " + std::to_string(loss_value) + " at epoch " +
                            std::to_string(epoch) + ", group " + group.group_id);
      // Accumulated groups contribute equally to one optimizer step.
      ag::backward(accum > 1 ? ag::scale(loss, 1.0 / accum) : loss);
      epoch_loss += loss_value;
      pending_loss += loss_value;
      ++pending;
      if (pending == accum || oi + 1 == order.size()) {
        optimizer.step(lr_scale(step));
        model.params().zero_grad();
        result.loss_curve.push_back(pending_loss / pending);
        pending_loss = 0.0;
        pending = 0;
        ++step;
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.mean_loss = epoch_loss / static_cast<double>(train_groups.size());
    stats.dev_metric = dev_metric(model, dev_groups, dev_corpus);
    result.epochs.push_back(stats);
    if (log)
      (*log) << "epoch " << epoch << " mean_loss " << stats.mean_loss << " dev_metric "
             << stats.dev_metric << "\n";
    if (stats.dev_metric > result.best_dev_metric) {
      result.best_dev_metric = stats.dev_metric;
      result.best_epoch = epoch;
      model.save_checkpoint(checkpoint_path);
    }
  }
  if (result.best_epoch < 0) model.save_checkpoint(checkpoint_path);
  return result;
}

std::vector<PredictionRecord> infer(TrnModel& model, const std::vector<PreparedGroup>& groups) {
  std::vector<PredictionRecord> records;
  for (const auto& g : groups) {
    auto group_records = model.predict_group(g);
    records.insert(records.end(), group_records.begin(), group_records.end());
  }
  return records;
}

std::vector<TbPrediction> classify(TrnModel& model, const std::vector<PreparedGroup>& groups) {
  std::vector<TbPrediction> out;
  for (const auto& g : groups) {
    auto preds = model.classify_group(g);
    out.insert(out.end(), preds.begin(), preds.end());
  }
  return out;
}

PredictionMap predictions_to_map(const std::vector<PredictionRecord>& records) {
  PredictionMap map;
  for (const auto& r : records) map[r.question_id] = r.answers;
  return map;
}

std::string predictions_to_jsonl(const std::vector<PredictionRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) {
    json j;
    j["question_id"] = r.question_id;
    j["answers"] = json::array();
    for (size_t i = 0; i < r.answers.size(); ++i)
      j["answers"].push_back({{"index", r.answers[i]}, {"word", r.answer_surfaces[i]}});
    j["scores"] = {{"extraction", r.extract_scores}, {"chaining", r.chain_scores}};
    out << j.dump() << '\n';
  }
  return out.str();
}

PredictionMap predictions_from_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open predictions file: " + path);
  PredictionMap map;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IngestionError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    try {
      const std::string qid = j.at("question_id").get<std::string>();
      std::vector<int> answers;
      for (const auto& a : j.at("answers")) answers.push_back(a.at("index").get<int>());
      std::sort(answers.begin(), answers.end());
      answers.erase(std::unique(answers.begin(), answers.end()), answers.end());
      if (!map.emplace(qid, std::move(answers)).second)
        throw IngestionError(path + ": duplicate prediction for question " + qid);
    } catch (const json::exception& e) {
      throw IngestionError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return map;
}

double tbdense_accuracy(const std::vector<PreparedGroup>& groups,
                        const std::vector<TbPrediction>& predictions) {
  std::map<std::string, int> gold;
  for (const auto& g : groups)
    for (const auto& m : g.members) gold[m.question_id] = m.class_label;
  if (gold.empty()) return 0.0;
  int correct = 0;
  for (const auto& p : predictions) {
    auto it = gold.find(p.instance_id);
    if (it == gold.end()) throw EvaluationError("prediction for unknown instance " + p.instance_id);
    if (static_cast<int>(p.label) == it->second) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

}  // namespace trn
