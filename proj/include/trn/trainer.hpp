#ifndef TRN_TRAINER_HPP
#define TRN_TRAINER_HPP

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "trn/metrics.hpp"
#include "trn/model.hpp"
#include "trn/tbdense.hpp"

namespace trn {

// Mean of the extraction-step and chaining-step cross-entropies. Each logits
// entry is one group member's [rows, C] scores; labels align row-wise.
ag::Value compute_loss(const std::vector<ag::Value>& extract_logits,
                       const std::vector<ag::Value>& chain_logits,
                       const std::vector<std::vector<int>>& labels);

// Pure preprocessing: model inputs, joint graphs, labels. Groups come out in
// deterministic order (sorted by group id, members by question id).
std::vector<PreparedGroup> prepare_torque_groups(const Corpus& corpus, const Vocabulary& vocab,
                                                 const DependencyParser& parser, int max_seq_len);
std::vector<PreparedGroup> prepare_tbdense_groups(const std::vector<RelationInstance>& instances,
                                                  const Vocabulary& vocab,
                                                  const DependencyParser& parser,
                                                  int max_seq_len);

struct EpochStats {
  int epoch = 0;
  double mean_loss = 0.0;
  double dev_metric = 0.0;  // dev macro-F1 (torque) / dev accuracy (tbdense)
};

struct TrainResult {
  std::vector<double> loss_curve;  // one entry per optimizer step
  std::vector<EpochStats> epochs;
  double best_dev_metric = -1.0;
  int best_epoch = -1;
  std::string checkpoint_path;
};

// Group-batched training with the combined two-step loss; checkpoints the
// best dev metric to checkpoint_path (always writes at least once). Aborts
// with TrainingError on a non-finite loss. `log` may be null.
TrainResult train_model(TrnModel& model, const RunConfig& cfg,
                        const std::vector<PreparedGroup>& train_groups,
                        const std::vector<PreparedGroup>& dev_groups,
                        const Corpus* dev_corpus,  // torque metrics; null for tbdense
                        const std::string& checkpoint_path, std::ostream* log);

// Inference over prepared groups (deterministic, dropout off).
std::vector<PredictionRecord> infer(TrnModel& model, const std::vector<PreparedGroup>& groups);
std::vector<TbPrediction> classify(TrnModel& model, const std::vector<PreparedGroup>& groups);

PredictionMap predictions_to_map(const std::vector<PredictionRecord>& records);
std::string predictions_to_jsonl(const std::vector<PredictionRecord>& records);
PredictionMap predictions_from_jsonl(const std::string& path);

double tbdense_accuracy(const std::vector<PreparedGroup>& groups,
                        const std::vector<TbPrediction>& predictions);

}  // namespace trn

#endif
