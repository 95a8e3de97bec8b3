#ifndef TRN_CONFIG_HPP
#define TRN_CONFIG_HPP

#include <cstdint>
#include <string>

namespace trn {

// Flat run configuration. Defaults follow the reference hyperparameter grid
// (graph/chaining depth 2, 8 heads, hidden 1024, FFN 2048, dropout 0.2,
// gradient accumulation 1); toy configs override them explicitly.
struct RunConfig {
  std::string task = "torque";  // torque | tbdense
  std::string train_data;
  std::string dev_data;
  std::string data;  // predict/evaluate input
  std::string output_dir;
  std::string checkpoint;
  std::string parser = "heuristic";  // heuristic | recorded:<path>
  std::string device = "cpu";

  uint64_t seed = 42;
  int max_seq_len = 512;
  int hidden_size = 1024;
  int encoder_layers = 1;
  int heads = 8;
  int graph_iterations = 2;  // T
  int chain_layers = 2;      // T'
  int ffn_dim = 2048;
  double dropout = 0.2;
  int gradient_accumulation = 1;
  double learning_rate = 1e-4;
  std::string lr_schedule = "linear";  // linear | constant
  double warmup_ratio = 0.1;
  int max_epochs = 10;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double weight_decay = 0.01;

  int num_classes() const { return task == "tbdense" ? 6 : 2; }

  // Throws UsageError naming the offending field.
  void validate() const;

  std::string to_json() const;                 // canonical snapshot (sorted keys)
  uint64_t config_hash() const;                // FNV-1a over the snapshot
  static RunConfig from_json_file(const std::string& path);
  static RunConfig from_json_text(const std::string& body, const std::string& origin);
};

}  // namespace trn

#endif
