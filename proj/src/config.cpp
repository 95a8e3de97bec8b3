#include "trn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trn/errors.hpp"
#include "trn/nn.hpp"

namespace trn {

using nlohmann::json;

void RunConfig::validate() const {
  if (task != "torque" && task != "tbdense")
    throw UsageError("config field 'task' must be torque or tbdense, got '" + task + "'");
  if (device != "cpu")
    throw UsageError("config field 'device' must be cpu in this build, got '" + device + "'");
  if (hidden_size <= 0) throw UsageError("config field 'hidden_size' must be positive");
  if (heads <= 0 || hidden_size % heads != 0)
    throw UsageError("config field 'heads' must be positive and divide hidden_size");
  if (graph_iterations < 1) throw UsageError("config field 'graph_iterations' must be >= 1");
  if (chain_layers < 1) throw UsageError("config field 'chain_layers' must be >= 1");
  if (ffn_dim <= 0) throw UsageError("config field 'ffn_dim' must be positive");
  if (dropout < 0.0 || dropout >= 1.0)
    throw UsageError("config field 'dropout' must be in [0, 1)");
  if (gradient_accumulation < 1)
    throw UsageError("config field 'gradient_accumulation' must be >= 1");
  if (max_seq_len < 8) throw UsageError("config field 'max_seq_len' must be >= 8");
  if (max_epochs < 1) throw UsageError("config field 'max_epochs' must be >= 1");
  if (lr_schedule != "linear" && lr_schedule != "constant")
    throw UsageError("config field 'lr_schedule' must be linear or constant");
  if (warmup_ratio < 0.0 || warmup_ratio > 1.0)
    throw UsageError("config field 'warmup_ratio' must be in [0, 1]");
  if (encoder_layers < 0) throw UsageError("config field 'encoder_layers' must be >= 0");
  if (learning_rate < 0.0) throw UsageError("config field 'learning_rate' must be >= 0");
}

std::string RunConfig::to_json() const {
  json j;
  j["task"] = task;
  j["train_data"] = train_data;
  j["dev_data"] = dev_data;
  j["data"] = data;
  j["output_dir"] = output_dir;
  j["checkpoint"] = checkpoint;
  j["parser"] = parser;
  j["device"] = device;
  j["seed"] = seed;
  j["max_seq_len"] = max_seq_len;
  j["hidden_size"] = hidden_size;
  j["encoder_layers"] = encoder_layers;
  j["heads"] = heads;
  j["graph_iterations"] = graph_iterations;
  j["chain_layers"] = chain_layers;
  j["ffn_dim"] = ffn_dim;
  j["dropout"] = dropout;
  j["gradient_accumulation"] = gradient_accumulation;
  j["learning_rate"] = learning_rate;
  j["lr_schedule"] = lr_schedule;
  j["warmup_ratio"] = warmup_ratio;
  j["max_epochs"] = max_epochs;
  j["adam_beta1"] = adam_beta1;
  j["adam_beta2"] = adam_beta2;
  j["adam_eps"] = adam_eps;
  j["weight_decay"] = weight_decay;
  return j.dump(2);
}

uint64_t RunConfig::config_hash() const { return nn::fnv1a(to_json()); }

RunConfig RunConfig::from_json_text(const std::string& body, const std::string& origin) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw UsageError("malformed config " + origin + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config " + origin + " must be a JSON object");

  RunConfig cfg;
  const std::set<std::string> known{
      "task", "train_data", "dev_data", "data", "output_dir", "checkpoint", "parser",
      "device", "seed", "max_seq_len", "hidden_size", "encoder_layers", "heads",
      "graph_iterations", "chain_layers", "ffn_dim", "dropout", "gradient_accumulation",
      "learning_rate", "lr_schedule", "warmup_ratio", "max_epochs", "adam_beta1",
      "adam_beta2", "adam_eps", "weight_decay"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw UsageError("unknown config field '" + key + "' in " + origin);

  auto str = [&](const char* k, std::string& out) { if (j.contains(k)) out = j.at(k).get<std::string>(); };
  auto num = [&](const char* k, auto& out) {
    if (j.contains(k)) out = j.at(k).get<std::decay_t<decltype(out)>>();
  };
  try {
    str("task", cfg.task);
    str("train_data", cfg.train_data);
    str("dev_data", cfg.dev_data);
    str("data", cfg.data);
    str("output_dir", cfg.output_dir);
    str("checkpoint", cfg.checkpoint);
    str("parser", cfg.parser);
    str("device", cfg.device);
    num("seed", cfg.seed);
    num("max_seq_len", cfg.max_seq_len);
    num("hidden_size", cfg.hidden_size);
    num("encoder_layers", cfg.encoder_layers);
    num("heads", cfg.heads);
    num("graph_iterations", cfg.graph_iterations);
    num("chain_layers", cfg.chain_layers);
    num("ffn_dim", cfg.ffn_dim);
    num("dropout", cfg.dropout);
    num("gradient_accumulation", cfg.gradient_accumulation);
    num("learning_rate", cfg.learning_rate);
    str("lr_schedule", cfg.lr_schedule);
    num("warmup_ratio", cfg.warmup_ratio);
    num("max_epochs", cfg.max_epochs);
    num("adam_beta1", cfg.adam_beta1);
    num("adam_beta2", cfg.adam_beta2);
    num("adam_eps", cfg.adam_eps);
    num("weight_decay", cfg.weight_decay);
  } catch (const json::exception& e) {
    throw UsageError("bad value in config " + origin + ": " + e.what());
  }
  return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), path);
}

}  // namespace trn
