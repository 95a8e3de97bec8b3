#include "trn/model.hpp"

#include <cstring>
#include <fstream>

#include "trn/errors.hpp"

namespace trn {

using ag::Tensor;
using ag::Value;

ag::Value word_logits(const ag::Value& repr_rows, const nn::LinearParams& head) {
  return ag::affine(repr_rows, head.w, head.b);
}

TrnModel::TrnModel(const RunConfig& cfg, Vocabulary vocab)
    : cfg_(cfg), vocab_(std::move(vocab)), dropout_rng_(nn::Rng(cfg.seed).fork(2)) {
  cfg_.validate();
  nn::Rng init_rng(nn::Rng(cfg.seed).fork(1));
  encoder_ = std::make_unique<TinyEncoder>(store_, vocab_.size(), cfg_.max_seq_len,
                                           cfg_.hidden_size, cfg_.encoder_layers, cfg_.heads,
                                           cfg_.ffn_dim, cfg_.dropout, init_rng);
  graph_ = GraphParameters::create(store_, "graph", cfg_.hidden_size, init_rng);
  chain_ = ChainingParameters::create(store_, "chain", cfg_.chain_layers, cfg_.hidden_size,
                                      cfg_.heads, cfg_.ffn_dim, cfg_.dropout, init_rng);
  head_extract_ = nn::make_linear(store_, "head.extract", cfg_.num_classes(), cfg_.hidden_size,
                                  init_rng);
  head_chain_ = nn::make_linear(store_, "head.chain", cfg_.num_classes(), cfg_.hidden_size,
                                init_rng);
}

TrnModel::GroupForward TrnModel::forward_group(const PreparedGroup& group, bool training) {
  if (group.members.empty()) throw Error("forward_group: empty group " + group.group_id);
  const bool classify = cfg_.task == "tbdense";

  GroupForward fwd;
  std::vector<AnswerRepr> reprs;
  reprs.reserve(group.members.size());
  for (const auto& member : group.members) {
    auto enc = encoder_->encode(member.input, &dropout_rng_, training);
    AnswerRepr repr;
    repr.rows = extract_evidence(enc, member.input, member.graph, graph_, cfg_.graph_iterations);
    repr.question_id = member.question_id;
    repr.passage_id = group.passage_id;
    if (classify) {
      if (member.event2_word < 0 || member.event2_word >= repr.rows->val.dim(0))
        throw Error("instance " + member.question_id + ": event2 position out of range");
      fwd.extract_logits.push_back(
          word_logits(ag::gather_rows(repr.rows, {member.event2_word}), head_extract_));
    } else {
      fwd.extract_logits.push_back(word_logits(repr.rows, head_extract_));
    }
    reprs.push_back(std::move(repr));
  }

  auto stack = collect_evidence(reprs, group.group_id);
  fwd.chained = chain_evidence(stack, chain_, &dropout_rng_, training);
  for (size_t i = 0; i < group.members.size(); ++i) {
    auto slice = ag::slice0(fwd.chained.x, static_cast<int>(i));
    if (classify) {
      fwd.chain_logits.push_back(
          word_logits(ag::gather_rows(slice, {group.members[i].event2_word}), head_chain_));
    } else {
      fwd.chain_logits.push_back(word_logits(slice, head_chain_));
    }
  }
  return fwd;
}

ag::Value TrnModel::group_loss(const GroupForward& fwd, const PreparedGroup& group) const {
  const bool classify = cfg_.task == "tbdense";
  std::vector<int> labels;
  for (const auto& member : group.members) {
    if (classify) {
      if (member.class_label < 0) throw Error("instance " + member.question_id + " has no label");
      labels.push_back(member.class_label);
    } else {
      if (member.word_labels.size() != group.members.front().word_labels.size())
        throw Error("group " + group.group_id + ": label vectors disagree in length");
      labels.insert(labels.end(), member.word_labels.begin(), member.word_labels.end());
    }
  }
  const int c = cfg_.num_classes();
  auto flatten = [&](const std::vector<Value>& logits) {
    auto stacked = ag::stack0(logits);
    return ag::reshape(stacked, {static_cast<int>(labels.size()), c});
  };
  auto loss_extract = ag::cross_entropy(flatten(fwd.extract_logits), labels);
  auto loss_chain = ag::cross_entropy(flatten(fwd.chain_logits), labels);
  return ag::scale(ag::add(loss_extract, loss_chain), 0.5);
}

std::vector<PredictionRecord> TrnModel::predict_group(const PreparedGroup& group) {
  if (cfg_.task != "torque") throw Error("predict_group requires a torque model");
  auto fwd = forward_group(group, /*training=*/false);
  std::vector<PredictionRecord> records;
  for (size_t i = 0; i < group.members.size(); ++i) {
    const auto& member = group.members[i];
    PredictionRecord rec;
    rec.question_id = member.question_id;
    const auto& ex = fwd.extract_logits[i]->val;
    const auto& ch = fwd.chain_logits[i]->val;
    const int m = ch.dim(0);
    for (int w = 0; w < m; ++w) {
      rec.extract_scores.push_back({ex.at2(w, 0), ex.at2(w, 1)});
      rec.chain_scores.push_back({ch.at2(w, 0), ch.at2(w, 1)});
      // argmax with ties resolved to not-answer
      if (ch.at2(w, 1) > ch.at2(w, 0)) {
        rec.answers.push_back(w);
        rec.answer_surfaces.push_back(member.input.passage_words[static_cast<size_t>(w)].surface);
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<TbPrediction> TrnModel::classify_group(const PreparedGroup& group) {
  if (cfg_.task != "tbdense") throw Error("classify_group requires a tbdense model");
  auto fwd = forward_group(group, /*training=*/false);
  std::vector<TbPrediction> out;
  for (size_t i = 0; i < group.members.size(); ++i) {
    TbPrediction pred;
    pred.instance_id = group.members[i].question_id;
    const auto& row = fwd.chain_logits[i]->val;
    int best = 0;
    for (int c = 0; c < kRelationCount; ++c) {
      pred.scores[static_cast<size_t>(c)] = row.at2(0, c);
      if (row.at2(0, c) > row.at2(0, best)) best = c;  // ties keep the earlier label
    }
    pred.label = static_cast<Relation>(best);
    out.push_back(std::move(pred));
  }
  return out;
}

// --------------------------------------------------------------------------
// Checkpoint serialization: versioned header, embedded config + vocabulary,
// then named parameter tensors.

namespace {

constexpr char kMagic[8] = {'T', 'R', 'N', 'C', 'K', 'P', 'T', '1'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw CheckpointError("truncated checkpoint: " + path);
  return v;
}

void write_string(std::ostream& out, const std::string& s) {
  write_pod<uint32_t>(out, static_cast<uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& in, const std::string& path) {
  const auto len = read_pod<uint32_t>(in, path);
  std::string s(len, '\0');
  in.read(s.data(), static_cast<std::streamsize>(len));
  if (!in) throw CheckpointError("truncated checkpoint: " + path);
  return s;
}

}  // namespace

void TrnModel::save_checkpoint(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write checkpoint: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_pod<uint32_t>(out, kVersion);
  const std::string cfg_json = cfg_.to_json();
  write_pod<uint64_t>(out, nn::fnv1a(cfg_json));
  write_pod<uint64_t>(out, cfg_.seed);
  write_string(out, cfg_json);

  const auto& pieces = vocab_.pieces();
  // Specials are implied; persist only the learned tail.
  write_pod<uint32_t>(out, static_cast<uint32_t>(pieces.size() - 4));
  for (size_t i = 4; i < pieces.size(); ++i) write_string(out, pieces[i]);

  write_pod<uint32_t>(out, static_cast<uint32_t>(store_.items().size()));
  for (const auto& [name, value] : store_.items()) {
    write_string(out, name);
    write_pod<uint32_t>(out, static_cast<uint32_t>(value->val.rank()));
    for (int d : value->val.shape) write_pod<uint32_t>(out, static_cast<uint32_t>(d));
    out.write(reinterpret_cast<const char*>(value->val.v.data()),
              static_cast<std::streamsize>(value->val.v.size() * sizeof(double)));
  }
  if (!out) throw CheckpointError("failed writing checkpoint: " + path);
}

std::unique_ptr<TrnModel> TrnModel::load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CheckpointError("not a TRN checkpoint: " + path);
  const auto version = read_pod<uint32_t>(in, path);
  if (version != kVersion)
    throw CheckpointError("unsupported checkpoint version " + std::to_string(version) + ": " +
                          path);
  const auto stored_hash = read_pod<uint64_t>(in, path);
  const auto seed = read_pod<uint64_t>(in, path);
  const std::string cfg_json = read_string(in, path);
  if (nn::fnv1a(cfg_json) != stored_hash)
    throw CheckpointError("checkpoint config hash mismatch (corrupt header): " + path);

  RunConfig cfg = RunConfig::from_json_text(cfg_json, path + " (embedded config)");
  if (cfg.seed != seed)
    throw CheckpointError("checkpoint seed disagrees with embedded config: " + path);

  const auto n_pieces = read_pod<uint32_t>(in, path);
  std::vector<std::string> pieces;
  pieces.reserve(n_pieces);
  for (uint32_t i = 0; i < n_pieces; ++i) pieces.push_back(read_string(in, path));

  auto model = std::make_unique<TrnModel>(cfg, Vocabulary(std::move(pieces)));

  const auto n_params = read_pod<uint32_t>(in, path);
  if (n_params != model->store_.items().size())
    throw CheckpointError("checkpoint holds " + std::to_string(n_params) +
                          " tensors but the model defines " +
                          std::to_string(model->store_.items().size()) + ": " + path);
  for (uint32_t i = 0; i < n_params; ++i) {
    const std::string name = read_string(in, path);
    const auto rank = read_pod<uint32_t>(in, path);
    ag::Shape shape(rank);
    for (auto& d : shape) d = static_cast<int>(read_pod<uint32_t>(in, path));
    Value target = model->store_.find(name);
    if (!target) throw CheckpointError("unknown tensor '" + name + "' in checkpoint: " + path);
    if (target->val.shape != shape)
      throw CheckpointError("shape mismatch for tensor '" + name + "' in checkpoint: " + path);
    in.read(reinterpret_cast<char*>(target->val.v.data()),
            static_cast<std::streamsize>(target->val.v.size() * sizeof(double)));
    if (!in) throw CheckpointError("truncated checkpoint: " + path);
  }
  return model;
}

}  // namespace trn
