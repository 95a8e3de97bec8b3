#include "trn/tbdense.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trn/errors.hpp"

namespace trn {

using nlohmann::json;

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Before: return "Before";
    case Relation::After: return "After";
    case Relation::Simultaneous: return "Simultaneous";
    case Relation::Vague: return "Vague";
    case Relation::Includes: return "Includes";
    case Relation::IsIncluded: return "Is_Included";
  }
  return "?";
}

Relation relation_from_name(const std::string& name) {
  for (int i = 0; i < kRelationCount; ++i)
    if (name == relation_name(static_cast<Relation>(i))) return static_cast<Relation>(i);
  throw ValidationError("unknown TB-Dense relation label: " + name);
}

std::vector<RelationInstance> load_tbdense(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open file: " + path);
  std::vector<RelationInstance> out;
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
    RelationInstance inst;
    try {
      inst.id = j.at("id").get<std::string>();
      inst.segment_id = j.at("segment_id").get<std::string>();
      inst.text = j.at("text").get<std::string>();
      inst.event1 = j.at("e1_index").get<int>();
      inst.event2 = j.at("e2_index").get<int>();
      inst.label = relation_from_name(j.at("label").get<std::string>());
    } catch (const json::exception& e) {
      throw IngestionError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    inst.words = text::tokenize_words(inst.text);
    const int n = static_cast<int>(inst.words.size());
    if (inst.event1 < 0 || inst.event1 >= n || inst.event2 < 0 || inst.event2 >= n)
      throw ValidationError("instance " + inst.id + ": event index out of segment bounds");
    out.push_back(std::move(inst));
  }
  return out;
}

std::string tbdense_question_text(const RelationInstance& inst) {
  return inst.words[static_cast<size_t>(inst.event1)].surface + " " +
         inst.words[static_cast<size_t>(inst.event2)].surface;
}

ModelInput format_tbdense_input(const RelationInstance& inst, const Vocabulary& vocab,
                                int max_seq_len) {
  const int n = static_cast<int>(inst.words.size());
  if (inst.event1 < 0 || inst.event1 >= n || inst.event2 < 0 || inst.event2 >= n)
    throw ValidationError("instance " + inst.id + ": event index out of segment bounds");

  Question q;
  q.id = inst.id;
  q.text = tbdense_question_text(inst);
  Passage p;
  p.id = inst.segment_id;
  p.text = inst.text;
  p.words = inst.words;
  return build_model_input(q, p, vocab, max_seq_len);
}

std::vector<QuestionGroup> group_instances(const std::vector<RelationInstance>& instances) {
  std::map<std::pair<std::string, std::string>, QuestionGroup> by_key;
  for (const auto& inst : instances) {
    const std::string e1_surface = inst.words[static_cast<size_t>(inst.event1)].surface;
    const auto key = std::make_pair(inst.segment_id, e1_surface);
    auto [it, fresh] = by_key.try_emplace(key);
    if (fresh) {
      it->second.id = inst.segment_id + "::" + e1_surface;
      it->second.passage_id = inst.segment_id;
    }
    it->second.question_ids.push_back(inst.id);
  }
  std::vector<QuestionGroup> groups;
  groups.reserve(by_key.size());
  for (auto& [_, g] : by_key) {
    std::sort(g.question_ids.begin(), g.question_ids.end());
    groups.push_back(std::move(g));
  }
  return groups;
}

Corpus tbdense_corpus(const std::vector<RelationInstance>& instances) {
  Corpus corpus;
  std::map<std::string, size_t> passage_index;
  for (const auto& inst : instances) {
    if (!passage_index.count(inst.segment_id)) {
      Passage p;
      p.id = inst.segment_id;
      p.text = inst.text;
      p.words = inst.words;
      passage_index[inst.segment_id] = corpus.passages.size();
      corpus.passages.push_back(std::move(p));
    } else {
      const Passage& existing = corpus.passages[passage_index[inst.segment_id]];
      if (existing.text != inst.text)
        throw ValidationError("segment " + inst.segment_id +
                              " appears with two different texts (instance " + inst.id + ")");
    }
  }
  auto groups = group_instances(instances);
  std::map<std::string, std::string> group_of;
  for (const auto& g : groups)
    for (const auto& qid : g.question_ids) group_of[qid] = g.id;
  for (const auto& inst : instances) {
    Question q;
    q.id = inst.id;
    q.text = tbdense_question_text(inst);
    q.passage_id = inst.segment_id;
    q.group_id = group_of.at(inst.id);
    corpus.questions.push_back(std::move(q));
  }
  corpus.groups = std::move(groups);
  validate_corpus(corpus);
  return corpus;
}

std::string tbdense_predictions_tsv(const std::vector<TbPrediction>& predictions) {
  std::ostringstream out;
  for (const auto& p : predictions) {
    out << p.instance_id << '\t' << relation_name(p.label);
    for (double s : p.scores) out << '\t' << s;
    out << '\n';
  }
  return out.str();
}

}  // namespace trn
