#ifndef TRN_TBDENSE_HPP
#define TRN_TBDENSE_HPP

#include <array>
#include <string>
#include <vector>

#include "trn/corpus.hpp"

namespace trn {

// Fixed 6-way label set; enum order is the tie-break order at prediction time.
enum class Relation {
  Before = 0,
  After = 1,
  Simultaneous = 2,
  Vague = 3,
  Includes = 4,
  IsIncluded = 5,
};
inline constexpr int kRelationCount = 6;

const char* relation_name(Relation r);
Relation relation_from_name(const std::string& name);

struct RelationInstance {
  std::string id;
  std::string segment_id;  // "same part of the passage" key for grouping
  std::string text;        // passage segment text
  std::vector<text::Word> words;
  int event1 = -1;  // word indices into `words`
  int event2 = -1;
  Relation label = Relation::Vague;

  bool operator==(const RelationInstance&) const = default;
};

// JSON-lines reader; one object per instance:
//   {"id": ..., "segment_id": ..., "text": ..., "e1_index": ..,
//    "e2_index": .., "label": "Before"}
std::vector<RelationInstance> load_tbdense(const std::string& path);

// [CLS] e1 e2 [SEP] passage [SEP]; the event-pair prefix plays the question
// role. Throws ValidationError when an event index does not name a passage
// word.
ModelInput format_tbdense_input(const RelationInstance& inst, const Vocabulary& vocab,
                                int max_seq_len);

// The question text equivalent of the (e1, e2) prefix.
std::string tbdense_question_text(const RelationInstance& inst);

// Groups instances by (segment id, event1 surface form); singletons allowed.
// Group ids are "<segment_id>::<e1 surface>".
std::vector<QuestionGroup> group_instances(const std::vector<RelationInstance>& instances);

// Pseudo-corpus view so the shared trainer machinery applies: one passage per
// segment, one question per instance.
Corpus tbdense_corpus(const std::vector<RelationInstance>& instances);

struct TbPrediction {
  std::string instance_id;
  Relation label = Relation::Before;
  std::array<double, kRelationCount> scores{};  // chaining-step scores
};

std::string tbdense_predictions_tsv(const std::vector<TbPrediction>& predictions);

}  // namespace trn

#endif
