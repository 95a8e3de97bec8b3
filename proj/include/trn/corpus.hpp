#ifndef TRN_CORPUS_HPP
#define TRN_CORPUS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trn/text.hpp"

namespace trn {

struct Passage {
  std::string id;
  std::string text;
  std::vector<text::Word> words;
  std::vector<int> event_candidates;  // sorted word indices

  bool operator==(const Passage&) const = default;
};

struct Question {
  std::string id;
  std::string text;
  std::string passage_id;
  std::string group_id;
  std::vector<int> gold_answers;  // sorted unique passage word indices; may be empty

  bool operator==(const Question&) const = default;
};

struct QuestionGroup {
  std::string id;
  std::string passage_id;
  std::vector<std::string> question_ids;  // sorted by question id

  bool operator==(const QuestionGroup&) const = default;
};

struct Corpus {
  std::vector<Passage> passages;
  std::vector<Question> questions;
  std::vector<QuestionGroup> groups;

  const Passage* find_passage(const std::string& id) const;
  const Question* find_question(const std::string& id) const;

  bool operator==(const Corpus&) const = default;
};

// Checks every documented invariant; throws ValidationError naming the
// offending record. Sorts answer sets / group members into canonical order.
void validate_corpus(Corpus& corpus);

// Reads the TORQUE split layout: a JSON array of passages, each carrying its
// question blocks with answer word indices and group annotations. Emits the
// normalized in-memory corpus (word segmentation comes from
// text::tokenize_words over the passage text).
Corpus load_torque(const std::string& path);

// Normalized schema: {"passages": [...], "questions": [...], "groups": [...]}.
// Loading a saved corpus yields identical values.
Corpus load_normalized(const std::string& path);
void save_normalized(const Corpus& corpus, const std::string& path);
std::string corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const std::string& body, const std::string& origin);

// ---------------------------------------------------------------------------
// Subword vocabulary and encoder inputs.

// Deterministic piece splitter: a word is lowercased and, when longer than
// kMaxPieceLen, chopped into fixed-width chunks. Mirrors the fixed-vocab
// subword tokenizers of real encoders closely enough to exercise first-token
// alignment.
inline constexpr int kMaxPieceLen = 8;

struct TokenSpan {
  std::string piece;
  int begin = 0;  // byte offsets into the source text
  int end = 0;

  bool operator==(const TokenSpan&) const = default;
};

std::vector<TokenSpan> subword_spans(const std::string& text);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;

  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> pieces);  // without specials

  // Collects every piece of every passage and question text.
  static Vocabulary build(const Corpus& corpus);

  int encode(const std::string& piece) const;  // kUnk for unknown pieces
  int size() const { return static_cast<int>(pieces_.size()); }
  const std::vector<std::string>& pieces() const { return pieces_; }

 private:
  std::vector<std::string> pieces_;
  std::map<std::string, int> index_;
};

struct WordTokenMap {
  std::vector<int> word_to_token;  // first token position per word
  std::vector<int> token_to_word;  // owning word per token, -1 for none

  bool operator==(const WordTokenMap&) const = default;
};

// First-token alignment: each word maps to the token whose span starts at the
// word's offset. Tokens outside any word (specials) map to -1. Throws
// AlignmentError when a word has no covering token.
WordTokenMap align_words_to_tokens(const std::vector<text::Word>& words,
                                   const std::vector<TokenSpan>& tokens);

struct ModelInput {
  std::string question_id;
  std::vector<int> token_ids;        // [CLS] question [SEP] passage [SEP]
  std::vector<int> attention_mask;   // same length, all ones
  int question_begin = 0, question_end = 0;  // token ranges, end exclusive
  int passage_begin = 0, passage_end = 0;
  WordTokenMap passage_map;   // passage word -> absolute token position
  WordTokenMap question_map;  // question word -> absolute token position
  std::vector<text::Word> question_words;
  std::vector<text::Word> passage_words;

  int seq_len() const { return static_cast<int>(token_ids.size()); }
};

// Builds the concatenated [Q, P] input. Sequences that do not fit
// max_seq_len raise TruncationError (never silent truncation; the message
// flags when gold answer words were at stake).
ModelInput build_model_input(const Question& question, const Passage& passage,
                             const Vocabulary& vocab, int max_seq_len);

}  // namespace trn

#endif
