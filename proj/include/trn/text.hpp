#ifndef TRN_TEXT_HPP
#define TRN_TEXT_HPP

#include <string>
#include <vector>

namespace trn::text {

// A surface word with its byte offset into the source text.
struct Word {
  std::string surface;
  int offset = 0;

  bool operator==(const Word&) const = default;
};

// Splits text into words: maximal [A-Za-z0-9_'] runs plus single-char
// punctuation tokens. Whitespace separates; offsets are byte positions.
std::vector<Word> tokenize_words(const std::string& text);

// Coarse part-of-speech classes; NOUN and VERB are the event classes.
enum class Pos {
  Noun,
  Verb,
  Aux,
  Adj,
  Adv,
  Pron,
  Det,
  Adp,
  Num,
  Conj,
  Punct,
  Other,
};

const char* pos_name(Pos p);
Pos pos_from_name(const std::string& name);

// Lexicon + suffix tagger. prev is the tag of the preceding word (Other at
// sentence start); it only disambiguates noun/verb readings after
// determiners and adjectives.
Pos coarse_pos(const std::string& surface, Pos prev = Pos::Other);

std::string lower(const std::string& s);

// Rule-based lemmatizer (irregular table + suffix stripping), lowercased.
// An approximation of a real lemmatizer; used for co-mention matching only.
std::string lemma(const std::string& surface);

}  // namespace trn::text

#endif
