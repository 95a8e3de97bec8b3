#include "trn/text.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "trn/errors.hpp"

namespace trn::text {

namespace {

bool word_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

const std::unordered_set<std::string>& determiners() {
  static const std::unordered_set<std::string> s{
      "the", "a", "an", "this", "that", "these", "those", "some", "any",
      "each", "every", "no", "both", "all", "another", "such"};
  return s;
}

const std::unordered_set<std::string>& pronouns() {
  static const std::unordered_set<std::string> s{
      "i",    "you",   "he",   "she",   "it",    "we",    "they",   "me",     "him",
      "her",  "us",    "them", "my",    "your",  "his",   "its",    "our",    "their",
      "who",  "whom",  "what", "which", "whose", "someone", "something", "anyone",
      "anything", "everyone", "everything", "nobody", "nothing", "itself", "himself",
      "herself", "themselves"};
  return s;
}

const std::unordered_set<std::string>& adpositions() {
  static const std::unordered_set<std::string> s{
      "in",    "on",     "at",    "by",      "for",   "with",    "from",  "to",
      "of",    "before", "after", "during",  "while", "until",   "since", "about",
      "against", "between", "into", "through", "over", "under",  "near",  "across",
      "within", "along", "toward", "towards", "upon", "off", "onto", "behind"};
  return s;
}

const std::unordered_set<std::string>& conjunctions() {
  static const std::unordered_set<std::string> s{
      "and", "or", "but", "so", "because", "if", "when", "then", "as", "than",
      "although", "though", "unless", "whereas", "nor", "yet"};
  return s;
}

const std::unordered_set<std::string>& auxiliaries() {
  static const std::unordered_set<std::string> s{
      "is",  "are", "was",  "were",  "be",    "been",  "being", "am",   "has",
      "have", "had", "do",  "does",  "did",   "will",  "would", "can",  "could",
      "may", "might", "must", "should", "shall", "won't", "cannot", "not"};
  return s;
}

const std::unordered_set<std::string>& adverbs() {
  static const std::unordered_set<std::string> s{
      "very",  "quickly", "never",  "always", "soon",  "later",  "earlier",
      "yesterday", "today", "tomorrow", "now", "recently", "probably", "right",
      "just",  "already", "still",  "again",  "once",  "twice",  "here", "there",
      "often", "immediately", "eventually", "meanwhile", "first", "finally"};
  return s;
}

// Common irregular past/participle forms that suffix rules miss.
const std::unordered_map<std::string, std::string>& irregular_verbs() {
  static const std::unordered_map<std::string, std::string> m{
      {"left", "leave"},   {"went", "go"},      {"gone", "go"},     {"took", "take"},
      {"taken", "take"},   {"said", "say"},     {"made", "make"},   {"found", "find"},
      {"got", "get"},      {"gotten", "get"},   {"saw", "see"},     {"seen", "see"},
      {"came", "come"},    {"gave", "give"},    {"given", "give"},  {"told", "tell"},
      {"began", "begin"},  {"begun", "begin"},  {"kept", "keep"},   {"held", "hold"},
      {"brought", "bring"},{"thought", "think"},{"sent", "send"},   {"built", "build"},
      {"spent", "spend"},  {"lost", "lose"},    {"met", "meet"},    {"paid", "pay"},
      {"sat", "sit"},      {"stood", "stand"},  {"won", "win"},     {"led", "lead"},
      {"heard", "hear"},   {"felt", "feel"},    {"knew", "know"},   {"known", "know"},
      {"grew", "grow"},    {"grown", "grow"},   {"drew", "draw"},   {"threw", "throw"},
      {"thrown", "throw"}, {"flew", "fly"},     {"broke", "break"}, {"broken", "break"},
      {"chose", "choose"}, {"chosen", "choose"},{"drove", "drive"}, {"driven", "drive"},
      {"ate", "eat"},      {"eaten", "eat"},    {"fell", "fall"},   {"fallen", "fall"},
      {"fought", "fight"}, {"forgot", "forget"},{"hid", "hide"},    {"hit", "hit"},
      {"hurt", "hurt"},    {"laid", "lay"},     {"lit", "light"},   {"rose", "rise"},
      {"ran", "run"},      {"shook", "shake"},  {"shot", "shoot"},  {"shut", "shut"},
      {"sang", "sing"},    {"sank", "sink"},    {"slept", "sleep"}, {"spoke", "speak"},
      {"spoken", "speak"}, {"stole", "steal"},  {"struck", "strike"},{"swore", "swear"},
      {"swam", "swim"},    {"taught", "teach"}, {"tore", "tear"},   {"wore", "wear"},
      {"wrote", "write"},  {"written", "write"},{"was", "be"},      {"were", "be"},
      {"is", "be"},        {"are", "be"},       {"been", "be"},     {"am", "be"},
      {"did", "do"},       {"done", "do"},      {"had", "have"},    {"has", "have"},
      {"fled", "flee"},    {"sold", "sell"},    {"bought", "buy"},  {"caught", "catch"},
      {"put", "put"},      {"cut", "cut"},      {"set", "set"},     {"let", "let"},
      {"read", "read"},    {"meant", "mean"},   {"became", "become"},{"going", "go"},
      {"goes", "go"},      {"woke", "wake"},    {"rang", "ring"},   {"burst", "burst"}};
  return m;
}

bool irregular_verb(const std::string& w) { return irregular_verbs().count(w) > 0; }

bool ends_with(const std::string& s, const std::string& suf) {
  return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

bool vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

}  // namespace

std::vector<Word> tokenize_words(const std::string& text) {
  std::vector<Word> out;
  size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (word_char(c)) {
      size_t j = i;
      while (j < text.size() && word_char(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({text.substr(i, j - i), static_cast<int>(i)});
      i = j;
    } else {
      out.push_back({text.substr(i, 1), static_cast<int>(i)});
      ++i;
    }
  }
  return out;
}

const char* pos_name(Pos p) {
  switch (p) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Aux: return "AUX";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
    case Pos::Pron: return "PRON";
    case Pos::Det: return "DET";
    case Pos::Adp: return "ADP";
    case Pos::Num: return "NUM";
    case Pos::Conj: return "CONJ";
    case Pos::Punct: return "PUNCT";
    case Pos::Other: return "X";
  }
  return "X";
}

Pos pos_from_name(const std::string& name) {
  static const std::unordered_map<std::string, Pos> m{
      {"NOUN", Pos::Noun}, {"PROPN", Pos::Noun}, {"VERB", Pos::Verb}, {"AUX", Pos::Aux},
      {"ADJ", Pos::Adj},   {"ADV", Pos::Adv},    {"PRON", Pos::Pron}, {"DET", Pos::Det},
      {"ADP", Pos::Adp},   {"NUM", Pos::Num},    {"CONJ", Pos::Conj}, {"CCONJ", Pos::Conj},
      {"SCONJ", Pos::Conj},{"PUNCT", Pos::Punct},{"X", Pos::Other},   {"PART", Pos::Other},
      {"INTJ", Pos::Other}, {"SYM", Pos::Other}};
  auto it = m.find(name);
  if (it == m.end()) throw Error("unknown POS tag name: " + name);
  return it->second;
}

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

Pos coarse_pos(const std::string& surface, Pos prev) {
  if (surface.empty()) return Pos::Other;
  const unsigned char c0 = static_cast<unsigned char>(surface[0]);
  if (!std::isalnum(c0) && c0 != '_' && c0 != '\'') return Pos::Punct;
  if (std::isdigit(c0)) return Pos::Num;

  const std::string w = lower(surface);
  if (determiners().count(w)) return Pos::Det;
  if (pronouns().count(w)) return Pos::Pron;
  if (adpositions().count(w)) return Pos::Adp;
  if (conjunctions().count(w)) return Pos::Conj;
  if (auxiliaries().count(w)) return Pos::Aux;
  if (adverbs().count(w)) return Pos::Adv;
  if (irregular_verb(w)) return Pos::Verb;

  const bool nominal_context = prev == Pos::Det || prev == Pos::Adj;
  if (ends_with(w, "ly")) return Pos::Adv;
  if (!nominal_context &&
      (ends_with(w, "ed") || ends_with(w, "ing") || ends_with(w, "ate") ||
       ends_with(w, "ize") || ends_with(w, "ise") || ends_with(w, "ify")))
    return Pos::Verb;
  if (ends_with(w, "ful") || ends_with(w, "ous") || ends_with(w, "ive") ||
      ends_with(w, "able") || ends_with(w, "ible") || ends_with(w, "al"))
    return Pos::Adj;
  return Pos::Noun;
}

std::string lemma(const std::string& surface) {
  std::string w = lower(surface);
  auto it = irregular_verbs().find(w);
  if (it != irregular_verbs().end()) return it->second;
  if (w.size() <= 3) return w;

  if (ends_with(w, "ies") && w.size() > 4) return w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
  if (ends_with(w, "ches") || ends_with(w, "shes") || ends_with(w, "xes") || ends_with(w, "zes"))
    return w.substr(0, w.size() - 2);
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is"))
    w = w.substr(0, w.size() - 1);

  auto strip_participle = [](std::string stem) {
    // runn -> run, explod -> explode, walk -> walk
    const size_t n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] && !vowel(stem[n - 1]) && stem[n - 1] != 'l' &&
        stem[n - 1] != 's')
      return stem.substr(0, n - 1);
    if (n >= 2 && !vowel(stem[n - 1]) && vowel(stem[n - 2]) &&
        (n < 3 || !vowel(stem[n - 3])))
      return stem + "e";
    return stem;
  };

  if (ends_with(w, "ing") && w.size() > 5) return strip_participle(w.substr(0, w.size() - 3));
  if (ends_with(w, "ied"))
    return w.size() == 4 ? w.substr(0, 3) : w.substr(0, w.size() - 3) + "y";
  if (ends_with(w, "ed") && w.size() >= 4) {
    if (w[w.size() - 3] == 'e') return w.substr(0, w.size() - 1);  // agreed -> agree
    return strip_participle(w.substr(0, w.size() - 2));
  }
  return w;
}

}  // namespace trn::text
