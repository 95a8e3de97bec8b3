#include "trn/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trn/errors.hpp"

namespace trn {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& body, const std::string& origin) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw IngestionError("malformed JSON in " + origin + ": " + e.what());
  }
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

const Passage* Corpus::find_passage(const std::string& id) const {
  for (const auto& p : passages)
    if (p.id == id) return &p;
  return nullptr;
}

const Question* Corpus::find_question(const std::string& id) const {
  for (const auto& q : questions)
    if (q.id == id) return &q;
  return nullptr;
}

void validate_corpus(Corpus& corpus) {
  std::set<std::string> passage_ids;
  for (auto& p : corpus.passages) {
    if (p.id.empty()) throw ValidationError("passage with empty id");
    if (!passage_ids.insert(p.id).second)
      throw ValidationError("duplicate passage id: " + p.id);
    int prev_offset = -1;
    for (size_t i = 0; i < p.words.size(); ++i) {
      const auto& w = p.words[i];
      if (w.offset <= prev_offset)
        throw ValidationError("passage " + p.id + ": word offsets not strictly increasing");
      if (w.surface.empty() ||
          w.offset + static_cast<int>(w.surface.size()) > static_cast<int>(p.text.size()))
        throw ValidationError("passage " + p.id + ": word " + std::to_string(i) +
                              " exceeds text bounds");
      prev_offset = w.offset;
    }
    p.event_candidates = sorted_unique(std::move(p.event_candidates));
    for (int e : p.event_candidates)
      if (e < 0 || e >= static_cast<int>(p.words.size()))
        throw ValidationError("passage " + p.id + ": event candidate index " +
                              std::to_string(e) + " out of bounds");
  }

  std::set<std::string> question_ids;
  std::map<std::string, std::string> question_group;
  for (auto& q : corpus.questions) {
    if (q.id.empty()) throw ValidationError("question with empty id");
    if (!question_ids.insert(q.id).second)
      throw ValidationError("duplicate question id: " + q.id);
    const Passage* p = corpus.find_passage(q.passage_id);
    if (!p)
      throw ValidationError("question " + q.id + ": unknown passage " + q.passage_id);
    if (q.group_id.empty())
      throw ValidationError("question " + q.id + ": missing group id");
    q.gold_answers = sorted_unique(std::move(q.gold_answers));
    for (int a : q.gold_answers)
      if (a < 0 || a >= static_cast<int>(p->words.size()))
        throw ValidationError("question " + q.id + ": answer index " + std::to_string(a) +
                              " out of passage bounds");
    question_group[q.id] = q.group_id;
  }

  std::set<std::string> group_ids;
  std::set<std::string> grouped_questions;
  for (auto& g : corpus.groups) {
    if (!group_ids.insert(g.id).second)
      throw ValidationError("duplicate group id: " + g.id);
    if (g.question_ids.empty())
      throw ValidationError("group " + g.id + " is empty");
    std::sort(g.question_ids.begin(), g.question_ids.end());
    for (const auto& qid : g.question_ids) {
      const Question* q = corpus.find_question(qid);
      if (!q) throw ValidationError("group " + g.id + ": unknown question " + qid);
      if (q->passage_id != g.passage_id)
        throw ValidationError("group " + g.id + ": member " + qid +
                              " belongs to passage " + q->passage_id + ", group claims " +
                              g.passage_id);
      if (q->group_id != g.id)
        throw ValidationError("question " + qid + " lists group " + q->group_id +
                              " but appears in group " + g.id);
      if (!grouped_questions.insert(qid).second)
        throw ValidationError("question " + qid + " appears in more than one group");
    }
  }
  for (const auto& [qid, gid] : question_group)
    if (!grouped_questions.count(qid))
      throw ValidationError("question " + qid + " references group " + gid +
                            " which does not list it");
}

Corpus load_torque(const std::string& path) {
  const json root = parse_json(read_file(path), path);
  if (!root.is_array())
    throw IngestionError(path + ": expected a top-level array of passages");

  Corpus corpus;
  int passage_no = 0;
  for (const auto& pj : root) {
    ++passage_no;
    const std::string where = path + ", passage #" + std::to_string(passage_no);
    if (!pj.is_object() || !pj.contains("passage"))
      throw IngestionError(where + ": missing \"passage\" text");
    Passage passage;
    passage.text = pj.at("passage").get<std::string>();
    passage.id = pj.contains("passage_id") ? pj.at("passage_id").get<std::string>()
                                           : "passage-" + std::to_string(passage_no);
    passage.words = text::tokenize_words(passage.text);

    if (pj.contains("events")) {
      const auto& ev = pj.at("events");
      const auto& indices = ev.is_object() ? ev.at("indices") : ev;
      if (!indices.is_array()) throw IngestionError(where + ": events must be an index array");
      for (const auto& e : indices) passage.event_candidates.push_back(e.get<int>());
    } else {
      text::Pos prev = text::Pos::Other;
      for (size_t i = 0; i < passage.words.size(); ++i) {
        const text::Pos pos = text::coarse_pos(passage.words[i].surface, prev);
        if (pos == text::Pos::Noun || pos == text::Pos::Verb)
          passage.event_candidates.push_back(static_cast<int>(i));
        prev = pos;
      }
    }

    const char* block_key = pj.contains("question_blocks") ? "question_blocks"
                            : pj.contains("question_answer_pairs") ? "question_answer_pairs"
                                                                   : nullptr;
    if (!block_key) throw IngestionError(where + ": missing question blocks");
    for (const auto& qj : pj.at(block_key)) {
      Question q;
      if (!qj.contains("question_id"))
        throw IngestionError(where + ": question block without question_id");
      q.id = qj.at("question_id").get<std::string>();
      if (!qj.contains("question"))
        throw IngestionError(where + ": question " + q.id + " has no text");
      q.text = qj.at("question").get<std::string>();
      q.passage_id = passage.id;
      if (qj.contains("group_id"))
        q.group_id = qj.at("group_id").get<std::string>();
      else if (qj.contains("cluster_id"))
        q.group_id = qj.at("cluster_id").get<std::string>();
      else
        throw IngestionError(where + ": question " + q.id + " has no group annotation");
      const json* answers = nullptr;
      if (qj.contains("answer") && qj.at("answer").is_object() &&
          qj.at("answer").contains("indices"))
        answers = &qj.at("answer").at("indices");
      else if (qj.contains("answer_indices"))
        answers = &qj.at("answer_indices");
      if (!answers || !answers->is_array())
        throw IngestionError(where + ": question " + q.id + " has no answer index array");
      for (const auto& a : *answers) q.gold_answers.push_back(a.get<int>());
      corpus.questions.push_back(std::move(q));
    }
    corpus.passages.push_back(std::move(passage));
  }

  // Groups come from the per-question annotation.
  std::map<std::string, QuestionGroup> groups;
  for (const auto& q : corpus.questions) {
    auto [it, fresh] = groups.try_emplace(q.group_id);
    if (fresh) {
      it->second.id = q.group_id;
      it->second.passage_id = q.passage_id;
    }
    it->second.question_ids.push_back(q.id);
  }
  for (auto& [_, g] : groups) corpus.groups.push_back(std::move(g));

  validate_corpus(corpus);
  return corpus;
}

std::string corpus_to_json(const Corpus& corpus) {
  json root;
  root["passages"] = json::array();
  for (const auto& p : corpus.passages) {
    json pj;
    pj["id"] = p.id;
    pj["text"] = p.text;
    pj["words"] = json::array();
    for (const auto& w : p.words) pj["words"].push_back({{"t", w.surface}, {"o", w.offset}});
    pj["events"] = p.event_candidates;
    root["passages"].push_back(std::move(pj));
  }
  root["questions"] = json::array();
  for (const auto& q : corpus.questions)
    root["questions"].push_back({{"id", q.id},
                                 {"text", q.text},
                                 {"passage_id", q.passage_id},
                                 {"group_id", q.group_id},
                                 {"answers", q.gold_answers}});
  root["groups"] = json::array();
  for (const auto& g : corpus.groups)
    root["groups"].push_back(
        {{"id", g.id}, {"passage_id", g.passage_id}, {"questions", g.question_ids}});
  return root.dump(2);
}

Corpus corpus_from_json(const std::string& body, const std::string& origin) {
  const json root = parse_json(body, origin);
  Corpus corpus;
  try {
    for (const auto& pj : root.at("passages")) {
      Passage p;
      p.id = pj.at("id").get<std::string>();
      p.text = pj.at("text").get<std::string>();
      for (const auto& wj : pj.at("words"))
        p.words.push_back({wj.at("t").get<std::string>(), wj.at("o").get<int>()});
      p.event_candidates = pj.at("events").get<std::vector<int>>();
      corpus.passages.push_back(std::move(p));
    }
    for (const auto& qj : root.at("questions")) {
      Question q;
      q.id = qj.at("id").get<std::string>();
      q.text = qj.at("text").get<std::string>();
      q.passage_id = qj.at("passage_id").get<std::string>();
      q.group_id = qj.at("group_id").get<std::string>();
      q.gold_answers = qj.at("answers").get<std::vector<int>>();
      corpus.questions.push_back(std::move(q));
    }
    for (const auto& gj : root.at("groups")) {
      QuestionGroup g;
      g.id = gj.at("id").get<std::string>();
      g.passage_id = gj.at("passage_id").get<std::string>();
      g.question_ids = gj.at("questions").get<std::vector<std::string>>();
      corpus.groups.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw IngestionError("malformed normalized corpus in " + origin + ": " + e.what());
  }
  validate_corpus(corpus);
  return corpus;
}

Corpus load_normalized(const std::string& path) {
  return corpus_from_json(read_file(path), path);
}

void save_normalized(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file: " + path);
  out << corpus_to_json(corpus) << '\n';
}

// ---------------------------------------------------------------------------

std::vector<TokenSpan> subword_spans(const std::string& text) {
  std::vector<TokenSpan> spans;
  for (const auto& w : text::tokenize_words(text)) {
    const std::string lw = text::lower(w.surface);
    const int len = static_cast<int>(lw.size());
    for (int off = 0; off < len; off += kMaxPieceLen) {
      const int piece_len = std::min(kMaxPieceLen, len - off);
      spans.push_back({lw.substr(static_cast<size_t>(off), static_cast<size_t>(piece_len)),
                       w.offset + off, w.offset + off + piece_len});
    }
  }
  return spans;
}

Vocabulary::Vocabulary(std::vector<std::string> pieces) {
  pieces_ = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};
  std::sort(pieces.begin(), pieces.end());
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  for (auto& p : pieces) pieces_.push_back(std::move(p));
  for (size_t i = 0; i < pieces_.size(); ++i) index_[pieces_[i]] = static_cast<int>(i);
}

Vocabulary Vocabulary::build(const Corpus& corpus) {
  std::vector<std::string> pieces;
  auto collect = [&pieces](const std::string& txt) {
    for (auto& s : subword_spans(txt)) pieces.push_back(std::move(s.piece));
  };
  for (const auto& p : corpus.passages) collect(p.text);
  for (const auto& q : corpus.questions) collect(q.text);
  return Vocabulary(std::move(pieces));
}

int Vocabulary::encode(const std::string& piece) const {
  auto it = index_.find(piece);
  return it == index_.end() ? kUnk : it->second;
}

WordTokenMap align_words_to_tokens(const std::vector<text::Word>& words,
                                   const std::vector<TokenSpan>& tokens) {
  WordTokenMap map;
  map.word_to_token.assign(words.size(), -1);
  map.token_to_word.assign(tokens.size(), -1);
  size_t t = 0;
  for (size_t w = 0; w < words.size(); ++w) {
    const int begin = words[w].offset;
    const int end = begin + static_cast<int>(words[w].surface.size());
    while (t < tokens.size() && tokens[t].begin < begin) ++t;
    if (t >= tokens.size() || tokens[t].begin != begin)
      throw AlignmentError("word '" + words[w].surface + "' at offset " +
                           std::to_string(begin) + " has no covering token");
    map.word_to_token[w] = static_cast<int>(t);
    while (t < tokens.size() && tokens[t].begin < end) {
      map.token_to_word[t] = static_cast<int>(w);
      ++t;
    }
  }
  return map;
}

ModelInput build_model_input(const Question& question, const Passage& passage,
                             const Vocabulary& vocab, int max_seq_len) {
  if (question.text.empty())
    throw ValidationError("question " + question.id + ": empty question text");
  if (passage.text.empty())
    throw ValidationError("passage " + passage.id + ": empty passage text");

  const auto q_spans = subword_spans(question.text);
  const auto p_spans = subword_spans(passage.text);
  const int total = 3 + static_cast<int>(q_spans.size()) + static_cast<int>(p_spans.size());
  if (total > max_seq_len) {
    // Find whether a gold answer word would be dropped by naive truncation.
    bool labeled_loss = false;
    const int room_for_passage = max_seq_len - 3 - static_cast<int>(q_spans.size());
    auto tmp_map = align_words_to_tokens(passage.words, p_spans);
    for (int a : question.gold_answers)
      if (tmp_map.word_to_token[static_cast<size_t>(a)] >= room_for_passage) labeled_loss = true;
    throw TruncationError(
        "question " + question.id + ": sequence length " + std::to_string(total) +
        " exceeds max_seq_len " + std::to_string(max_seq_len) +
        (labeled_loss ? " and would drop gold answer words" : ""));
  }

  ModelInput input;
  input.question_id = question.id;
  input.question_words = text::tokenize_words(question.text);
  input.passage_words = passage.words;

  input.token_ids.push_back(Vocabulary::kCls);
  input.question_begin = 1;
  for (const auto& s : q_spans) input.token_ids.push_back(vocab.encode(s.piece));
  input.question_end = static_cast<int>(input.token_ids.size());
  input.token_ids.push_back(Vocabulary::kSep);
  input.passage_begin = static_cast<int>(input.token_ids.size());
  for (const auto& s : p_spans) input.token_ids.push_back(vocab.encode(s.piece));
  input.passage_end = static_cast<int>(input.token_ids.size());
  input.token_ids.push_back(Vocabulary::kSep);
  input.attention_mask.assign(input.token_ids.size(), 1);

  // Segment-relative alignment shifted to absolute positions.
  input.question_map = align_words_to_tokens(input.question_words, q_spans);
  for (auto& t : input.question_map.word_to_token) t += input.question_begin;
  input.passage_map = align_words_to_tokens(input.passage_words, p_spans);
  for (auto& t : input.passage_map.word_to_token) t += input.passage_begin;

  // Re-anchor token_to_word onto the full sequence.
  std::vector<int> q_t2w(input.token_ids.size(), -1);
  for (size_t t = 0; t < input.question_map.token_to_word.size(); ++t)
    q_t2w[static_cast<size_t>(input.question_begin) + t] = input.question_map.token_to_word[t];
  input.question_map.token_to_word = std::move(q_t2w);
  std::vector<int> p_t2w(input.token_ids.size(), -1);
  for (size_t t = 0; t < input.passage_map.token_to_word.size(); ++t)
    p_t2w[static_cast<size_t>(input.passage_begin) + t] = input.passage_map.token_to_word[t];
  input.passage_map.token_to_word = std::move(p_t2w);

  return input;
}

}  // namespace trn
