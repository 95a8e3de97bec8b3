#include "trn/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trn/errors.hpp"

namespace trn {

using nlohmann::json;
using text::Pos;

int DepTree::root() const {
  for (int i = 0; i < size(); ++i)
    if (heads[static_cast<size_t>(i)] < 0) return i;
  throw GraphError("dependency tree has no root");
}

void validate_tree(const DepTree& tree) {
  const int n = tree.size();
  if (n == 0) throw GraphError("empty dependency tree");
  if (static_cast<int>(tree.heads.size()) != n || static_cast<int>(tree.pos.size()) != n ||
      static_cast<int>(tree.labels.size()) != n)
    throw GraphError("dependency tree field lengths disagree");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int h = tree.heads[static_cast<size_t>(i)];
    if (h == -1) {
      ++roots;
      continue;
    }
    if (h < 0 || h >= n || h == i)
      throw GraphError("word " + std::to_string(i) + " has invalid head " + std::to_string(h));
  }
  if (roots != 1) throw GraphError("dependency tree must have exactly one root, found " +
                                   std::to_string(roots));
  // Acyclicity: every chain must reach the root within n steps.
  for (int i = 0; i < n; ++i) {
    int cur = i, steps = 0;
    while (tree.heads[static_cast<size_t>(cur)] != -1) {
      cur = tree.heads[static_cast<size_t>(cur)];
      if (++steps > n) throw GraphError("cycle in head relation at word " + std::to_string(i));
    }
  }
}

DepTree HeuristicParser::parse(const std::vector<text::Word>& words) const {
  const int n = static_cast<int>(words.size());
  if (n == 0) throw GraphError("cannot parse empty word sequence");
  DepTree tree;
  tree.words.reserve(static_cast<size_t>(n));
  for (const auto& w : words) tree.words.push_back(w.surface);

  tree.pos.resize(static_cast<size_t>(n));
  Pos prev = Pos::Other;
  for (int i = 0; i < n; ++i) {
    tree.pos[static_cast<size_t>(i)] = text::coarse_pos(words[static_cast<size_t>(i)].surface, prev);
    prev = tree.pos[static_cast<size_t>(i)];
  }

  auto first_of = [&](Pos p) {
    for (int i = 0; i < n; ++i)
      if (tree.pos[static_cast<size_t>(i)] == p) return i;
    return -1;
  };
  int root = first_of(Pos::Verb);
  if (root < 0) root = first_of(Pos::Noun);
  if (root < 0) root = 0;

  auto nearest_verb = [&](int i, bool left_only) {
    int best = -1, best_dist = n + 1;
    for (int j = 0; j < n; ++j) {
      if (j == i || tree.pos[static_cast<size_t>(j)] != Pos::Verb) continue;
      if (left_only && j > i) continue;
      const int dist = std::abs(j - i);
      if (dist < best_dist || (dist == best_dist && j < best)) {
        best = j;
        best_dist = dist;
      }
    }
    return best;
  };
  auto next_noun = [&](int i) {
    for (int j = i + 1; j < n; ++j)
      if (tree.pos[static_cast<size_t>(j)] == Pos::Noun) return j;
    return -1;
  };

  tree.heads.assign(static_cast<size_t>(n), root);
  tree.labels.assign(static_cast<size_t>(n), "dep");
  tree.heads[static_cast<size_t>(root)] = -1;
  tree.labels[static_cast<size_t>(root)] = "root";
  for (int i = 0; i < n; ++i) {
    if (i == root) continue;
    int head = root;
    const char* label = "dep";
    switch (tree.pos[static_cast<size_t>(i)]) {
      case Pos::Det:
      case Pos::Adj: {
        const int noun = next_noun(i);
        if (noun >= 0 && noun != i) head = noun;
        label = tree.pos[static_cast<size_t>(i)] == Pos::Det ? "det" : "amod";
        break;
      }
      case Pos::Noun:
      case Pos::Pron:
      case Pos::Num: {
        const int verb = nearest_verb(i, /*left_only=*/false);
        if (verb >= 0) head = verb;
        label = i < head ? "nsubj" : "obj";
        break;
      }
      case Pos::Aux:
      case Pos::Adv:
      case Pos::Adp:
      case Pos::Conj: {
        const int verb = nearest_verb(i, /*left_only=*/true);
        if (verb >= 0) head = verb;
        label = tree.pos[static_cast<size_t>(i)] == Pos::Aux ? "aux" : "mod";
        break;
      }
      case Pos::Punct:
        label = "punct";
        break;
      default:
        break;
    }
    if (head == i) head = root;  // never self-attach
    tree.heads[static_cast<size_t>(i)] = head;
    tree.labels[static_cast<size_t>(i)] = label;
  }
  // Nouns may point at non-root verbs and other verbs point at the root, so
  // the head relation terminates; validate to be safe.
  validate_tree(tree);
  return tree;
}

RecordedParser::RecordedParser(const std::string& fixture_path) {
  std::ifstream in(fixture_path, std::ios::binary);
  if (!in) throw GraphError("cannot open parse fixture: " + fixture_path);
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw GraphError("malformed parse fixture " + fixture_path + ": " + e.what());
  }
  for (const auto& entry : root.at("parses")) {
    DepTree tree;
    tree.words = entry.at("words").get<std::vector<std::string>>();
    tree.heads = entry.at("heads").get<std::vector<int>>();
    tree.labels = entry.at("labels").get<std::vector<std::string>>();
    for (const auto& p : entry.at("pos"))
      tree.pos.push_back(text::pos_from_name(p.get<std::string>()));
    validate_tree(tree);
    entries_.emplace_back(tree.words, std::move(tree));
  }
}

DepTree RecordedParser::parse(const std::vector<text::Word>& words) const {
  std::vector<std::string> key;
  key.reserve(words.size());
  for (const auto& w : words) key.push_back(w.surface);
  for (const auto& [k, tree] : entries_)
    if (k == key) return tree;
  std::string joined;
  for (const auto& w : key) joined += w + " ";
  throw AlignmentError("no recorded parse matches word sequence: " + joined);
}

std::unique_ptr<DependencyParser> make_parser(const std::string& spec) {
  if (spec == "heuristic" || spec.empty()) return std::make_unique<HeuristicParser>();
  const std::string prefix = "recorded:";
  if (spec.rfind(prefix, 0) == 0)
    return std::make_unique<RecordedParser>(spec.substr(prefix.size()));
  throw UsageError("unknown parser spec '" + spec + "' (expected heuristic or recorded:<path>)");
}

DepTree parse_dependencies(const DependencyParser& parser, const std::string& trimmed_text) {
  if (trimmed_text.empty()) throw ValidationError("cannot parse empty text");
  const auto words = text::tokenize_words(trimmed_text);
  if (words.empty()) throw ValidationError("text contains no words: " + trimmed_text);
  DepTree tree = parser.parse(words);
  if (tree.size() != static_cast<int>(words.size()))
    throw AlignmentError("parser returned " + std::to_string(tree.size()) + " words for " +
                         std::to_string(words.size()) + " input words");
  for (size_t i = 0; i < words.size(); ++i)
    if (tree.words[i] != words[i].surface)
      throw AlignmentError("parser segmentation mismatch at word " + std::to_string(i) + ": '" +
                           tree.words[i] + "' vs '" + words[i].surface + "'");
  validate_tree(tree);
  return tree;
}

std::vector<int> identify_event_words(const DepTree& tree) {
  std::vector<int> events;
  for (int i = 0; i < tree.size(); ++i) {
    const Pos p = tree.pos[static_cast<size_t>(i)];
    if (p == Pos::Noun || p == Pos::Verb) events.push_back(i);
  }
  return events;
}

const char* edge_type_name(EdgeType t) {
  switch (t) {
    case EdgeType::qq: return "qq";
    case EdgeType::pp: return "pp";
    case EdgeType::pq: return "pq";
    case EdgeType::qp: return "qp";
  }
  return "?";
}

EdgeType classify_edge(int src, int dst, int n_question) {
  const bool src_q = src < n_question;
  const bool dst_q = dst < n_question;
  if (src_q && dst_q) return EdgeType::qq;
  if (!src_q && !dst_q) return EdgeType::pp;
  return src_q ? EdgeType::qp : EdgeType::pq;
}

JointGraph build_joint_graph(const DepTree& question_tree, const DepTree& passage_tree) {
  validate_tree(question_tree);
  validate_tree(passage_tree);
  JointGraph g;
  g.n_question = question_tree.size();
  g.n_passage = passage_tree.size();

  std::set<std::pair<int, int>> pairs;
  auto connect = [&pairs](int u, int v) {
    if (u == v) return;
    pairs.emplace(u, v);
    pairs.emplace(v, u);
  };

  for (int i = 0; i < question_tree.size(); ++i) {
    const int h = question_tree.heads[static_cast<size_t>(i)];
    if (h >= 0) connect(i, h);
  }
  for (int i = 0; i < passage_tree.size(); ++i) {
    const int h = passage_tree.heads[static_cast<size_t>(i)];
    if (h >= 0) connect(g.n_question + i, g.n_question + h);
  }

  connect(question_tree.root(), g.n_question + passage_tree.root());

  // Co-mentioned event words: equal lemma across the two sides.
  const auto q_events = identify_event_words(question_tree);
  const auto p_events = identify_event_words(passage_tree);
  for (int qi : q_events) {
    const std::string ql = text::lemma(question_tree.words[static_cast<size_t>(qi)]);
    for (int pi : p_events)
      if (ql == text::lemma(passage_tree.words[static_cast<size_t>(pi)]))
        connect(qi, g.n_question + pi);
  }

  g.edges.reserve(pairs.size());
  for (const auto& [src, dst] : pairs)
    g.edges.push_back({src, dst, classify_edge(src, dst, g.n_question)});
  std::sort(g.edges.begin(), g.edges.end());

  g.incoming.assign(static_cast<size_t>(g.n_nodes()), {});
  for (const auto& e : g.edges)
    g.incoming[static_cast<size_t>(e.dst)].push_back({e.src, e.type});
  return g;
}

json graph_to_json(const JointGraph& graph) {
  json root;
  root["n_question"] = graph.n_question;
  root["n_passage"] = graph.n_passage;
  root["edges"] = json::array();
  for (const auto& e : graph.edges)
    root["edges"].push_back({{"src", e.src}, {"dst", e.dst}, {"type", edge_type_name(e.type)}});
  return root;
}

}  // namespace trn
