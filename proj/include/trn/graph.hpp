#ifndef TRN_GRAPH_HPP
#define TRN_GRAPH_HPP

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "trn/text.hpp"

namespace trn {

struct DepTree {
  std::vector<std::string> words;     // surfaces, aligned with the corpus word list
  std::vector<int> heads;             // head index per word, -1 for the root
  std::vector<std::string> labels;    // dependency labels
  std::vector<text::Pos> pos;         // coarse POS per word

  int size() const { return static_cast<int>(words.size()); }
  int root() const;
};

// Throws GraphError unless the tree has exactly one root and an acyclic head
// relation with indices in range.
void validate_tree(const DepTree& tree);

// Pluggable parser so the pipeline can run against recorded parses instead of
// an external NLP toolkit.
class DependencyParser {
 public:
  virtual ~DependencyParser() = default;
  virtual DepTree parse(const std::vector<text::Word>& words) const = 0;
};

// Built-in deterministic parser: lexicon/suffix POS tagging plus a shallow
// attachment scheme (determiners/adjectives to the following noun, nominals
// to the nearest verb, verbs to the root verb). Not a linguistic parser;
// produces the tree structure the graph step needs without external tools.
class HeuristicParser : public DependencyParser {
 public:
  DepTree parse(const std::vector<text::Word>& words) const override;
};

// Replays parses recorded from an external parser. The fixture file maps the
// exact word sequence to heads/labels/POS.
class RecordedParser : public DependencyParser {
 public:
  explicit RecordedParser(const std::string& fixture_path);
  DepTree parse(const std::vector<text::Word>& words) const override;

 private:
  struct Entry {
    DepTree tree;
  };
  std::vector<std::pair<std::vector<std::string>, DepTree>> entries_;
};

std::unique_ptr<DependencyParser> make_parser(const std::string& spec);  // "heuristic" | "recorded:<path>"

DepTree parse_dependencies(const DependencyParser& parser, const std::string& trimmed_text);

// Word indices whose coarse POS is noun or verb.
std::vector<int> identify_event_words(const DepTree& tree);

enum class EdgeType { qq = 0, pp = 1, pq = 2, qp = 3 };
const char* edge_type_name(EdgeType t);

struct GraphEdge {
  int src = 0;
  int dst = 0;
  EdgeType type = EdgeType::qq;

  auto operator<=>(const GraphEdge&) const = default;
};

// Joint question+passage graph. Nodes 0..n_question-1 are question words,
// n_question..n_question+n_passage-1 are passage words.
struct JointGraph {
  int n_question = 0;
  int n_passage = 0;
  std::vector<GraphEdge> edges;  // sorted, unique (src,dst)

  struct Incoming {
    int src = 0;
    EdgeType type = EdgeType::qq;
  };
  std::vector<std::vector<Incoming>> incoming;  // N_i per node

  int n_nodes() const { return n_question + n_passage; }
  bool is_question_node(int i) const { return i < n_question; }
};

EdgeType classify_edge(int src, int dst, int n_question);

// Dependency edges (both directions) within each side, a bidirectional
// root-root bridge, and bidirectional bridges between question/passage event
// words with equal lemmas.
JointGraph build_joint_graph(const DepTree& question_tree, const DepTree& passage_tree);

nlohmann::json graph_to_json(const JointGraph& graph);

}  // namespace trn

#endif
