#ifndef TRN_CLI_HPP
#define TRN_CLI_HPP

#include <iosfwd>
#include <string>

#include "trn/config.hpp"

namespace trn {

// Exit codes: 0 ok, 1 runtime failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Reads either corpus layout: a top-level array is the TORQUE split format,
// an object is the normalized schema.
Corpus load_corpus_auto(const std::string& path);

// Applies TRN_CACHE_DIR when the path does not exist as given.
std::string resolve_checkpoint_path(const std::string& path);

int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_predict(const RunConfig& cfg, const std::string& out_path, std::ostream& out,
                std::ostream& err);
int cmd_evaluate(const std::string& gold_path, const std::string& pred_path,
                 const std::string& report_path, std::ostream& out, std::ostream& err);
int cmd_export_graph(const std::string& question_text, const std::string& passage_text,
                     const std::string& parser_spec, const std::string& out_path,
                     std::ostream& out, std::ostream& err);

int run_cli(int argc, char** argv);

}  // namespace trn

#endif
