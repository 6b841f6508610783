#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tokenlens/complexity.hpp"
#include "tokenlens/corpus.hpp"
#include "tokenlens/gateway.hpp"
#include "tokenlens/smells.hpp"

namespace tokenlens {

/// One research-question run, fully described. Loaded from a JSON config
/// file; every field has a workable default except the corpus paths.
struct ExperimentSpec {
    int rq = 1;
    std::string smelly_corpus;
    std::string clean_corpus;  // RQ1 only
    std::string templates_dir = "templates";
    std::string out_dir = "out";
    BackendConfig backend;
    DetectorConfig detector;
    ScoreMode score_mode = ScoreMode::HalsteadEffort;
    std::uint64_t seed = 0;
    std::size_t sample_cap = 0;  // 0 = whole corpus
    double similarity_threshold = 0.70;
    double error_threshold = 0.20;  // abort when error fraction exceeds this
    std::size_t abs_cost_tokens = 1024;
    double rel_cost_fraction = 0.5;
    /// RQ5 strategy rows, in report order. Empty after explicit configuration
    /// is a validation error; leaving the key out selects the default rows.
    std::vector<std::string> strategies = default_strategy_rows();
    int jobs = 1;

    static std::vector<std::string> default_strategy_rows();
    static ExperimentSpec from_config_file(const std::string& path, int rq);
    void validate() const;
};

struct InvalidSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExperimentFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentResult {
    std::size_t trials = 0;
    std::size_t errors = 0;
    std::string journal_path;
    std::vector<std::string> report_files;
};

/// Runs the configured pipeline end to end: every trial is appended to
/// out_dir/journal.jsonl before aggregation, then the report files are
/// rebuilt from the journal alone. Pass a mock backend for offline runs;
/// nullptr selects the live HTTP backend. An existing journal in out_dir is
/// reused: trials whose fingerprints are already recorded skip the backend.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                std::shared_ptr<MockBackend> mock = nullptr);

/// Rebuilds every report file from journal text. Pure: the same journal
/// bytes always produce the same file map (filename -> content).
std::map<std::string, std::string> build_reports(const std::string& journal_text);

/// Recomputes all derived fields and report files from dir/journal.jsonl and
/// compares them with what is on disk. Returns a list of discrepancies;
/// empty means the reports are faithful to the journal.
std::vector<std::string> verify_report_dir(const std::string& dir);

/// Strips markdown code fences from a model reply, returning the code body.
std::string extract_code(const std::string& reply);

}  // namespace tokenlens
