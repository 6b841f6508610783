#include "tokenlens/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "tokenlens/prompt.hpp"
#include "tokenlens/similarity.hpp"
#include "tokenlens/stats.hpp"
#include "tokenlens/syntax.hpp"

namespace tokenlens {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- spec ---------------------------------------------------------------

std::vector<std::string> ExperimentSpec::default_strategy_rows() {
    return {"base",  "context", "func",    "total", "devops", "qaer",
            "seer",  "abscost", "relcost", "comb1", "comb2"};
}

ExperimentSpec ExperimentSpec::from_config_file(const std::string& path, int rq) {
    std::ifstream in(path);
    if (!in) throw InvalidSpec("cannot open config: " + path);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidSpec("config parse error: " + std::string(e.what()));
    }

    ExperimentSpec spec;
    spec.rq = rq;
    spec.smelly_corpus = cfg.value("smelly_corpus", "");
    spec.clean_corpus = cfg.value("clean_corpus", "");
    spec.templates_dir = cfg.value("templates_dir", spec.templates_dir);
    spec.out_dir = cfg.value("out_dir", spec.out_dir);
    spec.seed = cfg.value("seed", spec.seed);
    spec.sample_cap = cfg.value("sample_cap", spec.sample_cap);
    spec.similarity_threshold = cfg.value("similarity_threshold", spec.similarity_threshold);
    spec.error_threshold = cfg.value("error_threshold", spec.error_threshold);
    spec.abs_cost_tokens = cfg.value("abs_cost_tokens", spec.abs_cost_tokens);
    spec.rel_cost_fraction = cfg.value("rel_cost_fraction", spec.rel_cost_fraction);
    spec.jobs = cfg.value("jobs", spec.jobs);
    if (cfg.contains("score_mode"))
        spec.score_mode = score_mode_from_string(cfg["score_mode"].get<std::string>());
    if (cfg.contains("strategies"))
        spec.strategies = cfg["strategies"].get<std::vector<std::string>>();

    if (cfg.contains("backend")) {
        const json& b = cfg["backend"];
        spec.backend.base_url = b.value("base_url", spec.backend.base_url);
        spec.backend.completions_path =
            b.value("completions_path", spec.backend.completions_path);
        spec.backend.model = b.value("model", spec.backend.model);
        spec.backend.api_key_env = b.value("api_key_env", spec.backend.api_key_env);
        spec.backend.timeout_seconds = b.value("timeout_seconds", spec.backend.timeout_seconds);
        spec.backend.max_retries = b.value("max_retries", spec.backend.max_retries);
        spec.backend.retry_base_seconds =
            b.value("retry_base_seconds", spec.backend.retry_base_seconds);
        spec.backend.hard_output_cap = b.value("hard_output_cap", spec.backend.hard_output_cap);
        spec.backend.reasoning_usage_field =
            b.value("reasoning_usage_field", spec.backend.reasoning_usage_field);
        spec.backend.requests_per_minute =
            b.value("requests_per_minute", spec.backend.requests_per_minute);
    }
    if (cfg.contains("detector")) {
        const json& d = cfg["detector"];
        DetectorConfig& dc = spec.detector;
        dc.max_parameters = d.value("max_parameters", dc.max_parameters);
        dc.max_body_lines = d.value("max_body_lines", dc.max_body_lines);
        dc.loop_nesting_depth = d.value("loop_nesting_depth", dc.loop_nesting_depth);
        dc.max_loop_count = d.value("max_loop_count", dc.max_loop_count);
        dc.max_cyclomatic = d.value("max_cyclomatic", dc.max_cyclomatic);
        dc.max_logical_operators = d.value("max_logical_operators", dc.max_logical_operators);
        dc.max_regex_metachars = d.value("max_regex_metachars", dc.max_regex_metachars);
        dc.max_name_length = d.value("max_name_length", dc.max_name_length);
        dc.max_mutations = d.value("max_mutations", dc.max_mutations);
        dc.primitive_fraction = d.value("primitive_fraction", dc.primitive_fraction);
    }
    return spec;
}

void ExperimentSpec::validate() const {
    if (rq < 1 || rq > 5) throw InvalidSpec("rq must be in 1..5");
    if (smelly_corpus.empty()) throw InvalidSpec("smelly_corpus is required");
    if (!fs::exists(smelly_corpus))
        throw InvalidSpec("smelly_corpus does not exist: " + smelly_corpus);
    if (rq == 1) {
        if (clean_corpus.empty()) throw InvalidSpec("clean_corpus is required for rq 1");
        if (!fs::exists(clean_corpus))
            throw InvalidSpec("clean_corpus does not exist: " + clean_corpus);
    }
    if (rq == 5 && strategies.empty())
        throw InvalidSpec("strategy list must not be empty for rq 5");
    if (!(similarity_threshold >= 0 && similarity_threshold <= 1))
        throw InvalidSpec("similarity_threshold must be in [0,1]");
    if (!(error_threshold >= 0 && error_threshold <= 1))
        throw InvalidSpec("error_threshold must be in [0,1]");
    if (jobs < 1) throw InvalidSpec("jobs must be >= 1");
}

// ---- small helpers ------------------------------------------------------

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

/// Seeded partial Fisher-Yates; self-contained draw so results do not depend
/// on the standard library's distribution implementation.
std::vector<SourceSample> sample_cap_apply(std::vector<SourceSample> v, std::size_t cap,
                                           std::uint64_t seed, std::uint64_t salt) {
    if (cap == 0 || cap >= v.size()) return v;
    std::mt19937_64 rng(seed ^ (salt * 0x9e3779b97f4a7c15ull));
    for (std::size_t i = 0; i < cap; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng() % (v.size() - i));
        std::swap(v[i], v[j]);
    }
    v.resize(cap);
    return v;
}

struct Analysis {
    bool ok = false;
    SyntaxTree tree;
    FunctionUnit unit;
    ComplexityProfile profile;
    std::vector<SmellFinding> findings;
};

Analysis analyze(const SourceText& code, const DetectorConfig& detector) {
    Analysis a;
    if (code.content.empty()) return a;
    try {
        a.tree = parse(wrap_snippet(code));
        auto units = extract_functions(a.tree);
        if (units.empty()) return a;
        a.unit = units.front();
        a.profile = complexity_profile(a.unit, a.tree);
        a.findings = detect(a.unit, a.tree, detector);
        a.ok = true;
    } catch (const std::exception&) {
        a.ok = false;
    }
    return a;
}

json stats_to_json(const AggregateStats& s) {
    return json{{"count", s.count}, {"mean", s.mean},     {"std", s.std_dev},
                {"min", s.min},     {"q25", s.q25},       {"median", s.median},
                {"q75", s.q75},     {"max", s.max}};
}

/// Eight-row statistics table, one column per labeled value list.
std::string stats_table(const std::vector<std::pair<std::string, std::vector<double>>>& cols) {
    std::vector<AggregateStats> stats;
    std::string out = "statistic";
    for (const auto& [label, values] : cols) {
        out += "," + label;
        stats.push_back(aggregate(values));
    }
    out += "\n";
    const char* rows[] = {"count", "mean", "std", "min", "q25", "median", "q75", "max"};
    for (const char* row : rows) {
        out += row;
        for (const AggregateStats& s : stats) {
            const std::string name = row;
            if (name == "count") out += "," + std::to_string(s.count);
            else if (name == "mean") out += "," + fmt4(s.mean);
            else if (name == "std") out += "," + fmt4(s.std_dev);
            else if (name == "min") out += "," + fmt4(s.min);
            else if (name == "q25") out += "," + fmt4(s.q25);
            else if (name == "median") out += "," + fmt4(s.median);
            else if (name == "q75") out += "," + fmt4(s.q75);
            else out += "," + fmt4(s.max);
        }
        out += "\n";
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    double sum = 0;
    for (double x : v) sum += x;
    return v.empty() ? 0 : sum / static_cast<double>(v.size());
}

}  // namespace

std::string extract_code(const std::string& reply) {
    const std::size_t open = reply.find("```");
    if (open == std::string::npos) return reply;
    std::size_t body = reply.find('\n', open);
    if (body == std::string::npos) return reply;
    ++body;
    const std::size_t close = reply.find("```", body);
    if (close == std::string::npos) return reply.substr(body);
    return reply.substr(body, close - body);
}

// ---- runner -------------------------------------------------------------

namespace {

class Runner {
public:
    Runner(const ExperimentSpec& spec, std::shared_ptr<MockBackend> mock)
        : spec_(spec),
          templates_(TemplateSet::load_dir(spec.templates_dir)),
          gateway_(mock ? Gateway::with_mock(spec.backend, std::move(mock))
                        : Gateway::live(spec.backend)) {}

    ExperimentResult run() {
        fs::create_directories(spec_.out_dir);
        journal_path_ = (fs::path(spec_.out_dir) / "journal.jsonl").string();
        load_resume_state();
        journal_.open(journal_path_, std::ios::app);
        if (!journal_) throw ExperimentFailed("cannot open journal: " + journal_path_);
        if (!resumed_header_) write_header();

        switch (spec_.rq) {
            case 1: run_rq1(); break;
            case 2: run_rq2(); break;
            case 3: run_rq3(); break;
            case 4: run_rq4(); break;
            case 5: run_rq5(); break;
        }
        journal_.flush();

        const std::size_t attempted = trials_ + errors_;
        if (attempted > 0 &&
            static_cast<double>(errors_) >
                spec_.error_threshold * static_cast<double>(attempted))
            throw ExperimentFailed(std::to_string(errors_) + " of " +
                                   std::to_string(attempted) +
                                   " trials failed, above the configured threshold");

        ExperimentResult result;
        result.trials = trials_;
        result.errors = errors_;
        result.journal_path = journal_path_;

        std::ifstream in(journal_path_);
        std::stringstream buf;
        buf << in.rdbuf();
        for (const auto& [name, content] : build_reports(buf.str())) {
            const std::string path = (fs::path(spec_.out_dir) / name).string();
            std::ofstream out(path, std::ios::binary);
            out << content;
            result.report_files.push_back(path);
        }
        return result;
    }

private:
    const ExperimentSpec& spec_;
    TemplateSet templates_;
    Gateway gateway_;
    std::ofstream journal_;
    std::string journal_path_;
    std::size_t trials_ = 0;
    std::size_t errors_ = 0;
    bool resumed_header_ = false;
    std::map<std::string, json> done_trials_;  // trial_key -> trial line
    std::set<std::string> done_pairs_;         // "sample|pair"

    /// Identical bundles can occur in different stages (a model that echoes
    /// its input makes the refactored round byte-equal to the original), so
    /// the dedup key must carry the stage, not just the fingerprint.
    static std::string trial_key(const std::string& sample, const std::string& stage,
                                 const std::string& strategy, const std::string& fp) {
        return sample + "|" + stage + "|" + strategy + "|" + fp;
    }

    void load_resume_state() {
        std::ifstream in(journal_path_);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json obj;
            try {
                obj = json::parse(line);
            } catch (const json::parse_error&) {
                continue;
            }
            const std::string type = obj.value("type", "");
            if (type == "header") resumed_header_ = true;
            else if (type == "trial")
                done_trials_[trial_key(obj.value("sample", ""), obj.value("stage", ""),
                                       obj.value("strategy", ""),
                                       obj.value("fingerprint", ""))] = obj;
            else if (type == "pair")
                done_pairs_.insert(obj.value("sample", "") + "|" + obj.value("pair", ""));
        }
    }

    void write_header() {
        json categories;
        for (SmellKind kind : kAllSmellKinds)
            categories[to_string(kind)] =
                to_string(categorize(kind, spec_.detector));
        json header{{"v", 1},
                    {"type", "header"},
                    {"rq", spec_.rq},
                    {"seed", spec_.seed},
                    {"score_mode", to_string(spec_.score_mode)},
                    {"similarity_threshold", spec_.similarity_threshold},
                    {"strategies", spec_.strategies},
                    {"categories", categories},
                    {"started", iso_timestamp()}};
        journal_ << header.dump() << "\n";
    }

    json complexity_json(const Analysis& a) {
        if (!a.ok) return nullptr;
        return json{{"score", complexity_score(a.profile, spec_.score_mode)},
                    {"volume", a.profile.halstead.volume},
                    {"effort", a.profile.halstead.effort},
                    {"cyclomatic", a.profile.cyclomatic},
                    {"loc_code", a.profile.loc.code}};
    }

    /// Runs one prompt through the gateway, journals it, and returns the
    /// record. Already-journaled fingerprints are reused without a call.
    std::optional<InferenceRecord> run_stage(const SourceSample& sample,
                                             const std::string& corpus_tag,
                                             const std::string& stage, TaskKind task,
                                             const PromptStrategy& strategy,
                                             const std::vector<SmellFinding>& findings,
                                             const Analysis& analysis,
                                             const std::string& strategy_row = "base",
                                             const std::vector<std::string>& smells = {}) {
        try {
            const PromptBundle bundle =
                compose(sample, task, strategy, findings, templates_);
            const std::string fp = fingerprint_hex(bundle_fingerprint(bundle));
            const std::string key = trial_key(sample.id, stage, strategy_row, fp);

            auto it = done_trials_.find(key);
            if (it != done_trials_.end()) {
                ++trials_;
                return record_from_trial(it->second);
            }

            const InferenceRecord record = gateway_.complete(bundle);
            json trial{{"v", 1},
                       {"type", "trial"},
                       {"sample", sample.id},
                       {"corpus", corpus_tag},
                       {"stage", stage},
                       {"task", to_string(task)},
                       {"strategy", strategy_row},
                       {"tags", bundle.strategy_tags},
                       {"prompt_tokens", record.prompt_tokens},
                       {"reasoning_tokens", record.reasoning_tokens},
                       {"completion_tokens", record.completion_tokens},
                       {"total_tokens", record.total_tokens},
                       {"wall_seconds", record.wall_seconds},
                       {"estimated", record.estimated},
                       {"fingerprint", fp},
                       {"output_text", record.output_text},
                       {"complexity", complexity_json(analysis)},
                       {"ts", iso_timestamp()}};
            if (bundle.declared_budget) trial["budget"] = *bundle.declared_budget;
            if (!smells.empty()) trial["smells"] = smells;

            json derived{{"tokens_per_second", time_scaled_tokens(record)}};
            derived["tokens_per_complexity"] = nullptr;
            derived["tokens_per_line"] = nullptr;
            if (analysis.ok) {
                try {
                    const NormalizedTokens norm =
                        normalized_tokens(record, analysis.profile, spec_.score_mode);
                    derived["tokens_per_complexity"] = norm.per_complexity;
                    derived["tokens_per_line"] = norm.per_line;
                } catch (const std::exception&) {
                }
            }
            trial["derived"] = derived;

            journal_ << trial.dump() << "\n";
            journal_.flush();
            done_trials_[key] = trial;
            ++trials_;
            return record;
        } catch (const std::exception& e) {
            json err{{"v", 1},      {"type", "error"}, {"sample", sample.id},
                     {"stage", stage}, {"error", e.what()}, {"ts", iso_timestamp()}};
            journal_ << err.dump() << "\n";
            journal_.flush();
            ++errors_;
            return std::nullopt;
        }
    }

    static InferenceRecord record_from_trial(const json& trial) {
        InferenceRecord r;
        r.prompt_tokens = trial.value("prompt_tokens", std::int64_t{0});
        r.reasoning_tokens = trial.value("reasoning_tokens", std::int64_t{0});
        r.completion_tokens = trial.value("completion_tokens", std::int64_t{0});
        r.total_tokens = trial.value("total_tokens", std::int64_t{0});
        r.wall_seconds = trial.value("wall_seconds", 0.0);
        r.output_text = trial.value("output_text", "");
        r.estimated = trial.value("estimated", false);
        r.backend_id = "journal";
        return r;
    }

    void journal_code_pair(const std::string& sample_id, const std::string& pair,
                           const SourceText& candidate, const SourceText& reference,
                           bool gated) {
        if (!done_pairs_.insert(sample_id + "|" + pair).second) return;
        const CodeBleuScore score = codebleu(candidate, reference);
        json line{{"v", 1},
                  {"type", "pair"},
                  {"sample", sample_id},
                  {"pair", pair},
                  {"codebleu",
                   json{{"ngram", score.ngram},
                        {"weighted_ngram", score.weighted_ngram},
                        {"ast_match", score.ast_match},
                        {"dataflow_match", score.dataflow_match},
                        {"combined", score.combined}}},
                  {"code_similarity",
                   docstring_similarity(candidate.content, reference.content).value}};
        if (gated) line["gate"] = score.combined >= spec_.similarity_threshold;
        journal_ << line.dump() << "\n";
        journal_.flush();
    }

    void journal_doc_pair(const std::string& sample_id, const std::string& pair,
                          const std::string& a, const std::string& b) {
        if (!done_pairs_.insert(sample_id + "|" + pair).second) return;
        json line{{"v", 1},
                  {"type", "pair"},
                  {"sample", sample_id},
                  {"pair", pair},
                  {"docsim", docstring_similarity(a, b).value}};
        journal_ << line.dump() << "\n";
        journal_.flush();
    }

    std::vector<SourceSample> load_sampled(const std::string& path, std::uint64_t salt) {
        std::vector<SourceSample> corpus = load_corpus(path);
        if (spec_.sample_cap > corpus.size())
            throw InvalidSpec("sample_cap exceeds corpus size for " + path);
        return sample_cap_apply(std::move(corpus), spec_.sample_cap, spec_.seed, salt);
    }

    /// Annotated smells when present, detected kinds otherwise.
    static std::vector<std::string> smell_names(const SourceSample& sample,
                                                const Analysis& analysis) {
        std::vector<std::string> names;
        if (!sample.annotated_smells.empty()) {
            for (SmellKind k : sample.annotated_smells) names.push_back(to_string(k));
        } else {
            for (const SmellFinding& f : analysis.findings) {
                const std::string n = to_string(f.kind);
                if (std::find(names.begin(), names.end(), n) == names.end())
                    names.push_back(n);
            }
        }
        return names;
    }

    SourceSample derived_sample(const SourceSample& base, const std::string& suffix,
                                std::string code, SampleLabel label,
                                std::string doc = "") {
        SourceSample s;
        s.id = base.id + "#" + suffix;
        s.code = SourceText{std::move(code), base.code.language};
        s.doc = doc.empty() ? base.doc : std::move(doc);
        s.label = label;
        return s;
    }

    // ---- pipelines ------------------------------------------------------

    void run_rq1() {
        struct CorpusRef {
            const char* tag;
            std::string path;
            std::uint64_t salt;
        };
        const CorpusRef corpora[] = {{"smelly", spec_.smelly_corpus, 1},
                                     {"clean", spec_.clean_corpus, 2}};
        for (const CorpusRef& c : corpora) {
            for (const SourceSample& s : load_sampled(c.path, c.salt)) {
                const Analysis a = analyze(s.code, spec_.detector);
                run_stage(s, c.tag, "evaluate", TaskKind::Evaluate,
                          PromptStrategy::baseline(), {}, a);
            }
        }
    }

    void run_rq2() {
        for (const SourceSample& s : load_sampled(spec_.smelly_corpus, 1)) {
            const Analysis a = analyze(s.code, spec_.detector);

            run_stage(s, "smelly", "evaluate_original", TaskKind::Evaluate,
                      PromptStrategy::baseline(), {}, a);
            auto rf = run_stage(s, "smelly", "refactor", TaskKind::Refactor,
                                PromptStrategy::baseline(), {}, a);
            auto d_o = run_stage(s, "smelly", "describe_original", TaskKind::DescribeCode,
                                 PromptStrategy::baseline(), {}, a);

            if (!rf) continue;
            const SourceSample rf_sample = derived_sample(
                s, "rf", extract_code(rf->output_text), SampleLabel::Refactored);
            const Analysis rf_a = analyze(rf_sample.code, spec_.detector);
            journal_code_pair(s.id, "code&rf", rf_sample.code, s.code, true);

            auto d_r = run_stage(rf_sample, "smelly", "describe_refactored",
                                 TaskKind::DescribeCode, PromptStrategy::baseline(), {},
                                 rf_a);
            run_stage(rf_sample, "smelly", "evaluate_refactored", TaskKind::Evaluate,
                      PromptStrategy::baseline(), {}, rf_a);

            std::optional<InferenceRecord> gc, rf_gc;
            if (d_o) {
                const SourceSample gen_spec = derived_sample(
                    s, "gen_o", "", SampleLabel::Generated, d_o->output_text);
                gc = run_stage(gen_spec, "smelly", "generate_from_original_desc",
                               TaskKind::GenerateFromDoc, PromptStrategy::baseline(), {},
                               Analysis{});
            }
            if (d_r) {
                const SourceSample gen_spec = derived_sample(
                    s, "gen_r", "", SampleLabel::Generated, d_r->output_text);
                rf_gc = run_stage(gen_spec, "smelly", "generate_from_refactored_desc",
                                  TaskKind::GenerateFromDoc, PromptStrategy::baseline(),
                                  {}, Analysis{});
            }

            std::optional<InferenceRecord> d_rg;
            if (rf_gc) {
                const SourceSample rf_gc_sample =
                    derived_sample(s, "rf_gc", extract_code(rf_gc->output_text),
                                   SampleLabel::Generated);
                const Analysis rf_gc_a = analyze(rf_gc_sample.code, spec_.detector);
                d_rg = run_stage(rf_gc_sample, "smelly", "describe_generated",
                                 TaskKind::DescribeCode, PromptStrategy::baseline(), {},
                                 rf_gc_a);
                journal_code_pair(s.id, "rf&rf_gc", rf_gc_sample.code, rf_sample.code,
                                  false);
                if (gc)
                    journal_code_pair(
                        s.id, "gc&rf_gc", rf_gc_sample.code,
                        SourceText{extract_code(gc->output_text), s.code.language},
                        false);
            }
            if (gc)
                journal_code_pair(s.id, "code&gc",
                                  SourceText{extract_code(gc->output_text),
                                             s.code.language},
                                  s.code, false);

            if (d_o && d_r)
                journal_doc_pair(s.id, "d_o&d_r", d_o->output_text, d_r->output_text);
            if (d_o && d_rg)
                journal_doc_pair(s.id, "d_o&d_rg", d_o->output_text, d_rg->output_text);
            if (d_r && d_rg)
                journal_doc_pair(s.id, "d_r&d_rg", d_r->output_text, d_rg->output_text);
        }
    }

    void run_rq3() {
        for (const SourceSample& s : load_sampled(spec_.smelly_corpus, 1)) {
            const Analysis a = analyze(s.code, spec_.detector);
            run_stage(s, "smelly", "evaluate_smelly", TaskKind::Evaluate,
                      PromptStrategy::baseline(), {}, a, "base", smell_names(s, a));
            auto rf = run_stage(s, "smelly", "refactor", TaskKind::Refactor,
                                PromptStrategy::baseline(), {}, a);
            if (!rf) continue;
            const SourceSample rf_sample = derived_sample(
                s, "rf", extract_code(rf->output_text), SampleLabel::Refactored);
            journal_code_pair(s.id, "code&rf", rf_sample.code, s.code, true);
            const Analysis rf_a = analyze(rf_sample.code, spec_.detector);
            run_stage(rf_sample, "smelly", "evaluate_refactored", TaskKind::Evaluate,
                      PromptStrategy::baseline(), {}, rf_a);
        }
    }

    void run_rq4() {
        for (const SourceSample& s : load_sampled(spec_.smelly_corpus, 1)) {
            const Analysis a = analyze(s.code, spec_.detector);
            auto base = run_stage(s, "smelly", "refactor_notips", TaskKind::Refactor,
                                  PromptStrategy::baseline(), {}, a, "notips");
            PromptStrategy tips;
            tips.with(SmellTipsPart{});
            auto tipped = run_stage(s, "smelly", "refactor_tips", TaskKind::Refactor,
                                    tips, a.findings, a, "tips");
            if (base)
                journal_code_pair(s.id, "code&out:notips",
                                  SourceText{extract_code(base->output_text),
                                             s.code.language},
                                  s.code, true);
            if (tipped)
                journal_code_pair(s.id, "code&out:tips",
                                  SourceText{extract_code(tipped->output_text),
                                             s.code.language},
                                  s.code, true);
        }
    }

    PromptStrategy strategy_for_row(const std::string& row, const SourceSample& s) {
        PromptStrategy st;
        const auto ctx = [&] {
            return ContextCodePart{s.id + ".java", "", ""};
        };
        if (row == "base") {
        } else if (row == "context") {
            st.with(ctx());
        } else if (row == "func") {
            st.with(ContextFuncPart{});
        } else if (row == "total") {
            st.with(ctx()).with(ContextFuncPart{});
        } else if (row == "devops") {
            st.with(RolePart{RoleKind::DevOps});
        } else if (row == "qaer") {
            st.with(RolePart{RoleKind::QAer});
        } else if (row == "seer") {
            st.with(RolePart{RoleKind::SEer});
        } else if (row == "abscost") {
            st.with(CostAbsolutePart{spec_.abs_cost_tokens});
        } else if (row == "relcost") {
            st.with(CostRelativePart{spec_.rel_cost_fraction});
        } else if (row == "comb1") {
            st.with(ctx()).with(ContextFuncPart{}).with(RolePart{RoleKind::SEer});
            st.with(CostRelativePart{spec_.rel_cost_fraction});
        } else if (row == "comb2") {
            st.with(ctx()).with(ContextFuncPart{}).with(SmellTipsPart{});
            st.with(CostRelativePart{spec_.rel_cost_fraction});
        } else {
            throw InvalidSpec("unknown strategy row: " + row);
        }
        return st;
    }

    void run_rq5() {
        for (const SourceSample& s : load_sampled(spec_.smelly_corpus, 1)) {
            const Analysis a = analyze(s.code, spec_.detector);
            for (const std::string& row : spec_.strategies) {
                PromptStrategy st;
                try {
                    st = strategy_for_row(row, s);
                } catch (const std::exception& e) {
                    json err{{"v", 1},          {"type", "error"},
                             {"sample", s.id},  {"stage", "refactor:" + row},
                             {"error", e.what()}, {"ts", iso_timestamp()}};
                    journal_ << err.dump() << "\n";
                    ++errors_;
                    continue;
                }
                auto rec = run_stage(s, "smelly", "refactor", TaskKind::Refactor, st,
                                     a.findings, a, row);
                if (rec)
                    journal_code_pair(s.id, "code&out:" + row,
                                      SourceText{extract_code(rec->output_text),
                                                 s.code.language},
                                      s.code, true);
            }
        }
    }
};

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec,
                                std::shared_ptr<MockBackend> mock) {
    spec.validate();
    Runner runner(spec, std::move(mock));
    return runner.run();
}

// ---- report building ----------------------------------------------------

namespace {

struct JournalView {
    json header;
    std::vector<json> trials;
    std::vector<json> pairs;
    std::size_t error_lines = 0;
};

JournalView parse_journal(const std::string& text) {
    JournalView view;
    std::istringstream in(text);
    std::string line;
    std::set<std::string> trial_fps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json obj = json::parse(line);
        const std::string type = obj.value("type", "");
        if (type == "header") view.header = obj;
        else if (type == "trial") {
            // resumed runs may carry duplicates; first occurrence wins
            const std::string key = obj.value("sample", "") + "|" +
                                    obj.value("stage", "") + "|" +
                                    obj.value("strategy", "") + "|" +
                                    obj.value("fingerprint", "");
            if (trial_fps.insert(key).second) view.trials.push_back(std::move(obj));
        } else if (type == "pair")
            view.pairs.push_back(std::move(obj));
        else if (type == "error")
            ++view.error_lines;
    }
    if (view.header.is_null())
        throw ExperimentFailed("journal has no header line");
    return view;
}

double jnum(const json& obj, const char* key) {
    return obj.contains(key) && obj[key].is_number() ? obj[key].get<double>() : 0.0;
}

/// gate map: pair name -> sample -> passed
std::map<std::string, std::map<std::string, bool>> gate_map(const JournalView& v) {
    std::map<std::string, std::map<std::string, bool>> gates;
    for (const json& p : v.pairs)
        if (p.contains("gate"))
            gates[p.value("pair", "")][p.value("sample", "")] = p["gate"].get<bool>();
    return gates;
}

std::string pair_quality_table(const JournalView& v, const std::string& prefix,
                               const std::vector<std::string>& rows,
                               const std::string& row_header) {
    std::string out = row_header +
                      ",ngram,weighted_ngram,ast_match,dataflow_match,combined,"
                      "code_similarity\n";
    for (const std::string& row : rows) {
        std::vector<double> ng, wn, am, dm, cb, cs;
        for (const json& p : v.pairs) {
            if (p.value("pair", "") != prefix + row) continue;
            const json& c = p["codebleu"];
            ng.push_back(jnum(c, "ngram"));
            wn.push_back(jnum(c, "weighted_ngram"));
            am.push_back(jnum(c, "ast_match"));
            dm.push_back(jnum(c, "dataflow_match"));
            cb.push_back(jnum(c, "combined"));
            cs.push_back(jnum(p, "code_similarity"));
        }
        out += row + "," + fmt4(mean_of(ng)) + "," + fmt4(mean_of(wn)) + "," +
               fmt4(mean_of(am)) + "," + fmt4(mean_of(dm)) + "," + fmt4(mean_of(cb)) +
               "," + fmt4(mean_of(cs)) + "\n";
    }
    return out;
}

std::map<std::string, std::string> reports_rq1(const JournalView& v) {
    std::vector<double> smelly, clean;
    std::string fig = "sample,corpus,time_scaled_tokens\n";
    for (const json& t : v.trials) {
        if (t.value("stage", "") != "evaluate") continue;
        const double value = jnum(t["derived"], "tokens_per_second");
        if (t.value("corpus", "") == "smelly") smelly.push_back(value);
        else clean.push_back(value);
        fig += t.value("sample", "") + "," + t.value("corpus", "") + "," + fmt4(value) +
               "\n";
    }
    std::map<std::string, std::string> out;
    out["table1.csv"] = stats_table({{"smelly", smelly}, {"clean", clean}});
    out["fig5.csv"] = fig;
    json summary{{"rq", 1},
                 {"smelly", stats_to_json(aggregate(smelly))},
                 {"clean", stats_to_json(aggregate(clean))}};
    out["summary.json"] = summary.dump(2) + "\n";
    return out;
}

std::map<std::string, std::string> reports_rq2(const JournalView& v) {
    const auto gates = gate_map(v);
    const auto rf_gate = gates.count("code&rf") ? gates.at("code&rf")
                                                : std::map<std::string, bool>{};
    auto passed = [&](const std::string& sample) {
        auto it = rf_gate.find(sample);
        return it != rf_gate.end() && it->second;
    };

    std::map<std::string, double> original_norm, refactored_norm;
    for (const json& t : v.trials) {
        const std::string stage = t.value("stage", "");
        if (stage != "evaluate_original" && stage != "evaluate_refactored") continue;
        if (!t["derived"]["tokens_per_complexity"].is_number()) continue;
        std::string sample = t.value("sample", "");
        const std::size_t hash = sample.find('#');
        if (hash != std::string::npos) sample = sample.substr(0, hash);
        if (!passed(sample)) continue;
        const double value = t["derived"]["tokens_per_complexity"].get<double>();
        (stage == "evaluate_original" ? original_norm : refactored_norm)[sample] = value;
    }
    std::vector<double> original, refactored;
    std::string fig = "sample,original_per_complexity,refactored_per_complexity\n";
    for (const auto& [sample, value] : original_norm) {
        auto it = refactored_norm.find(sample);
        if (it == refactored_norm.end()) continue;
        original.push_back(value);
        refactored.push_back(it->second);
        fig += sample + "," + fmt4(value) + "," + fmt4(it->second) + "\n";
    }

    const std::vector<std::string> code_pairs = {"code&rf", "rf&rf_gc", "code&gc",
                                                 "gc&rf_gc"};
    const std::vector<std::string> doc_pairs = {"d_o&d_r", "d_o&d_rg", "d_r&d_rg"};
    std::string table3 = "pair,metric,count,mean,std,min,max\n";
    auto add_rows = [&](const std::vector<std::string>& pairs, const char* metric,
                        auto getter) {
        for (const std::string& pair : pairs) {
            std::vector<double> values;
            for (const json& p : v.pairs)
                if (p.value("pair", "") == pair) values.push_back(getter(p));
            if (values.empty()) continue;
            const AggregateStats s = aggregate(values);
            table3 += pair + "," + metric + "," + std::to_string(s.count) + "," +
                      fmt4(s.mean) + "," + fmt4(s.std_dev) + "," + fmt4(s.min) + "," +
                      fmt4(s.max) + "\n";
        }
    };
    add_rows(code_pairs, "codebleu",
             [](const json& p) { return jnum(p["codebleu"], "combined"); });
    add_rows(doc_pairs, "docsim", [](const json& p) { return jnum(p, "docsim"); });

    std::string table4 = "pair,mean_code_similarity\n";
    for (const std::string& pair : code_pairs) {
        std::vector<double> values;
        for (const json& p : v.pairs)
            if (p.value("pair", "") == pair)
                values.push_back(jnum(p, "code_similarity"));
        if (!values.empty()) table4 += pair + "," + fmt4(mean_of(values)) + "\n";
    }

    std::map<std::string, std::string> out;
    out["table2.csv"] = stats_table({{"original", original}, {"refactored", refactored}});
    out["table3.csv"] = table3;
    out["table4.csv"] = table4;
    out["fig6.csv"] = fig;
    json summary{{"rq", 2},
                 {"original_mean_per_complexity", mean_of(original)},
                 {"refactored_mean_per_complexity", mean_of(refactored)},
                 {"paired_samples", original.size()}};
    out["summary.json"] = summary.dump(2) + "\n";
    return out;
}

std::map<std::string, std::string> reports_rq3(const JournalView& v) {
    const auto gates = gate_map(v);
    const auto rf_gate = gates.count("code&rf") ? gates.at("code&rf")
                                                : std::map<std::string, bool>{};

    struct PerSample {
        double smelly_total = -1;
        double refactored_total = -1;
        std::vector<std::string> smells;
    };
    std::map<std::string, PerSample> per_sample;
    for (const json& t : v.trials) {
        const std::string stage = t.value("stage", "");
        std::string sample = t.value("sample", "");
        const std::size_t hash = sample.find('#');
        if (hash != std::string::npos) sample = sample.substr(0, hash);
        if (stage == "evaluate_smelly") {
            per_sample[sample].smelly_total = jnum(t, "total_tokens");
            if (t.contains("smells"))
                per_sample[sample].smells = t["smells"].get<std::vector<std::string>>();
        } else if (stage == "evaluate_refactored") {
            per_sample[sample].refactored_total = jnum(t, "total_tokens");
        }
    }

    std::map<std::string, std::vector<double>> by_kind, by_category;
    const json& categories = v.header["categories"];
    for (const auto& [sample, ps] : per_sample) {
        auto it = rf_gate.find(sample);
        if (it == rf_gate.end() || !it->second) continue;
        if (ps.smelly_total < 0 || ps.refactored_total <= 0) continue;
        const double growth =
            (ps.smelly_total - ps.refactored_total) / ps.refactored_total;
        std::set<std::string> cats;
        for (const std::string& kind : ps.smells) {
            by_kind[kind].push_back(growth);
            if (categories.contains(kind))
                cats.insert(categories[kind].get<std::string>());
        }
        for (const std::string& c : cats) by_category[c].push_back(growth);
    }

    std::string table5 = "smell,count,mean_growth\n";
    for (SmellKind kind : kAllSmellKinds) {
        const std::string name = to_string(kind);
        auto it = by_kind.find(name);
        if (it == by_kind.end()) continue;
        table5 += name + "," + std::to_string(it->second.size()) + "," +
                  fmt4(mean_of(it->second)) + "\n";
    }
    std::string fig7 = "category,count,mean_growth\n";
    for (const char* cat : {"Naming", "Expression", "Structure", "Design"}) {
        auto it = by_category.find(cat);
        if (it == by_category.end()) continue;
        fig7 += std::string(cat) + "," + std::to_string(it->second.size()) + "," +
                fmt4(mean_of(it->second)) + "\n";
    }

    std::map<std::string, std::string> out;
    out["table5.csv"] = table5;
    out["fig7.csv"] = fig7;
    json by_kind_json = json::object();
    for (const auto& [kind, values] : by_kind) by_kind_json[kind] = mean_of(values);
    json summary{{"rq", 3}, {"mean_growth_by_smell", by_kind_json}};
    out["summary.json"] = summary.dump(2) + "\n";
    return out;
}

std::map<std::string, std::string> reports_rq4(const JournalView& v) {
    const auto gates = gate_map(v);
    auto passed = [&](const std::string& pair, const std::string& sample) {
        auto pit = gates.find(pair);
        if (pit == gates.end()) return false;
        auto sit = pit->second.find(sample);
        return sit != pit->second.end() && sit->second;
    };

    std::vector<double> base_totals, tips_totals;
    for (const json& t : v.trials) {
        const std::string stage = t.value("stage", "");
        const std::string sample = t.value("sample", "");
        if (stage == "refactor_notips" && passed("code&out:notips", sample))
            base_totals.push_back(jnum(t, "total_tokens"));
        else if (stage == "refactor_tips" && passed("code&out:tips", sample))
            tips_totals.push_back(jnum(t, "total_tokens"));
    }

    std::map<std::string, std::string> out;
    out["table6.csv"] = stats_table({{"baseline", base_totals}, {"tips", tips_totals}});
    out["table4.csv"] =
        pair_quality_table(v, "code&out:", {"notips", "tips"}, "condition");

    const double base_mean = mean_of(base_totals);
    const double tips_mean = mean_of(tips_totals);
    json summary{{"rq", 4},
                 {"baseline_mean_tokens", base_mean},
                 {"tips_mean_tokens", tips_mean},
                 {"mean_reduction",
                  base_mean > 0 ? (base_mean - tips_mean) / base_mean : 0.0}};
    out["summary.json"] = summary.dump(2) + "\n";
    return out;
}

std::map<std::string, std::string> reports_rq5(const JournalView& v) {
    const auto gates = gate_map(v);
    auto passed = [&](const std::string& row, const std::string& sample) {
        auto pit = gates.find("code&out:" + row);
        if (pit == gates.end()) return false;
        auto sit = pit->second.find(sample);
        return sit != pit->second.end() && sit->second;
    };
    const std::vector<std::string> rows =
        v.header.contains("strategies")
            ? v.header["strategies"].get<std::vector<std::string>>()
            : ExperimentSpec::default_strategy_rows();

    std::string table7 =
        "strategy,comp_norm_code,line_scaled_code,comp_norm_token,line_scaled_token\n";
    std::string fig8 = "sample,strategy,total_tokens\n";
    json strategy_means = json::object();
    for (const std::string& row : rows) {
        std::vector<double> cnc, lsc, cnt, lst, totals;
        for (const json& t : v.trials) {
            if (t.value("stage", "") != "refactor" || t.value("strategy", "") != row)
                continue;
            const std::string sample = t.value("sample", "");
            fig8 += sample + "," + row + "," +
                    std::to_string(t.value("total_tokens", std::int64_t{0})) + "\n";
            if (!passed(row, sample)) continue;
            if (!t["complexity"].is_object()) continue;
            const double score = jnum(t["complexity"], "score");
            const double loc = jnum(t["complexity"], "loc_code");
            if (!(score > 0) || !(loc > 0)) continue;
            const double code_tokens = static_cast<double>(
                estimate_tokens(extract_code(t.value("output_text", ""))));
            const double total = jnum(t, "total_tokens");
            cnc.push_back(code_tokens / score);
            lsc.push_back(code_tokens / loc);
            cnt.push_back(total / score);
            lst.push_back(total / loc);
            totals.push_back(total);
        }
        table7 += row + "," + fmt4(mean_of(cnc)) + "," + fmt4(mean_of(lsc)) + "," +
                  fmt4(mean_of(cnt)) + "," + fmt4(mean_of(lst)) + "\n";
        strategy_means[row] = mean_of(totals);
    }

    std::map<std::string, std::string> out;
    out["table7.csv"] = table7;
    out["table8.csv"] = pair_quality_table(v, "code&out:", rows, "strategy");
    out["fig8.csv"] = fig8;
    json summary{{"rq", 5}, {"mean_total_tokens_by_strategy", strategy_means}};
    out["summary.json"] = summary.dump(2) + "\n";
    return out;
}

}  // namespace

std::map<std::string, std::string> build_reports(const std::string& journal_text) {
    const JournalView view = parse_journal(journal_text);
    switch (view.header.value("rq", 0)) {
        case 1: return reports_rq1(view);
        case 2: return reports_rq2(view);
        case 3: return reports_rq3(view);
        case 4: return reports_rq4(view);
        case 5: return reports_rq5(view);
        default: throw ExperimentFailed("journal header has no valid rq tag");
    }
}

std::vector<std::string> verify_report_dir(const std::string& dir) {
    std::vector<std::string> problems;
    const fs::path journal_path = fs::path(dir) / "journal.jsonl";
    std::ifstream in(journal_path);
    if (!in) return {"missing journal: " + journal_path.string()};
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string journal_text = buf.str();

    // derived fields must be recomputable from the raw record
    std::istringstream lines(journal_text);
    std::string line;
    std::size_t line_no = 0;
    auto close_to = [](double a, double b) {
        const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
        return std::fabs(a - b) <= 1e-9 * scale;
    };
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            problems.push_back("journal line " + std::to_string(line_no) +
                               ": unparseable (" + e.what() + ")");
            continue;
        }
        if (obj.value("type", "") != "trial") continue;
        const double total = jnum(obj, "total_tokens");
        const double wall = jnum(obj, "wall_seconds");
        if (!obj.value("estimated", false)) {
            const double sum = jnum(obj, "prompt_tokens") +
                               jnum(obj, "reasoning_tokens") +
                               jnum(obj, "completion_tokens");
            if (sum != total)
                problems.push_back("journal line " + std::to_string(line_no) +
                                   ": token accounting identity broken");
        }
        const json& derived = obj["derived"];
        if (wall > 0 && !close_to(jnum(derived, "tokens_per_second"), total / wall))
            problems.push_back("journal line " + std::to_string(line_no) +
                               ": tokens_per_second mismatch");
        if (obj["complexity"].is_object() &&
            derived["tokens_per_complexity"].is_number()) {
            const double score = jnum(obj["complexity"], "score");
            const double loc = jnum(obj["complexity"], "loc_code");
            if (score > 0 &&
                !close_to(derived["tokens_per_complexity"].get<double>(), total / score))
                problems.push_back("journal line " + std::to_string(line_no) +
                                   ": tokens_per_complexity mismatch");
            if (loc > 0 && derived["tokens_per_line"].is_number() &&
                !close_to(derived["tokens_per_line"].get<double>(), total / loc))
                problems.push_back("journal line " + std::to_string(line_no) +
                                   ": tokens_per_line mismatch");
        }
    }

    std::map<std::string, std::string> expected;
    try {
        expected = build_reports(journal_text);
    } catch (const std::exception& e) {
        problems.push_back(std::string("cannot rebuild reports: ") + e.what());
        return problems;
    }
    for (const auto& [name, content] : expected) {
        const fs::path path = fs::path(dir) / name;
        std::ifstream file(path, std::ios::binary);
        if (!file) {
            problems.push_back("missing report file: " + path.string());
            continue;
        }
        std::stringstream fbuf;
        fbuf << file.rdbuf();
        if (fbuf.str() != content)
            problems.push_back("report differs from journal recomputation: " +
                               path.string());
    }
    return problems;
}

}  // namespace tokenlens
