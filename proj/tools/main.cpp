#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tokenlens/complexity.hpp"
#include "tokenlens/corpus.hpp"
#include "tokenlens/experiment.hpp"
#include "tokenlens/prompt.hpp"
#include "tokenlens/similarity.hpp"
#include "tokenlens/smells.hpp"
#include "tokenlens/syntax.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tokenlens;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<SourceSample> gather_inputs(const std::string& corpus_path,
                                        const std::string& src_path) {
    if (!corpus_path.empty()) return load_corpus(corpus_path);
    SourceSample sample;
    sample.id = fs::path(src_path).stem().string();
    sample.code = SourceText{read_file(src_path), Language::Java};
    return {sample};
}

int cmd_smell(const std::string& corpus_path, const std::string& src_path) {
    const DetectorConfig config;
    for (const SourceSample& sample : gather_inputs(corpus_path, src_path)) {
        const SyntaxTree tree = parse(wrap_snippet(sample.code));
        for (const FunctionUnit& unit : extract_functions(tree)) {
            for (const SmellFinding& f : detect(unit, tree, config)) {
                json line{{"id", sample.id},
                          {"kind", to_string(f.kind)},
                          {"category", to_string(f.category)},
                          {"span", json::array({f.span.begin, f.span.end})},
                          {"measured", f.measured_value},
                          {"threshold", f.threshold},
                          {"evidence", f.evidence}};
                std::cout << line.dump() << "\n";
            }
        }
    }
    return 0;
}

int cmd_metrics(const std::string& corpus_path, const std::string& src_path) {
    for (const SourceSample& sample : gather_inputs(corpus_path, src_path)) {
        const SyntaxTree tree = parse(wrap_snippet(sample.code));
        for (const FunctionUnit& unit : extract_functions(tree)) {
            const ComplexityProfile p = complexity_profile(unit, tree);
            json line{{"id", sample.id + ":" + unit.name},
                      {"n1", p.halstead.distinct_operators},
                      {"n2", p.halstead.distinct_operands},
                      {"N1", p.halstead.total_operators},
                      {"N2", p.halstead.total_operands},
                      {"volume", p.halstead.volume},
                      {"difficulty", p.halstead.difficulty},
                      {"effort", p.halstead.effort},
                      {"cyclomatic", p.cyclomatic},
                      {"loc", json{{"total", p.loc.total},
                                   {"code", p.loc.code},
                                   {"blank", p.loc.blank},
                                   {"comment", p.loc.comment}}}};
            std::cout << line.dump() << "\n";
        }
    }
    return 0;
}

int cmd_similarity(const std::string& pairs_path) {
    std::ifstream in(pairs_path);
    if (!in) throw std::runtime_error("cannot open pairs file: " + pairs_path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const json obj = json::parse(line);
        json out{{"id", obj.value("id", "")}};
        if (obj.contains("candidate") && obj.contains("reference")) {
            const CodeBleuScore s =
                codebleu(SourceText{obj["candidate"].get<std::string>()},
                         SourceText{obj["reference"].get<std::string>()});
            out["codebleu"] = json{{"ngram", s.ngram},
                                   {"weighted_ngram", s.weighted_ngram},
                                   {"ast_match", s.ast_match},
                                   {"dataflow_match", s.dataflow_match},
                                   {"combined", s.combined}};
        }
        if (obj.contains("doc_a") && obj.contains("doc_b")) {
            const DocSimScore d = docstring_similarity(obj["doc_a"].get<std::string>(),
                                                       obj["doc_b"].get<std::string>());
            out["docsim"] = d.value;
        }
        std::cout << out.dump() << "\n";
    }
    return 0;
}

TaskKind task_from_string(const std::string& name) {
    if (name == "evaluate") return TaskKind::Evaluate;
    if (name == "refactor") return TaskKind::Refactor;
    if (name == "generate") return TaskKind::GenerateFromDoc;
    if (name == "describe") return TaskKind::DescribeCode;
    throw std::runtime_error("unknown task: " + name);
}

PromptStrategy strategy_from_flags(const std::vector<std::string>& names,
                                   const SourceSample& sample) {
    PromptStrategy strategy;
    for (const std::string& name : names) {
        if (name == "tips") strategy.with(SmellTipsPart{});
        else if (name == "context_code")
            strategy.with(ContextCodePart{sample.id + ".java", "", ""});
        else if (name == "context_func") strategy.with(ContextFuncPart{});
        else if (name == "role_seer") strategy.with(RolePart{RoleKind::SEer});
        else if (name == "role_qaer") strategy.with(RolePart{RoleKind::QAer});
        else if (name == "role_devops") strategy.with(RolePart{RoleKind::DevOps});
        else if (name.rfind("cost_abs=", 0) == 0)
            strategy.with(CostAbsolutePart{std::stoul(name.substr(9))});
        else if (name.rfind("cost_rel=", 0) == 0)
            strategy.with(CostRelativePart{std::stod(name.substr(9))});
        else throw std::runtime_error("unknown strategy flag: " + name);
    }
    return strategy;
}

int cmd_prompt_preview(const std::string& code_path, const std::string& doc,
                       const std::string& task_name,
                       const std::vector<std::string>& strategy_names,
                       const std::string& templates_dir) {
    SourceSample sample;
    sample.id = fs::path(code_path).stem().string();
    sample.code = SourceText{read_file(code_path), Language::Java};
    sample.doc = doc;

    const TemplateSet templates = TemplateSet::load_dir(templates_dir);
    const PromptStrategy strategy = strategy_from_flags(strategy_names, sample);

    std::vector<SmellFinding> findings;
    const SyntaxTree tree = parse(wrap_snippet(sample.code));
    const auto units = extract_functions(tree);
    if (!units.empty()) findings = detect(units.front(), tree);

    const PromptBundle bundle =
        compose(sample, task_from_string(task_name), strategy, findings, templates);
    json out{{"task", to_string(bundle.task)},
             {"system_text", bundle.system_text},
             {"user_text", bundle.user_text},
             {"strategy_tags", bundle.strategy_tags}};
    out["declared_budget"] =
        bundle.declared_budget ? json(*bundle.declared_budget) : json(nullptr);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_run(int rq, const std::string& config_path, const std::string& backend,
            const std::string& mock_script, const std::string& out_dir, int jobs) {
    ExperimentSpec spec = ExperimentSpec::from_config_file(config_path, rq);
    if (!out_dir.empty()) spec.out_dir = out_dir;
    if (jobs > 0) spec.jobs = jobs;

    std::shared_ptr<MockBackend> mock;
    if (backend == "mock") {
        if (mock_script.empty())
            throw InvalidSpec("--mock-script is required with --backend mock");
        mock = MockBackend::from_file(mock_script);
    }
    const ExperimentResult result = run_experiment(spec, mock);
    std::cerr << "trials: " << result.trials << ", errors: " << result.errors << "\n";
    for (const std::string& f : result.report_files) std::cerr << "wrote " << f << "\n";
    std::cout << result.journal_path << "\n";
    return 0;
}

int cmd_verify(const std::string& dir) {
    const std::vector<std::string> problems = verify_report_dir(dir);
    if (problems.empty()) {
        std::cerr << "reports verified: no discrepancies\n";
        return 0;
    }
    for (const std::string& p : problems) std::cerr << "mismatch: " << p << "\n";
    return 3;
}

int cmd_report(const std::string& journal_path, const std::string& out_dir,
               const std::string& format) {
    const std::string journal_text = read_file(journal_path);
    const auto reports = build_reports(journal_text);
    if (format == "json") {
        std::cout << reports.at("summary.json");
        return 0;
    }
    const fs::path dir =
        out_dir.empty() ? fs::path(journal_path).parent_path() : fs::path(out_dir);
    fs::create_directories(dir.empty() ? "." : dir);
    for (const auto& [name, content] : reports) {
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        out << content;
        std::cerr << "wrote " << path.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Token-consumption measurement toolkit for code-reasoning tasks"};
    app.require_subcommand(1);

    std::string corpus_path, src_path;
    auto* smell = app.add_subcommand("smell", "Detect code smells, JSONL findings on stdout");
    smell->add_option("--in", corpus_path, "JSONL corpus file");
    smell->add_option("--src", src_path, "Single Java source file");

    std::string m_corpus, m_src;
    auto* metrics =
        app.add_subcommand("metrics", "Halstead/cyclomatic/LOC metrics per function");
    metrics->add_option("--in", m_corpus, "JSONL corpus file");
    metrics->add_option("--src", m_src, "Single Java source file");

    std::string pairs_path;
    auto* similarity =
        app.add_subcommand("similarity", "CodeBLEU and docstring similarity for pairs");
    similarity->add_option("--in", pairs_path, "JSONL pair file")->required();

    auto* prompt = app.add_subcommand("prompt", "Prompt tooling");
    std::string p_code, p_doc, p_task = "refactor", p_templates = "templates";
    std::vector<std::string> p_strategies;
    auto* preview =
        prompt->add_subcommand("preview", "Compose a prompt without calling any backend");
    preview->add_option("--code", p_code, "Java source file")->required();
    preview->add_option("--doc", p_doc, "Natural-language description");
    preview->add_option("--task", p_task, "evaluate|refactor|generate|describe");
    preview->add_option("--strategy", p_strategies,
                        "tips|context_code|context_func|role_seer|role_qaer|"
                        "role_devops|cost_abs=N|cost_rel=F (repeatable)");
    preview->add_option("--templates", p_templates, "Template directory");

    int rq = 0, jobs = 0;
    std::string config_path, backend = "live", mock_script, out_dir;
    auto* run = app.add_subcommand("run", "Execute one research-question experiment");
    run->add_option("--rq", rq, "Research question number 1..5")->required();
    run->add_option("--config", config_path, "Experiment config JSON")->required();
    run->add_option("--backend", backend, "live|mock");
    run->add_option("--mock-script", mock_script, "Mock backend JSONL script");
    run->add_option("--out", out_dir, "Output directory (overrides config)");
    run->add_option("--jobs", jobs, "Worker pool width");

    std::string verify_dir;
    auto* verify =
        app.add_subcommand("verify-report", "Recompute reports from the journal and compare");
    verify->add_option("dir", verify_dir, "Experiment output directory")->required();

    std::string r_journal, r_out, r_format = "csv";
    auto* report = app.add_subcommand("report", "Rebuild report files from a journal");
    report->add_option("--journal", r_journal, "Journal JSONL path")->required();
    report->add_option("--out", r_out, "Output directory (default: journal's)");
    report->add_option("--format", r_format, "csv|json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (smell->parsed()) {
            if (corpus_path.empty() == src_path.empty()) {
                std::cerr << "smell: exactly one of --in/--src is required\n";
                return 1;
            }
            return cmd_smell(corpus_path, src_path);
        }
        if (metrics->parsed()) {
            if (m_corpus.empty() == m_src.empty()) {
                std::cerr << "metrics: exactly one of --in/--src is required\n";
                return 1;
            }
            return cmd_metrics(m_corpus, m_src);
        }
        if (similarity->parsed()) return cmd_similarity(pairs_path);
        if (prompt->parsed()) {
            if (!preview->parsed()) {
                std::cerr << "prompt: missing subcommand (preview)\n";
                return 1;
            }
            return cmd_prompt_preview(p_code, p_doc, p_task, p_strategies, p_templates);
        }
        if (run->parsed()) {
            if (backend != "live" && backend != "mock") {
                std::cerr << "run: --backend must be live or mock\n";
                return 1;
            }
            return cmd_run(rq, config_path, backend, mock_script, out_dir, jobs);
        }
        if (verify->parsed()) return cmd_verify(verify_dir);
        if (report->parsed()) {
            if (r_format != "csv" && r_format != "json") {
                std::cerr << "report: --format must be csv or json\n";
                return 1;
            }
            return cmd_report(r_journal, r_out, r_format);
        }
    } catch (const InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
