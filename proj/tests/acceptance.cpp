// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criterion 9 needs live API credentials and prints SKIP without them.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tokenlens/experiment.hpp"
#include "tokenlens/prompt.hpp"
#include "tokenlens/similarity.hpp"
#include "tokenlens/smells.hpp"
#include "tokenlens/stats.hpp"
#include "tokenlens/syntax.hpp"

using namespace tokenlens;
using nlohmann::json;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

const std::string kRepo = TOKENLENS_REPO_DIR;
const std::string kCli = TOKENLENS_CLI;

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": "
              << detail << "\n";
    if (!ok) ++g_failures;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream(path, std::ios::binary) << content;
}

fs::path temp_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tokenlens_accept_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string strip_timestamps(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        json obj = json::parse(line);
        obj.erase("ts");
        obj.erase("started");
        out += obj.dump() + "\n";
    }
    return out;
}

std::set<std::string> detect_file(const fs::path& path) {
    const SyntaxTree tree = parse(SourceText{slurp(path)});
    std::set<std::string> found;
    for (const FunctionUnit& unit : extract_functions(tree))
        for (const SmellFinding& f : detect(unit, tree)) found.insert(to_string(f.kind));
    return found;
}

ExperimentSpec demo_spec(int rq, const fs::path& out_dir) {
    ExperimentSpec spec;
    spec.rq = rq;
    spec.smelly_corpus = kRepo + "/fixtures/corpus/smelly.jsonl";
    spec.clean_corpus = kRepo + "/fixtures/corpus/clean.jsonl";
    spec.templates_dir = kRepo + "/templates";
    spec.out_dir = out_dir.string();
    spec.seed = 42;
    spec.backend.requests_per_minute = 0;  // no throttling against the mock
    return spec;
}

std::string rq1_script() {
    std::string script;
    for (int i = 0; i < 20; ++i)
        script += json{{"output_text", "evaluation"},
                       {"usage", json{{"prompt_tokens", 100 + 3 * i},
                                      {"completion_tokens", 50},
                                      {"reasoning_tokens", 300 + 11 * i}}},
                       {"wall_seconds", 20.0}}
                      .dump() +
                  "\n";
    return script;
}

// ---- criterion 1: detector precision/recall on the fixture corpus --------

void criterion1() {
    const auto t0 = clock_type::now();
    const json manifest = json::parse(slurp(kRepo + "/fixtures/smells/manifest.json"));
    std::size_t tp = 0, fp = 0, fn = 0, files = 0;
    std::string first_mismatch;
    for (const auto& [name, kinds] : manifest["files"].items()) {
        ++files;
        const std::set<std::string> expected(kinds.begin(), kinds.end());
        const std::set<std::string> found =
            detect_file(kRepo + "/fixtures/smells/" + name);
        for (const std::string& k : found)
            expected.count(k) ? ++tp : ++fp;
        for (const std::string& k : expected)
            if (!found.count(k)) ++fn;
        if (found != expected && first_mismatch.empty()) first_mismatch = name;
    }
    const double seconds =
        std::chrono::duration<double>(clock_type::now() - t0).count();
    const bool ok = files >= 40 && fp == 0 && fn == 0 && tp > 0 && seconds < 2.0;
    std::ostringstream d;
    d << "detector fixtures: " << files << " files, precision "
      << (tp + fp ? double(tp) / double(tp + fp) : 0) << ", recall "
      << (tp + fn ? double(tp) / double(tp + fn) : 0) << ", " << seconds << " s";
    if (!first_mismatch.empty()) d << " (first mismatch: " << first_mismatch << ")";
    report(1, ok, d.str());
}

// ---- criterion 2: hand-counted complexity oracles -------------------------

void criterion2() {
    struct Oracle {
        const char* body;
        std::size_t n1, N1, n2, N2, cyclo;
    };
    // counters counted by hand from the documented classification rules
    const Oracle oracles[] = {
        {"return x + 1;", 3, 3, 2, 2, 1},
        {"", 0, 0, 0, 0, 1},
        {"x = 1; x = 1;", 2, 4, 2, 4, 1},
        {"int y = 2;", 2, 2, 3, 3, 1},
        {"f(a);", 2, 2, 1, 1, 1},
        {"return a ? b : c;", 4, 4, 3, 3, 2},
        {"if (a < b) { c = a; }", 4, 4, 3, 4, 2},
        {"while (i < 10) i = i + 1;", 5, 5, 3, 5, 2},
        {"return obj.size();", 4, 4, 1, 1, 1},
        {"x++;", 2, 2, 1, 1, 1},
    };
    bool ok = true;
    std::string detail = "10 snippets, counters exact, derived at 1e-9";
    for (const Oracle& o : oracles) {
        const SyntaxTree tree = parse(
            wrap_snippet(SourceText{std::string("void m() {\n") + o.body + "\n}"}));
        const auto units = extract_functions(tree);
        if (units.empty()) {
            ok = false;
            detail = std::string("no function unit for: ") + o.body;
            break;
        }
        const ComplexityProfile p = complexity_profile(units.front(), tree);
        const HalsteadProfile& h = p.halstead;
        if (h.distinct_operators != o.n1 || h.total_operators != o.N1 ||
            h.distinct_operands != o.n2 || h.total_operands != o.N2 ||
            p.cyclomatic != o.cyclo) {
            ok = false;
            std::ostringstream d;
            d << "counter mismatch on `" << o.body << "`: got n1=" << h.distinct_operators
              << " N1=" << h.total_operators << " n2=" << h.distinct_operands
              << " N2=" << h.total_operands << " cyclo=" << p.cyclomatic;
            detail = d.str();
            break;
        }
        const double vocab = double(o.n1 + o.n2);
        const double length = double(o.N1 + o.N2);
        const double volume = vocab > 0 ? length * std::log2(vocab) : 0.0;
        const double difficulty = o.n2 > 0 ? (o.n1 / 2.0) * (double(o.N2) / o.n2) : 0.0;
        const double effort = difficulty * volume;
        auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
        };
        if (!close(h.volume, volume) || !close(h.difficulty, difficulty) ||
            !close(h.effort, effort)) {
            ok = false;
            detail = std::string("derived mismatch on `") + o.body + "`";
            break;
        }
    }
    report(2, ok, detail);
}

// ---- criterion 3: similarity metric properties ----------------------------

void criterion3() {
    const auto t0 = clock_type::now();
    bool ok = true;
    std::string detail;

    // 50 snippets: 20 corpus samples + 30 detector fixture files
    std::vector<std::string> snippets;
    for (const SourceSample& s :
         load_corpus(kRepo + "/fixtures/corpus/fixture_corpus.jsonl"))
        snippets.push_back(s.code.content);
    for (const auto& entry : fs::directory_iterator(kRepo + "/fixtures/smells")) {
        if (entry.path().extension() != ".java") continue;
        if (snippets.size() >= 50) break;
        snippets.push_back(slurp(entry.path()));
    }
    for (const std::string& code : snippets) {
        const CodeBleuScore s = codebleu(SourceText{code}, SourceText{code});
        if (s.combined != 1.0) {
            ok = false;
            detail = "self-similarity below 1.0";
        }
    }

    const std::pair<const char*, const char*> renamed[] = {
        {"public int add(int a, int b) { return a + b; }",
         "public int add(int x, int y) { return x + y; }"},
        {"public int twice(int n) { int m = n * 2; return m; }",
         "public int twice(int k) { int r = k * 2; return r; }"},
    };
    for (const auto& [a, b] : renamed) {
        if (codebleu(SourceText{a}, SourceText{b}).ast_match != 1.0) {
            ok = false;
            detail = "renamed pair lost ast_match";
        }
    }

    std::mt19937_64 rng(7);
    const char* atoms[] = {"int", "x",  "=",  "+", "return", ";",  "if", "(",
                           ")",   "{",  "}",  "y", "call",   "42", ".",  "m"};
    for (int i = 0; i < 1000 && ok; ++i) {
        std::string a, b;
        for (std::size_t k = 0, n = rng() % 25; k < n; ++k)
            a += std::string(atoms[rng() % std::size(atoms)]) + " ";
        for (std::size_t k = 0, n = rng() % 25; k < n; ++k)
            b += std::string(atoms[rng() % std::size(atoms)]) + " ";
        const CodeBleuScore s = codebleu(SourceText{a}, SourceText{b});
        for (double c : {s.ngram, s.weighted_ngram, s.ast_match, s.dataflow_match,
                         s.combined})
            if (!(c >= 0.0 && c <= 1.0)) {
                ok = false;
                detail = "fuzzed component out of [0,1]";
            }
    }

    const double seconds =
        std::chrono::duration<double>(clock_type::now() - t0).count();
    if (seconds >= 10.0) {
        ok = false;
        detail = "too slow";
    }
    std::ostringstream d;
    d << "similarity properties on " << snippets.size()
      << " snippets + 1000-case fuzz in " << seconds << " s";
    report(3, ok, detail.empty() ? d.str() : detail);
}

// ---- criterion 4: 24.5% reduction reproduced by construction --------------

void criterion4() {
    const fs::path dir = temp_dir("rq4");
    // one no-tips and one tips trial per sample; tips totals are exactly
    // 24.5% lower (2000 -> 1510); outputs echo the input so the 0.70
    // similarity gate passes
    std::string script;
    for (const SourceSample& s :
         load_corpus(kRepo + "/fixtures/corpus/smelly.jsonl")) {
        script += json{{"output_text", s.code.content},
                       {"usage", json{{"prompt_tokens", 1000},
                                      {"completion_tokens", 0},
                                      {"reasoning_tokens", 1000}}}}
                      .dump() +
                  "\n";
        script += json{{"output_text", s.code.content},
                       {"usage", json{{"prompt_tokens", 1000},
                                      {"completion_tokens", 0},
                                      {"reasoning_tokens", 510}}}}
                      .dump() +
                  "\n";
    }
    bool ok = false;
    std::string detail;
    try {
        run_experiment(demo_spec(4, dir), MockBackend::from_jsonl(script));
        const json summary = json::parse(slurp(dir / "summary.json"));
        const double reduction = summary["mean_reduction"].get<double>();
        ok = std::abs(reduction - 0.245) <= 0.001;
        std::ostringstream d;
        d << "constructed run reports mean_reduction " << reduction
          << " (target 0.245 +- 0.001)";
        detail = d.str();
    } catch (const std::exception& e) {
        detail = std::string("pipeline error: ") + e.what();
    }
    report(4, ok, detail);
}

// ---- criterion 5: aggregation oracle + table shape -------------------------

void criterion5(const fs::path& rq1_dir) {
    std::mt19937_64 rng(987654321);
    std::vector<double> values(300);
    for (double& v : values)
        v = static_cast<double>(rng() % 10000000) / 3163.0;
    const AggregateStats s = aggregate(values);

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double mean = 0;
    for (double v : sorted) mean += v;
    mean /= double(n);
    double var = 0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= double(n - 1);
    auto q = [&](double p) {
        const double pos = p * double(n - 1);
        const std::size_t lo = std::size_t(pos);
        const double frac = pos - double(lo);
        return lo + 1 < n ? sorted[lo] * (1 - frac) + sorted[lo + 1] * frac : sorted[lo];
    };
    auto close = [](double a, double b) {
        return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
    };
    bool ok = s.count == n && close(s.mean, mean) && close(s.std_dev, std::sqrt(var)) &&
              close(s.min, sorted.front()) && close(s.max, sorted.back()) &&
              close(s.q25, q(0.25)) && close(s.median, q(0.5)) && close(s.q75, q(0.75));

    // the report table carries exactly the eight statistics rows
    std::istringstream table(slurp(rq1_dir / "table1.csv"));
    std::string line;
    std::vector<std::string> rows;
    std::getline(table, line);  // header
    ok = ok && line.rfind("statistic,", 0) == 0;
    while (std::getline(table, line))
        rows.push_back(line.substr(0, line.find(',')));
    const std::vector<std::string> expected = {"count", "mean",   "std", "min",
                                               "q25",   "median", "q75", "max"};
    ok = ok && rows == expected;
    report(5, ok, "300-value brute-force aggregation oracle and 8-row table shape");
}

// ---- criteria 6 & 7: determinism and verification --------------------------

void criterion6(const fs::path& dir1, const fs::path& dir2) {
    bool ok = false;
    std::string detail;
    try {
        ok = strip_timestamps(slurp(dir1 / "journal.jsonl")) ==
             strip_timestamps(slurp(dir2 / "journal.jsonl"));
        for (const char* name : {"table1.csv", "fig5.csv", "summary.json"})
            ok = ok && slurp(dir1 / name) == slurp(dir2 / name);
        detail = "two mock runs agree byte-for-byte modulo timestamps";
    } catch (const std::exception& e) {
        detail = std::string("pipeline error: ") + e.what();
    }
    report(6, ok, detail);
}

void criterion7(const fs::path& dir) {
    auto verify_exit = [&]() {
        const std::string cmd =
            "\"" + kCli + "\" verify-report \"" + dir.string() + "\" >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const int clean = verify_exit();
    std::string table = slurp(dir / "table1.csv");
    table[table.size() / 2] ^= 1;  // single-byte tamper
    write_file(dir / "table1.csv", table);
    const int tampered = verify_exit();
    std::ostringstream d;
    d << "verify-report exits " << clean << " on a clean run and " << tampered
      << " after a single-byte tamper";
    report(7, clean == 0 && tampered == 3, d.str());
}

// ---- criterion 8: budget enforcement ---------------------------------------

void criterion8() {
    const TemplateSet templates = TemplateSet::load_dir(kRepo + "/templates");
    auto mock = MockBackend::from_jsonl([] {
        std::string script;
        for (int i = 0; i < 20; ++i)
            script += json{{"output_text", "ok"},
                           {"usage", json{{"prompt_tokens", 1},
                                          {"completion_tokens", 1}}}}
                          .dump() +
                      "\n";
        return script;
    }());
    BackendConfig config;
    config.requests_per_minute = 0;
    Gateway gw = Gateway::with_mock(config, mock);
    PromptStrategy strategy;
    strategy.with(CostAbsolutePart{64});
    for (const SourceSample& s :
         load_corpus(kRepo + "/fixtures/corpus/fixture_corpus.jsonl"))
        gw.complete(compose(s, TaskKind::Refactor, strategy, {}, templates));
    std::size_t capped = 0;
    const auto& captured = mock->captured_requests();
    for (const json& req : captured)
        if (req.contains("max_tokens") && req["max_tokens"] == 64) ++capped;
    std::ostringstream d;
    d << capped << "/" << captured.size() << " request bodies carry max_tokens=64";
    report(8, !captured.empty() && capped == captured.size(), d.str());
}

// ---- criterion 9: optional live smoke ---------------------------------------

void criterion9() {
    const BackendConfig defaults;
    const char* key = std::getenv(defaults.api_key_env.c_str());
    if (!key || !*key) {
        std::cout << "SKIP criterion 9: no API key in " << defaults.api_key_env
                  << "; live smoke not run\n";
        return;
    }
    const fs::path dir = temp_dir("live");
    try {
        ExperimentSpec spec = demo_spec(1, dir);
        spec.sample_cap = 10;
        spec.backend.requests_per_minute = 60;  // throttle the live endpoint
        const ExperimentResult r = run_experiment(spec);
        const json summary = json::parse(slurp(dir / "summary.json"));
        const double smelly = summary["smelly"]["mean"].get<double>();
        const double clean = summary["clean"]["mean"].get<double>();
        std::cout << "PASS criterion 9: live run completed (" << r.trials
                  << " trials); directional observation smelly mean " << smelly
                  << (smelly > clean ? " > " : " <= ") << "clean mean " << clean
                  << " (recorded, not asserted)\n";
    } catch (const std::exception& e) {
        std::cout << "FAIL criterion 9: live smoke error: " << e.what() << "\n";
        ++g_failures;
    }
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();

    // one pair of identical mock RQ1 runs feeds criteria 5, 6, and 7
    const fs::path dir1 = temp_dir("det1");
    const fs::path dir2 = temp_dir("det2");
    try {
        run_experiment(demo_spec(1, dir1), MockBackend::from_jsonl(rq1_script()));
        run_experiment(demo_spec(1, dir2), MockBackend::from_jsonl(rq1_script()));
    } catch (const std::exception& e) {
        std::cout << "FAIL criterion 5: pipeline error: " << e.what() << "\n";
        std::cout << "FAIL criterion 6: pipeline error: " << e.what() << "\n";
        std::cout << "FAIL criterion 7: pipeline error: " << e.what() << "\n";
        g_failures += 3;
        criterion8();
        criterion9();
        return 1;
    }
    criterion5(dir1);
    criterion6(dir1, dir2);
    criterion7(dir1);

    criterion8();
    criterion9();
    return g_failures == 0 ? 0 : 1;
}
