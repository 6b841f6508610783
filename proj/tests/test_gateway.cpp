#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tokenlens/gateway.hpp"

using namespace tokenlens;
using nlohmann::json;

namespace {

PromptBundle make_bundle() {
    PromptBundle b;
    b.system_text = "You are a helper.";
    b.user_text = "Refactor this code: int x = 1;";
    b.strategy_tags = {"role_seer"};
    b.task = TaskKind::Refactor;
    return b;
}

BackendConfig fast_config() {
    BackendConfig c;
    c.retry_base_seconds = 0.001;  // keep retry tests fast
    c.requests_per_minute = 0;     // disable the limiter in tests
    return c;
}

/// Minimal scripted backend for HTTP statuses the mock never produces.
struct StatusBackend : ChatBackend {
    int status;
    explicit StatusBackend(int s) : status(s) {}
    BackendResult send(const json&) override { return {status, json::object()}; }
    std::string id() const override { return "status"; }
};

}  // namespace

TEST_CASE("scripted usage is passed through and summed") {
    auto mock = MockBackend::from_jsonl(
        R"({"output_text":"done","usage":{"prompt_tokens":100,"reasoning_tokens":400,"completion_tokens":50}})");
    Gateway gw = Gateway::with_mock(fast_config(), mock);
    const InferenceRecord r = gw.complete(make_bundle());
    CHECK(r.prompt_tokens == 100);
    CHECK(r.reasoning_tokens == 400);
    CHECK(r.completion_tokens == 50);
    CHECK(r.total_tokens == 550);
    CHECK_FALSE(r.estimated);
    CHECK(r.wall_seconds == doctest::Approx(1.0));  // script default
}

TEST_CASE("the declared budget becomes the request's output limit") {
    auto mock = MockBackend::from_jsonl(
        R"({"output_text":"ok","usage":{"prompt_tokens":1,"completion_tokens":1}})");
    Gateway gw = Gateway::with_mock(fast_config(), mock);
    PromptBundle b = make_bundle();
    b.declared_budget = 64;
    gw.complete(b);
    REQUIRE(mock->captured_requests().size() == 1);
    CHECK(mock->captured_requests()[0]["max_tokens"] == 64);
}

TEST_CASE("no output cap is sent without a budget or with the cap disabled") {
    auto mock = MockBackend::from_jsonl(
        R"({"output_text":"ok"})" "\n" R"({"output_text":"ok"})");
    BackendConfig config = fast_config();
    config.hard_output_cap = false;
    Gateway gw = Gateway::with_mock(config, mock);
    PromptBundle b = make_bundle();
    gw.complete(b);
    b.declared_budget = 64;
    gw.complete(b);
    for (const json& req : mock->captured_requests())
        CHECK_FALSE(req.contains("max_tokens"));
}

TEST_CASE("two scripted failures then success take exactly three attempts") {
    auto mock = MockBackend::from_jsonl(
        R"({"output_text":"ok","fail_times":2,"usage":{"prompt_tokens":2,"completion_tokens":3}})");
    Gateway gw = Gateway::with_mock(fast_config(), mock);
    const InferenceRecord r = gw.complete(make_bundle());
    CHECK(mock->captured_requests().size() == 3);
    CHECK(r.total_tokens == 5);
}

TEST_CASE("persistent failures exhaust the retries") {
    auto mock = MockBackend::from_jsonl(R"({"output_text":"ok","fail_times":99})");
    BackendConfig config = fast_config();
    config.max_retries = 2;
    Gateway gw = Gateway::with_mock(config, mock);
    CHECK_THROWS_AS(gw.complete(make_bundle()), ExhaustedRetries);
    CHECK(mock->captured_requests().size() == 3);  // initial try + 2 retries
}

TEST_CASE("missing usage falls back to flagged local estimates") {
    auto mock = MockBackend::from_jsonl(R"({"output_text":"a b c"})");
    Gateway gw = Gateway::with_mock(fast_config(), mock);
    const PromptBundle b = make_bundle();
    const InferenceRecord r = gw.complete(b);
    CHECK(r.estimated);
    CHECK(r.completion_tokens ==
          static_cast<std::int64_t>(estimate_tokens("a b c")));
    CHECK(r.prompt_tokens == static_cast<std::int64_t>(estimate_tokens(b.system_text) +
                                                       estimate_tokens(b.user_text)));
    CHECK(r.total_tokens == r.prompt_tokens + r.completion_tokens);
}

TEST_CASE("auth failures are not retried") {
    Gateway gw(fast_config(), std::make_shared<StatusBackend>(401));
    CHECK_THROWS_AS(gw.complete(make_bundle()), AuthError);
}

TEST_CASE("a zero budget is impossible") {
    auto mock = MockBackend::from_jsonl(R"({"output_text":"ok"})");
    Gateway gw = Gateway::with_mock(fast_config(), mock);
    PromptBundle b = make_bundle();
    b.declared_budget = 0;
    CHECK_THROWS_AS(gw.complete(b), BudgetImpossible);
}

TEST_CASE("token estimation oracle") {
    CHECK(estimate_tokens("") == 0);
    CHECK(estimate_tokens("a b c") == 3);

    // independent re-implementation of the segmentation rule
    const std::string paragraph =
        "The quick brown fox jumps over the lazy dog, then (after a pause) "
        "counts 12 sheep; finally it naps.";
    std::size_t oracle = 0;
    bool in_word = false;
    for (char ch : paragraph) {
        const bool word = std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
        if (word && !in_word) ++oracle;
        if (!word && !std::isspace(static_cast<unsigned char>(ch))) ++oracle;
        in_word = word;
    }
    CHECK(estimate_tokens(paragraph) == oracle);
}

TEST_CASE("fingerprints are stable and sensitive to the bundle text") {
    const PromptBundle a = make_bundle();
    PromptBundle b = make_bundle();
    CHECK(bundle_fingerprint(a) == bundle_fingerprint(b));
    b.user_text += "!";
    CHECK(bundle_fingerprint(a) != bundle_fingerprint(b));
    b = make_bundle();
    b.declared_budget = 10;
    CHECK(bundle_fingerprint(a) != bundle_fingerprint(b));
}

TEST_CASE("the gateway sends the bundle text unmodified") {
    auto mock = MockBackend::from_jsonl(R"({"output_text":"ok"})");
    Gateway gw = Gateway::with_mock(fast_config(), mock);
    const PromptBundle b = make_bundle();
    gw.complete(b);
    const json& req = mock->captured_requests()[0];
    CHECK(req["messages"][0]["content"] == b.system_text);
    CHECK(req["messages"][1]["content"] == b.user_text);
    CHECK(req["tokenlens_fingerprint"] ==
          fingerprint_hex(bundle_fingerprint(b)));
}

TEST_CASE("fingerprint-keyed script entries match out of order") {
    PromptBundle b = make_bundle();
    const std::string fp = fingerprint_hex(bundle_fingerprint(b));
    auto mock = MockBackend::from_jsonl(
        R"({"fingerprint":")" + fp +
        R"(","output_text":"matched","usage":{"prompt_tokens":1,"completion_tokens":2}})");
    Gateway gw = Gateway::with_mock(fast_config(), mock);
    const InferenceRecord r = gw.complete(b);
    CHECK(r.output_text == "matched");

    PromptBundle other = make_bundle();
    other.user_text = "something else entirely";
    CHECK_THROWS_AS(gw.complete(other), MockScriptExhausted);
}
