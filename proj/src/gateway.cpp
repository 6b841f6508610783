#include "tokenlens/gateway.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "tokenlens/textutil.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace tokenlens {

using nlohmann::json;

// ---- fingerprint --------------------------------------------------------

std::uint64_t bundle_fingerprint(const PromptBundle& bundle) {
    std::uint64_t h = fnv1a(to_string(bundle.task));
    h = fnv1a(bundle.system_text, h);
    h = fnv1a("\x1f", h);
    h = fnv1a(bundle.user_text, h);
    for (const std::string& tag : bundle.strategy_tags) {
        h = fnv1a("\x1f", h);
        h = fnv1a(tag, h);
    }
    if (bundle.declared_budget) {
        h = fnv1a("\x1f" + std::to_string(*bundle.declared_budget), h);
    }
    return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

std::size_t estimate_tokens(const std::string& text) {
    return approx_token_count(text);
}

// ---- mock backend -------------------------------------------------------

std::shared_ptr<MockBackend> MockBackend::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mock script: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_jsonl(buf.str());
}

std::shared_ptr<MockBackend> MockBackend::from_jsonl(const std::string& jsonl) {
    auto mock = std::make_shared<MockBackend>();
    std::istringstream in(jsonl);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json spec = json::parse(line);
        Entry entry{spec, spec.value("fail_times", 0)};
        if (spec.contains("fingerprint")) {
            mock->by_fingerprint_[spec["fingerprint"].get<std::string>()] = entry;
        } else {
            mock->ordered_.push_back(std::move(entry));
        }
    }
    return mock;
}

BackendResult MockBackend::respond(Entry& entry) {
    if (entry.fails_left > 0) {
        --entry.fails_left;
        return {429, json{{"error", "rate limited (scripted)"}}};
    }
    const json& spec = entry.spec;
    json body;
    body["choices"] = json::array(
        {json{{"message", json{{"content", spec.value("output_text", "")}}}}});
    if (spec.contains("usage")) body["usage"] = spec["usage"];
    body["mock_wall_seconds"] = spec.value("wall_seconds", 1.0);
    return {200, body};
}

BackendResult MockBackend::send(const json& request) {
    std::lock_guard lock(mutex_);
    captured_.push_back(request);
    if (request.contains("tokenlens_fingerprint")) {
        auto it = by_fingerprint_.find(request["tokenlens_fingerprint"].get<std::string>());
        if (it != by_fingerprint_.end()) return respond(it->second);
    }
    if (next_ < ordered_.size()) {
        // scripted failures keep the entry current so retries land on it
        BackendResult result = respond(ordered_[next_]);
        if (result.status == 200) ++next_;
        return result;
    }
    throw MockScriptExhausted("mock script has no entry for this request");
}

// ---- http backend -------------------------------------------------------

HttpBackend::HttpBackend(const BackendConfig& config, std::string api_key)
    : config_(config), api_key_(std::move(api_key)) {}

std::string HttpBackend::id() const { return config_.base_url + "#" + config_.model; }

BackendResult HttpBackend::send(const json& request) {
    httplib::Client client(config_.base_url);
    client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_seconds));
    client.set_read_timeout(std::chrono::duration<double>(config_.timeout_seconds));
    client.set_bearer_token_auth(api_key_);

    json body = request;
    body.erase("tokenlens_fingerprint");
    auto res = client.Post(config_.completions_path, body.dump(), "application/json");
    if (!res) return {0, json{{"error", httplib::to_string(res.error())}}};
    json parsed;
    try {
        parsed = json::parse(res->body);
    } catch (const json::parse_error&) {
        parsed = json{{"error", "non-JSON response body"}};
    }
    return {res->status, parsed};
}

// ---- rate limiter -------------------------------------------------------

RateLimiter::RateLimiter(double requests_per_minute)
    : min_interval_seconds_(requests_per_minute > 0 ? 60.0 / requests_per_minute : 0.0),
      next_slot_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    if (min_interval_seconds_ <= 0) return;
    std::chrono::steady_clock::time_point wait_until;
    {
        std::lock_guard lock(mutex_);
        const auto now = std::chrono::steady_clock::now();
        if (next_slot_ < now) next_slot_ = now;
        wait_until = next_slot_;
        next_slot_ += std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double>(min_interval_seconds_));
    }
    std::this_thread::sleep_until(wait_until);
}

// ---- gateway ------------------------------------------------------------

Gateway::Gateway(BackendConfig config, std::shared_ptr<ChatBackend> backend)
    : config_(std::move(config)),
      backend_(std::move(backend)),
      limiter_(std::make_shared<RateLimiter>(config_.requests_per_minute)) {}

Gateway Gateway::live(const BackendConfig& config) {
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
        throw AuthError("API key environment variable not set: " + config.api_key_env);
    return Gateway(config, std::make_shared<HttpBackend>(config, key));
}

Gateway Gateway::with_mock(const BackendConfig& config,
                           std::shared_ptr<MockBackend> mock) {
    return Gateway(config, std::move(mock));
}

json Gateway::build_request(const PromptBundle& bundle) const {
    json request;
    request["model"] = config_.model;
    request["messages"] = json::array({
        json{{"role", "system"}, {"content", bundle.system_text}},
        json{{"role", "user"}, {"content", bundle.user_text}},
    });
    if (bundle.declared_budget && config_.hard_output_cap) {
        if (*bundle.declared_budget < 1)
            throw BudgetImpossible("declared budget below 1 token");
        request["max_tokens"] = *bundle.declared_budget;
    }
    request["tokenlens_fingerprint"] = fingerprint_hex(bundle_fingerprint(bundle));
    return request;
}

namespace {

std::int64_t usage_field(const json& usage, const std::string& name) {
    if (usage.contains(name) && usage[name].is_number())
        return usage[name].get<std::int64_t>();
    return -1;
}

}  // namespace

InferenceRecord Gateway::complete(const PromptBundle& bundle) {
    if (bundle.declared_budget && *bundle.declared_budget < 1)
        throw BudgetImpossible("declared budget below 1 token");

    const json request = build_request(bundle);

    BackendResult result;
    int attempts = 0;
    std::chrono::steady_clock::time_point started;
    while (true) {
        limiter_->acquire();
        ++attempts;
        started = std::chrono::steady_clock::now();
        result = backend_->send(request);
        if (result.status == 401 || result.status == 403)
            throw AuthError("backend rejected credentials (HTTP " +
                            std::to_string(result.status) + ")");
        const bool transient =
            result.status == 0 || result.status == 429 || result.status >= 500;
        if (!transient) break;
        if (attempts > config_.max_retries)
            throw ExhaustedRetries("request failed after " + std::to_string(attempts) +
                                   " attempts (last HTTP status " +
                                   std::to_string(result.status) + ")");
        const double delay =
            config_.retry_base_seconds * static_cast<double>(1 << (attempts - 1));
        std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    const double measured = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - started)
                                .count();

    if (result.status != 200)
        throw MalformedResponse("unexpected HTTP status " + std::to_string(result.status));
    const json& body = result.body;
    if (!body.contains("choices") || body["choices"].empty() ||
        !body["choices"][0].contains("message"))
        throw MalformedResponse("response has no choices/message");

    InferenceRecord record;
    record.backend_id = backend_->id();
    record.fingerprint = bundle_fingerprint(bundle);
    record.output_text = body["choices"][0]["message"].value("content", "");
    record.wall_seconds = body.contains("mock_wall_seconds")
                              ? body["mock_wall_seconds"].get<double>()
                              : measured;
    if (record.wall_seconds <= 0) record.wall_seconds = 1e-9;

    if (body.contains("usage") && body["usage"].is_object()) {
        const json& usage = body["usage"];
        const std::int64_t prompt = usage_field(usage, "prompt_tokens");
        const std::int64_t completion = usage_field(usage, "completion_tokens");
        std::int64_t reasoning = usage_field(usage, config_.reasoning_usage_field);
        if (reasoning < 0 && usage.contains("completion_tokens_details"))
            reasoning = usage_field(usage["completion_tokens_details"],
                                    "reasoning_tokens");
        if (prompt >= 0 && completion >= 0) {
            record.prompt_tokens = prompt;
            record.completion_tokens = completion;
            record.reasoning_tokens = reasoning > 0 ? reasoning : 0;
            record.total_tokens =
                record.prompt_tokens + record.reasoning_tokens + record.completion_tokens;
            return record;
        }
    }

    // usage missing: estimate locally and flag the record
    record.estimated = true;
    record.prompt_tokens = static_cast<std::int64_t>(
        estimate_tokens(bundle.system_text) + estimate_tokens(bundle.user_text));
    record.completion_tokens =
        static_cast<std::int64_t>(estimate_tokens(record.output_text));
    record.reasoning_tokens = 0;
    record.total_tokens = record.prompt_tokens + record.completion_tokens;
    return record;
}

}  // namespace tokenlens
