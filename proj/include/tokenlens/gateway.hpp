#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tokenlens/prompt.hpp"

namespace tokenlens {

struct BackendConfig {
    std::string base_url = "https://api.deepseek.com";
    std::string completions_path = "/chat/completions";
    std::string model = "deepseek-reasoner";
    std::string api_key_env = "TOKENLENS_API_KEY";
    double timeout_seconds = 120.0;
    int max_retries = 3;
    double retry_base_seconds = 0.5;  // exponential backoff base
    bool hard_output_cap = true;      // apply declared_budget as max_tokens
    /// usage field carrying reasoning tokens; providers disagree on the name
    std::string reasoning_usage_field = "reasoning_tokens";
    double requests_per_minute = 60.0;  // 0 disables the limiter
};

/// Exact token accounting for one completed request. Immutable once written.
struct InferenceRecord {
    std::int64_t prompt_tokens = 0;
    std::int64_t reasoning_tokens = 0;  // 0 when the backend does not report them
    std::int64_t completion_tokens = 0;
    std::int64_t total_tokens = 0;
    double wall_seconds = 0;
    std::string output_text;
    std::string backend_id;
    std::uint64_t fingerprint = 0;  // hash of the bundle sent
    bool estimated = false;         // usage missing, counts estimated locally
};

struct AuthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BudgetImpossible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExhaustedRetries : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MalformedResponse : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MockScriptExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BackendResult {
    int status = 0;           // HTTP status; 0 = transport failure/timeout
    nlohmann::json body;
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual BackendResult send(const nlohmann::json& request) = 0;
    virtual std::string id() const = 0;
};

/// Deterministic scripted backend. Script entries are JSONL objects:
///   {"fingerprint": "<hex>" (optional), "output_text": str,
///    "usage": {"prompt_tokens": n, "completion_tokens": n,
///              "reasoning_tokens": n} (optional),
///    "wall_seconds": x (default 1.0), "fail_times": n (default 0)}
/// Entries with a fingerprint match by fingerprint; the rest match calls in
/// file order. Every outgoing request body is captured for inspection.
class MockBackend : public ChatBackend {
public:
    static std::shared_ptr<MockBackend> from_file(const std::string& path);
    static std::shared_ptr<MockBackend> from_jsonl(const std::string& jsonl);

    BackendResult send(const nlohmann::json& request) override;
    std::string id() const override { return "mock"; }

    const std::vector<nlohmann::json>& captured_requests() const { return captured_; }

private:
    struct Entry {
        nlohmann::json spec;
        int fails_left = 0;
    };
    std::vector<Entry> ordered_;
    std::size_t next_ = 0;
    std::map<std::string, Entry> by_fingerprint_;
    std::vector<nlohmann::json> captured_;
    std::mutex mutex_;

    BackendResult respond(Entry& entry);
};

/// Live chat-completion backend over HTTPS.
class HttpBackend : public ChatBackend {
public:
    HttpBackend(const BackendConfig& config, std::string api_key);
    BackendResult send(const nlohmann::json& request) override;
    std::string id() const override;

private:
    BackendConfig config_;
    std::string api_key_;
};

/// Simple shared admission limiter (requests per minute).
class RateLimiter {
public:
    explicit RateLimiter(double requests_per_minute);
    void acquire();

private:
    double min_interval_seconds_;
    std::chrono::steady_clock::time_point next_slot_;
    std::mutex mutex_;
};

/// Executes PromptBundles and produces token accounting. Safe to call from
/// multiple workers; the rate limiter is the only shared state.
class Gateway {
public:
    Gateway(BackendConfig config, std::shared_ptr<ChatBackend> backend);

    /// Resolves the API key from the configured environment variable and
    /// builds a live gateway.
    static Gateway live(const BackendConfig& config);
    static Gateway with_mock(const BackendConfig& config,
                             std::shared_ptr<MockBackend> mock);

    InferenceRecord complete(const PromptBundle& bundle);

    /// Request body exactly as it would go on the wire (for previews/tests).
    nlohmann::json build_request(const PromptBundle& bundle) const;

    const BackendConfig& config() const { return config_; }

private:
    BackendConfig config_;
    std::shared_ptr<ChatBackend> backend_;
    std::shared_ptr<RateLimiter> limiter_;
};

/// Deterministic fallback token count (whitespace/punctuation segmentation).
/// Never overwrites backend-reported counts.
std::size_t estimate_tokens(const std::string& text);

/// Stable hash of everything that defines a bundle's request.
std::uint64_t bundle_fingerprint(const PromptBundle& bundle);
std::string fingerprint_hex(std::uint64_t fp);

}  // namespace tokenlens
