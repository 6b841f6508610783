#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

namespace tokenlens {

/// Deterministic token-count heuristic: maximal alphanumeric/underscore runs
/// count as one token each, every other non-space character counts alone.
inline std::size_t approx_token_count(std::string_view text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == '_') {
            if (!in_word) ++count;
            in_word = true;
        } else {
            in_word = false;
            if (!std::isspace(u)) ++count;
        }
    }
    return count;
}

/// FNV-1a 64-bit; stable across platforms and runs.
inline std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace tokenlens
