#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace tokenlens {

enum class Language { Java };

/// Raw input text plus its grammar tag. Byte offsets everywhere refer to
/// positions inside `content`.
struct SourceText {
    std::string content;
    Language language = Language::Java;
};

/// Half-open byte range [begin, end).
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin; }
    bool contains(const Span& other) const {
        return other.begin >= begin && other.end <= end;
    }
    friend bool operator==(const Span&, const Span&) = default;
};

/// Line counts for one piece of source. A line that mixes code and comment
/// counts as code; total = code + blank + comment.
struct LocProfile {
    std::size_t total = 0;
    std::size_t code = 0;
    std::size_t blank = 0;
    std::size_t comment = 0;
};

}  // namespace tokenlens
