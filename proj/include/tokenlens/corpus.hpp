#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tokenlens/smells.hpp"
#include "tokenlens/source.hpp"

namespace tokenlens {

enum class SampleLabel { Smelly, Clean, Refactored, Generated };

/// One corpus entry: code text, natural-language description, provenance.
struct SourceSample {
    std::string id;
    SourceText code;
    std::string doc;  // natural-language description ("nl" field)
    SampleLabel label = SampleLabel::Smelly;
    std::vector<SmellKind> annotated_smells;
};

struct MalformedLine : std::runtime_error {
    std::size_t line;
    MalformedLine(std::size_t line_no, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
          line(line_no) {}
};
struct DuplicateId : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Loads a JSONL corpus: one {"id","code","nl","label","smells"} object per
/// line. Any bad line fails the whole load with its line number.
std::vector<SourceSample> load_corpus(const std::string& path);

std::string to_string(SampleLabel label);
SampleLabel sample_label_from_string(const std::string& name);

}  // namespace tokenlens
