#include "tokenlens/corpus.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace tokenlens {

using nlohmann::json;

std::vector<SourceSample> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus: " + path);

    std::vector<SourceSample> samples;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw MalformedLine(line_no, e.what());
        }
        if (!obj.is_object() || !obj.contains("id") || !obj.contains("code"))
            throw MalformedLine(line_no, "missing required field \"id\" or \"code\"");
        if (!obj["id"].is_string() || !obj["code"].is_string())
            throw MalformedLine(line_no, "\"id\" and \"code\" must be strings");

        SourceSample sample;
        sample.id = obj["id"].get<std::string>();
        sample.code = SourceText{obj["code"].get<std::string>(), Language::Java};
        sample.doc = obj.value("nl", "");

        const std::string label = obj.value("label", "smelly");
        try {
            sample.label = sample_label_from_string(label);
        } catch (const std::exception&) {
            throw MalformedLine(line_no, "unknown label \"" + label + "\"");
        }
        if (sample.code.content.empty() && sample.label != SampleLabel::Generated)
            throw MalformedLine(line_no, "empty code for non-generated sample");

        if (obj.contains("smells")) {
            if (!obj["smells"].is_array())
                throw MalformedLine(line_no, "\"smells\" must be an array");
            for (const auto& s : obj["smells"]) {
                const auto kind = smell_kind_from_string(s.get<std::string>());
                if (!kind)
                    throw MalformedLine(line_no,
                                        "unknown smell \"" + s.get<std::string>() + "\"");
                sample.annotated_smells.push_back(*kind);
            }
        }

        if (!seen.insert(sample.id).second)
            throw DuplicateId("duplicate sample id: " + sample.id);
        samples.push_back(std::move(sample));
    }
    return samples;
}

std::string to_string(SampleLabel label) {
    switch (label) {
        case SampleLabel::Smelly: return "smelly";
        case SampleLabel::Clean: return "clean";
        case SampleLabel::Refactored: return "refactored";
        case SampleLabel::Generated: return "generated";
    }
    return "unknown";
}

SampleLabel sample_label_from_string(const std::string& name) {
    if (name == "smelly") return SampleLabel::Smelly;
    if (name == "clean") return SampleLabel::Clean;
    if (name == "refactored") return SampleLabel::Refactored;
    if (name == "generated") return SampleLabel::Generated;
    throw std::invalid_argument("unknown sample label: " + name);
}

}  // namespace tokenlens
