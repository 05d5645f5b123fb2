#include "evicut/sim/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace evicut::sim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(size_t record, const std::string& path, const std::string& what) {
    throw std::runtime_error("record " + std::to_string(record) + ": " + path + ": " + what);
}

std::string require_string(const json& j, size_t record, const std::string& path) {
    if (!j.is_string()) fail(record, path, "expected string");
    return j.get<std::string>();
}

std::vector<std::string> require_string_array(const json& j, size_t record,
                                              const std::string& path,
                                              bool allow_empty) {
    if (!j.is_array()) fail(record, path, "expected array");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        out.push_back(require_string(j[i], record, path + "[" + std::to_string(i) + "]"));
    }
    if (!allow_empty && out.empty()) fail(record, path, "expected non-empty array");
    return out;
}

DynamicDatasetRecord parse_record(const json& j, size_t record) {
    if (!j.is_object()) fail(record, "-", "expected object");
    if (!j.contains("question")) fail(record, "question", "missing");
    if (!j.contains("yearly_contexts")) fail(record, "yearly_contexts", "missing");

    DynamicDatasetRecord rec;
    rec.question = require_string(j.at("question"), record, "question");
    if (rec.question.empty()) fail(record, "question", "expected non-empty string");

    const json& yc = j.at("yearly_contexts");
    if (!yc.is_object()) fail(record, "yearly_contexts", "expected object");

    for (const auto& [year_key, ctx] : yc.items()) {
        const std::string path = "yearly_contexts." + year_key;
        if (year_key.empty() ||
            !std::all_of(year_key.begin(), year_key.end(),
                         [](unsigned char c) { return std::isdigit(c); })) {
            fail(record, path, "key is not a year");
        }
        const int year = std::stoi(year_key);
        if (!ctx.is_object()) fail(record, path, "expected object");
        if (!ctx.contains("answer")) fail(record, path + ".answer", "missing");
        if (!ctx.contains("docs")) fail(record, path + ".docs", "missing");

        YearContext out;
        out.answers = require_string_array(ctx.at("answer"), record, path + ".answer",
                                           /*allow_empty=*/false);
        const json& docs = ctx.at("docs");
        if (!docs.is_array()) fail(record, path + ".docs", "expected array");
        for (size_t d = 0; d < docs.size(); ++d) {
            const std::string dpath = path + ".docs[" + std::to_string(d) + "]";
            const json& dj = docs[d];
            if (!dj.is_object()) fail(record, dpath, "expected object");
            DatasetDoc doc;
            auto grab = [&](const char* key, std::string& dst) {
                if (!dj.contains(key)) return;  // absent reads as empty
                dst = require_string(dj.at(key), record, dpath + "." + key);
            };
            grab("title", doc.title);
            grab("url", doc.url);
            grab("snippet", doc.snippet);
            grab("content", doc.content);
            out.docs.push_back(std::move(doc));
        }
        if (ctx.contains("incorrect_answer")) {
            out.incorrect_answer =
                require_string(ctx.at("incorrect_answer"), record, path + ".incorrect_answer");
        }
        if (ctx.contains("incorrect_context")) {
            out.incorrect_context = require_string_array(
                ctx.at("incorrect_context"), record, path + ".incorrect_context",
                /*allow_empty=*/true);
        }
        if (!rec.yearly.emplace(year, std::move(out)).second) {
            fail(record, path, "duplicate year");
        }
    }
    return rec;
}

}  // namespace

std::vector<DynamicDatasetRecord> parse_dataset(const std::string& json_text) {
    const bool blank = std::all_of(json_text.begin(), json_text.end(),
                                   [](unsigned char c) { return std::isspace(c); });
    if (blank) return {};

    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("dataset: invalid JSON: ") + e.what());
    }

    std::vector<DynamicDatasetRecord> records;
    if (doc.is_object()) {
        records.push_back(parse_record(doc, 0));
    } else if (doc.is_array()) {
        for (size_t i = 0; i < doc.size(); ++i) {
            records.push_back(parse_record(doc[i], i));
        }
    } else {
        throw std::runtime_error("dataset: top level must be an object or array");
    }
    return records;
}

std::vector<DynamicDatasetRecord> load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("dataset: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

std::string dataset_to_json(const std::vector<DynamicDatasetRecord>& records,
                            int indent) {
    json arr = json::array();
    for (const auto& rec : records) {
        json yc = json::object();
        for (const auto& [year, ctx] : rec.yearly) {
            json docs = json::array();
            for (const auto& d : ctx.docs) {
                docs.push_back({{"title", d.title},
                                {"url", d.url},
                                {"snippet", d.snippet},
                                {"content", d.content}});
            }
            yc[std::to_string(year)] = {{"answer", ctx.answers},
                                        {"docs", std::move(docs)},
                                        {"incorrect_answer", ctx.incorrect_answer},
                                        {"incorrect_context", ctx.incorrect_context}};
        }
        arr.push_back({{"question", rec.question}, {"yearly_contexts", std::move(yc)}});
    }
    return arr.dump(indent);
}

DatasetStream record_stream(const DynamicDatasetRecord& record,
                            const AttackConfig& attack) {
    DatasetStream out;
    int step = 0;
    for (const auto& [year, ctx] : record.yearly) {
        EvidenceSnapshot snap;
        snap.step = step;
        snap.query = record.question;
        for (const auto& d : ctx.docs) {
            const std::string& body = d.content.empty() ? d.snippet : d.content;
            snap.docs.push_back(d.title.empty() ? body : d.title + "\n" + body);
        }

        std::string target;
        const auto& positions = positions_for_step(attack, step);
        if (attack.kind != AttackKind::none && !positions.empty() &&
            !ctx.incorrect_context.empty()) {
            size_t next = 0;
            for (int pos : positions) {
                if (pos < 1 || pos > static_cast<int>(snap.docs.size())) {
                    throw std::invalid_argument(
                        "record_stream: attack position " + std::to_string(pos) +
                        " outside [1, " + std::to_string(snap.docs.size()) + "]");
                }
                snap.docs[pos - 1] = ctx.incorrect_context[next % ctx.incorrect_context.size()];
                ++next;
            }
            target = ctx.incorrect_answer;
        }

        out.stream.push_back(std::move(snap));
        out.truth.push_back(ctx.answers);
        out.targets.push_back(std::move(target));
        out.years.push_back(year);
        ++step;
    }
    return out;
}

}  // namespace evicut::sim
