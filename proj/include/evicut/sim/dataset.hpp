#pragma once
// Time-evolving QA dataset: one question with per-year evidence contexts,
// accepted answers, and optional adversarial material. Parsing is strict and
// reports the record index plus field path on every violation.

#include <map>
#include <string>
#include <vector>

#include "evicut/pipeline.hpp"
#include "evicut/sim/attack.hpp"

namespace evicut::sim {

struct DatasetDoc {
    std::string title;
    std::string url;
    std::string snippet;
    std::string content;
};

struct YearContext {
    std::vector<std::string> answers;  // accepted surface forms
    std::vector<DatasetDoc> docs;
    std::string incorrect_answer;
    std::vector<std::string> incorrect_context;
};

struct DynamicDatasetRecord {
    std::string question;
    std::map<int, YearContext> yearly;  // ascending year = stream order
};

// Accepts an array of records or a single record object; a blank document is
// an empty dataset. Throws std::runtime_error with diagnostics like
// "record 2: yearly_contexts.2018.answer: expected non-empty array".
std::vector<DynamicDatasetRecord> parse_dataset(const std::string& json_text);
std::vector<DynamicDatasetRecord> load_dataset(const std::string& path);

// Inverse of parse_dataset (always emits the array form).
std::string dataset_to_json(const std::vector<DynamicDatasetRecord>& records,
                            int indent = 2);

struct DatasetStream {
    std::vector<EvidenceSnapshot> stream;
    std::vector<std::vector<std::string>> truth;
    std::vector<std::string> targets;  // incorrect_answer on attacked steps
    std::vector<int> years;
};

// Years in ascending order become steps 0..n-1; document text is
// "title\ncontent" (snippet standing in for missing content). An attack
// swaps the configured ranks for the year's incorrect_context texts, cycling
// when there are fewer texts than positions; years without adversarial
// material are left untouched.
DatasetStream record_stream(const DynamicDatasetRecord& record,
                            const AttackConfig& attack = {});

}  // namespace evicut::sim
