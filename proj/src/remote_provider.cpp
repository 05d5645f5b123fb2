#include "evicut/remote_provider.hpp"

#include <cmath>
#include <stdexcept>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "evicut/util.hpp"

namespace evicut {

namespace {
constexpr double kSumTolerance = 1e-3;
}

std::string encode_score_request(
    const std::vector<std::pair<std::string, std::string>>& ordered_pairs) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [premise, hypothesis] : ordered_pairs) {
        pairs.push_back({{"premise", premise}, {"hypothesis", hypothesis}});
    }
    return nlohmann::json{{"pairs", std::move(pairs)}}.dump();
}

std::vector<NliTriple> parse_score_response(const std::string& body, size_t expected) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("score response: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("scores") || !j.at("scores").is_array()) {
        throw std::runtime_error("score response: missing scores array");
    }
    const auto& scores = j.at("scores");
    if (scores.size() != expected) {
        throw std::runtime_error("score response: got " + std::to_string(scores.size()) +
                                 " entries, expected " + std::to_string(expected));
    }

    std::vector<NliTriple> out;
    out.reserve(expected);
    for (const auto& s : scores) {
        if (!s.is_object() || !s.contains("entailment") || !s.contains("contradiction") ||
            !s.contains("neutral")) {
            throw std::runtime_error("score response: entry missing a class probability");
        }
        NliTriple t;
        t.entailment = s.at("entailment").get<double>();
        t.contradiction = s.at("contradiction").get<double>();
        t.neutral = s.at("neutral").get<double>();
        require_unit(t.entailment, "entailment");
        require_unit(t.contradiction, "contradiction");
        require_unit(t.neutral, "neutral");
        const double sum = t.entailment + t.contradiction + t.neutral;
        if (std::abs(sum - 1.0) > kSumTolerance) {
            throw std::runtime_error("score response: class probabilities sum to " +
                                     std::to_string(sum));
        }
        out.push_back(t);
    }
    return out;
}

RemoteProvider::RemoteProvider(RemoteProviderConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.batch_size < 2) {
        throw std::invalid_argument("RemoteProvider: batch_size must fit one pair (>= 2)");
    }
    client_ = std::make_unique<httplib::Client>(cfg_.endpoint);
    client_->set_connection_timeout(cfg_.timeout_seconds);
    client_->set_read_timeout(cfg_.timeout_seconds);
    client_->set_write_timeout(cfg_.timeout_seconds);
}

RemoteProvider::~RemoteProvider() = default;

std::string RemoteProvider::post_json(const std::string& path, const std::string& body) {
    const auto res = client_->Post(path, body, "application/json");
    if (!res) {
        throw std::runtime_error("remote provider: no response from " + cfg_.endpoint + path);
    }
    if (res->status != 200) {
        throw std::runtime_error("remote provider: " + path + " returned status " +
                                 std::to_string(res->status));
    }
    return res->body;
}

AtomicAnswer RemoteProvider::generate_atomic(const std::string& query,
                                             const std::string& doc_text) {
    const nlohmann::json req{{"query", query}, {"doc", doc_text}};
    const auto body = post_json("/atomic", req.dump());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("atomic response: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("answer") || !j.contains("informative")) {
        throw std::runtime_error("atomic response: missing answer/informative");
    }
    AtomicAnswer a;
    a.text = j.at("answer").get<std::string>();
    a.informative = j.at("informative").get<bool>();
    return a;
}

std::vector<DirectedRelationScores> RemoteProvider::score_pairs(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<std::pair<std::string, std::string>> ordered;
    ordered.reserve(pairs.size() * 2);
    for (const auto& [a, b] : pairs) {
        ordered.emplace_back(a, b);
        ordered.emplace_back(b, a);
    }

    std::vector<NliTriple> triples;
    triples.reserve(ordered.size());
    // Keep the two directions of a pair in the same request.
    const size_t chunk = static_cast<size_t>(cfg_.batch_size / 2) * 2;
    for (size_t off = 0; off < ordered.size(); off += chunk) {
        const size_t n = std::min(chunk, ordered.size() - off);
        const std::vector<std::pair<std::string, std::string>> slice(
            ordered.begin() + off, ordered.begin() + off + n);
        const auto body = post_json("/score", encode_score_request(slice));
        const auto part = parse_score_response(body, n);
        triples.insert(triples.end(), part.begin(), part.end());
    }

    std::vector<DirectedRelationScores> out;
    out.reserve(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i) {
        const auto& fwd = triples[2 * i];
        const auto& bwd = triples[2 * i + 1];
        out.push_back({fwd.entailment, bwd.entailment, fwd.contradiction, bwd.contradiction});
    }
    return out;
}

DirectedRelationScores RemoteProvider::score_pair(const std::string& a,
                                                  const std::string& b) {
    return score_pairs({{a, b}}).front();
}

Eigen::VectorXd RemoteProvider::embed(const std::string& text) {
    const nlohmann::json req{{"texts", {text}}};
    const auto body = post_json("/embed", req.dump());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(std::string("embed response: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("embeddings") || !j.at("embeddings").is_array() ||
        j.at("embeddings").size() != 1) {
        throw std::runtime_error("embed response: expected one embedding");
    }
    const auto& vec = j.at("embeddings")[0];
    if (!vec.is_array() || vec.empty()) {
        throw std::runtime_error("embed response: empty embedding");
    }
    Eigen::VectorXd e(static_cast<Eigen::Index>(vec.size()));
    for (size_t d = 0; d < vec.size(); ++d) {
        e(static_cast<Eigen::Index>(d)) = vec[d].get<double>();
    }
    return e;
}

}  // namespace evicut
