#pragma once
// ScoringProvider backed by an HTTP scoring service (NLI cross-encoder,
// embedding model, single-doc generator). Three JSON POST endpoints:
//
//   /score  {"pairs":[{"premise":p,"hypothesis":h},...]}
//           -> {"scores":[{"entailment":e,"contradiction":c,"neutral":n},...]}
//   /atomic {"query":q,"doc":d} -> {"answer":a,"informative":b}
//   /embed  {"texts":[t,...]}   -> {"embeddings":[[f,...],...]}
//
// Each score triple must lie in [0,1] and sum to 1 within 1e-3. Pair
// requests are batched; one unordered pair costs two ordered entries.

#include <memory>
#include <string>
#include <vector>

#include "evicut/relations.hpp"

namespace httplib {
class Client;
}

namespace evicut {

struct RemoteProviderConfig {
    std::string endpoint = "http://127.0.0.1:8108";
    int batch_size = 64;  // ordered pairs per /score request
    int timeout_seconds = 30;
};

struct NliTriple {
    double entailment = 0.0;
    double contradiction = 0.0;
    double neutral = 0.0;
};

// Pure decode/validate half of the wire contract, kept free for testing.
std::vector<NliTriple> parse_score_response(const std::string& body, size_t expected);
std::string encode_score_request(
    const std::vector<std::pair<std::string, std::string>>& ordered_pairs);

class RemoteProvider : public ScoringProvider {
public:
    explicit RemoteProvider(RemoteProviderConfig cfg);
    ~RemoteProvider() override;

    AtomicAnswer generate_atomic(const std::string& query,
                                 const std::string& doc_text) override;
    DirectedRelationScores score_pair(const std::string& a,
                                      const std::string& b) override;
    Eigen::VectorXd embed(const std::string& text) override;
    std::vector<DirectedRelationScores> score_pairs(
        const std::vector<std::pair<std::string, std::string>>& pairs) override;

private:
    std::string post_json(const std::string& path, const std::string& body);

    RemoteProviderConfig cfg_;
    std::unique_ptr<httplib::Client> client_;
};

}  // namespace evicut
