#include "evicut/postfilter.hpp"

#include <stdexcept>

namespace evicut {

FilterReport filter_isolated(const std::vector<std::string>& items,
                             ScoringProvider& provider,
                             double lambda) {
    if (items.empty()) throw std::invalid_argument("filter_isolated: empty input");
    if (!(lambda >= -1.0 && lambda <= 1.0)) {
        throw std::invalid_argument("filter_isolated: lambda must lie in [-1, 1]");
    }

    FilterReport report;
    report.lambda = lambda;

    const int n = static_cast<int>(items.size());
    if (n == 1) {
        report.kept = {0};
        report.avg_sims = {1.0};
        return report;
    }

    std::vector<Eigen::VectorXd> emb;
    emb.reserve(n);
    for (const auto& t : items) emb.push_back(provider.embed(t));

    auto cosine = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        if (a.size() != b.size()) {
            throw std::runtime_error("filter_isolated: embedding dimensions disagree");
        }
        const double na = a.norm();
        const double nb = b.norm();
        if (na == 0.0 || nb == 0.0) return 0.0;
        return a.dot(b) / (na * nb);
    };

    report.avg_sims.resize(n);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j != i) sum += cosine(emb[i], emb[j]);
        }
        report.avg_sims[i] = sum / static_cast<double>(n - 1);
        if (report.avg_sims[i] >= lambda) {
            report.kept.push_back(i);
        } else {
            report.dropped.push_back(i);
        }
    }
    return report;
}

}  // namespace evicut
