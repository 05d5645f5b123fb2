#include "evicut/centrality.hpp"

#include <stdexcept>
#include <string>

namespace evicut {

namespace {
constexpr double kSymmetryTol = 1e-9;
constexpr double kUniformTol = 1e-9;
}  // namespace

CentralityVector eigencentrality(const Eigen::MatrixXd& m,
                                 const CentralityConfig& cfg) {
    const Eigen::Index k = m.rows();
    if (k < 1 || m.cols() != k)
        throw std::invalid_argument("eigencentrality: matrix must be square and non-empty");
    if (!(cfg.epsilon > 0.0) || cfg.iterations < 1 || !(cfg.delta > 0.0))
        throw std::invalid_argument("eigencentrality: invalid config");
    if (((m - m.transpose()).cwiseAbs().maxCoeff()) > kSymmetryTol)
        throw std::invalid_argument("eigencentrality: matrix is not symmetric");
    if (m.minCoeff() < 0.0 || m.maxCoeff() > 1.0)
        throw std::invalid_argument("eigencentrality: entries must lie in [0,1]");

    const Eigen::MatrixXd a =
        m + cfg.epsilon * Eigen::MatrixXd::Identity(k, k);

    Eigen::VectorXd v = Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k));
    for (int t = 0; t < cfg.iterations; ++t) {
        v = a * v;
        v /= v.norm() + cfg.delta;
    }

    CentralityVector out;
    out.raw = v;
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    if (hi - lo < kUniformTol) {
        // Unanimous evidence: keep every node maximally central rather than
        // letting the rescale zero out all source capacities.
        out.v = Eigen::VectorXd::Ones(k);
    } else {
        out.v = (v.array() - lo) / (hi - lo + cfg.delta);
    }
    return out;
}

}  // namespace evicut
