#include "vdlab/types.hpp"

#include <cmath>

namespace vdlab {

std::vector<std::string> CouplingParams::violations() const {
    std::vector<std::string> v;
    if (std::sin(mu) == 0.0 || !std::isfinite(mu))
        v.push_back("sin(mu) must be nonzero (mu = " + std::to_string(mu) + ")");
    if (std::sin(nu) == 0.0 || !std::isfinite(nu))
        v.push_back("sin(nu) must be nonzero (nu = " + std::to_string(nu) + ")");
    if (std::sin(2.0 * mu - nu) == 0.0)
        v.push_back("sin(2 mu - nu) must be nonzero (mu = " + std::to_string(mu) +
                    ", nu = " + std::to_string(nu) + ")");
    if (kappa && !std::isfinite(*kappa)) v.push_back("kappa must be finite");
    return v;
}

void CouplingParams::validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
}

std::vector<std::string> PhasePoint::violations() const {
    std::vector<std::string> v;
    if (lambda.size() != theta.size())
        v.push_back("lambda and theta must have equal length");
    if (lambda.size() == 0) v.push_back("at least one particle is required");
    for (Eigen::Index a = 0; a < lambda.size(); ++a) {
        if (!std::isfinite(lambda[a]))
            v.push_back("lambda_" + std::to_string(a + 1) + " is not finite");
    }
    for (Eigen::Index a = 0; a < theta.size(); ++a) {
        if (!std::isfinite(theta[a]))
            v.push_back("theta_" + std::to_string(a + 1) + " is not finite");
    }
    for (Eigen::Index a = 0; a + 1 < lambda.size(); ++a) {
        if (!(lambda[a] > lambda[a + 1]))
            v.push_back("ordering violated: lambda_" + std::to_string(a + 1) +
                        " <= lambda_" + std::to_string(a + 2));
    }
    if (lambda.size() > 0 && !(lambda[lambda.size() - 1] > 0.0))
        v.push_back("lambda_" + std::to_string(lambda.size()) + " must be strictly positive");
    return v;
}

void PhasePoint::validate() const {
    auto v = violations();
    if (!v.empty()) throw ValidationError(std::move(v));
}

}  // namespace vdlab
