#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vdlab {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Input rejected by a type invariant; carries one message per violation.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid input:";
        for (const auto& m : v) s += "\n  - " + m;
        return s;
    }
    std::vector<std::string> violations_;
};

class SpectrumDegenerate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StepFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainExit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EigensolveFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MinorNonPositive : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PoleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coupling constants mu, nu (radians) plus the optional third parameter kappa.
/// Values are stored as given; no reduction modulo pi is applied.
struct CouplingParams {
    double mu = 0.0;
    double nu = 0.0;
    std::optional<double> kappa;

    CouplingParams() = default;
    CouplingParams(double mu_, double nu_) : mu(mu_), nu(nu_) {}
    CouplingParams(double mu_, double nu_, double kappa_) : mu(mu_), nu(nu_), kappa(kappa_) {}

    std::vector<std::string> violations() const;
    void validate() const;
};

/// A point (lambda, theta) of the phase space; lambda lies in the open
/// Weyl chamber lambda_1 > ... > lambda_n > 0.
struct PhasePoint {
    Vec lambda;
    Vec theta;

    PhasePoint() = default;
    PhasePoint(Vec lambda_, Vec theta_) : lambda(std::move(lambda_)), theta(std::move(theta_)) {}

    Eigen::Index n() const { return lambda.size(); }

    std::vector<std::string> violations() const;
    void validate() const;
};

/// The doubled N = 2n index data Lambda = (lambda, -lambda), Theta = (theta, -theta).
struct DoubledIndex {
    Vec Lambda;
    Vec Theta;

    static DoubledIndex from(const PhasePoint& p) {
        const Eigen::Index n = p.n();
        DoubledIndex d;
        d.Lambda.resize(2 * n);
        d.Theta.resize(2 * n);
        d.Lambda.head(n) = p.lambda;
        d.Lambda.tail(n) = -p.lambda;
        d.Theta.head(n) = p.theta;
        d.Theta.tail(n) = -p.theta;
        return d;
    }

    Eigen::Index N() const { return Lambda.size(); }
};

}  // namespace vdlab
