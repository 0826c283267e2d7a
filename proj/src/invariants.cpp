#include "vdlab/invariants.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "vdlab/hyperbolic.hpp"
#include "vdlab/laxcore.hpp"

namespace vdlab {

VanDiejenParams VanDiejenParams::three_parameter(const CouplingParams& c) {
    if (!c.kappa) throw ValidationError({"three-parameter specialization requires kappa"});
    return {c.mu, c.nu / 2.0, c.nu / 2.0, *c.kappa / 2.0, *c.kappa / 2.0};
}

Vec char_poly_coeffs(const CMat& L) {
    Eigen::SelfAdjointEigenSolver<CMat> es(L, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigensolveFailure("char_poly eigensolve failed");
    const Vec w = es.eigenvalues();
    const Eigen::Index N = w.size();

    Vec e = Vec::Zero(N + 1);
    e[0] = 1.0;
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index m = std::min<Eigen::Index>(j + 1, N); m >= 1; --m)
            e[m] += w[j] * e[m - 1];

    Vec k(N + 1);
    for (Eigen::Index m = 0; m <= N; ++m) k[m] = (m % 2 == 0 ? 1.0 : -1.0) * e[m];
    return k;
}

namespace {

Complex v_pot(double x, double g) { return sinh_ri(x, g) / std::sinh(x); }

Complex w_pot(double x, const VanDiejenParams& vp) {
    return (sinh_ri(x, vp.g0) / std::sinh(x)) * (cosh_ri(x, vp.g1) / std::cosh(x)) *
           (sinh_ri(x, vp.g0p) / std::sinh(x)) * (cosh_ri(x, vp.g1p) / std::cosh(x));
}

/// U_{J^c, p}: signed sum over subsets I of J^c of size p with sign vectors.
Complex u_sum(const Vec& lambda, const VanDiejenParams& vp, unsigned jc_mask, int p) {
    if (p == 0) return 1.0;
    const int n = static_cast<int>(lambda.size());
    std::vector<int> jc;
    for (int i = 0; i < n; ++i)
        if (jc_mask & (1u << i)) jc.push_back(i);

    Complex total = 0.0;
    const unsigned m = static_cast<unsigned>(jc.size());
    for (unsigned sel = 0; sel < (1u << m); ++sel) {
        if (__builtin_popcount(sel) != p) continue;
        std::vector<int> I, rest;
        for (unsigned b = 0; b < m; ++b) (sel & (1u << b) ? I : rest).push_back(jc[b]);
        for (unsigned signs = 0; signs < (1u << p); ++signs) {
            Complex term = 1.0;
            std::vector<double> x(I.size());
            for (std::size_t ii = 0; ii < I.size(); ++ii) {
                const double eps = (signs & (1u << ii)) ? -1.0 : 1.0;
                x[ii] = eps * lambda[I[ii]];
                term *= w_pot(x[ii], vp);
            }
            for (std::size_t ii = 0; ii < I.size(); ++ii)
                for (std::size_t jj = ii + 1; jj < I.size(); ++jj)
                    term *= std::norm(v_pot(x[ii] + x[jj], vp.g));
            for (std::size_t ii = 0; ii < I.size(); ++ii)
                for (int k : rest)
                    term *= v_pot(x[ii] + lambda[k], vp.g) * v_pot(x[ii] - lambda[k], vp.g);
            total += term;
        }
    }
    return (p % 2 == 0 ? 1.0 : -1.0) * total;
}

}  // namespace

double vd_hamiltonian(const PhasePoint& p, const VanDiejenParams& vp, int l) {
    p.validate();
    const int n = static_cast<int>(p.n());
    if (l < 0 || l > n) throw ValidationError({"order l must lie in 0..n"});
    if (l == 0) return 1.0;

    // memoize U over (complement mask, order) pairs
    std::vector<std::vector<Complex>> u_cache(1u << n,
                                              std::vector<Complex>(l + 1, Complex(0, 0)));
    std::vector<std::vector<bool>> u_known(1u << n, std::vector<bool>(l + 1, false));
    const auto u_of = [&](unsigned mask, int order) {
        if (!u_known[mask][order]) {
            u_cache[mask][order] = u_sum(p.lambda, vp, mask, order);
            u_known[mask][order] = true;
        }
        return u_cache[mask][order];
    };

    const unsigned full = (1u << n) - 1u;
    Complex total = 0.0;
    for (unsigned jm = 0; jm < (1u << n); ++jm) {
        const int js = __builtin_popcount(jm);
        if (js > l) continue;
        const unsigned jc = full & ~jm;
        const Complex u = u_of(jc, l - js);
        if (js == 0) {
            total += u;
            continue;
        }
        std::vector<int> J, rest;
        for (int i = 0; i < n; ++i) ((jm & (1u << i)) ? J : rest).push_back(i);
        for (unsigned signs = 0; signs < (1u << js); ++signs) {
            double theta_sum = 0.0;
            Complex vfac = 1.0;
            std::vector<double> x(J.size());
            for (std::size_t ii = 0; ii < J.size(); ++ii) {
                const double eps = (signs & (1u << ii)) ? -1.0 : 1.0;
                x[ii] = eps * p.lambda[J[ii]];
                theta_sum += eps * p.theta[J[ii]];
                vfac *= w_pot(x[ii], vp);
            }
            for (std::size_t ii = 0; ii < J.size(); ++ii)
                for (std::size_t jj = ii + 1; jj < J.size(); ++jj) {
                    const Complex vv = v_pot(x[ii] + x[jj], vp.g);
                    vfac *= vv * vv;
                }
            for (std::size_t ii = 0; ii < J.size(); ++ii)
                for (int k : rest)
                    vfac *= v_pot(x[ii] + p.lambda[k], vp.g) * v_pot(x[ii] - p.lambda[k], vp.g);
            total += std::cosh(theta_sum) * std::abs(vfac) * u;
        }
    }
    return total.real();
}

namespace {

/// The purely numerical coefficient multiplying A_k in H_l: a signed
/// exponential sum over increasing index tuples from {1..n-k} with
/// independent signs.
double cu_coefficient(int n, int k, int p, const CouplingParams& c) {
    if (p == 0) return 1.0;
    const int l = p + k;
    const int top = n - k;
    Complex total = 0.0;
    std::vector<int> js(p);
    // iterate strictly increasing p-tuples 1 <= j_1 < ... < j_p <= top
    for (int i = 0; i < p; ++i) js[i] = i + 1;
    while (true) {
        for (unsigned signs = 0; signs < (1u << p); ++signs) {
            double s = 0.0;
            for (int m = 1; m <= p; ++m) {
                const double eps = (signs & (1u << (m - 1))) ? -1.0 : 1.0;
                s += eps * (c.nu + 2.0 * (n - l + m - js[m - 1]) * c.mu);
            }
            total += std::polar(1.0, s);
        }
        int i = p - 1;
        while (i >= 0 && js[i] == top - (p - 1 - i)) --i;
        if (i < 0) break;
        ++js[i];
        for (int j = i + 1; j < p; ++j) js[j] = js[j - 1] + 1;
    }
    return (p % 2 == 0 ? 1.0 : -1.0) * total.real();
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

RelationFactors relation_factors(const CouplingParams& c, int n) {
    c.validate();
    if (n < 1) throw ValidationError({"n must be positive"});
    RelationFactors rf;
    rf.U = Mat::Zero(n + 1, n + 1);
    rf.G = Mat::Zero(n + 1, n + 1);
    for (int l = 0; l <= n; ++l)
        for (int k = 0; k <= l; ++k) rf.U(l, k) = cu_coefficient(n, k, l - k, c);
    for (int m = 0; m <= n; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (int a = 0; 2 * a <= m; ++a) rf.G(m, m - 2 * a) += sign * binomial(n - (m - 2 * a), a);
    }
    rf.T = rf.G * rf.U.triangularView<Eigen::Lower>().solve(Mat::Identity(n + 1, n + 1));
    return rf;
}

Mat relation_matrix(const CouplingParams& c, int n) { return relation_factors(c, n).T; }

double poisson_bracket(const Observable& f, const Observable& g, const PhasePoint& p, double h) {
    p.validate();
    if (!(h >= 1e-6 && h <= 1e-3)) throw ValidationError({"bracket step must lie in [1e-6, 1e-3]"});
    const Eigen::Index n = p.n();

    const auto richardson = [&](const Observable& obs, bool wrt_lambda, Eigen::Index cidx) {
        const double base = wrt_lambda ? p.lambda[cidx] : p.theta[cidx];
        const double hc = h * std::max(1.0, std::abs(base));
        const auto eval = [&](double step) {
            PhasePoint q = p;
            (wrt_lambda ? q.lambda[cidx] : q.theta[cidx]) += step;
            return obs(q);
        };
        const double d1 = (eval(hc) - eval(-hc)) / (2.0 * hc);
        const double d2 = (eval(hc / 2.0) - eval(-hc / 2.0)) / hc;
        return (4.0 * d2 - d1) / 3.0;
    };

    double acc = 0.0;
    for (Eigen::Index cidx = 0; cidx < n; ++cidx) {
        acc += richardson(f, true, cidx) * richardson(g, false, cidx);
        acc -= richardson(f, false, cidx) * richardson(g, true, cidx);
    }
    return acc;
}

double involution_check(const PhasePoint& p, const CouplingParams& c) {
    p.validate();
    c.validate();
    const Eigen::Index n = p.n();
    double worst = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const Observable fa = [&c, a](const PhasePoint& q) {
                return lax_spectrum(build_bundle(q, c))[a];
            };
            const Observable fb = [&c, b](const PhasePoint& q) {
                return lax_spectrum(build_bundle(q, c))[b];
            };
            worst = std::max(worst, std::abs(poisson_bracket(fa, fb, p, 1e-4)));
        }
    }
    return worst;
}

}  // namespace vdlab
