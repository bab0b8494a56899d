#include "sat/internal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace evidence::sat {

namespace {

// Interior targets for inequalities, relative to the scaled constraint.
double inner_margin(const Constraint& c) {
    if (c.rel == Rel::Gt) return 1e-7;
    if (c.rel == Rel::Ge && c.from_formula) return 1e-10;
    return 0.0;
}

double residuals(const Problem& P, const std::vector<double>& x, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    const size_t m = P.constraints.size();
    const size_t n = P.layout.n;
    r.setZero(static_cast<Eigen::Index>(m));
    if (J) J->setZero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    std::vector<double> g(n);
    for (size_t k = 0; k < m; ++k) {
        const Constraint& c = P.constraints[k];
        double v = c.p.eval(x) * c.scale;
        bool active = true;
        if (c.rel != Rel::Eq) {
            double target = inner_margin(c);
            if (v >= target)
                active = false;
            else
                v -= target;
        }
        if (!active) continue;
        r[static_cast<Eigen::Index>(k)] = v;
        if (J) {
            std::fill(g.begin(), g.end(), 0.0);
            c.p.add_gradient(x, c.scale, g);
            for (size_t j = 0; j < n; ++j) (*J)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = g[j];
        }
    }
    return r.squaredNorm();
}

void clamp(const Problem& P, std::vector<double>& x) {
    for (size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], P.root[j].lo, P.root[j].hi);
}

} // namespace

double polish(const Problem& P, std::vector<double>& x, size_t iterations) {
    const size_t n = P.layout.n;
    clamp(P, x);
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    double cost = residuals(P, x, r, &J);
    double lambda = 1e-3;
    std::vector<double> trial(n);
    Eigen::VectorXd rt;
    for (size_t it = 0; it < iterations && cost > 1e-30; ++it) {
        Eigen::MatrixXd A = J.transpose() * J;
        Eigen::VectorXd g = J.transpose() * r;
        bool accepted = false;
        while (lambda < 1e12) {
            Eigen::MatrixXd M = A;
            for (Eigen::Index j = 0; j < M.rows(); ++j) M(j, j) += lambda * (A(j, j) + 1e-9);
            Eigen::VectorXd step = M.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 4;
                continue;
            }
            for (size_t j = 0; j < n; ++j) trial[j] = x[j] + step[static_cast<Eigen::Index>(j)];
            clamp(P, trial);
            double c2 = residuals(P, trial, rt, nullptr);
            if (c2 < cost) {
                x = trial;
                cost = residuals(P, x, r, &J);
                lambda = std::max(lambda / 3, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 4;
        }
        if (!accepted) break;
    }
    return cost;
}

} // namespace evidence::sat
