#pragma once

// Derivative-free minimisation used by the mu bounds.

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

namespace gammalab::detail {

struct SimplexResult {
    Eigen::VectorXd x;
    double value = 0;
    int evaluations = 0;
};

/// Nelder-Mead with adaptive coefficients for dimension n. Stops when the
/// simplex values spread by less than ftol (relative) or maxEval is spent.
inline SimplexResult nelderMead(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x0,
                                double step, double ftol, int maxEval) {
    const int n = static_cast<int>(x0.size());
    SimplexResult out;
    if (n == 0) {
        out.x = x0;
        out.value = f(x0);
        out.evaluations = 1;
        return out;
    }
    const double alpha = 1, beta = 1 + 2.0 / n, gamma = 0.75 - 0.5 / n, delta = 1 - 1.0 / n;
    std::vector<Eigen::VectorXd> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    for (int i = 0; i < n; ++i) pts[i + 1](i) += step;
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };
    for (int i = 0; i <= n; ++i) vals[i] = eval(pts[i]);
    std::vector<int> order(n + 1);
    while (evals < maxEval) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
        const int best = order.front(), worst = order.back(), second = order[n - 1];
        const double spread = vals[worst] - vals[best];
        if (spread <= ftol * std::max(1e-300, std::abs(vals[best]))) {
            double size = 0;
            for (int i = 0; i <= n; ++i) size = std::max(size, (pts[i] - pts[best]).lpNorm<Eigen::Infinity>());
            if (size < 1e-12 || spread == 0) break;
            if (spread <= ftol * 1e-3 * std::max(1e-300, std::abs(vals[best]))) break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i)
            if (i != worst) centroid += pts[i];
        centroid /= n;
        Eigen::VectorXd xr = centroid + alpha * (centroid - pts[worst]);
        double fr = eval(xr);
        if (fr < vals[best]) {
            Eigen::VectorXd xe = centroid + beta * (xr - centroid);
            double fe = eval(xe);
            if (fe < fr) { pts[worst] = xe; vals[worst] = fe; }
            else { pts[worst] = xr; vals[worst] = fr; }
        } else if (fr < vals[second]) {
            pts[worst] = xr; vals[worst] = fr;
        } else {
            const bool outside = fr < vals[worst];
            Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + gamma * (xr - centroid))
                                         : Eigen::VectorXd(centroid - gamma * (centroid - pts[worst]));
            double fc = eval(xc);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc; vals[worst] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    pts[i] = pts[best] + delta * (pts[i] - pts[best]);
                    vals[i] = eval(pts[i]);
                }
            }
        }
    }
    const int best = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    out.x = pts[best];
    out.value = vals[best];
    out.evaluations = evals;
    return out;
}

} // namespace gammalab::detail
