#include "ctmc/solve.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ctmc {

double residual(const GeneratorMatrix& q, std::span<const double> pi) {
    const std::size_t n = q.size();
    if (pi.size() != n) throw std::invalid_argument("probability vector size mismatch");
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += pi[i] * q.at(i, j);
        worst = std::max(worst, std::fabs(s));
    }
    return worst;
}

SteadyState solve_steady_state(const GeneratorMatrix& q) {
    const std::size_t n = q.size();
    if (n == 0) throw std::invalid_argument("empty generator");

    // Censored-chain elimination (GTH). Removing state k redirects its flow
    // through the remaining states:
    //   a[i][j] += a[i][k] * a[k][j] / s_k,   s_k = sum_{j<k} a[k][j].
    // Diagonals are implied and never read, and no subtraction occurs, so
    // tiny stationary probabilities come out componentwise accurate.
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = q.at(i, j);

    std::vector<double> depart(n, 0.0);
    for (std::size_t k = n; k-- > 1;) {
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += a[k * n + j];
        if (!(s > 0.0) || !std::isfinite(s))
            throw SingularSystemError("reducible chain: state " + std::to_string(k) +
                                      " cannot reach the remaining states");
        depart[k] = s;
        for (std::size_t i = 0; i < k; ++i) {
            double w = a[i * n + k];
            if (w == 0.0) continue;
            for (std::size_t j = 0; j < k; ++j)
                if (j != i) a[i * n + j] += w * a[k * n + j] / s;
        }
    }

    // accumulate unnormalized weights in elimination-reverse order
    std::vector<double> x(n, 0.0);
    x[0] = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < k; ++i) s += x[i] * a[i * n + k];
        x[k] = s / depart[k];
    }

    double total = 0.0;
    for (double v : x) total += v;
    if (!std::isfinite(total) || total <= 0.0)
        throw SingularSystemError("balance solution failed to normalize");
    for (double& v : x) v /= total;

    SteadyState ss;
    ss.pi = std::move(x);
    ss.residual = residual(q, ss.pi);
    ss.availability = 1.0;
    return ss;
}

SteadyState solve_steady_state(const Model& model) {
    SteadyState ss = solve_steady_state(build_generator(model));
    ss.availability = availability(model, ss);
    return ss;
}

}  // namespace ctmc
