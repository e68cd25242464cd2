#include "sailfit/linalg.hpp"

#include <cmath>
#include <string>

#include "sailfit/error.hpp"

namespace sailfit {

namespace {

constexpr double kPivotTol = 1e-11;  // on the unit-diagonal rescaled system

// Dense Cholesky solve of G x = rhs, G symmetric k x k row-major with unit
// diagonal scaling already applied. Returns false and sets bad_col on a
// non-positive pivot.
bool cholesky_solve(const std::vector<double>& G, std::size_t k, std::vector<double>& rhs,
                    int* bad_col) {
    std::vector<double> L(k * k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        double d = G[j * k + j];
        for (std::size_t m = 0; m < j; ++m) d -= L[j * k + m] * L[j * k + m];
        if (!(d > kPivotTol)) {
            if (bad_col) *bad_col = static_cast<int>(j);
            return false;
        }
        L[j * k + j] = std::sqrt(d);
        for (std::size_t i = j + 1; i < k; ++i) {
            double s = G[i * k + j];
            for (std::size_t m = 0; m < j; ++m) s -= L[i * k + m] * L[j * k + m];
            L[i * k + j] = s / L[j * k + j];
        }
    }
    // forward then backward substitution, in place
    for (std::size_t i = 0; i < k; ++i) {
        double s = rhs[i];
        for (std::size_t m = 0; m < i; ++m) s -= L[i * k + m] * rhs[m];
        rhs[i] = s / L[i * k + i];
    }
    for (std::size_t ii = k; ii > 0; --ii) {
        std::size_t i = ii - 1;
        double s = rhs[i];
        for (std::size_t m = i + 1; m < k; ++m) s -= L[m * k + i] * rhs[m];
        rhs[i] = s / L[i * k + i];
    }
    return true;
}

} // namespace

LsqSolution solve_normal_equations(const Matrix& X, const std::vector<double>& y,
                                   double penalty, ExecMode mode, int* deficient_col) {
    const std::size_t n = X.rows;
    const std::size_t p = X.cols;
    const std::size_t k = p + 1;  // trailing intercept column
    if (y.size() != n)
        throw Error(Err::LengthMismatch,
                    std::to_string(n) + " rows vs " + std::to_string(y.size()) + " targets");
    if (n == 0) throw Error(Err::EmptyInput, "no rows");

    auto col = [&](std::size_t j, std::size_t i) {
        return j < p ? X(i, j) : 1.0;
    };

    // G = A'A + penalty * diag(1..1, 0), rhs = A'y, A = [X | 1]
    std::vector<double> G(k * k, 0.0);
    std::vector<double> rhs(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double s = pairwise_reduce(
                n, [&](std::size_t i) { return col(a, i) * col(b, i); }, mode);
            if (a == b && a < p) s += penalty;
            G[a * k + b] = s;
            G[b * k + a] = s;
        }
    }
    for (std::size_t a = 0; a < k; ++a)
        rhs[a] = pairwise_reduce(n, [&](std::size_t i) { return col(a, i) * y[i]; }, mode);

    // Rescale to unit diagonal so the pivot tolerance is scale-free.
    std::vector<double> scale(k);
    for (std::size_t j = 0; j < k; ++j) {
        double d = G[j * k + j];
        if (!(d > 0.0)) {
            if (deficient_col) *deficient_col = static_cast<int>(j);
            throw Error(Err::RankDeficient,
                        "column " + std::to_string(j) + " has zero norm");
        }
        scale[j] = 1.0 / std::sqrt(d);
    }
    std::vector<double> Gs(k * k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) Gs[a * k + b] = G[a * k + b] * scale[a] * scale[b];

    std::vector<double> xs(k);
    for (std::size_t j = 0; j < k; ++j) xs[j] = rhs[j] * scale[j];
    int bad = -1;
    if (!cholesky_solve(Gs, k, xs, &bad)) {
        if (deficient_col) *deficient_col = bad;
        throw Error(Err::RankDeficient,
                    "normal equations singular at column " + std::to_string(bad));
    }

    std::vector<double> x(k);
    for (std::size_t j = 0; j < k; ++j) x[j] = xs[j] * scale[j];

    // One iterative-refinement pass against the unscaled system.
    std::vector<double> resid(k);
    for (std::size_t a = 0; a < k; ++a) {
        double s = rhs[a];
        for (std::size_t b = 0; b < k; ++b) s -= G[a * k + b] * x[b];
        resid[a] = s * scale[a];
    }
    if (cholesky_solve(Gs, k, resid, nullptr)) {
        for (std::size_t j = 0; j < k; ++j) x[j] += resid[j] * scale[j];
    }

    LsqSolution out;
    out.beta.assign(x.begin(), x.begin() + static_cast<long>(p));
    out.intercept = x[p];
    return out;
}

} // namespace sailfit
