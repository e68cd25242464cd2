// Test-only reference implementations, deliberately independent of the
// library code paths they check.
#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "sailfit/features.hpp"

namespace oracle {

inline double naive_mse(const std::vector<double>& y, const std::vector<double>& yhat) {
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    return s / static_cast<double>(y.size());
}

inline double naive_mae(const std::vector<double>& y, const std::vector<double>& yhat) {
    double s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += std::fabs(y[i] - yhat[i]);
    return s / static_cast<double>(y.size());
}

// Central finite differences of a scalar function of a parameter vector.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> theta, double h = 1e-5) {
    std::vector<double> g(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        double keep = theta[j];
        theta[j] = keep + h;
        double fp = f(theta);
        theta[j] = keep - h;
        double fm = f(theta);
        theta[j] = keep;
        g[j] = (fp - fm) / (2 * h);
    }
    return g;
}

// ---- exhaustive regression-tree search -------------------------------------
//
// Enumerates every tree reachable by at most (max_leaves-1) splits: the single
// leaf, every 1-split tree, and every 2-split tree (either child refined).
// Thresholds are midpoints between consecutive distinct sorted values, leaf
// values are means (summed in ascending row order), SSE accumulates in
// ascending row order — mirroring the contract the library promises so that
// equal partitions give bitwise-equal SSE.

inline double cell_sse(const sailfit::Matrix&, const std::vector<double>& targets,
                       const std::vector<std::vector<int>>& cells) {
    std::vector<double> value_of_row(targets.size(), 0.0);
    for (const auto& cell : cells) {
        double sum = 0;
        for (int r : cell) sum += targets[static_cast<std::size_t>(r)];
        double v = sum / static_cast<double>(cell.size());
        for (int r : cell) value_of_row[static_cast<std::size_t>(r)] = v;
    }
    double sse = 0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        double d = targets[i] - value_of_row[i];
        sse += d * d;
    }
    return sse;
}

inline std::vector<std::pair<int, double>> candidate_splits(const sailfit::Matrix& X,
                                                            const std::vector<int>& rows) {
    std::vector<std::pair<int, double>> cands;
    for (int j = 0; j < static_cast<int>(X.cols); ++j) {
        std::vector<double> vals;
        for (int r : rows)
            vals.push_back(X(static_cast<std::size_t>(r), static_cast<std::size_t>(j)));
        std::sort(vals.begin(), vals.end());
        for (std::size_t k = 0; k + 1 < vals.size(); ++k)
            if (vals[k] < vals[k + 1]) cands.emplace_back(j, 0.5 * (vals[k] + vals[k + 1]));
    }
    return cands;
}

inline std::pair<std::vector<int>, std::vector<int>> apply_split(const sailfit::Matrix& X,
                                                                 const std::vector<int>& rows,
                                                                 int feature, double threshold) {
    std::vector<int> left, right;
    for (int r : rows) {
        double v = X(static_cast<std::size_t>(r), static_cast<std::size_t>(feature));
        (v <= threshold ? left : right).push_back(r);
    }
    return {left, right};
}

inline double brute_force_best_sse(const sailfit::Matrix& X, const std::vector<double>& targets,
                                   std::size_t max_leaves, std::size_t min_samples_leaf) {
    std::vector<int> all;
    for (std::size_t i = 0; i < X.rows; ++i) all.push_back(static_cast<int>(i));

    double best = cell_sse(X, targets, {all});
    if (max_leaves < 2) return best;

    auto ok = [&](const std::vector<int>& cell) { return cell.size() >= min_samples_leaf; };

    for (const auto& [f1, t1] : candidate_splits(X, all)) {
        auto [left, right] = apply_split(X, all, f1, t1);
        if (!ok(left) || !ok(right)) continue;
        best = std::min(best, cell_sse(X, targets, {left, right}));
        if (max_leaves < 3) continue;
        for (const auto* refine : {&left, &right}) {
            const std::vector<int>& keep = (refine == &left) ? right : left;
            for (const auto& [f2, t2] : candidate_splits(X, *refine)) {
                auto [a, b] = apply_split(X, *refine, f2, t2);
                if (!ok(a) || !ok(b)) continue;
                best = std::min(best, cell_sse(X, targets, {a, b, keep}));
            }
        }
    }
    return best;
}

// ---- minimal-norm least squares via Jacobi eigendecomposition --------------
//
// Solves min ||y - [X|1] c|| choosing the minimum-norm c when the system is
// singular (the pseudo-inverse route for the redundant-dummies property).

inline void jacobi_eigen(std::vector<double>& A, std::size_t k, std::vector<double>& V) {
    V.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) V[i * k + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < k; ++p)
            for (std::size_t q = p + 1; q < k; ++q) off += A[p * k + q] * A[p * k + q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < k; ++p) {
            for (std::size_t q = p + 1; q < k; ++q) {
                double apq = A[p * k + q];
                if (std::fabs(apq) < 1e-300) continue;
                double app = A[p * k + p], aqq = A[q * k + q];
                double tau = (aqq - app) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) /
                           (std::fabs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t), s = t * c;
                for (std::size_t i = 0; i < k; ++i) {
                    double aip = A[i * k + p], aiq = A[i * k + q];
                    A[i * k + p] = c * aip - s * aiq;
                    A[i * k + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    double api = A[p * k + i], aqi = A[q * k + i];
                    A[p * k + i] = c * api - s * aqi;
                    A[q * k + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < k; ++i) {
                    double vip = V[i * k + p], viq = V[i * k + q];
                    V[i * k + p] = c * vip - s * viq;
                    V[i * k + q] = s * vip + c * viq;
                }
            }
        }
    }
}

// Returns p coefficients followed by the intercept.
inline std::vector<double> pinv_least_squares(const sailfit::Matrix& X,
                                              const std::vector<double>& y) {
    const std::size_t n = X.rows, p = X.cols, k = p + 1;
    auto col = [&](std::size_t j, std::size_t i) { return j < p ? X(i, j) : 1.0; };
    std::vector<double> G(k * k, 0.0), b(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t c = a; c < k; ++c) {
            double s = 0;
            for (std::size_t i = 0; i < n; ++i) s += col(a, i) * col(c, i);
            G[a * k + c] = G[c * k + a] = s;
        }
        for (std::size_t i = 0; i < n; ++i) b[a] += col(a, i) * y[i];
    }
    std::vector<double> V;
    jacobi_eigen(G, k, V);  // G now ~diagonal, eigenvalues on the diagonal
    double lmax = 0;
    for (std::size_t i = 0; i < k; ++i) lmax = std::max(lmax, std::fabs(G[i * k + i]));
    std::vector<double> x(k, 0.0);
    for (std::size_t e = 0; e < k; ++e) {
        double lam = G[e * k + e];
        if (std::fabs(lam) < 1e-10 * lmax) continue;
        double proj = 0;
        for (std::size_t i = 0; i < k; ++i) proj += V[i * k + e] * b[i];
        for (std::size_t i = 0; i < k; ++i) x[i] += V[i * k + e] * proj / lam;
    }
    return x;
}

// ---- structural XML check ---------------------------------------------------
//
// Accepts the SVG subset the plot module emits: declaration, balanced tags,
// quoted attributes, self-closing elements, text content.

inline bool xml_well_formed(const std::string& text) {
    std::size_t i = 0;
    std::vector<std::string> stack;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    if (text.compare(i, 5, "<?xml") == 0) {
        auto end = text.find("?>", i);
        if (end == std::string::npos) return false;
        i = end + 2;
    }
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        if (text[i] != '<') {  // text content
            if (stack.empty()) return false;
            while (i < text.size() && text[i] != '<') {
                if (text[i] == '>') return false;
                ++i;
            }
            continue;
        }
        if (text.compare(i, 2, "</") == 0) {
            auto end = text.find('>', i);
            if (end == std::string::npos || stack.empty()) return false;
            std::string name = text.substr(i + 2, end - i - 2);
            if (name != stack.back()) return false;
            stack.pop_back();
            i = end + 1;
            continue;
        }
        // opening or self-closing tag; walk it, validating attribute quoting
        std::size_t j = i + 1;
        std::string name;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
               text[j] != '>' && text[j] != '/')
            name += text[j++];
        if (name.empty()) return false;
        bool self_closing = false;
        while (j < text.size() && text[j] != '>') {
            if (text[j] == '"') {
                auto close = text.find('"', j + 1);
                if (close == std::string::npos) return false;
                j = close + 1;
                continue;
            }
            if (text[j] == '/' && j + 1 < text.size() && text[j + 1] == '>') {
                self_closing = true;
                ++j;
                break;
            }
            ++j;
        }
        if (j >= text.size()) return false;
        if (!self_closing) stack.push_back(name);
        i = j + 1;
    }
    return stack.empty();
}

} // namespace oracle
