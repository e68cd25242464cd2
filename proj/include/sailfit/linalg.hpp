#pragma once

#include <vector>

#include "sailfit/features.hpp"
#include "sailfit/parallel.hpp"

namespace sailfit {

struct LsqSolution {
    std::vector<double> beta;  // one per matrix column
    double intercept = 0;
};

// Minimizes ||y - X b - a||^2 + penalty * ||b||^2 over (b, a); the intercept
// is never penalized. penalty = n * lambda yields the ridge normal equations
// (X'X + n lambda I). Solved by Cholesky on the diagonally-rescaled normal
// equations with one iterative-refinement pass; entries of X'X and X'y are
// accumulated pairwise.
//
// Throws RankDeficient when a scaled pivot falls below tolerance;
// deficient_col (when non-null) receives the offending column index, with
// X.cols meaning the intercept column.
LsqSolution solve_normal_equations(const Matrix& X, const std::vector<double>& y,
                                   double penalty, ExecMode mode = ExecMode::Parallel,
                                   int* deficient_col = nullptr);

} // namespace sailfit
