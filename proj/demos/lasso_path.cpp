// Traces lasso and ridge coefficient paths on a synthetic sparse problem and
// prints them as CSV; feed the output to any plotting tool.
#include <iostream>

#include "regresslab/regresslab.hpp"

using namespace regresslab;

int main() {
    Rng rng(7);
    const std::size_t m = 60;
    const std::size_t n = 8;
    Matrix raw(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) raw(i, j) = rng.normal();
    const Dataset standardized = standardize(make_regression_dataset(raw, Vector(m))).dataset;
    const Matrix x = add_bias_column(standardized.x);
    Vector y(m);
    for (std::size_t i = 0; i < m; ++i) {
        y[i] = 3.0 * x(i, 1) - 2.0 * x(i, 2) + 1.5 * x(i, 3) + 0.05 * rng.normal();
    }

    const std::vector<double> grid = default_lambda_grid(x, y, 30);
    const std::vector<PathPoint> lasso = regularization_path(x, y, PenaltyKind::l1, grid);
    std::vector<std::string> names{"bias"};
    for (std::size_t j = 1; j <= n; ++j) names.push_back("x" + std::to_string(j));
    path_to_csv(lasso, names, std::cout);
    return 0;
}
