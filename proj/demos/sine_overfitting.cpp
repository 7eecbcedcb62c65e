// Fits polynomials of degree 1, 3, and 9 to ten noisy sine samples and
// prints training/test errors side by side: the classic capacity story.
#include <cstdio>

#include "regresslab/regresslab.hpp"

using namespace regresslab;

int main() {
    Rng rng(42);
    const Dataset train = gen_sine(10, 0.2, rng);
    Rng clean_rng(0);
    const Dataset test = gen_sine(100, 0.0, clean_rng);

    std::printf("%8s %14s %14s %14s\n", "degree", "train rmse", "test rmse", "max |coef|");
    for (int degree : {1, 3, 9}) {
        BasisSpec spec;
        spec.kind = BasisKind::polynomial;
        spec.degree = degree;
        const LinearParams params = fit_lbfm_closed(spec, train.x, *train.y_real);
        const double train_rmse =
            regression_metrics(predict_lbfm(spec, params, train.x), *train.y_real).rmse;
        const double test_rmse =
            regression_metrics(predict_lbfm(spec, params, test.x), *test.y_real).rmse;
        std::printf("%8d %14.6g %14.6g %14.6g\n", degree, train_rmse, test_rmse,
                    inf_norm(params.theta));
    }

    // a ridge penalty tames the degree-9 fit
    BasisSpec spec;
    spec.kind = BasisKind::polynomial;
    spec.degree = 9;
    const LinearParams ridge = fit_lbfm_closed(spec, train.x, *train.y_real, 1e-4);
    const double ridge_test =
        regression_metrics(predict_lbfm(spec, ridge, test.x), *test.y_real).rmse;
    std::printf("%8s %14s %14.6g %14.6g\n", "9+ridge", "-", ridge_test, inf_norm(ridge.theta));
    return 0;
}
