#ifndef REGRESSLAB_CV_HPP
#define REGRESSLAB_CV_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "regresslab/dataset.hpp"
#include "regresslab/errors.hpp"
#include "regresslab/rng.hpp"

namespace regresslab {

enum class SplitKind { holdout, kfold, loocv };

// Row-to-fold assignment. For kfold/loocv every fold is scored once against
// a fit on its complement; for holdout fold 1 is the validation set and fold
// 0 is only ever trained on.
struct FoldPlan {
    std::vector<int> fold_of_row;
    int k = 0;
    SplitKind kind = SplitKind::kfold;

    std::vector<std::size_t> rows_in_fold(int fold) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
            if (fold_of_row[i] == fold) rows.push_back(i);
        }
        return rows;
    }
    std::vector<std::size_t> rows_not_in_fold(int fold) const {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
            if (fold_of_row[i] != fold) rows.push_back(i);
        }
        return rows;
    }
};

// Seeded shuffle, then contiguous assignment; fold sizes differ by at most 1.
inline FoldPlan split_kfold(std::size_t m, int k, Rng& rng) {
    if (k < 2 || static_cast<std::size_t>(k) > m) {
        throw ParameterError("split_kfold: need 2 <= k <= m");
    }
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    shuffle(order, rng);
    FoldPlan plan;
    plan.kind = SplitKind::kfold;
    plan.k = k;
    plan.fold_of_row.assign(m, 0);
    const std::size_t base = m / static_cast<std::size_t>(k);
    const std::size_t extra = m % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (int fold = 0; fold < k; ++fold) {
        const std::size_t size = base + (static_cast<std::size_t>(fold) < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) plan.fold_of_row[order[pos++]] = fold;
    }
    return plan;
}

inline FoldPlan split_loocv(std::size_t m, Rng& rng) {
    FoldPlan plan = split_kfold(m, static_cast<int>(m), rng);
    plan.kind = SplitKind::loocv;
    return plan;
}

// Validation size is ceil(frac * m).
inline FoldPlan split_holdout(std::size_t m, double frac, Rng& rng) {
    if (!(frac > 0.0 && frac < 1.0)) throw ParameterError("split_holdout: need 0 < frac < 1");
    const std::size_t val_size =
        static_cast<std::size_t>(std::ceil(frac * static_cast<double>(m)));
    if (val_size >= m) throw ParameterError("split_holdout: validation set swallows all rows");
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    shuffle(order, rng);
    FoldPlan plan;
    plan.kind = SplitKind::holdout;
    plan.k = 2;
    plan.fold_of_row.assign(m, 0);
    for (std::size_t i = 0; i < val_size; ++i) plan.fold_of_row[order[i]] = 1;
    return plan;
}

struct CvResult {
    std::vector<double> fold_scores;
    double mean = 0.0;
};

// For each scored fold: fit on the complement, predict the fold, score it.
// FitFn: (const Dataset&) -> Predictor; Predictor: (const Matrix&) -> Vector;
// MetricFn: (const Vector& yhat, const Vector& y) -> double.
template <typename FitFn, typename MetricFn>
CvResult cross_validate(const Dataset& d, const FoldPlan& plan, FitFn&& fit_fn,
                        MetricFn&& metric_fn) {
    if (plan.fold_of_row.size() != d.rows()) {
        throw ParameterError("cross_validate: plan does not match dataset rows");
    }
    const int first_fold = plan.kind == SplitKind::holdout ? 1 : 0;
    CvResult result;
    for (int fold = first_fold; fold < plan.k; ++fold) {
        const std::vector<std::size_t> train_rows = plan.rows_not_in_fold(fold);
        const std::vector<std::size_t> val_rows = plan.rows_in_fold(fold);
        if (train_rows.empty()) throw ParameterError("cross_validate: empty training fold");
        if (val_rows.empty()) continue;
        const Dataset train = take_rows(d, train_rows);
        const Dataset val = take_rows(d, val_rows);
        auto predictor = fit_fn(train);
        const Vector yhat = predictor(val.x);
        Vector y_true(val_rows.size());
        if (val.y_real) {
            y_true = *val.y_real;
        } else {
            for (std::size_t i = 0; i < val_rows.size(); ++i) {
                y_true[i] = static_cast<double>((*val.y_class)[i]);
            }
        }
        result.fold_scores.push_back(metric_fn(yhat, y_true));
    }
    if (result.fold_scores.empty()) throw ParameterError("cross_validate: nothing to score");
    double total = 0.0;
    for (double s : result.fold_scores) total += s;
    result.mean = total / static_cast<double>(result.fold_scores.size());
    return result;
}

template <typename Candidate>
struct ScoreRow {
    Candidate candidate;
    CvResult scores;
};

template <typename Candidate>
struct SelectionResult {
    Candidate best;
    std::vector<ScoreRow<Candidate>> table;
};

// Evaluates every candidate on the same fold plan and returns the one with
// the smallest mean score; ties go to the earlier candidate.
template <typename Candidate, typename FitFactory, typename MetricFn>
SelectionResult<Candidate> select_hyperparameter(const Dataset& d, const FoldPlan& plan,
                                                 const std::vector<Candidate>& candidates,
                                                 FitFactory&& fit_factory,
                                                 MetricFn&& metric_fn) {
    if (candidates.empty()) throw ParameterError("select_hyperparameter: no candidates");
    SelectionResult<Candidate> result;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto fit_fn = fit_factory(candidates[i]);
        CvResult scores = cross_validate(d, plan, fit_fn, metric_fn);
        result.table.push_back(ScoreRow<Candidate>{candidates[i], std::move(scores)});
        if (result.table[i].scores.mean < result.table[best_idx].scores.mean) best_idx = i;
    }
    result.best = result.table[best_idx].candidate;
    return result;
}

// candidate, fold scores..., mean (fold columns padded to the widest row).
template <typename Candidate>
void score_table_to_csv(const std::vector<ScoreRow<Candidate>>& table, std::ostream& out) {
    if (table.empty()) throw ParameterError("score_table_to_csv: empty table");
    std::size_t folds = 0;
    for (const auto& row : table) folds = std::max(folds, row.scores.fold_scores.size());
    out << "candidate";
    for (std::size_t i = 0; i < folds; ++i) out << ",fold" << i;
    out << ",mean\n";
    for (const auto& row : table) {
        out << row.candidate;
        for (std::size_t i = 0; i < folds; ++i) {
            out << ',';
            if (i < row.scores.fold_scores.size()) {
                out << detail::format_double(row.scores.fold_scores[i]);
            }
        }
        out << ',' << detail::format_double(row.scores.mean) << '\n';
    }
}

} // namespace regresslab

#endif
