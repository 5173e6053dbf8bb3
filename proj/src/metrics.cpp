#include "facecue/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "facecue/errors.hpp"

namespace facecue {

ConfusionMatrix ConfusionMatrix::zero(const std::vector<std::string>& class_list) {
    ConfusionMatrix cm;
    cm.class_list = class_list;
    cm.counts.assign(class_list.size(), std::vector<long long>(class_list.size(), 0));
    return cm;
}

long long ConfusionMatrix::total() const {
    long long t = 0;
    for (const auto& row : counts)
        for (long long v : row) t += v;
    return t;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          const std::vector<std::string>& class_list) {
    if (y_true.size() != y_pred.size())
        throw Error(Errc::LengthMismatch, "y_true and y_pred differ in length");
    ConfusionMatrix cm = ConfusionMatrix::zero(class_list);
    const int n_classes = static_cast<int>(class_list.size());
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] < 0 || y_true[i] >= n_classes || y_pred[i] < 0 || y_pred[i] >= n_classes)
            throw Error(Errc::UnknownLabel, "label outside the class list at sample " +
                                                std::to_string(i));
        cm.counts[static_cast<std::size_t>(y_true[i])][static_cast<std::size_t>(y_pred[i])]++;
    }
    return cm;
}

BasicMetrics metrics_from_confusion(const ConfusionMatrix& cm) {
    const long long total = cm.total();
    if (total == 0) throw Error(Errc::EmptyMatrix, "confusion matrix has no samples");
    const std::size_t n = cm.class_list.size();

    BasicMetrics m;
    m.precision.assign(n, 0.0);
    m.recall.assign(n, 0.0);
    m.f1.assign(n, 0.0);

    long long diag = 0;
    for (std::size_t c = 0; c < n; ++c) {
        diag += cm.counts[c][c];
        long long col_sum = 0, row_sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            col_sum += cm.counts[i][c];
            row_sum += cm.counts[c][i];
        }
        const auto tp = static_cast<double>(cm.counts[c][c]);
        m.precision[c] = col_sum > 0 ? tp / static_cast<double>(col_sum) : 0.0;
        m.recall[c] = row_sum > 0 ? tp / static_cast<double>(row_sum) : 0.0;
        const double pr = m.precision[c] + m.recall[c];
        m.f1[c] = pr > 0.0 ? 2.0 * m.precision[c] * m.recall[c] / pr : 0.0;
    }
    m.accuracy = static_cast<double>(diag) / static_cast<double>(total);
    m.macro_f1 = std::accumulate(m.f1.begin(), m.f1.end(), 0.0) / static_cast<double>(n);
    return m;
}

double auc_binary(std::span<const double> scores, std::span<const int> y_true01) {
    if (scores.size() != y_true01.size())
        throw Error(Errc::LengthMismatch, "scores and labels differ in length");
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : y_true01) (y != 0 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw Error(Errc::SingleClass, "AUC needs both classes present");

    // Rank-sum with average ranks over tied groups.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j + 1); // 1-based
        for (std::size_t t = i; t <= j; ++t)
            if (y_true01[order[t]] != 0) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    const double np = static_cast<double>(n_pos);
    const double nn = static_cast<double>(n_neg);
    const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

std::optional<double> auc_macro_ovr(const Matrix& probabilities, std::span<const int> y_true,
                                    std::size_t n_classes) {
    if (probabilities.rows() != y_true.size())
        throw Error(Errc::LengthMismatch, "probability rows and labels differ in length");
    double sum = 0.0;
    std::size_t counted = 0;
    std::vector<int> binary(y_true.size());
    std::vector<double> scores(y_true.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::size_t n_pos = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            binary[i] = y_true[i] == static_cast<int>(c) ? 1 : 0;
            scores[i] = probabilities.at(i, c);
            n_pos += static_cast<std::size_t>(binary[i]);
        }
        if (n_pos == 0 || n_pos == y_true.size()) continue;
        sum += auc_binary(scores, binary);
        ++counted;
    }
    if (counted == 0) return std::nullopt;
    return sum / static_cast<double>(counted);
}

void finalize_report(MetricsReport& report, bool binary_headline) {
    const std::size_t n_classes = report.class_list.size();
    const std::size_t n_folds = report.per_fold.size();
    report.pooled_confusion = ConfusionMatrix::zero(report.class_list);
    report.averaged = BasicMetrics{};
    report.averaged.precision.assign(n_classes, 0.0);
    report.averaged.recall.assign(n_classes, 0.0);
    report.averaged.f1.assign(n_classes, 0.0);

    double auc_sum = 0.0;
    std::size_t auc_count = 0;
    for (const auto& fold : report.per_fold) {
        report.averaged.accuracy += fold.basic.accuracy;
        report.averaged.macro_f1 += fold.basic.macro_f1;
        for (std::size_t c = 0; c < n_classes; ++c) {
            report.averaged.precision[c] += fold.basic.precision[c];
            report.averaged.recall[c] += fold.basic.recall[c];
            report.averaged.f1[c] += fold.basic.f1[c];
            for (std::size_t j = 0; j < n_classes; ++j)
                report.pooled_confusion.counts[c][j] += fold.confusion.counts[c][j];
        }
        if (fold.auc) {
            auc_sum += *fold.auc;
            ++auc_count;
        }
    }
    if (n_folds > 0) {
        const auto k = static_cast<double>(n_folds);
        report.averaged.accuracy /= k;
        report.averaged.macro_f1 /= k;
        for (std::size_t c = 0; c < n_classes; ++c) {
            report.averaged.precision[c] /= k;
            report.averaged.recall[c] /= k;
            report.averaged.f1[c] /= k;
        }
    }
    report.averaged_auc =
        auc_count > 0 ? std::optional<double>(auc_sum / static_cast<double>(auc_count)) : std::nullopt;
    report.headline_f1 = binary_headline && !report.averaged.f1.empty() ? report.averaged.f1[0]
                                                                        : report.averaged.macro_f1;
}

} // namespace facecue
