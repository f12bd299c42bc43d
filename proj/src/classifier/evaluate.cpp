#include "nlos/classifier/evaluate.hpp"

#include "nlos/error.hpp"

#include <limits>
#include <numeric>

namespace nlos::classifier {

std::size_t EvalReport::class_count(int label) const {
    const auto& row = confusion.at(static_cast<std::size_t>(label));
    return std::accumulate(row.begin(), row.end(), std::size_t{0});
}

EvalReport report_from_predictions(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size()) throw ShapeError("prediction and label counts differ");
    if (truth.empty()) throw ShapeError("cannot evaluate an empty set");
    EvalReport r;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i], p = predicted[i];
        if (t < 0 || t >= kClasses || p < 0 || p >= kClasses)
            throw DomainError("class index outside 0..9 at position " + std::to_string(i));
        ++r.confusion[t][p];
        hits += t == p;
    }
    r.total = truth.size();
    r.accuracy = static_cast<double>(hits) / static_cast<double>(r.total);
    for (int c = 0; c < kClasses; ++c) {
        const std::size_t n = r.class_count(c);
        r.per_class_accuracy[c] = n ? static_cast<double>(r.confusion[c][c]) / static_cast<double>(n)
                                    : std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

EvalReport evaluate(const SimpleNetParams<float>& params, const ImageSet& test_set) {
    if (test_set.count() == 0) throw ConfigError("test split is empty");
    const auto pred = predict(params, test_set);
    return report_from_predictions(pred, test_set.labels);
}

}  // namespace nlos::classifier
