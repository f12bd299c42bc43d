#pragma once

#include "nlos/classifier/simplenet.hpp"
#include "nlos/classifier/train.hpp"

#include <array>
#include <cstddef>
#include <span>

namespace nlos::classifier {

struct EvalReport {
    double accuracy = 0;
    std::size_t total = 0;
    std::array<std::array<std::size_t, kClasses>, kClasses> confusion{};  ///< [true][predicted]
    std::array<double, kClasses> per_class_accuracy{};                    ///< NaN for absent classes

    std::size_t class_count(int label) const;
};

/// Throws ShapeError on length mismatch or empty input, DomainError on labels outside 0..9.
EvalReport report_from_predictions(std::span<const int> predicted, std::span<const int> truth);

/// Throws ConfigError for an empty set.
EvalReport evaluate(const SimpleNetParams<float>& params, const ImageSet& test_set);

}  // namespace nlos::classifier
