#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ela/selection.hpp"

namespace ela::fs {

using sel::Mask;

/// Lower is better. Non-finite scores are treated as +inf.
using Scorer = std::function<double(const Mask&)>;

struct Step {
    std::string action;  ///< "add", "remove" or "init"
    int feature = -1;
    double score = kNaN;
    Mask mask;
};

struct Result {
    Mask mask;
    double score = kInf;
    std::vector<Step> steps;            ///< accepted steps (sffs / sfbs)
    std::vector<double> best_per_generation;  ///< ga: index 0 is the initial population
    std::size_t evaluations = 0;        ///< distinct masks scored
};

/// Floating forward selection from the empty mask. A step is accepted only
/// when it lowers the score by more than `tol`.
Result sffs(std::size_t p, const Scorer& score, double tol = 1e-6);

/// Floating backward selection from the full mask. A removal is accepted when
/// it lowers the score by more than `tol` or leaves it exactly unchanged (the
/// smaller mask wins a tie); an addition needs an improvement beyond `tol`.
Result sfbs(std::size_t p, const Scorer& score, double tol = 1e-6);

struct GaOptions {
    int mu = 10;
    int lambda = 5;
    int generations = 100;
    double mutation_rate = 0.05;
    double crossover_rate = 0.5;
    std::uint64_t seed = 1;
};

/// (mu + lambda) genetic algorithm over bit masks. Scores at most
/// mu + lambda * generations distinct masks.
Result ga(std::size_t p, const Scorer& score, const GaOptions& opt);

/// Scorer: cost-inclusive LOFO-CV mean relERT of the given selector setup.
Scorer cv_scorer(const sel::Dataset& data, const perf::PerformanceTable& table, sel::Paradigm paradigm,
                 const learn::Learner& learner, const sel::CvOptions& opt);

}  // namespace ela::fs
