#include "ela/feature_selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "ela/rng.hpp"

namespace ela::fs {

namespace {

// Memoised scorer; counts distinct masks.
class Cache {
public:
    explicit Cache(const Scorer& f) : f_(f) {}
    double operator()(const Mask& m) {
        auto it = memo_.find(m);
        if (it != memo_.end()) return it->second;
        double v = f_(m);
        if (!std::isfinite(v)) v = kInf;
        memo_.emplace(m, v);
        return v;
    }
    std::size_t evaluations() const { return memo_.size(); }

private:
    const Scorer& f_;
    std::map<Mask, double> memo_;
};

struct Candidate {
    int feature = -1;
    double score = kInf;
};

// Best single flip of bits currently equal to `from`; ties go to the lower index.
Candidate best_flip(Mask& m, bool from, Cache& score) {
    Candidate best;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] != from) continue;
        m[i] = !from;
        const double s = score(m);
        m[i] = from;
        if (s < best.score || best.feature < 0) best = {static_cast<int>(i), s};
    }
    return best;
}

}  // namespace

Result sffs(std::size_t p, const Scorer& scorer, double tol) {
    if (p == 0) throw InvalidArgument("feature selection needs at least one feature");
    Cache score(scorer);
    Result r;
    r.mask.assign(p, false);
    for (;;) {
        const Candidate add = best_flip(r.mask, false, score);
        if (add.feature < 0 || !(add.score < r.score - tol)) break;
        r.mask[static_cast<std::size_t>(add.feature)] = true;
        r.score = add.score;
        r.steps.push_back({"add", add.feature, add.score, r.mask});
        while (sel::mask_size(r.mask) > 1) {
            const Candidate rem = best_flip(r.mask, true, score);
            if (!(rem.score < r.score - tol)) break;
            r.mask[static_cast<std::size_t>(rem.feature)] = false;
            r.score = rem.score;
            r.steps.push_back({"remove", rem.feature, rem.score, r.mask});
        }
    }
    if (sel::mask_size(r.mask) == 0) {
        // Every single feature scored +inf: fall back to the first one.
        r.mask[0] = true;
        r.score = score(r.mask);
    }
    r.evaluations = score.evaluations();
    return r;
}

Result sfbs(std::size_t p, const Scorer& scorer, double tol) {
    if (p == 0) throw InvalidArgument("feature selection needs at least one feature");
    Cache score(scorer);
    Result r;
    r.mask.assign(p, true);
    r.score = score(r.mask);
    r.steps.push_back({"init", -1, r.score, r.mask});
    while (sel::mask_size(r.mask) > 1) {
        const Candidate rem = best_flip(r.mask, true, score);
        if (!(rem.score < r.score - tol || rem.score == r.score)) break;
        r.mask[static_cast<std::size_t>(rem.feature)] = false;
        r.score = rem.score;
        r.steps.push_back({"remove", rem.feature, rem.score, r.mask});
        for (;;) {
            const Candidate add = best_flip(r.mask, false, score);
            if (add.feature < 0 || !(add.score < r.score - tol)) break;
            r.mask[static_cast<std::size_t>(add.feature)] = true;
            r.score = add.score;
            r.steps.push_back({"add", add.feature, add.score, r.mask});
        }
    }
    r.evaluations = score.evaluations();
    return r;
}

Result ga(std::size_t p, const Scorer& scorer, const GaOptions& opt) {
    if (p == 0) throw InvalidArgument("feature selection needs at least one feature");
    if (opt.mu < 1 || opt.lambda < 1 || opt.generations < 0) throw InvalidArgument("invalid GA settings");
    Cache score(scorer);
    Rng rng(opt.seed);
    auto repair = [&](Mask& m) {
        if (sel::mask_size(m) == 0) m[rng.below(p)] = true;
    };
    struct Individual {
        Mask mask;
        double score;
    };
    std::vector<Individual> pop;
    for (int i = 0; i < opt.mu; ++i) {
        Mask m(p);
        for (std::size_t b = 0; b < p; ++b) m[b] = rng.bernoulli(0.5);
        repair(m);
        pop.push_back({m, score(m)});
    }
    auto by_score = [](const Individual& a, const Individual& b) { return a.score < b.score; };
    std::stable_sort(pop.begin(), pop.end(), by_score);

    Result r;
    r.mask = pop.front().mask;
    r.score = pop.front().score;
    r.best_per_generation.push_back(r.score);
    for (int g = 0; g < opt.generations; ++g) {
        std::vector<Individual> next = pop;
        for (int k = 0; k < opt.lambda; ++k) {
            const Mask& a = pop[rng.below(pop.size())].mask;
            const Mask& b = pop[rng.below(pop.size())].mask;
            Mask child = a;
            if (rng.bernoulli(opt.crossover_rate))
                for (std::size_t i = 0; i < p; ++i) child[i] = rng.bernoulli(0.5) ? a[i] : b[i];
            for (std::size_t i = 0; i < p; ++i)
                if (rng.bernoulli(opt.mutation_rate)) child[i] = !child[i];
            repair(child);
            const double s = score(child);
            next.push_back({std::move(child), s});
        }
        std::stable_sort(next.begin(), next.end(), by_score);
        next.resize(static_cast<std::size_t>(opt.mu));
        pop = std::move(next);
        if (pop.front().score < r.score) {
            r.mask = pop.front().mask;
            r.score = pop.front().score;
        }
        r.best_per_generation.push_back(r.score);
    }
    r.evaluations = score.evaluations();
    return r;
}

Scorer cv_scorer(const sel::Dataset& data, const perf::PerformanceTable& table, sel::Paradigm paradigm,
                 const learn::Learner& learner, const sel::CvOptions& opt) {
    return [&data, &table, paradigm, &learner, opt](const Mask& m) {
        return sel::lofo_cv(data, table, paradigm, learner, m, opt).mean_relert;
    };
}

}  // namespace ela::fs
