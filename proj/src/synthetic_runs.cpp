#include <algorithm>
#include <array>
#include <cmath>

#include "ela/ingest.hpp"
#include "ela/problems.hpp"
#include "ela/rng.hpp"

namespace ela::ingest {

namespace {

struct Behaviour {
    double success_prob;
    double evals_per_dim;  // median evaluations of a successful run, per dimension
};

struct Profile {
    const char* name;
    Behaviour unimodal;
    Behaviour multimodal;
};

constexpr std::array<Profile, 3> kProfiles{{
    {"global", {1.0, 1500.0}, {1.0, 3000.0}},
    {"hybrid", {1.0, 400.0}, {0.6, 2500.0}},
    {"local", {1.0, 100.0}, {0.15, 500.0}},
}};

constexpr double kBudgetPerDim = 2e4;

}  // namespace

std::vector<RunRecord> synthetic_runs(const std::vector<problems::ProblemInstance>& instances, std::uint64_t seed) {
    std::vector<RunRecord> out;
    out.reserve(instances.size() * kProfiles.size());
    for (std::size_t s = 0; s < kProfiles.size(); ++s) {
        const auto& prof = kProfiles[s];
        for (const auto& inst : instances) {
            const auto& id = inst.id();
            const Behaviour& b = problems::is_multimodal(id.fid) ? prof.multimodal : prof.unimodal;
            Rng rng(derive_seed(seed, {s, static_cast<std::uint64_t>(id.fid), static_cast<std::uint64_t>(id.dim),
                                       static_cast<std::uint64_t>(id.iid)}));
            const double d = id.dim;
            RunRecord r;
            r.solver = prof.name;
            r.fid = id.fid;
            r.dim = id.dim;
            r.iid = id.iid;
            r.run = 1;
            if (rng.bernoulli(b.success_prob)) {
                r.fe_count = std::max<std::int64_t>(1, std::llround(b.evals_per_dim * d * std::exp(0.3 * rng.normal())));
                r.best_gap = 0.0099 * rng.uniform();
            } else {
                r.fe_count = std::llround(kBudgetPerDim * d);
                r.best_gap = std::pow(10.0, rng.uniform(-1.0, 2.0));
                r.budget_exhausted = true;
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace ela::ingest
