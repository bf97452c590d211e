#include <algorithm>
#include <filesystem>

#include <gtest/gtest.h>

#include "ela/common.hpp"
#include "ela/ingest.hpp"
#include "ela/problems.hpp"
#include "ela/rng.hpp"

using namespace ela;
using namespace ela::ingest;

namespace {

const std::string header = std::string(kRunsHeader) + "\n";

std::vector<RunRecord> full_cover(const std::string& solver, int fid, int dim) {
    std::vector<RunRecord> out;
    for (int iid = 1; iid <= 5; ++iid) out.push_back({solver, fid, dim, iid, 1, 100 + iid, 0.0, false});
    return out;
}

}  // namespace

TEST(ParseRuns, ExampleRow) {
    const auto r = parse_runs_text(header + "HCMA,4,2,1,1,215,8.44e-03\n");
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].solver, "HCMA");
    EXPECT_EQ(r[0].problem(), (ProblemId{4, 2, 1}));
    EXPECT_EQ(r[0].run, 1);
    EXPECT_EQ(r[0].fe_count, 215);
    EXPECT_EQ(r[0].best_gap, 8.44e-03);
    EXPECT_FALSE(r[0].budget_exhausted);
}

TEST(ParseRuns, HeaderOnlyIsEmpty) { EXPECT_TRUE(parse_runs_text(header).empty()); }

TEST(ParseRuns, ZeroEvaluationsRejectedWithLine) {
    try {
        parse_runs_text(header + "A,1,2,1,1,10,0.1\nA,1,2,2,1,0,0.1\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(ParseRuns, MalformedRows) {
    EXPECT_THROW(parse_runs_text(header + "A,1,2,1,1,10\n"), ParseError);
    EXPECT_THROW(parse_runs_text(header + "A,1,2,x,1,10,0.1\n"), ParseError);
    EXPECT_THROW(parse_runs_text(header + "A,1,2,1,1,10,-0.5\n"), ParseError);
    EXPECT_THROW(parse_runs_text(header + "A,1,2,1,1,2.5,0.1\n"), ParseError);
    EXPECT_THROW(parse_runs_text("solver,fid\nA,1\n"), ParseError);
    EXPECT_THROW(parse_runs_text(""), ParseError);
}

TEST(ParseRuns, DuplicateRecord) {
    try {
        parse_runs_text(header + "A,1,2,1,1,10,0.1\nB,1,2,1,1,10,0.1\nA,1,2,1,1,12,0.2\n");
        FAIL() << "expected DuplicateRecord";
    } catch (const DuplicateRecord& e) {
        EXPECT_EQ(e.line(), 4u);
    }
    EXPECT_NO_THROW(parse_runs_text(header + "A,1,2,1,1,10,0.1\nA,1,2,1,2,12,0.2\n"));
}

TEST(ParseRuns, BudgetColumn) {
    const auto r = parse_runs_text(header.substr(0, header.size() - 1) + ",budget_exhausted\nA,1,2,1,1,10,0.1,1\nA,1,2,2,1,10,0.1,0\n");
    ASSERT_EQ(r.size(), 2u);
    EXPECT_TRUE(r[0].budget_exhausted);
    EXPECT_FALSE(r[1].budget_exhausted);
    EXPECT_THROW(parse_runs_text(header.substr(0, header.size() - 1) + ",budget_exhausted\nA,1,2,1,1,10,0.1,2\n"), ParseError);
}

TEST(ParseRuns, FileErrors) {
    EXPECT_THROW(parse_runs_csv("/nonexistent/runs.csv"), FileNotFound);
    const auto r = parse_runs_csv(std::filesystem::path(ELA_TEST_DATA) / "fid4_runs.csv");
    EXPECT_EQ(r.size(), 60u);
}

TEST(ParseRuns, RoundTripIsExact) {
    Rng rng(3);
    std::vector<RunRecord> recs;
    for (int i = 0; i < 50; ++i)
        recs.push_back({"s" + std::to_string(i % 3), 1 + i % 24, 2 + i % 4, 1 + i % 5, 1 + i / 15,
                        1 + static_cast<std::int64_t>(rng.below(1u << 30)), rng.uniform() * std::pow(10.0, rng.uniform(-9, 4)),
                        false});
    auto back = parse_runs_text(runs_to_csv(recs));
    EXPECT_EQ(back, recs);
    recs[4].budget_exhausted = true;
    back = parse_runs_text(runs_to_csv(recs));
    EXPECT_EQ(back, recs);
}

TEST(Sanity, FullCoverageIsValid) {
    auto recs = full_cover("A", 1, 2);
    const auto more = full_cover("A", 3, 5);
    recs.insert(recs.end(), more.begin(), more.end());
    const auto rep = sanity_check(recs);
    EXPECT_TRUE(rep.valid("A"));
    EXPECT_TRUE(rep.issues.empty());
}

TEST(Sanity, MissingInstanceFlagged) {
    auto recs = full_cover("A", 1, 2);
    auto b = full_cover("B", 1, 2);
    b.erase(b.begin() + 2);
    recs.insert(recs.end(), b.begin(), b.end());
    const auto rep = sanity_check(recs);
    EXPECT_TRUE(rep.valid("A"));
    EXPECT_FALSE(rep.valid("B"));
    EXPECT_TRUE(rep.invalid_solvers.contains("B"));
    ASSERT_EQ(rep.issues.size(), 1u);
    EXPECT_EQ(rep.issues[0], (SanityIssue{"B", IssueKind::missing_instance, 1, 2, 3}));
    EXPECT_NE(rep.to_text().find("B"), std::string::npos);
    EXPECT_EQ(rep.to_jsonl(), "{\"solver\":\"B\",\"issue_kind\":\"missing_instance\",\"fid\":1,\"dim\":2,\"iid\":3}\n");
}

TEST(Sanity, DuplicatesAndNonPositiveReportedButValid) {
    auto recs = full_cover("A", 1, 2);
    recs.push_back({"A", 1, 2, 1, 1, 50, 0.0, false});
    recs[2].fe_count = 0;
    const auto rep = sanity_check(recs);
    EXPECT_TRUE(rep.valid("A"));
    ASSERT_EQ(rep.issues.size(), 2u);
    EXPECT_TRUE(std::any_of(rep.issues.begin(), rep.issues.end(), [](const SanityIssue& i) {
        return i.kind == IssueKind::duplicate_run && i.iid == 1;
    }));
    EXPECT_TRUE(std::any_of(rep.issues.begin(), rep.issues.end(), [](const SanityIssue& i) {
        return i.kind == IssueKind::non_positive_fe && i.iid == 3;
    }));
}

TEST(Sanity, OrderIndependent) {
    auto recs = full_cover("A", 1, 2);
    auto b = full_cover("B", 2, 3);
    b.pop_back();
    recs.insert(recs.end(), b.begin(), b.end());
    recs.push_back(recs[0]);
    const auto base = sanity_check(recs);
    Rng rng(9);
    for (int k = 0; k < 5; ++k) {
        rng.shuffle(std::span<RunRecord>(recs));
        const auto r = sanity_check(recs);
        EXPECT_EQ(r.issues, base.issues);
        EXPECT_EQ(r.valid_solvers, base.valid_solvers);
        EXPECT_EQ(r.invalid_solvers, base.invalid_solvers);
        EXPECT_EQ(r.to_jsonl(), base.to_jsonl());
    }
}

TEST(Sanity, RestrictingToFirstFiveInstancesRepairsSolvers) {
    auto recs = full_cover("A", 1, 2);
    recs.push_back({"A", 1, 2, 7, 1, 10, 0.0, false});
    auto b = full_cover("B", 1, 2);
    recs.insert(recs.end(), b.begin(), b.end());
    EXPECT_TRUE(sanity_check(recs, {1, 2, 3, 4, 5, 6, 7}).invalid_solvers.size() == 2);
    const auto kept = restrict_iids(recs, {1, 2, 3, 4, 5});
    EXPECT_EQ(kept.size(), 10u);
    EXPECT_EQ(sanity_check(kept).valid_solvers.size(), 2u);
}

TEST(FirstRunOnly, KeepsSmallestRunIndex) {
    std::vector<RunRecord> recs{{"A", 1, 2, 1, 3, 30, 0.0, false},
                                {"A", 1, 2, 1, 2, 20, 5.0, false},
                                {"A", 1, 2, 2, 1, 10, 0.0, false},
                                {"A", 1, 2, 1, 4, 40, 0.0, false}};
    const auto kept = first_run_only(recs);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].run, 2);
    EXPECT_EQ(kept[0].best_gap, 5.0);
    EXPECT_EQ(kept[1].iid, 2);
}

TEST(FirstRunOnly, ThreeReplicationsCollapse) {
    std::vector<RunRecord> recs;
    for (int iid = 1; iid <= 5; ++iid)
        for (int run = 1; run <= 3; ++run) recs.push_back({"S", 2, 3, iid, run, 10 * run, 0.0, false});
    const auto kept = first_run_only(recs);
    EXPECT_EQ(kept.size(), 5u);
    for (const auto& r : kept) EXPECT_EQ(r.run, 1);
    const auto single = first_run_only(kept);
    EXPECT_EQ(single, kept);
}

TEST(SyntheticRuns, DeterministicAndComplete) {
    const auto inst = problems::suite({2, 3}, {1, 17}, {1, 2, 3, 4, 5});
    const auto a = synthetic_runs(inst, 5), b = synthetic_runs(inst, 5);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 3u * inst.size());
    const auto rep = sanity_check(a);
    EXPECT_EQ(rep.valid_solvers, (std::set<std::string>{"global", "hybrid", "local"}));
    EXPECT_NE(a, synthetic_runs(inst, 6));
}
