// ela: landscape features, solver performance tables and algorithm
// selectors from the command line.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ela/common.hpp"
#include "ela/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<double> epsilon;
    std::optional<double> design_mult;
    std::optional<std::string> out;
    std::optional<std::string> runs;
};

ela::pipeline::Config resolve(const Overrides& o) {
    ela::pipeline::Config c = o.config.empty() ? ela::pipeline::config_from_json(nlohmann::json::object())
                                               : ela::pipeline::load_config(o.config);
    if (o.seed) c.seed = *o.seed;
    if (o.epsilon) c.epsilon = *o.epsilon;
    if (o.design_mult) c.design_mult = *o.design_mult;
    if (o.out) c.out = *o.out;
    if (o.runs) c.runs = *o.runs;
    // Re-validate after overrides.
    return ela::pipeline::config_from_json(ela::pipeline::to_json(c));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exploratory landscape analysis and algorithm selection toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    Overrides o;
    app.add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--epsilon", o.epsilon, "Target precision of a successful run");
    app.add_option("--design-mult", o.design_mult, "Initial design size per dimension");
    app.add_option("--out", o.out, "Output directory");

    auto* features = app.add_subcommand("features", "Sample the suite and compute landscape features");
    auto* performance = app.add_subcommand("performance", "ERT / relERT tables and the solver portfolio");
    performance->add_option("--runs", o.runs, "Run CSV (synthetic runs when omitted)");
    auto* train = app.add_subcommand("train", "Grid search over algorithm selectors with LOFO-CV");
    auto* report = app.add_subcommand("report", "Summary tables and plot data");
    auto* all = app.add_subcommand("run-all", "features, performance, train and report");
    all->add_option("--runs", o.runs, "Run CSV (synthetic runs when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const auto config = resolve(o);
        if (*features) ela::pipeline::cmd_features(config);
        else if (*performance) ela::pipeline::cmd_performance(config);
        else if (*train) ela::pipeline::cmd_train(config);
        else if (*report) ela::pipeline::cmd_report(config);
        else if (*all) ela::pipeline::run_all(config);
        return kOk;
    } catch (const ela::InvalidArgument& e) {
        std::cerr << "ela: " << e.what() << '\n';
        return kUsage;
    } catch (const ela::DataError& e) {
        std::cerr << "ela: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "ela: internal error: " << e.what() << '\n';
        return kInternal;
    }
}
