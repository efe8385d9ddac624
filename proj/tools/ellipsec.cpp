#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "ellipsec/config.hpp"
#include "ellipsec/experiments.hpp"

namespace {

struct GlobalArgs {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
};

void add_config_options(CLI::App* sub, GlobalArgs& args) {
    sub->add_option("--config", args.config_path, "key=value experiment file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", args.seed, "override the config seed");
    sub->add_option("--threads", args.threads, "worker threads (speed only, never output)");
    sub->add_option("--out", args.out_dir, "override the output directory");
}

ellipsec::ExperimentConfig load_config(const GlobalArgs& args, const std::string& experiment) {
    ellipsec::KeyValueConfig kv = ellipsec::KeyValueConfig::from_file(args.config_path);
    if (args.seed) kv.set("seed", std::to_string(*args.seed));
    if (args.threads) kv.set("threads", std::to_string(*args.threads));
    if (args.out_dir) kv.set("out", *args.out_dir);
    ellipsec::ExperimentConfig cfg = ellipsec::ExperimentConfig::parse(kv);
    if (!cfg.experiment.empty() && cfg.experiment != experiment) {
        throw std::invalid_argument("config names experiment '" + cfg.experiment +
                                    "' but this subcommand runs '" + experiment + "'");
    }
    return cfg;
}

void print_files(const std::vector<std::string>& files) {
    for (const std::string& f : files) std::cout << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sections of lp-ellipsoids: radii, bounds, experiments"};
    app.require_subcommand(1);

    GlobalArgs args;
    std::string plot_in, plot_kind, plot_out;

    CLI::App* gelfand = app.add_subcommand("gelfand", "bound table over the n grid");
    add_config_options(gelfand, args);
    gelfand->callback([&] { std::cout << run_gelfand_table(load_config(args, "gelfand")) << "\n"; });

    CLI::App* radius = app.add_subcommand("radius", "per-trial section radius table");
    add_config_options(radius, args);
    radius->callback([&] { std::cout << run_radius_table(load_config(args, "radius")) << "\n"; });

    CLI::App* decay = app.add_subcommand("decay", "median radius decay and log-log slope");
    add_config_options(decay, args);
    decay->callback([&] {
        const ellipsec::DecayOutput out = run_decay(load_config(args, "decay"));
        if (!out.warning.empty()) std::cerr << "warning: " << out.warning << "\n";
        print_files(out.files);
        std::printf("slope %.6g\nconstant_hat %.6g\n", out.slope, out.constant_hat);
    });

    CLI::App* dichotomy = app.add_subcommand("dichotomy", "no-decay frequency along growing m");
    add_config_options(dichotomy, args);
    dichotomy->callback([&] {
        const ellipsec::DichotomyOutput out = run_dichotomy(load_config(args, "dichotomy"));
        print_files(out.files);
        std::printf("threshold_m %d\n", out.threshold_m);
    });

    CLI::App* audit = app.add_subcommand("audit", "observed radii against bound shapes");
    add_config_options(audit, args);
    audit->callback([&] {
        const ellipsec::AuditOutput out = run_bound_audit(load_config(args, "bound_audit"));
        print_files(out.files);
        std::printf("chat_min %.6g\nchat_max %.6g\nstable %d\n", out.chat_min, out.chat_max,
                    out.stable ? 1 : 0);
    });

    CLI::App* probe = app.add_subcommand("probe", "kernel large-coordinate statistics");
    add_config_options(probe, args);
    probe->callback(
        [&] { print_files(run_lower_probe(load_config(args, "lower_probe")).files); });

    CLI::App* recover = app.add_subcommand("recover", "sparse recovery success sweep");
    add_config_options(recover, args);
    recover->callback([&] {
        const ellipsec::RecoveryOutput out = run_recovery_sweep(load_config(args, "recovery_sweep"));
        print_files(out.files);
        std::printf("successes %d of %d\n", out.successes, out.total);
    });

    CLI::App* plotdata = app.add_subcommand("plotdata", "convert experiment CSV to plot tables");
    plotdata->add_option("--in", plot_in, "input CSV")->check(CLI::ExistingFile);
    plotdata->add_option("--kind", plot_kind, "loglog_decay, phase_diagram or probability_curve")
        ->required();
    plotdata->add_option("--out-file", plot_out, "output TSV path")->required();
    plotdata->callback([&] {
        if (plot_kind != "phase_diagram" && plot_in.empty()) {
            throw std::invalid_argument("plotdata: --in is required for this kind");
        }
        ellipsec::emit_plotdata(plot_in, plot_kind, plot_out);
        std::cout << plot_out << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
