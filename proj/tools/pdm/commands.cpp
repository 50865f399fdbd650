#include "pdm/commands.hpp"

#include "pdm/bounds.hpp"
#include "pdm/data.hpp"
#include "pdm/driver.hpp"
#include "pdm/errors.hpp"
#include "pdm/model_io.hpp"
#include "pdm/oracle.hpp"
#include "pdm/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

namespace pdm::cli {

namespace {

struct DataFlags {
    std::string data;
    double delta{1.0};
    double rho{1.0};
    double scale{1.0};
    double positive_label{0.0};
    CLI::Option *positive_label_opt{nullptr};

    [[nodiscard]] std::optional<double> label() const {
        return positive_label_opt->count() ? std::optional<double>(positive_label) : std::nullopt;
    }
};

struct RunFlags {
    std::string algo{"pdm"};
    double epsilon{0.0};
    double beta{0.0};
    double eta{8.0};
    std::uint64_t seed{0};
    std::uint64_t max_epochs{1'000'000};
    std::string presentation{"active-sets"};
    bool no_multiple{false};
    bool instrument_eq6{false};
    CLI::Option *epsilon_opt{nullptr};
    CLI::Option *beta_opt{nullptr};
};

void add_data_flags(CLI::App &cmd, DataFlags &f) {
    cmd.add_option("--data", f.data, "Sparse text dataset ('-' for stdin)")->required();
    cmd.add_option("--delta", f.delta, "Soft-margin extension magnitude")->capture_default_str();
    cmd.add_option("--rho", f.rho, "Augmentation coordinate")->capture_default_str();
    cmd.add_option("--scale", f.scale, "Multiplier applied to raw features")->capture_default_str();
    f.positive_label_opt =
        cmd.add_option("--positive-label", f.positive_label, "Label treated as +1, everything else -1");
}

void add_run_flags(CLI::App &cmd, RunFlags &f) {
    f.epsilon_opt = cmd.add_option("--epsilon", f.epsilon, "Target accuracy in (0, 1]");
    f.beta_opt = cmd.add_option("--beta", f.beta, "Fixed margin (pfm)");
    cmd.add_option("--eta", f.eta, "Accuracy step between successive runs")->capture_default_str();
    cmd.add_option("--seed", f.seed, "Permutation seed")->capture_default_str();
    cmd.add_option("--max-epochs", f.max_epochs, "Full-dataset epochs before giving up")->capture_default_str();
    cmd.add_option("--presentation", f.presentation, "active-sets, permuted or cyclic")
        ->check(CLI::IsMember({"active-sets", "permuted", "cyclic"}))
        ->capture_default_str();
    cmd.add_flag("--no-multiple", f.no_multiple, "Disable multiple updates");
    cmd.add_flag("--instrument-eq6", f.instrument_eq6, "Check the consecutive-ratio identity on every update");
}

Presentation to_presentation(const std::string &name) {
    if (name == "permuted") return Presentation::permuted;
    if (name == "cyclic") return Presentation::cyclic;
    return Presentation::active_sets;
}

RunConfig make_config(const RunFlags &f) {
    const auto algo = parse_algorithm(f.algo);
    if (!algo) throw invalid_parameter("unknown algorithm '" + f.algo + "'");
    RunConfig cfg;
    cfg.algorithm = *algo;
    if (f.epsilon_opt->count()) cfg.epsilon = f.epsilon;
    if (f.beta_opt->count()) cfg.beta = f.beta;
    cfg.eta = f.eta;
    cfg.active_set.seed = f.seed;
    cfg.max_epochs = f.max_epochs;
    cfg.presentation = to_presentation(f.presentation);
    cfg.multiple_updates = !f.no_multiple;
    cfg.instrument_eq6 = f.instrument_eq6;
    cfg.validate();
    return cfg;
}

WorkingDataset load_working(const DataFlags &f) {
    const auto patterns = load_dataset(f.data, ParseOptions{f.label()});
    return build_working(patterns, f.delta, f.rho, f.scale);
}

void write_text(const std::string &path, const std::string &text, std::ostream &out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw io_error("cannot write " + path);
    file << text;
    file.flush();
    if (!file) throw io_error("error writing " + path);
}

void check_oracle_size(const WorkingDataset &ds) {
    if (ds.size() > oracle_max_patterns) {
        throw invalid_parameter("--oracle accepts at most " + std::to_string(oracle_max_patterns) + " patterns, got " +
                                std::to_string(ds.size()));
    }
}

int cmd_train(const DataFlags &df, const RunFlags &rf, bool oracle, const std::string &out_model,
              const std::string &out_report, std::ostream &out, std::ostream &err) {
    const auto cfg = make_config(rf);
    const auto ds = load_working(df);
    if (oracle) check_oracle_size(ds);

    const auto result = train(ds, cfg);
    ReportExtras extras;
    if (oracle) extras = oracle_extras(result.report, gilbert_gamma_d(ds), ds.radius());
    extras.seed = rf.seed;
    write_text(out_report, train_report_json(summarize(ds), result.report, extras), out);
    if (!out_model.empty()) save_model(out_model, make_model(result, ds, rf.seed, df.label()));

    if (!result.report.converged) {
        if (!result.report.abort_reason.empty()) {
            err << "pdm: run aborted: " << result.report.abort_reason << '\n';
        } else {
            err << "pdm: no convergence within " << cfg.max_epochs << " epochs\n";
        }
        return not_converged;
    }
    return ok;
}

int cmd_experiment(const DataFlags &df, const RunFlags &rf, const std::string &out_summary,
                   const std::string &out_dynamic, const std::string &out_fixed, std::ostream &out,
                   std::ostream &err) {
    auto cfg = make_config(rf);
    if (cfg.algorithm == Algorithm::pfm) throw invalid_parameter("experiment takes --algo pdm or pdm-succ");
    const auto ds = load_working(df);
    const auto variant = cfg.algorithm == Algorithm::pdm_succ ? Variant::succ : Variant::plain;
    const auto result = experiment_pdm_vs_pfm(ds, *cfg.epsilon, variant, cfg);

    const auto data = summarize(ds);
    ReportExtras extras;
    extras.seed = rf.seed;
    if (!out_dynamic.empty()) write_text(out_dynamic, train_report_json(data, result.dynamic_run.report, extras), out);
    if (!out_fixed.empty() && result.fixed_run) {
        write_text(out_fixed, train_report_json(data, result.fixed_run->report, extras), out);
    }
    write_text(out_summary, experiment_summary_json(data, result), out);

    if (!result.dynamic_run.report.converged || !result.fixed_run || !result.fixed_run->report.converged) {
        err << "pdm: no convergence within " << cfg.max_epochs << " epochs\n";
        return not_converged;
    }
    return ok;
}

int cmd_predict(const std::string &model_path, const std::string &data_path, std::ostream &out, std::ostream &err) {
    const auto model = load_model(model_path);
    const auto instances = load_instances(data_path);
    const ParseOptions opts{model.positive_label};
    std::size_t labelled = 0, wrong = 0;
    for (const auto &inst : instances) {
        const int p = model.predict(inst.features);
        out << (p > 0 ? "+1" : "-1") << '\n';
        if (inst.raw_label) {
            ++labelled;
            wrong += map_label(*inst.raw_label, opts) != p;
        }
    }
    if (labelled > 0) {
        err << "errors " << wrong << '/' << labelled << " (rate "
            << format_double(static_cast<double>(wrong) / static_cast<double>(labelled)) << ")\n";
    }
    return ok;
}

int cmd_bounds(double epsilon, double radius, double gamma_d, std::ostream &out) {
    const BoundInputs in{epsilon, radius, gamma_d};
    in.validate();
    const auto t2 = theorem2_bound(in);
    out << "theorem1 " << format_double(theorem1_bound(in)) << '\n'
        << "theorem2_loose " << format_double(t2.loose) << '\n'
        << "theorem2_tightened " << format_double(t2.tightened) << '\n';
    return ok;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Margin perceptron trainer"};
    app.name("pdm");
    app.require_subcommand(1);

    DataFlags train_data;
    RunFlags train_run;
    bool oracle = false;
    std::string out_model, out_report;
    auto *train_cmd = app.add_subcommand("train", "Train a classifier");
    add_data_flags(*train_cmd, train_data);
    train_cmd->add_option("--algo", train_run.algo, "pdm, pdm-succ or pfm")->capture_default_str();
    add_run_flags(*train_cmd, train_run);
    train_cmd->add_flag("--oracle", oracle, "Compute the maximum margin and check the run against it");
    train_cmd->add_option("--out-model", out_model, "Model file");
    train_cmd->add_option("--out-report", out_report, "JSON report (default: stdout)");

    DataFlags exp_data;
    RunFlags exp_run;
    std::string out_summary, out_dynamic, out_fixed;
    auto *exp_cmd = app.add_subcommand("experiment", "Dynamic-margin run followed by a fixed-margin run at its margin");
    add_data_flags(*exp_cmd, exp_data);
    exp_cmd->add_option("--algo", exp_run.algo, "pdm or pdm-succ")->capture_default_str();
    add_run_flags(*exp_cmd, exp_run);
    exp_cmd->add_option("--out-report", out_summary, "JSON comparison (default: stdout)");
    exp_cmd->add_option("--out-dynamic", out_dynamic, "JSON report of the dynamic-margin run");
    exp_cmd->add_option("--out-fixed", out_fixed, "JSON report of the fixed-margin run");

    std::string model_path, predict_data;
    auto *predict_cmd = app.add_subcommand("predict", "Print one +1/-1 prediction per input line");
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    predict_cmd->add_option("--data", predict_data, "Sparse text instances, labels optional")->required();

    double b_eps = 0.0, b_radius = 0.0, b_gamma = 0.0;
    auto *bounds_cmd = app.add_subcommand("bounds", "Evaluate the update-count bounds");
    bounds_cmd->add_option("--epsilon", b_eps, "Accuracy")->required();
    bounds_cmd->add_option("--radius", b_radius, "Largest pattern norm R")->required();
    bounds_cmd->add_option("--gamma-d", b_gamma, "Maximum directional margin")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (train_cmd->parsed()) {
            return cmd_train(train_data, train_run, oracle, out_model, out_report, out, err);
        }
        if (exp_cmd->parsed()) {
            return cmd_experiment(exp_data, exp_run, out_summary, out_dynamic, out_fixed, out, err);
        }
        if (predict_cmd->parsed()) return cmd_predict(model_path, predict_data, out, err);
        if (bounds_cmd->parsed()) return cmd_bounds(b_eps, b_radius, b_gamma, out);
    } catch (const parse_error &e) {
        err << "pdm: " << e.what() << '\n';
        return usage_error;
    } catch (const invalid_parameter &e) {
        err << "pdm: " << e.what() << '\n';
        return usage_error;
    } catch (const io_error &e) {
        err << "pdm: " << e.what() << '\n';
        return io_failure;
    } catch (const std::exception &e) {
        err << "pdm: " << e.what() << '\n';
        return internal_failure;
    }
    return internal_failure;
}

}  // namespace pdm::cli
