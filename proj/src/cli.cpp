#include "sumsetlab/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "sumsetlab/ballsboxes.hpp"
#include "sumsetlab/checkers.hpp"
#include "sumsetlab/core.hpp"
#include "sumsetlab/harness.hpp"
#include "sumsetlab/repcount.hpp"
#include "sumsetlab/rng.hpp"
#include "sumsetlab/theory.hpp"

namespace sumsetlab {

namespace {

// Writes to --out when a path is given, otherwise to the fallback stream.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output file: " + path);
            stream_ = &file_;
        } else {
            stream_ = &fallback;
        }
    }

    std::ostream& stream() { return *stream_; }
    bool is_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

IntegerSet load_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open set file: " + path);
    return IntegerSet::parse(in);
}

// Flag values shared by the experiment subcommands; presence is tracked via
// CLI11 option counts so flags override --config fields.
struct ExperimentFlags {
    std::string config_path;
    std::int64_t n = 0;
    double alpha = 0.5;
    int h = 2;
    int g = 1;
    double A = 0.0;
    double p = 0.0;
    std::int64_t trials = 100;
    std::uint64_t seed = 0;
    std::string engine = "convolution";
    std::vector<double> a_grid;
    std::string out_path;
    std::string format = "jsonl";
    std::string plot_prefix;
    double k_corr = 1.0;
    double l_t1 = 1.0;
};

void add_experiment_options(CLI::App* sub, ExperimentFlags& flags, bool with_grid) {
    sub->set_help_flag("--help", "display help and exit");  // frees -h/--h for the summand count
    sub->add_option("--config", flags.config_path, "JSON config file; flags override its fields");
    sub->add_option("--n", flags.n, "ground set upper end {0..n}");
    sub->add_option("--alpha", flags.alpha, "window shape parameter in (0,1)");
    sub->add_option("--h", flags.h, "summands per representation");
    sub->add_option("--g", flags.g, "required representation multiplicity");
    sub->add_option("--A", flags.A, "additive offset in the threshold probability");
    sub->add_option("--p", flags.p, "inclusion probability override");
    sub->add_option("--trials", flags.trials, "Monte Carlo trials");
    sub->add_option("--seed", flags.seed, "master seed");
    sub->add_option("--engine", flags.engine, "counting engine")
        ->check(CLI::IsMember({"naive", "convolution"}));
    if (with_grid) {
        sub->add_option("--A-grid", flags.a_grid, "ascending offsets to sweep")->delimiter(',');
        sub->add_option("--plot", flags.plot_prefix,
                        "write <prefix>.dat and a gnuplot script <prefix>.gp");
    }
    sub->add_option("--out", flags.out_path, "output path (default: standard output)");
    sub->add_option("--format", flags.format, "record encoding")
        ->check(CLI::IsMember({"csv", "jsonl", "json"}));
    sub->add_option("--K-corr", flags.k_corr, "correlation-term constant in the error bound");
    sub->add_option("--L-t1", flags.l_t1, "clump-term constant in the error bound");
}

std::size_t flag_count(const CLI::App* sub, const std::string& name) {
    const CLI::Option* option = sub->get_option_no_throw(name);
    return option ? option->count() : 0;
}

ExperimentConfig build_config(const CLI::App* sub, const ExperimentFlags& flags,
                              ExperimentKind kind) {
    ExperimentConfig config;
    bool kind_pinned = false;
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw ConfigError("cannot open config file: " + flags.config_path);
        Json doc;
        try {
            doc = Json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("config parse failure: ") + e.what());
        }
        config = ExperimentConfig::from_json(doc);
        kind_pinned = doc.contains("kind");
    } else {
        if (sub->count("--n") == 0) throw ConfigError("--n (or --config) is required");
        config.trials = flags.trials;
    }
    if (kind_pinned && config.kind != kind) {
        throw ConfigError("config kind \"" + to_string(config.kind) +
                          "\" conflicts with the " + to_string(kind) + " subcommand");
    }
    config.kind = kind;
    if (flag_count(sub, "--n")) config.spec.n = flags.n;
    if (flag_count(sub, "--alpha")) config.spec.alpha = flags.alpha;
    if (flag_count(sub, "--h")) config.spec.h = flags.h;
    if (flag_count(sub, "--g")) config.spec.g = flags.g;
    if (flag_count(sub, "--A")) config.spec.A = flags.A;
    if (flag_count(sub, "--p")) config.p_override = flags.p;
    if (flag_count(sub, "--trials")) config.trials = flags.trials;
    if (flag_count(sub, "--seed")) config.master_seed = flags.seed;
    if (flag_count(sub, "--engine")) config.engine = engine_from_string(flags.engine);
    if (flag_count(sub, "--A-grid")) config.A_grid = flags.a_grid;
    return config;
}

void emit_plot_files(const std::string& prefix, const std::vector<SweepPoint>& points) {
    std::ofstream dat(prefix + ".dat");
    if (!dat) throw std::runtime_error("cannot open plot data file: " + prefix + ".dat");
    dat << "# A p_hat ci_lo ci_hi limit_prob\n";
    for (const SweepPoint& point : points) {
        dat << format_double(point.A) << ' ' << format_double(point.estimate.p_hat) << ' '
            << format_double(point.estimate.ci_lo) << ' ' << format_double(point.estimate.ci_hi)
            << ' ' << format_double(point.limit_prob) << '\n';
    }
    std::ofstream script(prefix + ".gp");
    if (!script) throw std::runtime_error("cannot open plot script: " + prefix + ".gp");
    script << "set terminal pngcairo size 900,600\n"
           << "set output '" << prefix << ".png'\n"
           << "set xlabel 'A'\n"
           << "set ylabel 'P(property holds)'\n"
           << "set yrange [0:1]\n"
           << "set key left top\n"
           << "plot '" << prefix << ".dat' using 1:2:3:4 with yerrorbars title 'estimate', \\\n"
           << "     '" << prefix << ".dat' using 1:5 with linespoints title 'limit'\n";
}

int cmd_theory(const CLI::App* sub, const ExperimentFlags& flags, std::ostream& out) {
    ThresholdSpec spec;
    if (sub->count("--n") == 0) throw ConfigError("--n is required");
    spec.n = flags.n;
    spec.alpha = flags.alpha;
    spec.h = flags.h;
    spec.g = flags.g;
    spec.A = flags.A;
    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }

    const double p = sub->count("--p") ? flags.p : threshold_p(spec);
    const Window window = window_bounds(spec.n, spec.alpha, spec.h);

    Json doc;
    doc["n"] = spec.n;
    doc["alpha"] = spec.alpha;
    doc["h"] = spec.h;
    doc["g"] = spec.g;
    doc["A"] = spec.A;
    doc["p"] = p;
    doc["limit_prob"] = limit_probability(spec);
    doc["window"] = Json{{"lo", window.lo}, {"hi", window.hi}};
    doc["bhg_threshold_size"] = bhg_threshold_size(spec.n, spec.h, spec.g);
    if (spec.h == 2 && p > 0.0 && p < 1.0) {
        doc["lambda_exact"] = lambda_value(spec.n, spec.alpha, p, spec.g, LambdaMode::exact);
        doc["lambda_paper"] = lambda_value(spec.n, spec.alpha, p, spec.g, LambdaMode::paper);
        try {
            doc["lambda_asymptotic"] =
                lambda_value(spec.n, spec.alpha, p, spec.g, LambdaMode::asymptotic);
        } catch (const std::domain_error&) {
            doc["lambda_asymptotic"] = nullptr;
        }
        const SteinChenBound bound =
            stein_chen_bound(spec.n, spec.alpha, p, spec.g, flags.k_corr, flags.l_t1);
        doc["sc_bound"] = Json{{"clump_term", bound.clump_term},
                               {"correlation_term", bound.correlation_term},
                               {"total", bound.total},
                               {"t1", bound.t1}};
    }
    OutputTarget target(flags.out_path, out);
    target.stream() << doc.dump(2) << '\n';
    return 0;
}

int cmd_count(const std::string& in_path, int h, const std::string& engine_name, bool sparse,
              const std::string& format, const std::string& out_path, std::ostream& out) {
    const IntegerSet set = load_set(in_path);
    const Engine engine =
        engine_name.empty() ? choose_engine(set, h) : engine_from_string(engine_name);
    const RepProfile profile = rep_counts(set, h, engine);

    OutputTarget target(out_path, out);
    std::ostream& os = target.stream();
    if (format == "csv") {
        os << "j,count\n";
        for (std::size_t j = 0; j < profile.counts.size(); ++j) {
            if (sparse && profile.counts[j] == 0) continue;
            os << j << ',' << profile.counts[j] << '\n';
        }
    } else if (format == "jsonl") {
        for (std::size_t j = 0; j < profile.counts.size(); ++j) {
            if (sparse && profile.counts[j] == 0) continue;
            os << Json{{"j", j}, {"count", profile.counts[j]}}.dump() << '\n';
        }
    } else {
        Json doc;
        doc["n"] = set.n();
        doc["h"] = profile.h;
        doc["max_sum"] = profile.max_sum;
        doc["engine"] = to_string(engine);
        if (sparse) {
            Json rows = Json::array();
            for (std::size_t j = 0; j < profile.counts.size(); ++j) {
                if (profile.counts[j] != 0) rows.push_back(Json{{"j", j}, {"count", profile.counts[j]}});
            }
            doc["counts"] = std::move(rows);
        } else {
            doc["counts"] = profile.counts;
        }
        os << doc.dump(2) << '\n';
    }
    return 0;
}

int cmd_check(const std::string& in_path, int h, int g, double alpha,
              const std::string& engine_name, const std::string& out_path, std::ostream& out) {
    const IntegerSet set = load_set(in_path);
    const std::optional<Engine> engine =
        engine_name.empty() ? std::nullopt
                            : std::optional<Engine>(engine_from_string(engine_name));
    const SigmaDeltaMax extremes = max_sigma_delta(set);

    Json doc;
    doc["n"] = set.n();
    doc["size"] = set.size();
    doc["h"] = h;
    doc["g"] = g;
    doc["alpha"] = alpha;
    doc["sidon"] = is_sidon(set);
    doc["bhg"] = is_bhg(set, h, g, engine);
    doc["truncated_basis"] = is_truncated_basis(set, alpha, h, g, engine);
    doc["max_sigma"] = extremes.max_sigma;
    doc["max_delta"] = extremes.max_delta;
    doc["max_sigma_delta"] = extremes.max_joint;
    OutputTarget target(out_path, out);
    target.stream() << doc.dump(2) << '\n';
    return 0;
}

int cmd_simulate(const CLI::App* sub, const ExperimentFlags& flags, ExperimentKind kind,
                 std::ostream& out, std::ostream& err) {
    const ExperimentConfig config = build_config(sub, flags, kind);
    const RunResult result = run_trials(config);
    const SummaryRow row = make_summary_row(config, result.p_used, result.estimate,
                                            flags.k_corr, flags.l_t1);

    OutputTarget target(flags.out_path, out);
    if (flags.format == "json") {
        Json doc;
        doc["config"] = config.to_json();
        doc["summary"] = summary_to_json(row);
        Json records = Json::array();
        for (const TrialRecord& record : result.records) records.push_back(record_to_json(record));
        doc["records"] = std::move(records);
        target.stream() << doc.dump(2) << '\n';
        return 0;
    }
    if (flags.format == "csv") {
        write_records_csv(target.stream(), result.records);
    } else {
        write_records_jsonl(target.stream(), result.records);
    }
    // Keep the record stream pure: the summary CSV goes to stdout when
    // records went to a file, to stderr when records went to stdout.
    write_summary_csv(target.is_file() ? out : err, {row});
    return 0;
}

int cmd_sweep(const CLI::App* sub, const ExperimentFlags& flags, std::ostream& out) {
    const ExperimentConfig config = build_config(sub, flags, ExperimentKind::basis);
    const std::vector<SweepPoint> points = sweep(config);

    std::vector<SummaryRow> rows;
    rows.reserve(points.size());
    for (const SweepPoint& point : points) {
        ExperimentConfig point_config = config;
        point_config.spec.A = point.A;
        rows.push_back(make_summary_row(point_config, point.p_used, point.estimate,
                                        flags.k_corr, flags.l_t1));
    }

    OutputTarget target(flags.out_path, out);
    const std::string format = sub->count("--format") ? flags.format : std::string("csv");
    if (format == "csv") {
        write_summary_csv(target.stream(), rows);
    } else if (format == "jsonl") {
        for (const SummaryRow& row : rows) target.stream() << summary_to_json(row).dump() << '\n';
    } else {
        Json doc = Json::array();
        for (const SummaryRow& row : rows) doc.push_back(summary_to_json(row));
        target.stream() << doc.dump(2) << '\n';
    }
    if (!flags.plot_prefix.empty()) emit_plot_files(flags.plot_prefix, points);
    return 0;
}

int cmd_balls_boxes(std::int64_t boxes, int g, std::int64_t trials, std::int64_t balls,
                    std::uint64_t seed, const std::string& mode, const std::string& format,
                    const std::string& out_path, std::ostream& out) {
    if (boxes < 1) throw ConfigError("--boxes must be >= 1");
    if (g < 1) throw ConfigError("--g must be >= 1");
    if (trials < 1) throw ConfigError("--trials must be >= 1");
    if (mode == "threshold" && balls < 0) {
        throw ConfigError("--n (ball count) must be >= 0 for threshold mode");
    }

    std::vector<std::int64_t> values(static_cast<std::size_t>(trials));
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(trials));
    for (std::int64_t i = 0; i < trials; ++i) {
        const std::uint64_t trial_seed =
            splitmix64(seed ^ (static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ull));
        seeds[static_cast<std::size_t>(i)] = trial_seed;
        if (mode == "waiting") {
            values[static_cast<std::size_t>(i)] = waiting_time(boxes, g, trial_seed);
        } else {
            const AllocationResult allocation = allocate(balls, boxes, trial_seed);
            values[static_cast<std::size_t>(i)] = overfull_underfull(allocation, g).overfull;
        }
    }

    OutputTarget target(out_path, out);
    std::ostream& os = target.stream();
    if (format == "jsonl") {
        for (std::int64_t i = 0; i < trials; ++i) {
            os << Json{{"trial", i}, {"seed", seeds[i]}, {"value", values[i]}}.dump() << '\n';
        }
    } else if (format == "json") {
        Json doc;
        doc["mode"] = mode;
        doc["boxes"] = boxes;
        doc["g"] = g;
        if (mode == "threshold") doc["balls"] = balls;
        doc["trials"] = trials;
        doc["master_seed"] = seed;
        Json rows = Json::array();
        for (std::int64_t i = 0; i < trials; ++i) {
            rows.push_back(Json{{"trial", i}, {"seed", seeds[i]}, {"value", values[i]}});
        }
        doc["records"] = std::move(rows);
        os << doc.dump(2) << '\n';
    } else {
        os << "trial,seed,value\n";
        for (std::int64_t i = 0; i < trials; ++i) {
            os << i << ',' << seeds[i] << ',' << values[i] << '\n';
        }
    }
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"sumsetlab: random sumset bases, B_h[g] sets, and occupancy baselines"};
    app.require_subcommand(0, 1);

    ExperimentFlags theory_flags;
    CLI::App* theory_cmd = app.add_subcommand("theory", "evaluate the closed-form quantities");
    add_experiment_options(theory_cmd, theory_flags, false);

    std::string count_in, count_engine, count_format = "csv", count_out;
    int count_h = 2;
    bool count_sparse = false;
    CLI::App* count_cmd = app.add_subcommand("count", "representation counts of a stored set");
    count_cmd->set_help_flag("--help", "display help and exit");
    count_cmd->add_option("--in", count_in, "IntegerSet file")->required();
    count_cmd->add_option("--h", count_h, "summands per representation");
    count_cmd->add_option("--engine", count_engine, "counting engine")
        ->check(CLI::IsMember({"naive", "convolution"}));
    count_cmd->add_flag("--sparse", count_sparse, "omit zero-count rows");
    count_cmd->add_option("--format", count_format, "output encoding")
        ->check(CLI::IsMember({"csv", "jsonl", "json"}));
    count_cmd->add_option("--out", count_out, "output path (default: standard output)");

    std::string check_in, check_engine, check_out;
    int check_h = 2, check_g = 1;
    double check_alpha = 0.5;
    CLI::App* check_cmd = app.add_subcommand("check", "predicates of a stored set");
    check_cmd->set_help_flag("--help", "display help and exit");
    check_cmd->add_option("--in", check_in, "IntegerSet file")->required();
    check_cmd->add_option("--h", check_h, "summands per representation");
    check_cmd->add_option("--g", check_g, "multiplicity bound");
    check_cmd->add_option("--alpha", check_alpha, "window shape parameter");
    check_cmd->add_option("--engine", check_engine, "counting engine")
        ->check(CLI::IsMember({"naive", "convolution"}));
    check_cmd->add_option("--out", check_out, "output path (default: standard output)");

    ExperimentFlags basis_flags;
    CLI::App* basis_cmd =
        app.add_subcommand("simulate-basis", "Monte Carlo estimate of the basis probability");
    add_experiment_options(basis_cmd, basis_flags, false);

    ExperimentFlags bhg_flags;
    CLI::App* bhg_cmd =
        app.add_subcommand("simulate-bhg", "Monte Carlo estimate of the B_h[g] probability");
    add_experiment_options(bhg_cmd, bhg_flags, false);

    ExperimentFlags sweep_flags;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "basis estimates across an offset grid");
    add_experiment_options(sweep_cmd, sweep_flags, true);

    std::int64_t bb_boxes = 0, bb_trials = 100, bb_balls = -1;
    int bb_g = 1;
    std::uint64_t bb_seed = 0;
    std::string bb_mode = "waiting", bb_format = "csv", bb_out;
    CLI::App* bb_cmd = app.add_subcommand("balls-boxes", "occupancy and waiting-time baselines");
    bb_cmd->set_help_flag("--help", "display help and exit");
    bb_cmd->add_option("--boxes", bb_boxes, "number of boxes")->required();
    bb_cmd->add_option("--g", bb_g, "required balls per box / overfull level");
    bb_cmd->add_option("--trials", bb_trials, "Monte Carlo trials");
    bb_cmd->add_option("--n", bb_balls, "balls to drop (threshold mode)");
    bb_cmd->add_option("--seed", bb_seed, "master seed");
    bb_cmd->add_option("--mode", bb_mode, "threshold: overfull count; waiting: throws to reach g everywhere")
        ->check(CLI::IsMember({"threshold", "waiting"}));
    bb_cmd->add_option("--format", bb_format, "output encoding")
        ->check(CLI::IsMember({"csv", "jsonl", "json"}));
    bb_cmd->add_option("--out", bb_out, "output path (default: standard output)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (theory_cmd->parsed()) return cmd_theory(theory_cmd, theory_flags, out);
        if (count_cmd->parsed()) {
            return cmd_count(count_in, count_h, count_engine, count_sparse, count_format,
                             count_out, out);
        }
        if (check_cmd->parsed()) {
            return cmd_check(check_in, check_h, check_g, check_alpha, check_engine, check_out,
                             out);
        }
        if (basis_cmd->parsed()) {
            return cmd_simulate(basis_cmd, basis_flags, ExperimentKind::basis, out, err);
        }
        if (bhg_cmd->parsed()) {
            return cmd_simulate(bhg_cmd, bhg_flags, ExperimentKind::bhg, out, err);
        }
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_cmd, sweep_flags, out);
        if (bb_cmd->parsed()) {
            return cmd_balls_boxes(bb_boxes, bb_g, bb_trials, bb_balls, bb_seed, bb_mode,
                                   bb_format, bb_out, out);
        }
        out << app.help();
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace sumsetlab
