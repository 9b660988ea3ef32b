#include "sumsetlab/harness.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "sumsetlab/parallel.hpp"
#include "sumsetlab/rng.hpp"
#include "sumsetlab/theory.hpp"

namespace sumsetlab {

namespace {

constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ull;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ExperimentKind kind_from_string(const std::string& name) {
    if (name == "basis") return ExperimentKind::basis;
    if (name == "bhg") return ExperimentKind::bhg;
    if (name == "ballsboxes") return ExperimentKind::ballsboxes;
    throw ConfigError("unknown experiment kind \"" + name + "\"");
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::basis: return "basis";
        case ExperimentKind::bhg: return "bhg";
        case ExperimentKind::ballsboxes: return "ballsboxes";
    }
    return "basis";
}

void ExperimentConfig::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1, got " + std::to_string(trials));
    if (kind != ExperimentKind::ballsboxes) {
        try {
            spec.validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    if (p_override) {
        const double p = *p_override;
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ConfigError("p must lie in [0,1], got " + std::to_string(p));
        }
    }
    if (kind == ExperimentKind::bhg && !p_override) {
        throw ConfigError("bhg experiments need an explicit p (the threshold formula "
                          "targets the basis property)");
    }
    double prev = -std::numeric_limits<double>::infinity();
    for (const double a : A_grid) {
        if (!std::isfinite(a)) throw ConfigError("A_grid entries must be finite");
        if (a < prev) throw ConfigError("A_grid must be sorted ascending");
        prev = a;
    }
}

ExperimentConfig ExperimentConfig::from_json(const Json& doc) {
    static const std::set<std::string> known = {
        "kind", "n", "alpha", "h", "g", "A", "p", "trials", "master_seed", "engine", "A_grid"};
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& item : doc.items()) {
        if (!known.count(item.key())) throw ConfigError("unknown config field \"" + item.key() + "\"");
    }
    ExperimentConfig config;
    try {
        config.kind = kind_from_string(doc.value("kind", std::string("basis")));
        if (!doc.contains("n")) throw ConfigError("config is missing \"n\"");
        config.spec.n = doc.at("n").get<std::int64_t>();
        config.spec.alpha = doc.value("alpha", 0.5);
        config.spec.h = doc.value("h", 2);
        config.spec.g = doc.value("g", 1);
        config.spec.A = doc.value("A", 0.0);
        if (doc.contains("p")) config.p_override = doc.at("p").get<double>();
        if (!doc.contains("trials")) throw ConfigError("config is missing \"trials\"");
        config.trials = doc.at("trials").get<std::int64_t>();
        config.master_seed = doc.value("master_seed", std::uint64_t{0});
        config.engine = engine_from_string(doc.value("engine", std::string("convolution")));
        if (doc.contains("A_grid")) {
            config.A_grid = doc.at("A_grid").get<std::vector<double>>();
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return config;
}

Json ExperimentConfig::to_json() const {
    Json doc;
    doc["kind"] = to_string(kind);
    doc["n"] = spec.n;
    doc["alpha"] = spec.alpha;
    doc["h"] = spec.h;
    doc["g"] = spec.g;
    doc["A"] = spec.A;
    if (p_override) doc["p"] = *p_override;
    doc["trials"] = trials;
    doc["master_seed"] = master_seed;
    doc["engine"] = to_string(engine);
    if (!A_grid.empty()) doc["A_grid"] = A_grid;
    return doc;
}

std::pair<double, double> wilson_ci(std::int64_t successes, std::int64_t trials, double z) {
    if (trials < 1 || successes < 0 || successes > trials || !(z > 0.0)) {
        throw std::domain_error("wilson_ci needs 0 <= successes <= trials, trials >= 1, z > 0");
    }
    const double t = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / t;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / t;
    const double center = (phat + z2 / (2.0 * t)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / t + z2 / (4.0 * t * t)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

RunResult run_trials(const ExperimentConfig& config, int threads) {
    config.validate();
    if (config.kind == ExperimentKind::ballsboxes) {
        throw ConfigError("run_trials covers basis and bhg experiments; ballsboxes runs "
                          "through the balls-boxes interface");
    }
    const ThresholdSpec& spec = config.spec;
    const double p = config.p_override ? *config.p_override : threshold_p(spec);
    const Window window = window_bounds(spec.n, spec.alpha, spec.h);
    const bool basis = config.kind == ExperimentKind::basis;

    RunResult result;
    result.p_used = p;
    result.records.resize(static_cast<std::size_t>(config.trials));
    parallel_for_index(config.trials, resolve_threads(threads), [&](std::int64_t i) {
        const auto start = std::chrono::steady_clock::now();
        TrialRecord& record = result.records[static_cast<std::size_t>(i)];
        record.trial_index = i;
        record.derived_seed =
            splitmix64(config.master_seed ^ (static_cast<std::uint64_t>(i) * kSeedStride));
        const IntegerSet set = sample_set(spec.n, p, record.derived_seed);
        record.set_size = set.size();
        const RepProfile profile = rep_counts(set, spec.h, config.engine);
        record.X = basis ? underrepresented_count(profile, window, spec.g)
                         : overrepresented_count(profile, spec.g);
        record.is_basis = record.X == 0;
        record.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
    });

    Estimate& est = result.estimate;
    est.trials = config.trials;
    double sum_x = 0.0;
    for (const TrialRecord& record : result.records) {
        est.successes += record.is_basis ? 1 : 0;
        sum_x += static_cast<double>(record.X);
    }
    est.p_hat = static_cast<double>(est.successes) / static_cast<double>(est.trials);
    std::tie(est.ci_lo, est.ci_hi) = wilson_ci(est.successes, est.trials, 1.96);
    est.mean_X = sum_x / static_cast<double>(est.trials);
    if (est.trials > 1) {
        double ss = 0.0;
        for (const TrialRecord& record : result.records) {
            const double d = static_cast<double>(record.X) - est.mean_X;
            ss += d * d;
        }
        const double variance = ss / static_cast<double>(est.trials - 1);
        est.se_X = std::sqrt(variance / static_cast<double>(est.trials));
    }
    return result;
}

std::vector<SweepPoint> sweep(const ExperimentConfig& config, int threads) {
    config.validate();
    if (config.A_grid.empty()) throw ConfigError("sweep requires a nonempty A_grid");
    if (config.kind != ExperimentKind::basis) {
        throw ConfigError("sweep varies the basis threshold offset; kind must be basis");
    }
    if (config.p_override) {
        throw ConfigError("sweep derives p from each grid offset; remove the p override");
    }
    std::vector<SweepPoint> points;
    points.reserve(config.A_grid.size());
    for (const double a : config.A_grid) {
        ExperimentConfig point_config = config;
        point_config.spec.A = a;
        point_config.A_grid.clear();
        const RunResult run = run_trials(point_config, threads);
        SweepPoint point;
        point.A = a;
        point.p_used = run.p_used;
        point.limit_prob = limit_probability(point_config.spec);
        point.estimate = run.estimate;
        points.push_back(point);
    }
    return points;
}

std::string format_double(double value) {
    if (!std::isfinite(value)) return "";
    return Json(value).dump();
}

Json record_to_json(const TrialRecord& record) {
    Json doc;
    doc["trial_index"] = record.trial_index;
    doc["derived_seed"] = record.derived_seed;
    doc["set_size"] = record.set_size;
    doc["X"] = record.X;
    doc["is_basis"] = record.is_basis;
    return doc;
}

void write_records_jsonl(std::ostream& out, const std::vector<TrialRecord>& records) {
    for (const TrialRecord& record : records) {
        out << record_to_json(record).dump() << '\n';
    }
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
    out << "trial_index,derived_seed,set_size,X,is_basis\n";
    for (const TrialRecord& record : records) {
        out << record.trial_index << ',' << record.derived_seed << ',' << record.set_size << ','
            << record.X << ',' << (record.is_basis ? "true" : "false") << '\n';
    }
}

SummaryRow make_summary_row(const ExperimentConfig& config, double p_used,
                            const Estimate& estimate, double K_corr, double L_t1) {
    const ThresholdSpec& spec = config.spec;
    SummaryRow row;
    row.A = spec.A;
    row.n = spec.n;
    row.alpha = spec.alpha;
    row.g = spec.g;
    row.p = p_used;
    row.trials = estimate.trials;
    row.successes = estimate.successes;
    row.p_hat = estimate.p_hat;
    row.ci_lo = estimate.ci_lo;
    row.ci_hi = estimate.ci_hi;
    row.mean_X = estimate.mean_X;
    row.lambda_exact = kNaN;
    row.lambda_paper = kNaN;
    row.lambda_asymptotic = kNaN;
    row.limit_prob = kNaN;
    row.sc_bound = kNaN;
    if (config.kind != ExperimentKind::basis) return row;
    row.limit_prob = limit_probability(spec);
    const bool pair_model = spec.h == 2 && p_used > 0.0 && p_used < 1.0;
    if (!pair_model) return row;
    row.lambda_exact = lambda_value(spec.n, spec.alpha, p_used, spec.g, LambdaMode::exact);
    row.lambda_paper = lambda_value(spec.n, spec.alpha, p_used, spec.g, LambdaMode::paper);
    try {
        row.lambda_asymptotic =
            lambda_value(spec.n, spec.alpha, p_used, spec.g, LambdaMode::asymptotic);
    } catch (const std::domain_error&) {
        // n p^2 <= 1: the closed form has no meaning here
    }
    row.sc_bound = stein_chen_bound(spec.n, spec.alpha, p_used, spec.g, K_corr, L_t1).total;
    return row;
}

const char* const kSummaryHeader =
    "A,n,alpha,g,p,trials,successes,p_hat,ci_lo,ci_hi,mean_X,"
    "lambda_exact,lambda_paper,lambda_asymptotic,limit_prob,sc_bound";

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << kSummaryHeader << '\n';
    for (const SummaryRow& row : rows) {
        out << format_double(row.A) << ',' << row.n << ',' << format_double(row.alpha) << ','
            << row.g << ',' << format_double(row.p) << ',' << row.trials << ',' << row.successes
            << ',' << format_double(row.p_hat) << ',' << format_double(row.ci_lo) << ','
            << format_double(row.ci_hi) << ',' << format_double(row.mean_X) << ','
            << format_double(row.lambda_exact) << ',' << format_double(row.lambda_paper) << ','
            << format_double(row.lambda_asymptotic) << ',' << format_double(row.limit_prob) << ','
            << format_double(row.sc_bound) << '\n';
    }
}

Json summary_to_json(const SummaryRow& row) {
    // Non-finite entries mean "formula does not apply"; store them as real
    // JSON nulls rather than NaN payloads so parsed documents see null too.
    const auto num = [](double value) -> Json {
        if (!std::isfinite(value)) return nullptr;
        return value;
    };
    Json doc;
    doc["A"] = num(row.A);
    doc["n"] = row.n;
    doc["alpha"] = num(row.alpha);
    doc["g"] = row.g;
    doc["p"] = num(row.p);
    doc["trials"] = row.trials;
    doc["successes"] = row.successes;
    doc["p_hat"] = num(row.p_hat);
    doc["ci_lo"] = num(row.ci_lo);
    doc["ci_hi"] = num(row.ci_hi);
    doc["mean_X"] = num(row.mean_X);
    doc["lambda_exact"] = num(row.lambda_exact);
    doc["lambda_paper"] = num(row.lambda_paper);
    doc["lambda_asymptotic"] = num(row.lambda_asymptotic);
    doc["limit_prob"] = num(row.limit_prob);
    doc["sc_bound"] = num(row.sc_bound);
    return doc;
}

}  // namespace sumsetlab
