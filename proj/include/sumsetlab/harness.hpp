#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "sumsetlab/core.hpp"
#include "sumsetlab/repcount.hpp"

namespace sumsetlab {

// Object key order in emitted documents is declaration order, so dumps are
// byte-stable and human-readable.
using Json = nlohmann::ordered_json;

// Invalid experiment configuration (bad field values, missing overrides,
// malformed config documents). The CLI maps this to a usage error.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { basis, bhg, ballsboxes };

ExperimentKind kind_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::basis;
    ThresholdSpec spec;               // n, alpha, h, g, A
    std::optional<double> p_override; // explicit inclusion probability
    std::int64_t trials = 1;
    std::uint64_t master_seed = 0;
    Engine engine = Engine::convolution;
    std::vector<double> A_grid;       // sweep offsets; empty outside sweeps

    // Throws ConfigError naming the offending field.
    void validate() const;

    // JSON document with the same field names; spec fields are inlined
    // (n, alpha, h, g, A) and p_override appears as "p".
    static ExperimentConfig from_json(const Json& doc);
    Json to_json() const;
};

struct Estimate {
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;  // 95% Wilson interval
    double ci_hi = 0.0;
    double mean_X = 0.0;
    double se_X = 0.0;
};

struct TrialRecord {
    std::int64_t trial_index = 0;
    std::uint64_t derived_seed = 0;
    std::int64_t set_size = 0;
    std::int64_t X = 0;          // under- (basis) or over- (bhg) represented targets
    bool is_basis = false;       // X == 0, i.e. the trial satisfied the property
    double wall_time_ms = 0.0;   // diagnostic only; never serialized
};

struct RunResult {
    double p_used = 0.0;
    Estimate estimate;
    std::vector<TrialRecord> records;  // ordered by trial_index
};

// Wilson score interval for a binomial proportion, clamped to [0,1].
std::pair<double, double> wilson_ci(std::int64_t successes, std::int64_t trials, double z);

// Run config.trials independent trials. Each trial i samples a set with seed
// splitmix64(master_seed ^ (i * 0x9E3779B97F4A7C15)), counts X, and flags
// success as X == 0. Results are byte-identical for a fixed config no matter
// how many workers execute them (threads <= 0 means auto).
RunResult run_trials(const ExperimentConfig& config, int threads = 0);

struct SweepPoint {
    double A = 0.0;
    double p_used = 0.0;
    double limit_prob = 0.0;
    Estimate estimate;
};

// One run_trials per A_grid entry (ascending), reusing the same master seed
// at every grid point so estimates are coupled through common random numbers.
std::vector<SweepPoint> sweep(const ExperimentConfig& config, int threads = 0);

// --- serialization ----------------------------------------------------------

// Shortest round-trip decimal form; non-finite values become empty fields in
// CSV and null in JSON.
std::string format_double(double value);

Json record_to_json(const TrialRecord& record);
void write_records_jsonl(std::ostream& out, const std::vector<TrialRecord>& records);
void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);

// One summary line per experiment, pairing the estimate with every theory
// figure the CSV schema carries.
struct SummaryRow {
    double A = 0.0;
    std::int64_t n = 0;
    double alpha = 0.0;
    int g = 1;
    double p = 0.0;
    std::int64_t trials = 0;
    std::int64_t successes = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double mean_X = 0.0;
    double lambda_exact = 0.0;
    double lambda_paper = 0.0;
    double lambda_asymptotic = 0.0;
    double limit_prob = 0.0;
    double sc_bound = 0.0;
};

// Fills the theory columns from the run parameters; entries whose formulas do
// not apply (p at the domain edge, h != 2 pair model, n p^2 <= 1) become NaN
// and serialize as empty/null.
SummaryRow make_summary_row(const ExperimentConfig& config, double p_used,
                            const Estimate& estimate, double K_corr = 1.0,
                            double L_t1 = 1.0);

extern const char* const kSummaryHeader;
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
Json summary_to_json(const SummaryRow& row);

}  // namespace sumsetlab
