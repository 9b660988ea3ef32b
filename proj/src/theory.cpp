#include "sumsetlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sumsetlab {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double lchoose(std::int64_t m, std::int64_t s) {
    return std::lgamma(static_cast<double>(m) + 1.0) -
           std::lgamma(static_cast<double>(s) + 1.0) -
           std::lgamma(static_cast<double>(m - s) + 1.0);
}

// P(Binom(m, q) <= kmax), summed term by term in log space.
double binom_cdf(std::int64_t m, double q, int kmax) {
    if (kmax < 0) return 0.0;
    if (kmax >= m) return 1.0;
    if (q <= 0.0) return 1.0;
    if (q >= 1.0) return 0.0;
    const double lq = std::log(q);
    const double l1q = std::log1p(-q);
    double sum = 0.0;
    for (int s = 0; s <= kmax; ++s) {
        sum += std::exp(lchoose(m, s) + s * lq + (m - s) * l1q);
    }
    return std::min(sum, 1.0);
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("alpha must lie in (0,1), got " + std::to_string(alpha));
    }
}

void require_open_unit(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("p must lie in (0,1), got " + std::to_string(p));
    }
}

void require_g(int g) {
    if (g < 1) throw std::domain_error("g must be >= 1, got " + std::to_string(g));
}

double checked_probability(double radicand, double p) {
    if (!(radicand > 0.0)) {
        throw std::domain_error("threshold radicand is nonpositive; n is too small for these "
                                "parameters");
    }
    if (!(p < 1.0)) {
        throw std::domain_error("threshold probability reaches 1; n is too small for these "
                                "parameters");
    }
    return p;
}

}  // namespace

LambdaMode lambda_mode_from_string(const std::string& name) {
    if (name == "exact") return LambdaMode::exact;
    if (name == "paper") return LambdaMode::paper;
    if (name == "asymptotic") return LambdaMode::asymptotic;
    throw std::invalid_argument("unknown lambda mode \"" + name + "\"");
}

std::string to_string(LambdaMode mode) {
    switch (mode) {
        case LambdaMode::exact: return "exact";
        case LambdaMode::paper: return "paper";
        case LambdaMode::asymptotic: return "asymptotic";
    }
    return "exact";
}

double threshold_p_h2(std::int64_t n, double alpha, int g, double A) {
    if (n < 2) throw std::domain_error("threshold_p_h2 requires n >= 2");
    require_alpha(alpha);
    require_g(g);
    if (!std::isfinite(A)) throw std::domain_error("A must be finite");
    const double ln_n = std::log(static_cast<double>(n));
    const double llog = std::log(ln_n);
    const double numer = (2.0 / alpha) * ln_n + (g - 2) * (2.0 / alpha) * llog + A;
    const double radicand = numer / static_cast<double>(n);
    return checked_probability(radicand, std::sqrt(radicand));
}

double threshold_p_g1(std::int64_t n, double alpha, int h, double A) {
    if (n < 2) throw std::domain_error("threshold_p_g1 requires n >= 2");
    require_alpha(alpha);
    if (h < 2) throw std::domain_error("h must be >= 2, got " + std::to_string(h));
    if (!std::isfinite(A)) throw std::domain_error("A must be finite");
    const double K = factorial(h) * factorial(h - 1) / std::pow(alpha, h - 1);
    const double ln_n = std::log(static_cast<double>(n));
    const double llog = std::log(ln_n);
    const double numer = K * ln_n - K * llog + A;
    const double radicand = numer / std::pow(static_cast<double>(n), h - 1);
    return checked_probability(radicand, std::pow(radicand, 1.0 / h));
}

double threshold_p(const ThresholdSpec& spec) {
    spec.validate();
    if (spec.h == 2) return threshold_p_h2(spec.n, spec.alpha, spec.g, spec.A);
    return threshold_p_g1(spec.n, spec.alpha, spec.h, spec.A);
}

double limit_probability_h2(double alpha, int g, double A) {
    require_alpha(alpha);
    require_g(g);
    return std::exp(-(2.0 * alpha / factorial(g - 1)) * std::exp(-A * alpha / 2.0));
}

double limit_probability_g1(double alpha, int h, double A) {
    require_alpha(alpha);
    if (h < 2) throw std::domain_error("h must be >= 2, got " + std::to_string(h));
    const double K = factorial(h) * factorial(h - 1) / std::pow(alpha, h - 1);
    return std::exp(-(2.0 * alpha / (h - 1)) * std::exp(-A / K));
}

double limit_probability(const ThresholdSpec& spec) {
    spec.validate();
    if (spec.h == 2) return limit_probability_h2(spec.alpha, spec.g, spec.A);
    return limit_probability_g1(spec.alpha, spec.h, spec.A);
}

double indicator_prob(std::int64_t j, std::int64_t n, double p, int g, LambdaMode mode) {
    if (n < 1) throw std::domain_error("indicator_prob requires n >= 1");
    if (j < 0 || j > 2 * n) {
        throw std::out_of_range("indicator_prob: j=" + std::to_string(j) +
                                " outside [0," + std::to_string(2 * n) + "]");
    }
    require_open_unit(p);
    require_g(g);
    const double q = p * p;
    if (mode == LambdaMode::paper) {
        return binom_cdf(j / 2, q, g - 1);
    }
    if (mode != LambdaMode::exact) {
        throw std::invalid_argument("indicator_prob supports exact and paper modes only");
    }
    const std::int64_t lo_a = std::max<std::int64_t>(0, j - n);
    const std::int64_t off_diag = (j + 1) / 2 - lo_a;  // pairs {a, j-a} with a < j-a
    const bool diagonal = (j % 2 == 0) && (j / 2 <= n);
    if (!diagonal) {
        return binom_cdf(off_diag, q, g - 1);
    }
    return (1.0 - p) * binom_cdf(off_diag, q, g - 1) + p * binom_cdf(off_diag, q, g - 2);
}

double lambda_value(std::int64_t n, double alpha, double p, int g, LambdaMode mode) {
    if (n < 1) throw std::domain_error("lambda_value requires n >= 1");
    require_alpha(alpha);
    require_open_unit(p);
    require_g(g);
    const Window window = window_bounds(n, alpha, 2);
    switch (mode) {
        case LambdaMode::exact: {
            double sum = 0.0;
            for (std::int64_t j = window.lo; j <= window.hi; ++j) {
                sum += indicator_prob(j, n, p, g, LambdaMode::exact);
            }
            return sum;
        }
        case LambdaMode::paper: {
            double sum = 0.0;
            for (std::int64_t j = window.lo; j <= n; ++j) {
                sum += indicator_prob(j, n, p, g, LambdaMode::paper);
            }
            return 2.0 * sum;
        }
        case LambdaMode::asymptotic: {
            const double np2 = static_cast<double>(n) * p * p;
            if (!(np2 > 1.0)) {
                throw std::domain_error("asymptotic lambda needs n*p^2 > 1, got " +
                                        std::to_string(np2));
            }
            const double x = alpha * np2 / 2.0;
            double log_val = std::log(4.0) - 2.0 * std::log(p) - std::lgamma(g) - x;
            if (g > 1) log_val += (g - 1) * std::log(x);
            return std::exp(log_val);
        }
    }
    throw std::invalid_argument("unknown lambda mode");
}

SteinChenBound stein_chen_bound(std::int64_t n, double alpha, double p, int g,
                                double K_corr, double L_t1) {
    if (!(K_corr > 0.0) || !(L_t1 > 0.0)) {
        throw std::domain_error("stein_chen_bound constants must be positive");
    }
    require_open_unit(p);
    const double x = alpha * static_cast<double>(n) * p * p / 2.0;
    SteinChenBound out;
    out.clump_term = g > 1 ? L_t1 * std::exp((g - 1) * std::log(x) - x) : L_t1 * std::exp(-x);
    const double lam = lambda_value(n, alpha, p, g, LambdaMode::exact);
    out.correlation_term = K_corr * lam / (static_cast<double>(n) * p);
    out.total = out.clump_term + out.correlation_term;
    out.t1 = indicator_prob(window_bounds(n, alpha, 2).lo, n, p, g, LambdaMode::exact);
    return out;
}

BallsBoxesFormulas balls_boxes_formulas(std::int64_t N, int g) {
    if (N < 3) throw std::domain_error("balls_boxes_formulas requires N >= 3");
    require_g(g);
    const double Nd = static_cast<double>(N);
    const double ln_n = std::log(Nd);
    const double llog = std::log(ln_n);
    BallsBoxesFormulas out;
    out.packing_threshold = std::pow(Nd, static_cast<double>(g) / (g + 1.0));
    out.coverage_threshold = Nd * (ln_n + (g - 1) * llog);
    out.mean_vg = Nd * (ln_n + (g - 1) * llog + kEulerGamma - std::lgamma(g));
    return out;
}

double bhg_threshold_size(std::int64_t n, int h, int g) {
    if (n < 1) throw std::domain_error("bhg_threshold_size requires n >= 1");
    if (h < 2) throw std::domain_error("h must be >= 2");
    require_g(g);
    const double exponent = static_cast<double>(g) / (static_cast<double>(h) * (g + 1.0));
    return std::pow(static_cast<double>(n), exponent);
}

double gumbel_cdf(double u) {
    return std::exp(-std::exp(-u));
}

}  // namespace sumsetlab
