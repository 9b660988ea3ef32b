#include "sumsetlab/convolve.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sumsetlab {

namespace conv_detail {

namespace {

using cplx = std::complex<double>;

// Shared table of e^{-2*pi*i*k/size} for k < size/2; stage `len` of a
// transform of length L strides through it by L/len. Grown on demand and
// swapped atomically so concurrent readers keep a consistent snapshot.
std::shared_ptr<const std::vector<cplx>> twiddles_for(std::size_t size) {
    static std::mutex mu;
    static std::shared_ptr<const std::vector<cplx>> table;
    static std::size_t table_size = 0;

    std::lock_guard<std::mutex> lock(mu);
    if (size > table_size) {
        auto fresh = std::make_shared<std::vector<cplx>>(size / 2);
        for (std::size_t k = 0; k < size / 2; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) /
                                 static_cast<double>(size);
            (*fresh)[k] = cplx(std::cos(angle), std::sin(angle));
        }
        table = std::move(fresh);
        table_size = size;
    }
    return table;
}

// Decimation-in-frequency: natural order in, bit-reversed order out.
void fft_dif(std::vector<cplx>& z, const std::vector<cplx>& tw, std::size_t tw_size) {
    const std::size_t n = z.size();
    const std::size_t base_stride = tw_size / n;
    for (std::size_t len = n; len >= 2; len >>= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = base_stride * (n / len);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = z[start + k];
                const cplx v = z[start + k + half];
                z[start + k] = u + v;
                z[start + k + half] = (u - v) * tw[k * stride];
            }
        }
    }
}

// Inverse decimation-in-time: bit-reversed order in, natural order out.
// Output is unscaled (caller divides by n).
void fft_dit_inverse(std::vector<cplx>& z, const std::vector<cplx>& tw, std::size_t tw_size) {
    const std::size_t n = z.size();
    const std::size_t base_stride = tw_size / n;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = base_stride * (n / len);
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx u = z[start + k];
                const cplx v = z[start + k + half] * std::conj(tw[k * stride]);
                z[start + k] = u + v;
                z[start + k + half] = u - v;
            }
        }
    }
}

// --- NTT modulo P = 29 * 2^57 + 1, primitive root 3 -------------------------

constexpr std::uint64_t kNttPrime = 4179340454199820289ull;
constexpr std::uint64_t kNttRoot = 3;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % kNttPrime);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t acc = 1;
    while (exp > 0) {
        if (exp & 1) acc = mulmod(acc, base);
        base = mulmod(base, base);
        exp >>= 1;
    }
    return acc;
}

void ntt_dif(std::vector<std::uint64_t>& z, bool inverse) {
    const std::size_t n = z.size();
    for (std::size_t len = n; len >= 2; len >>= 1) {
        const std::size_t half = len >> 1;
        std::uint64_t w = powmod(kNttRoot, (kNttPrime - 1) / len);
        if (inverse) w = powmod(w, kNttPrime - 2);
        for (std::size_t start = 0; start < n; start += len) {
            std::uint64_t wk = 1;
            for (std::size_t k = 0; k < half; ++k) {
                const std::uint64_t u = z[start + k];
                const std::uint64_t v = z[start + k + half];
                z[start + k] = u + v >= kNttPrime ? u + v - kNttPrime : u + v;
                z[start + k + half] = mulmod(u + kNttPrime - v, wk);
                wk = mulmod(wk, w);
            }
        }
    }
}

void ntt_dit(std::vector<std::uint64_t>& z, bool inverse) {
    const std::size_t n = z.size();
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        std::uint64_t w = powmod(kNttRoot, (kNttPrime - 1) / len);
        if (inverse) w = powmod(w, kNttPrime - 2);
        for (std::size_t start = 0; start < n; start += len) {
            std::uint64_t wk = 1;
            for (std::size_t k = 0; k < half; ++k) {
                const std::uint64_t u = z[start + k];
                const std::uint64_t v = mulmod(z[start + k + half], wk);
                z[start + k] = u + v >= kNttPrime ? u + v - kNttPrime : u + v;
                z[start + k + half] = u + kNttPrime - v >= kNttPrime ? u + kNttPrime - v - kNttPrime
                                                                     : u + kNttPrime - v;
                wk = mulmod(wk, w);
            }
        }
    }
}

std::size_t transform_length(std::size_t out_len) {
    return std::bit_ceil(std::max<std::size_t>(out_len, 2));
}

bool same_sequence(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    return a.data() == b.data() && a.size() == b.size();
}

}  // namespace

std::vector<std::int64_t> schoolbook(std::span<const std::int64_t> a,
                                     std::span<const std::int64_t> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::int64_t> out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

std::pair<std::vector<std::int64_t>, double> fft_convolve(std::span<const std::int64_t> a,
                                                          std::span<const std::int64_t> b) {
    if (a.empty() || b.empty()) return {std::vector<std::int64_t>{}, 0.0};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = transform_length(out_len);
    const auto tw = twiddles_for(n);
    const std::size_t tw_size = tw->size() * 2;

    std::vector<cplx> za(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < a.size(); ++i) za[i] = cplx(static_cast<double>(a[i]), 0.0);
    fft_dif(za, *tw, tw_size);

    if (same_sequence(a, b)) {
        for (auto& v : za) v *= v;
    } else {
        std::vector<cplx> zb(n, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < b.size(); ++i) zb[i] = cplx(static_cast<double>(b[i]), 0.0);
        fft_dif(zb, *tw, tw_size);
        for (std::size_t i = 0; i < n; ++i) za[i] *= zb[i];
    }

    fft_dit_inverse(za, *tw, tw_size);

    std::vector<std::int64_t> out(out_len);
    double max_residual = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < out_len; ++i) {
        const double value = za[i].real() * inv_n;
        const double rounded = std::nearbyint(value);
        max_residual = std::max(max_residual, std::fabs(value - rounded));
        out[i] = static_cast<std::int64_t>(rounded);
    }
    return {std::move(out), max_residual};
}

std::vector<std::int64_t> ntt_convolve(std::span<const std::int64_t> a,
                                       std::span<const std::int64_t> b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = transform_length(out_len);

    std::vector<std::uint64_t> za(n, 0);
    for (std::size_t i = 0; i < a.size(); ++i) za[i] = static_cast<std::uint64_t>(a[i]);
    ntt_dif(za, false);

    if (same_sequence(a, b)) {
        for (auto& v : za) v = mulmod(v, v);
    } else {
        std::vector<std::uint64_t> zb(n, 0);
        for (std::size_t i = 0; i < b.size(); ++i) zb[i] = static_cast<std::uint64_t>(b[i]);
        ntt_dif(zb, false);
        for (std::size_t i = 0; i < n; ++i) za[i] = mulmod(za[i], zb[i]);
    }

    ntt_dit(za, true);

    const std::uint64_t inv_n = powmod(n % kNttPrime, kNttPrime - 2);
    std::vector<std::int64_t> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        out[i] = static_cast<std::int64_t>(mulmod(za[i], inv_n));
    }
    return out;
}

}  // namespace conv_detail

std::vector<std::int64_t> convolve(std::span<const std::int64_t> a,
                                   std::span<const std::int64_t> b) {
    using namespace conv_detail;
    if (a.empty() || b.empty()) return {};
    for (const auto span : {a, b}) {
        for (const std::int64_t v : span) {
            if (v < 0) throw std::invalid_argument("convolve: inputs must be nonnegative");
        }
    }

    // Conservative bound on any output value: min(max(a)*sum(b), sum(a)*max(b)).
    // Rejection happens in exact integer arithmetic before an engine is chosen,
    // so no path can overflow silently and inputs right below the modulus pass.
    std::int64_t max_a = 0, max_b = 0;
    unsigned __int128 sum_a = 0, sum_b = 0;
    for (const std::int64_t v : a) {
        max_a = std::max(max_a, v);
        sum_a += static_cast<unsigned __int128>(v);
    }
    for (const std::int64_t v : b) {
        max_b = std::max(max_b, v);
        sum_b += static_cast<unsigned __int128>(v);
    }
    const auto below_prime = [](unsigned __int128 sum, std::int64_t peak) {
        return peak == 0 ||
               sum <= (static_cast<unsigned __int128>(kNttPrime) - 1) /
                          static_cast<unsigned __int128>(peak);
    };
    if (!below_prime(sum_b, max_a) && !below_prime(sum_a, max_b)) {
        throw std::overflow_error("convolve: result may exceed the supported value range");
    }
    const double bound = std::min(static_cast<double>(max_a) * static_cast<double>(sum_b),
                                  static_cast<double>(sum_a) * static_cast<double>(max_b));

    const double ops = static_cast<double>(a.size()) * static_cast<double>(b.size());
    if (std::min(a.size(), b.size()) <= 48 || ops <= 4.0e6) {
        return schoolbook(a, b);
    }

    if (bound < 0x1p52) {
        auto [result, residual] = fft_convolve(a, b);
        if (residual < kFftResidualLimit) return std::move(result);
    }
    return ntt_convolve(a, b);
}

}  // namespace sumsetlab
