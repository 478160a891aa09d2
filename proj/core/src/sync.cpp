#include "adforge/sync.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace adforge {

namespace {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Iterative radix-2 FFT with a directly computed twiddle table, so results
// are bit-identical run to run.
void fft_radix2(std::vector<std::complex<double>>& x, bool inverse) {
    const std::size_t n = x.size();
    if (n <= 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }

    std::vector<std::complex<double>> twiddle(n / 2);
    const double sign = inverse ? 2.0 : -2.0;
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddle[k] = std::polar(1.0, sign * std::numbers::pi *
                                         static_cast<double>(k) / static_cast<double>(n));

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t block = 0; block < n; block += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = x[block + k];
                std::complex<double> v = x[block + k + len / 2] * twiddle[k * step];
                x[block + k] = u + v;
                x[block + k + len / 2] = u - v;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& c : x) c *= scale;
    }
}

double l2_norm(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

template <typename Record>
ShiftResult<Record> shift_impl(const std::vector<Record>& records, double tau_s) {
    ShiftResult<Record> result;
    result.records = records;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        Record& r = result.records[i];
        double start = r.start_s - tau_s;
        double end = r.end_s - tau_s;
        if (start < 0.0 || end < 0.0) result.clamped.push_back(i);
        r.start_s = std::max(0.0, start);
        r.end_s = std::max(0.0, end);
    }
    return result;
}

}  // namespace

std::vector<double> envelope(const AudioTrack& track, int rate_hz) {
    if (track.samples.empty()) throw std::invalid_argument("envelope: empty track");
    if (track.sample_rate_hz <= 0) throw std::invalid_argument("envelope: bad sample rate");
    if (rate_hz < 1 || rate_hz > track.sample_rate_hz)
        throw std::invalid_argument("envelope: rate must be in [1, sample_rate]");

    const std::size_t n = track.samples.size();
    const std::size_t sr = static_cast<std::size_t>(track.sample_rate_hz);
    const std::size_t rate = static_cast<std::size_t>(rate_hz);
    // ceil(n * rate / sr) windows; window w covers [w*sr/rate, (w+1)*sr/rate)
    const std::size_t windows = (n * rate + sr - 1) / sr;

    std::vector<double> env(windows);
    for (std::size_t w = 0; w < windows; ++w) {
        const std::size_t begin = w * sr / rate;
        const std::size_t end = std::min(n, (w + 1) * sr / rate);
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += std::fabs(track.samples[i]);
        env[w] = end > begin ? acc / static_cast<double>(end - begin) : 0.0;
    }
    return env;
}

CrossCorrelation cross_correlation_fft(const std::vector<double>& a,
                                       const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("cross_correlation_fft: empty input");

    const std::size_t la = a.size(), lb = b.size();
    const std::size_t out_len = la + lb - 1;
    const std::size_t m = next_pow2(out_len);

    std::vector<std::complex<double>> fa(m), fb(m);
    for (std::size_t i = 0; i < la; ++i) fa[i] = a[i];
    for (std::size_t i = 0; i < lb; ++i) fb[i] = b[i];
    fft_radix2(fa, false);
    fft_radix2(fb, false);
    for (std::size_t i = 0; i < m; ++i) fa[i] = std::conj(fa[i]) * fb[i];
    fft_radix2(fa, true);

    CrossCorrelation cc;
    cc.min_lag = -(static_cast<long>(la) - 1);
    cc.values.resize(out_len);
    // c(k) = sum_t a[t] b[t+k]; the circular result holds lag k at index k mod m
    for (long k = cc.min_lag; k <= static_cast<long>(lb) - 1; ++k) {
        std::size_t idx = static_cast<std::size_t>((k + static_cast<long>(m)) %
                                                   static_cast<long>(m));
        cc.values[static_cast<std::size_t>(k - cc.min_lag)] = fa[idx].real();
    }
    return cc;
}

DelayEstimate estimate_delay(const std::vector<double>& reference,
                             const std::vector<double>& mixed, int rate_hz,
                             double min_confidence) {
    if (reference.empty() || mixed.empty())
        throw std::invalid_argument("estimate_delay: empty sequence");
    if (rate_hz < 1) throw std::invalid_argument("estimate_delay: bad rate");

    const CrossCorrelation cc = cross_correlation_fft(reference, mixed);

    long best_lag = cc.min_lag;
    double best = cc.values.front();
    for (std::size_t i = 1; i < cc.values.size(); ++i) {
        if (cc.values[i] > best) {
            best = cc.values[i];
            best_lag = cc.min_lag + static_cast<long>(i);
        }
    }

    DelayEstimate estimate;
    estimate.tau_s = static_cast<double>(best_lag) / rate_hz;
    estimate.resolution_s = 1.0 / rate_hz;
    const double denom = l2_norm(reference) * l2_norm(mixed);
    estimate.confidence = denom > 0.0 ? std::clamp(best / denom, 0.0, 1.0) : 0.0;

    if (estimate.confidence < min_confidence)
        throw sync_error("sync failed: correlation confidence " +
                             std::to_string(estimate.confidence) + " below " +
                             std::to_string(min_confidence),
                         estimate);
    return estimate;
}

ShiftResult<ADRecord> shift_records(const std::vector<ADRecord>& records, double tau_s) {
    return shift_impl(records, tau_s);
}

ShiftResult<SubtitleRecord> shift_records(const std::vector<SubtitleRecord>& records,
                                          double tau_s) {
    return shift_impl(records, tau_s);
}

}  // namespace adforge
