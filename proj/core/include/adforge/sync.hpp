#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "adforge/types.hpp"

namespace adforge {

struct DelayEstimate {
    double tau_s = 0.0;        // mixed(t) ~ reference(t - tau)
    double confidence = 0.0;   // normalized correlation peak, in [0, 1]
    double resolution_s = 0.0; // one envelope sample
};

class sync_error : public std::runtime_error {
public:
    sync_error(const std::string& what, DelayEstimate estimate)
        : std::runtime_error(what), estimate_(estimate) {}

    const DelayEstimate& estimate() const { return estimate_; }

private:
    DelayEstimate estimate_;
};

// Mean absolute amplitude over consecutive non-overlapping windows of
// sample_rate/rate_hz samples. Output length = ceil(duration * rate_hz).
std::vector<double> envelope(const AudioTrack& track, int rate_hz = 100);

// Full cross-correlation c(k) = sum_t a[t] * b[t+k] for
// k in [-(|a|-1), |b|-1], computed via FFT with zero padding to the next
// power of two >= |a|+|b|-1. values[i] corresponds to lag min_lag + i.
struct CrossCorrelation {
    std::vector<double> values;
    long min_lag = 0;

    double at_lag(long k) const { return values[static_cast<std::size_t>(k - min_lag)]; }
};

CrossCorrelation cross_correlation_fft(const std::vector<double>& a,
                                       const std::vector<double>& b);

// Delay of `mixed` relative to `reference` at the envelope rate: the argmax
// lag of their cross-correlation (ties toward the most negative lag).
// confidence = peak / (|ref| * |mixed|). Throws sync_error (carrying the
// estimate) when confidence falls below min_confidence.
DelayEstimate estimate_delay(const std::vector<double>& reference,
                             const std::vector<double>& mixed,
                             int rate_hz,
                             double min_confidence = 0.10);

// Timestamps shifted onto the reference clock: start/end decreased by tau_s,
// clamped at 0. `clamped` lists the indices of records that hit the clamp.
template <typename Record>
struct ShiftResult {
    std::vector<Record> records;
    std::vector<std::size_t> clamped;
};

ShiftResult<ADRecord> shift_records(const std::vector<ADRecord>& records, double tau_s);
ShiftResult<SubtitleRecord> shift_records(const std::vector<SubtitleRecord>& records,
                                          double tau_s);

}  // namespace adforge
