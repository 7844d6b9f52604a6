#include "ppgsleep/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ppgsleep {

UniformSeries resample_linear(const std::vector<SamplePoint>& points, double fs,
                              double t_start, double t_end) {
    if (points.size() < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "resample_linear: need at least 2 points");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i].t > points[i - 1].t)) {
            throw Error(ErrorCode::InvalidSeries,
                        "resample_linear: times not strictly increasing");
        }
    }
    if (!(fs > 0.0)) {
        throw Error(ErrorCode::InvalidParam, "resample_linear: fs must be > 0");
    }
    constexpr double kEps = 1e-9;
    if (t_start < points.front().t - kEps || t_end > points.back().t + kEps ||
        t_end < t_start) {
        throw Error(ErrorCode::InvalidParam,
                    "resample_linear: [t_start, t_end] outside input span");
    }

    const std::size_t n_out =
        static_cast<std::size_t>(std::floor((t_end - t_start) * fs + kEps)) + 1;
    UniformSeries out;
    out.fs = fs;
    out.t0 = t_start;
    out.values.resize(n_out);

    std::size_t hi = 1;  // points[hi-1].t <= t < points[hi].t
    for (std::size_t k = 0; k < n_out; ++k) {
        const double t = t_start + static_cast<double>(k) / fs;
        while (hi + 1 < points.size() && points[hi].t < t) ++hi;
        const SamplePoint& a = points[hi - 1];
        const SamplePoint& b = points[hi];
        const double w = (t - a.t) / (b.t - a.t);
        out.values[k] = a.value + w * (b.value - a.value);
    }
    return out;
}

namespace {

constexpr char kMagic[4] = {'P', 'G', 'F', 'T'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& buf, std::uint16_t v) {
    buf.push_back(static_cast<std::uint8_t>(v & 0xff));
    buf.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

void put_f32(std::vector<std::uint8_t>& buf, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(buf, bits);
}

void put_f64(std::vector<std::uint8_t>& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>((bits >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) {
            throw Error(ErrorCode::DecodeError,
                        "decode_features: truncated stream at byte offset " +
                            std::to_string(pos_));
        }
    }

    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
        pos_ += 2;
        return v;
    }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    float f32() {
        std::uint32_t bits = u32();
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }

    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 8;
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

} // namespace

std::vector<std::uint8_t> encode_features(const std::vector<FeatureRecord>& records) {
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].epoch_start < records[i - 1].epoch_start) {
            throw Error(ErrorCode::InvalidInput,
                        "encode_features: records not epoch-sorted");
        }
    }
    std::vector<std::uint8_t> buf;
    buf.insert(buf.end(), kMagic, kMagic + 4);
    put_u16(buf, kVersion);
    put_u32(buf, static_cast<std::uint32_t>(records.size()));
    for (const FeatureRecord& rec : records) {
        put_f64(buf, rec.epoch_start);
        put_u16(buf, static_cast<std::uint16_t>(rec.motion_powers.size()));
        for (float p : rec.motion_powers) put_f32(buf, p);
        put_u16(buf, static_cast<std::uint16_t>(rec.intervals.size()));
        for (const FeatureRecord::Interval& iv : rec.intervals) {
            put_u32(buf, iv.onset_offset_ms);
            put_u16(buf, iv.interval_ms);
        }
    }
    return buf;
}

std::vector<FeatureRecord> decode_features(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes);
    r.need(4);
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw Error(ErrorCode::DecodeError, "decode_features: bad magic at byte offset 0");
    }
    Reader body(bytes);
    body.u32();  // skip magic
    const std::uint16_t version = body.u16();
    if (version != kVersion) {
        throw Error(ErrorCode::DecodeError,
                    "decode_features: unsupported version " + std::to_string(version) +
                        " at byte offset 4");
    }
    const std::uint32_t count = body.u32();
    std::vector<FeatureRecord> records;
    records.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        FeatureRecord rec;
        rec.epoch_start = body.f64();
        const std::uint16_t n_motion = body.u16();
        rec.motion_powers.resize(n_motion);
        for (std::uint16_t j = 0; j < n_motion; ++j) rec.motion_powers[j] = body.f32();
        const std::uint16_t n_iv = body.u16();
        rec.intervals.resize(n_iv);
        for (std::uint16_t j = 0; j < n_iv; ++j) {
            rec.intervals[j].onset_offset_ms = body.u32();
            rec.intervals[j].interval_ms = body.u16();
        }
        records.push_back(std::move(rec));
    }
    if (!body.done()) {
        throw Error(ErrorCode::DecodeError,
                    "decode_features: trailing bytes at byte offset " +
                        std::to_string(body.offset()));
    }
    return records;
}

} // namespace ppgsleep
