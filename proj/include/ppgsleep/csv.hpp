#pragma once

#include <string>
#include <vector>

#include "ppgsleep/core.hpp"

namespace ppgsleep {
namespace csv {

/// One raw recording: 25 Hz nominal PPG (two wavelengths) + 3-axis accel.
struct Recording {
    UniformSeries ppg_green, ppg_ir;
    UniformSeries acc_x, acc_y, acc_z;
};

/// Columns: t_s, ppg_green, ppg_ir, acc_x_g, acc_y_g, acc_z_g.
Recording read_recording(const std::string& path);
void write_recording(const std::string& path, const Recording& rec);

/// Columns: t_s, ecg_beat (one beat timestamp per row; t_s == ecg_beat).
BeatSeries read_reference_beats(const std::string& path);
void write_reference_beats(const std::string& path, const BeatSeries& beats);

/// Columns: t_s, resp_rate_min.
std::vector<SamplePoint> read_reference_resp(const std::string& path);
void write_reference_resp(const std::string& path, const std::vector<SamplePoint>& resp);

/// Server output: t_s, hr_bpm, br_min, quality. Rows carry either an HR
/// or a BR sample; the unused column is empty.
struct ServerCsv {
    std::vector<SamplePoint> hr;
    std::vector<SamplePoint> br;
    std::vector<std::pair<double, double>> low_confidence;
};
void write_server_output(const std::string& path, const ServerCsv& out);
ServerCsv read_server_output(const std::string& path);

/// Columns: t_s, bbi_ms, flag.
void write_bbi(const std::string& path, const BBISeries& bbi);
BBISeries read_bbi(const std::string& path);

/// Ground-truth bundle: t_s, true_bbi_ms, true_br_min (bbi column empty
/// past the last interval).
void write_truth(const std::string& path, const BBISeries& true_bbi,
                 const std::vector<SamplePoint>& true_br);

std::vector<std::uint8_t> read_file(const std::string& path);
/// Writes to a temp file in the same directory, then renames.
void write_file_atomic(const std::string& path, const void* data, std::size_t size);
void write_file_atomic(const std::string& path, const std::string& text);

} // namespace csv
} // namespace ppgsleep
