#include "ppgsleep/config.hpp"

#include <fstream>
#include <sstream>

namespace ppgsleep {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::IoError, "config: cannot open " + path);
    }
    Config cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ParseError,
                        "config: missing '=' at line " + std::to_string(lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        auto as_double = [&]() {
            try {
                return std::stod(val);
            } catch (const std::exception&) {
                throw Error(ErrorCode::ParseError, "config: bad number for " + key +
                                                       " at line " + std::to_string(lineno));
            }
        };

        if (key == "channel") {
            if (val == "green") cfg.channel = PpgChannel::Green;
            else if (val == "ir") cfg.channel = PpgChannel::Ir;
            else
                throw Error(ErrorCode::ParseError,
                            "config: channel must be green or ir (line " +
                                std::to_string(lineno) + ")");
        } else if (key == "gravity_window_s") cfg.gravity_window_s = as_double();
        else if (key == "motion_window_s") cfg.motion_window_s = as_double();
        else if (key == "motion_threshold_g2") cfg.motion_threshold_g2 = as_double();
        else if (key == "refractory_s") cfg.detector.refractory_s = as_double();
        else if (key == "amp_floor_ratio") cfg.detector.floor_ratio = as_double();
        else if (key == "amp_floor_history")
            cfg.detector.floor_history = static_cast<std::size_t>(as_double());
        else if (key == "derivative_smooth")
            cfg.detector.derivative_smooth = static_cast<std::size_t>(as_double());
        else if (key == "plausible_min_ms") cfg.plausibility.min_ms = as_double();
        else if (key == "plausible_max_ms") cfg.plausibility.max_ms = as_double();
        else if (key == "jump_frac") cfg.plausibility.jump_frac = as_double();
        else if (key == "median_history")
            cfg.plausibility.median_history = static_cast<std::size_t>(as_double());
        else if (key == "low_confidence_s") cfg.plausibility.low_confidence_s = as_double();
        else if (key == "hr_window_beats")
            cfg.hr_window_beats = static_cast<std::size_t>(as_double());
        else if (key == "grid_step_hz") cfg.breathing.grid_step_hz = as_double();
        else if (key == "spectrum_interval_s") cfg.breathing.spectrum_interval_s = as_double();
        else if (key == "peak_halfwidth_hz") cfg.breathing.peak_halfwidth_hz = as_double();
        else if (key == "br_warmup_s") cfg.breathing.warmup_s = as_double();
        else if (key == "nlms_mu") cfg.breathing.mu = as_double();
        else if (key == "nlms_eps") cfg.breathing.eps = as_double();
        else if (key == "resp_band_lo_hz") cfg.breathing.band_lo_hz = as_double();
        else if (key == "resp_band_hi_hz") cfg.breathing.band_hi_hz = as_double();
        else if (key == "br_initial_min") cfg.breathing.initial_rate_min = as_double();
        else if (key == "epoch_s") cfg.epoch_s = as_double();
        else
            throw Error(ErrorCode::ParseError,
                        "config: unknown key '" + key + "' at line " + std::to_string(lineno));
    }
    return cfg;
}

} // namespace ppgsleep
