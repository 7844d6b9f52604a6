#include "ppgsleep/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ppgsleep {
namespace csv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& s, int lineno, const std::string& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    path + ": bad numeric field at line " + std::to_string(lineno));
    }
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // raw fields
    std::string path;

    std::size_t column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw Error(ErrorCode::SchemaError, path + ": missing column '" + name + "'");
    }
};

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    Table t;
    t.path = path;
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::SchemaError, path + ": empty file, header row required");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split(line);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line);
        if (fields.size() != t.header.size()) {
            throw Error(ErrorCode::ParseError,
                        path + ": wrong field count at line " + std::to_string(lineno));
        }
        t.rows.push_back(std::move(fields));
    }
    return t;
}

} // namespace

Recording read_recording(const std::string& path) {
    const Table t = read_table(path);
    const std::size_t c_t = t.column("t_s");
    const std::size_t c_g = t.column("ppg_green");
    const std::size_t c_i = t.column("ppg_ir");
    const std::size_t c_x = t.column("acc_x_g");
    const std::size_t c_y = t.column("acc_y_g");
    const std::size_t c_z = t.column("acc_z_g");
    if (t.rows.size() < 2) {
        throw Error(ErrorCode::InsufficientData, path + ": need at least 2 samples");
    }

    Recording rec;
    const double t0 = parse_double(t.rows.front()[c_t], 2, path);
    const double t1 = parse_double(t.rows[1][c_t], 3, path);
    if (!(t1 > t0)) {
        throw Error(ErrorCode::InvalidSeries, path + ": time column not increasing");
    }
    const double fs = std::round(1.0 / (t1 - t0));
    for (UniformSeries* s :
         {&rec.ppg_green, &rec.ppg_ir, &rec.acc_x, &rec.acc_y, &rec.acc_z}) {
        s->fs = fs;
        s->t0 = t0;
        s->values.reserve(t.rows.size());
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int lineno = static_cast<int>(r) + 2;
        rec.ppg_green.values.push_back(parse_double(t.rows[r][c_g], lineno, path));
        rec.ppg_ir.values.push_back(parse_double(t.rows[r][c_i], lineno, path));
        rec.acc_x.values.push_back(parse_double(t.rows[r][c_x], lineno, path));
        rec.acc_y.values.push_back(parse_double(t.rows[r][c_y], lineno, path));
        rec.acc_z.values.push_back(parse_double(t.rows[r][c_z], lineno, path));
    }
    return rec;
}

void write_recording(const std::string& path, const Recording& rec) {
    std::ostringstream os;
    os << "t_s,ppg_green,ppg_ir,acc_x_g,acc_y_g,acc_z_g\n";
    char buf[160];
    for (std::size_t k = 0; k < rec.ppg_green.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.8f,%.8f,%.8f,%.8f,%.8f\n",
                      rec.ppg_green.time_at(k), rec.ppg_green.values[k],
                      rec.ppg_ir.values[k], rec.acc_x.values[k], rec.acc_y.values[k],
                      rec.acc_z.values[k]);
        os << buf;
    }
    write_file_atomic(path, os.str());
}

BeatSeries read_reference_beats(const std::string& path) {
    const Table t = read_table(path);
    const std::size_t c = t.column("ecg_beat");
    BeatSeries beats;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        beats.times.push_back(parse_double(t.rows[r][c], static_cast<int>(r) + 2, path));
    }
    return beats;
}

void write_reference_beats(const std::string& path, const BeatSeries& beats) {
    std::ostringstream os;
    os << "t_s,ecg_beat\n";
    char buf[80];
    for (double tb : beats.times) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", tb, tb);
        os << buf;
    }
    write_file_atomic(path, os.str());
}

std::vector<SamplePoint> read_reference_resp(const std::string& path) {
    const Table t = read_table(path);
    const std::size_t c_t = t.column("t_s");
    const std::size_t c_r = t.column("resp_rate_min");
    std::vector<SamplePoint> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int lineno = static_cast<int>(r) + 2;
        out.push_back({parse_double(t.rows[r][c_t], lineno, path),
                       parse_double(t.rows[r][c_r], lineno, path)});
    }
    return out;
}

void write_reference_resp(const std::string& path, const std::vector<SamplePoint>& resp) {
    std::ostringstream os;
    os << "t_s,resp_rate_min\n";
    char buf[80];
    for (const SamplePoint& p : resp) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", p.t, p.value);
        os << buf;
    }
    write_file_atomic(path, os.str());
}

void write_server_output(const std::string& path, const ServerCsv& out) {
    auto low = [&out](double t) {
        for (const auto& [s, e] : out.low_confidence) {
            if (t >= s && t <= e) return true;
        }
        return false;
    };
    std::ostringstream os;
    os << "t_s,hr_bpm,br_min,quality\n";
    char buf[120];
    std::size_t ih = 0, ib = 0;
    while (ih < out.hr.size() || ib < out.br.size()) {
        const bool take_hr =
            ib >= out.br.size() || (ih < out.hr.size() && out.hr[ih].t <= out.br[ib].t);
        const SamplePoint& p = take_hr ? out.hr[ih] : out.br[ib];
        const char* quality = low(p.t) ? "low" : "ok";
        if (take_hr) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,,%s\n", p.t, p.value, quality);
            ++ih;
        } else {
            std::snprintf(buf, sizeof(buf), "%.6f,,%.6f,%s\n", p.t, p.value, quality);
            ++ib;
        }
        os << buf;
    }
    write_file_atomic(path, os.str());
}

ServerCsv read_server_output(const std::string& path) {
    const Table t = read_table(path);
    const std::size_t c_t = t.column("t_s");
    const std::size_t c_h = t.column("hr_bpm");
    const std::size_t c_b = t.column("br_min");
    ServerCsv out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int lineno = static_cast<int>(r) + 2;
        const double ts = parse_double(t.rows[r][c_t], lineno, path);
        if (!t.rows[r][c_h].empty()) {
            out.hr.push_back({ts, parse_double(t.rows[r][c_h], lineno, path)});
        }
        if (!t.rows[r][c_b].empty()) {
            out.br.push_back({ts, parse_double(t.rows[r][c_b], lineno, path)});
        }
    }
    return out;
}

namespace {

const char* flag_name(BbiFlag f) {
    switch (f) {
        case BbiFlag::Valid: return "valid";
        case BbiFlag::Implausible: return "implausible";
        case BbiFlag::Motion: return "motion";
        case BbiFlag::Interpolated: return "interpolated";
    }
    return "valid";
}

BbiFlag flag_from(const std::string& s, int lineno, const std::string& path) {
    if (s == "valid") return BbiFlag::Valid;
    if (s == "implausible") return BbiFlag::Implausible;
    if (s == "motion") return BbiFlag::Motion;
    if (s == "interpolated") return BbiFlag::Interpolated;
    throw Error(ErrorCode::ParseError,
                path + ": unknown flag at line " + std::to_string(lineno));
}

} // namespace

void write_bbi(const std::string& path, const BBISeries& bbi) {
    std::ostringstream os;
    os << "t_s,bbi_ms,flag\n";
    char buf[100];
    for (std::size_t k = 0; k < bbi.size(); ++k) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%s\n", bbi.onset_s[k],
                      bbi.interval_ms[k], flag_name(bbi.flags[k]));
        os << buf;
    }
    write_file_atomic(path, os.str());
}

BBISeries read_bbi(const std::string& path) {
    const Table t = read_table(path);
    const std::size_t c_t = t.column("t_s");
    const std::size_t c_v = t.column("bbi_ms");
    const std::size_t c_f = t.column("flag");
    BBISeries out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int lineno = static_cast<int>(r) + 2;
        out.onset_s.push_back(parse_double(t.rows[r][c_t], lineno, path));
        out.interval_ms.push_back(parse_double(t.rows[r][c_v], lineno, path));
        out.flags.push_back(flag_from(t.rows[r][c_f], lineno, path));
    }
    return out;
}

void write_truth(const std::string& path, const BBISeries& true_bbi,
                 const std::vector<SamplePoint>& true_br) {
    std::ostringstream os;
    os << "t_s,true_bbi_ms,true_br_min\n";
    char buf[120];
    std::size_t ib = 0, ir = 0;
    while (ib < true_bbi.size() || ir < true_br.size()) {
        const bool take_bbi = ir >= true_br.size() ||
                              (ib < true_bbi.size() && true_bbi.onset_s[ib] <= true_br[ir].t);
        if (take_bbi) {
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,\n", true_bbi.onset_s[ib],
                          true_bbi.interval_ms[ib]);
            ++ib;
        } else {
            std::snprintf(buf, sizeof(buf), "%.6f,,%.6f\n", true_br[ir].t,
                          true_br[ir].value);
            ++ir;
        }
        os << buf;
    }
    write_file_atomic(path, os.str());
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_atomic(const std::string& path, const void* data, std::size_t size) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp);
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error(ErrorCode::IoError, "rename failed for " + path);
}

void write_file_atomic(const std::string& path, const std::string& text) {
    write_file_atomic(path, text.data(), text.size());
}

} // namespace csv
} // namespace ppgsleep
