#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ppgsleep/beat_detect.hpp"
#include "ppgsleep/csv.hpp"
#include "ppgsleep/eval.hpp"
#include "ppgsleep/pipeline.hpp"
#include "ppgsleep/synth.hpp"

namespace {

using namespace ppgsleep;

Config load_config(const std::string& path) {
    if (path.empty()) return Config{};
    return Config::load(path);
}

void apply_channel(Config& cfg, const std::string& channel) {
    if (channel.empty()) return;
    if (channel == "green") cfg.channel = PpgChannel::Green;
    else if (channel == "ir") cfg.channel = PpgChannel::Ir;
    else throw Error(ErrorCode::InvalidParam, "channel must be green or ir");
}

void cmd_device(const std::string& input, const std::string& output, const Config& cfg) {
    const csv::Recording rec = csv::read_recording(input);
    const std::vector<FeatureRecord> records = pipeline::device_stage(rec, cfg);
    const std::vector<std::uint8_t> bytes = encode_features(records);
    csv::write_file_atomic(output, bytes.data(), bytes.size());
    std::printf("device: %zu records -> %s\n", records.size(), output.c_str());
}

void cmd_server(const std::string& features, const std::string& output,
                const std::string& bbi_out, const Config& cfg) {
    const std::vector<FeatureRecord> records = decode_features(csv::read_file(features));
    const pipeline::ServerOutput out = pipeline::server_stage(records, cfg);
    csv::ServerCsv payload{out.hr, out.br, out.corrected.low_confidence};
    csv::write_server_output(output, payload);
    if (!bbi_out.empty()) csv::write_bbi(bbi_out, out.corrected);
    std::printf("server: %zu hr samples, %zu br samples -> %s\n", out.hr.size(),
                out.br.size(), output.c_str());
}

BBISeries bbi_from_beats(const BeatSeries& beats) {
    return beat_detect::beats_to_intervals(beats);
}

void cmd_eval(const std::vector<std::string>& est_csvs,
              const std::vector<std::string>& ref_beats,
              const std::vector<std::string>& ref_resps,
              const std::vector<std::string>& bbi_csvs, const std::string& json_out) {
    eval::EvalReport report;
    const std::size_t n = est_csvs.size();
    if ((!ref_beats.empty() && ref_beats.size() != n) ||
        (!ref_resps.empty() && ref_resps.size() != n) ||
        (!bbi_csvs.empty() && bbi_csvs.size() != n)) {
        throw Error(ErrorCode::InvalidInput,
                    "eval: per-recording option counts must match --est");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const csv::ServerCsv est = csv::read_server_output(est_csvs[i]);
        if (!bbi_csvs.empty() && !ref_beats.empty()) {
            const BBISeries test_bbi = csv::read_bbi(bbi_csvs[i]);
            const BBISeries ref_bbi =
                bbi_from_beats(csv::read_reference_beats(ref_beats[i]));
            const eval::MetricPair rr = eval::evaluate_rr(test_bbi, ref_bbi);
            report.rr_mae_ms.push_back(rr.mae);
            report.rr_mape_pct.push_back(rr.mape_pct);
            const eval::MetricPair hr = eval::evaluate_hr(test_bbi, ref_bbi);
            report.hr_mae_bpm.push_back(hr.mae);
            report.hr_mape_pct.push_back(hr.mape_pct);
        }
        if (!ref_resps.empty()) {
            const std::vector<SamplePoint> resp = csv::read_reference_resp(ref_resps[i]);
            const eval::MetricPair br = eval::evaluate_br(est.br, resp);
            report.br_mae_min.push_back(br.mae);
            report.br_mape_pct.push_back(br.mape_pct);
        }
    }
    std::fputs(report.to_table().c_str(), stdout);
    if (!json_out.empty()) csv::write_file_atomic(json_out, report.to_json());
}

struct SynthOptions {
    double duration_s = 28800.0;
    double hr_bpm = 60.0;
    double rsa_freq_hz = 0.25;
    double rsa_depth = 0.05;
    double noise_std = 0.0;
    double drift_amp = 0.0;
    double jitter_std_s = 0.0;
    std::uint64_t seed = 1;
    std::vector<std::string> steps;   // "t:freq_hz"
    std::vector<std::string> bursts;  // "start:end:amp_g"
    std::string out_dir = ".";
    std::string prefix = "synth";
};

void cmd_synth(const SynthOptions& opt) {
    std::vector<synth::RsaSegment> schedule{{0.0, opt.rsa_freq_hz}};
    for (const std::string& s : opt.steps) {
        synth::RsaSegment seg;
        if (std::sscanf(s.c_str(), "%lf:%lf", &seg.t_start_s, &seg.freq_hz) != 2) {
            throw Error(ErrorCode::InvalidParam, "synth: bad --rsa-step '" + s + "'");
        }
        schedule.push_back(seg);
    }
    std::vector<synth::MotionBurst> bursts;
    for (const std::string& s : opt.bursts) {
        synth::MotionBurst b;
        if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &b.start_s, &b.end_s, &b.amp_g) != 3) {
            throw Error(ErrorCode::InvalidParam, "synth: bad --burst '" + s + "'");
        }
        bursts.push_back(b);
    }

    const synth::SynthTruth truth = synth::gen_beat_times_schedule(
        opt.hr_bpm, schedule, opt.rsa_depth, opt.duration_s, opt.seed, opt.jitter_std_s);

    csv::Recording rec;
    rec.ppg_green = synth::gen_ppg(truth.beats, 25.0, opt.noise_std, opt.drift_amp,
                                   opt.duration_s, opt.seed + 1);
    rec.ppg_ir = synth::gen_ppg(truth.beats, 25.0, opt.noise_std, opt.drift_amp,
                                opt.duration_s, opt.seed + 2);
    for (double& v : rec.ppg_ir.values) v *= 0.7;
    const synth::AccelTriple acc =
        synth::gen_accel(opt.duration_s, 25.0, bursts, 0.003, opt.seed + 3);
    rec.acc_x = acc.x;
    rec.acc_y = acc.y;
    rec.acc_z = acc.z;

    const std::filesystem::path dir(opt.out_dir);
    std::filesystem::create_directories(dir);
    const std::string base = (dir / opt.prefix).string();
    csv::write_recording(base + "_recording.csv", rec);
    csv::write_reference_beats(base + "_ref_beats.csv", truth.beats);
    csv::write_reference_resp(base + "_ref_resp.csv", truth.true_br);
    csv::write_truth(base + "_truth.csv", truth.true_bbi, truth.true_br);
    std::printf("synth: %zu beats over %.0f s -> %s_*.csv\n", truth.beats.size(),
                opt.duration_s, base.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wrist-PPG sleep monitoring pipeline"};
    app.require_subcommand(1);

    std::string config_path, channel;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--channel", channel, "PPG channel: green (default) or ir");

    auto* dev = app.add_subcommand("device", "raw recording CSV -> feature file");
    std::string dev_in, dev_out = "features.ftr";
    dev->add_option("input", dev_in, "recording CSV")->required();
    dev->add_option("-o,--output", dev_out, "feature file (.ftr)");

    auto* srv = app.add_subcommand("server", "feature file -> HR/BR CSV");
    std::string srv_in, srv_out = "output.csv", srv_bbi;
    srv->add_option("input", srv_in, "feature file (.ftr)")->required();
    srv->add_option("-o,--output", srv_out, "output CSV");
    srv->add_option("--bbi-out", srv_bbi, "also write corrected intervals CSV");

    auto* ev = app.add_subcommand("eval", "score estimates against references");
    std::vector<std::string> ev_est, ev_beats, ev_resp, ev_bbi;
    std::string ev_json;
    ev->add_option("--est", ev_est, "server output CSV (repeatable)")->required();
    ev->add_option("--ref-beats", ev_beats, "reference beat CSV (repeatable)");
    ev->add_option("--ref-resp", ev_resp, "reference respiration CSV (repeatable)");
    ev->add_option("--bbi", ev_bbi, "estimated intervals CSV (repeatable)");
    ev->add_option("--json", ev_json, "write JSON report here");

    auto* sy = app.add_subcommand("synth", "generate a synthetic recording bundle");
    SynthOptions so;
    sy->add_option("--duration", so.duration_s, "seconds");
    sy->add_option("--hr", so.hr_bpm, "base heart rate, bpm");
    sy->add_option("--rsa-freq", so.rsa_freq_hz, "respiratory frequency, Hz");
    sy->add_option("--rsa-depth", so.rsa_depth, "modulation depth, fraction");
    sy->add_option("--noise", so.noise_std, "PPG noise std (pulse amplitude = 1)");
    sy->add_option("--drift", so.drift_amp, "baseline drift amplitude");
    sy->add_option("--jitter", so.jitter_std_s, "beat jitter std, s");
    sy->add_option("--seed", so.seed, "random seed");
    sy->add_option("--rsa-step", so.steps, "t:freq_hz schedule entry (repeatable)");
    sy->add_option("--burst", so.bursts, "start:end:amp_g motion burst (repeatable)");
    sy->add_option("--out-dir", so.out_dir, "output directory");
    sy->add_option("--prefix", so.prefix, "output file prefix");

    auto* run = app.add_subcommand("run", "device + server in one step");
    std::string run_in, run_out = "output.csv", run_ftr, run_bbi;
    run->add_option("input", run_in, "recording CSV")->required();
    run->add_option("-o,--output", run_out, "output CSV");
    run->add_option("--features-out", run_ftr, "also keep the feature file");
    run->add_option("--bbi-out", run_bbi, "also write corrected intervals CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        Config cfg = load_config(config_path);
        apply_channel(cfg, channel);
        if (dev->parsed()) {
            cmd_device(dev_in, dev_out, cfg);
        } else if (srv->parsed()) {
            cmd_server(srv_in, srv_out, srv_bbi, cfg);
        } else if (ev->parsed()) {
            cmd_eval(ev_est, ev_beats, ev_resp, ev_bbi, ev_json);
        } else if (sy->parsed()) {
            cmd_synth(so);
        } else if (run->parsed()) {
            const csv::Recording rec = csv::read_recording(run_in);
            const std::vector<FeatureRecord> records = pipeline::device_stage(rec, cfg);
            if (!run_ftr.empty()) {
                const std::vector<std::uint8_t> bytes = encode_features(records);
                csv::write_file_atomic(run_ftr, bytes.data(), bytes.size());
            }
            const pipeline::ServerOutput out = pipeline::server_stage(records, cfg);
            csv::ServerCsv payload{out.hr, out.br, out.corrected.low_confidence};
            csv::write_server_output(run_out, payload);
            if (!run_bbi.empty()) csv::write_bbi(run_bbi, out.corrected);
            std::printf("run: %zu hr samples, %zu br samples -> %s\n", out.hr.size(),
                        out.br.size(), run_out.c_str());
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
