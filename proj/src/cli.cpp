#include "edbsw/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "edbsw/baselines.hpp"
#include "edbsw/errors.hpp"
#include "edbsw/filterbank.hpp"
#include "edbsw/grid.hpp"
#include "edbsw/imageio.hpp"
#include "edbsw/metrics.hpp"
#include "edbsw/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace edbsw::cli {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Metric fields carry 6 significant digits; +/- infinity uses the "inf"
// sentinel so the CSV stays parseable by everything.
std::string fmt6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Same temp-then-rename protocol as the image writers: concurrent runs into
// one directory can never expose a half-written report.
void write_text_atomic(const std::string& path, const std::string& text) {
    static std::atomic<unsigned> counter{0};
    const std::string tmp = path + ".tmp" + std::to_string(::getpid()) + "-" +
                            std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot create " + tmp);
        out << text;
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failure on " + tmp);
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move temp file into place for " + path);
    }
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key) {
    std::size_t used = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &used);
    } catch (const std::exception&) {
        throw ParamError("config: bad numeric value for '" + key + "': " + v);
    }
    if (used != v.size()) throw ParamError("config: bad numeric value for '" + key + "': " + v);
    return d;
}

int parse_int(const std::string& v, const std::string& key) {
    double d = parse_double(v, key);
    int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ParamError("config: expected an integer for '" + key + "': " + v);
    return i;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw ParamError("config: expected a boolean for '" + key + "': " + v);
}

EdFusion parse_ed_fusion(const std::string& v) {
    if (v == "max") return EdFusion::kMax;
    if (v == "ignore") return EdFusion::kIgnore;
    if (v == "three-way-average") return EdFusion::kThreeWayAverage;
    throw ParamError("unknown ed_fusion mode '" + v +
                     "' (want max | ignore | three-way-average)");
}

const char* ed_fusion_name(EdFusion f) {
    switch (f) {
        case EdFusion::kIgnore: return "ignore";
        case EdFusion::kThreeWayAverage: return "three-way-average";
        default: return "max";
    }
}

// Flat key=value pipeline configuration; '#' starts a comment, blank lines
// are skipped, every PipelineConfig default is overridable.
void apply_config_file(const std::string& path, PipelineConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParamError("config: expected key = value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "wavelet" || key == "wavelet.name") cfg.wavelet.name = val;
        else if (key == "L" || key == "wavelet.L") cfg.wavelet.L = parse_int(val, key);
        else if (key == "degree" || key == "wavelet.degree") cfg.wavelet.degree = parse_int(val, key);
        else if (key == "taps" || key == "wavelet.taps") cfg.wavelet.taps = parse_int(val, key);
        else if (key == "alpha") cfg.alpha = parse_double(val, key);
        else if (key == "selector.T") cfg.selector.T = parse_double(val, key);
        else if (key == "selector.window_h") cfg.selector.window_h = parse_int(val, key);
        else if (key == "selector.window_w") cfg.selector.window_w = parse_int(val, key);
        else if (key == "selector.stride_y") cfg.selector.stride_y = parse_int(val, key);
        else if (key == "selector.stride_x") cfg.selector.stride_x = parse_int(val, key);
        else if (key == "selector.mean_lo") cfg.selector.mean_lo = parse_double(val, key);
        else if (key == "selector.mean_hi") cfg.selector.mean_hi = parse_double(val, key);
        else if (key == "morph.mu") cfg.morph.mu = parse_double(val, key);
        else if (key == "morph.range_lo") cfg.morph.range_lo = parse_double(val, key);
        else if (key == "morph.range_hi") cfg.morph.range_hi = parse_double(val, key);
        else if (key == "morph.zero_weights_excluded")
            cfg.morph.zero_weights_excluded = parse_bool(val, key);
        else if (key == "ablation.disable_branch1")
            cfg.ablation.disable_branch1 = parse_bool(val, key);
        else if (key == "ablation.disable_branch2")
            cfg.ablation.disable_branch2 = parse_bool(val, key);
        else if (key == "ablation.disable_selector")
            cfg.ablation.disable_selector = parse_bool(val, key);
        else if (key == "ed_fusion") cfg.ed_fusion = parse_ed_fusion(val);
        else throw ParamError("config: unknown key '" + key + "'");
    }
}

// Shared pipeline flags. CLI flags override the config file, which overrides
// the built-in defaults; the Option pointers tell us what the user touched.
struct PipelineFlags {
    std::string config_path;
    std::string wavelet = "bcssw";
    int L = 4;
    int degree = 10;
    int taps = 15;
    double alpha = 0.7;
    std::string ed_fusion = "max";
    bool no_branch1 = false;
    bool no_branch2 = false;
    bool no_selector = false;

    CLI::Option* o_wavelet = nullptr;
    CLI::Option* o_L = nullptr;
    CLI::Option* o_degree = nullptr;
    CLI::Option* o_taps = nullptr;
    CLI::Option* o_alpha = nullptr;
    CLI::Option* o_ed_fusion = nullptr;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f, bool with_wavelet) {
    cmd->add_option("--config", f.config_path,
                    "flat key = value config file (every pipeline default is overridable)");
    if (with_wavelet)
        f.o_wavelet = cmd->add_option("--wavelet", f.wavelet,
                                      "wavelet bank: bcssw | haar | db2 | coif1 | sym4 | rbio3.5");
    f.o_L = cmd->add_option("--L", f.L, "vanishing-moment sum for the bcssw bank");
    f.o_degree = cmd->add_option("--degree", f.degree, "cosine-fit degree for the bcssw bank");
    f.o_taps = cmd->add_option("--taps", f.taps, "truncation length for the bcssw bank (odd)");
    f.o_alpha = cmd->add_option("--alpha", f.alpha, "fusion weight in [0,1]");
    f.o_ed_fusion = cmd->add_option("--ed-fusion", f.ed_fusion,
                                    "anti-noise map fusion: max | ignore | three-way-average");
    cmd->add_flag("--no-branch1", f.no_branch1, "ablation: drop the anti-noise branch");
    cmd->add_flag("--no-branch2", f.no_branch2, "ablation: drop the modulus-maxima mask branch");
    cmd->add_flag("--no-selector", f.no_selector, "ablation: bypass the uncertainty selector");
}

PipelineConfig materialize_config(const PipelineFlags& f) {
    PipelineConfig cfg;
    if (!f.config_path.empty()) apply_config_file(f.config_path, cfg);
    if (f.o_wavelet && f.o_wavelet->count()) cfg.wavelet.name = f.wavelet;
    if (f.o_L->count()) cfg.wavelet.L = f.L;
    if (f.o_degree->count()) cfg.wavelet.degree = f.degree;
    if (f.o_taps->count()) cfg.wavelet.taps = f.taps;
    if (f.o_alpha->count()) cfg.alpha = f.alpha;
    if (f.o_ed_fusion->count()) cfg.ed_fusion = parse_ed_fusion(f.ed_fusion);
    if (f.no_branch1) cfg.ablation.disable_branch1 = true;
    if (f.no_branch2) cfg.ablation.disable_branch2 = true;
    if (f.no_selector) cfg.ablation.disable_selector = true;
    return cfg;
}

ordered_json config_json(const PipelineConfig& cfg) {
    return ordered_json{
        {"wavelet",
         {{"name", cfg.wavelet.name},
          {"L", cfg.wavelet.L},
          {"degree", cfg.wavelet.degree},
          {"taps", cfg.wavelet.taps}}},
        {"alpha", cfg.alpha},
        {"selector",
         {{"T", cfg.selector.T},
          {"window_h", cfg.selector.window_h},
          {"window_w", cfg.selector.window_w},
          {"stride_y", cfg.selector.stride_y},
          {"stride_x", cfg.selector.stride_x},
          {"mean_lo", cfg.selector.mean_lo},
          {"mean_hi", cfg.selector.mean_hi}}},
        {"morph",
         {{"mu", cfg.morph.mu},
          {"range_lo", cfg.morph.range_lo},
          {"range_hi", cfg.morph.range_hi},
          {"zero_weights_excluded", cfg.morph.zero_weights_excluded}}},
        {"ablation",
         {{"disable_branch1", cfg.ablation.disable_branch1},
          {"disable_branch2", cfg.ablation.disable_branch2},
          {"disable_selector", cfg.ablation.disable_selector}}},
        {"ed_fusion", ed_fusion_name(cfg.ed_fusion)},
    };
}

void write_manifest(const std::string& path, ordered_json manifest, double wall_ms) {
    manifest["timing"] = ordered_json{{"wall_ms", wall_ms}};
    write_text_atomic(path, manifest.dump(2) + "\n");
}

bool has_image_ext(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".pgm";
}

std::vector<fs::path> list_images(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && has_image_ext(entry.path())) out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

// Truth images are matched by filename stem so a PNG input can pair with a
// PGM label and vice versa.
std::optional<fs::path> find_truth(const std::string& truth_dir, const std::string& stem) {
    for (const char* ext : {".png", ".pgm", ".PNG", ".PGM"}) {
        fs::path candidate = fs::path(truth_dir) / (stem + ext);
        if (fs::is_regular_file(candidate)) return candidate;
    }
    return std::nullopt;
}

struct VariantSpec {
    std::string op;  // operator column value
    Ablation ablation;
};

VariantSpec resolve_variant(const std::string& token) {
    if (token == "full") return {"edbsw", {}};
    if (token == "woI") return {"edbsw-woI", {.disable_branch1 = true}};
    if (token == "woIII") return {"edbsw-woIII", {.disable_selector = true}};
    if (token == "woI-II")
        return {"edbsw-woI-II", {.disable_branch1 = true, .disable_branch2 = true}};
    throw ParamError("unknown ablation variant '" + token +
                     "' (want full | woI | woIII | woI-II)");
}

// One (operator, wavelet) cell of the comparison matrix. Kernel baselines do
// not use the wavelet, but the matrix is run literally so the row count is
// always images x operators x wavelets.
EdgeMap run_operator(const std::string& op, const ImageGrid& img,
                     const std::string& wavelet, const PipelineConfig& base) {
    if (op == "edbsw" || op.rfind("edbsw-", 0) == 0) {
        PipelineConfig cfg = base;
        cfg.wavelet.name = wavelet;
        if (op != "edbsw") cfg.ablation = resolve_variant(op.substr(6)).ablation;
        return ablate(img, cfg);
    }
    BaselineParams params;
    params.wtmm_bank = wavelet;
    return run_baseline(op, img, params);
}

struct ReportRow {
    std::string image_id;
    std::string op;
    std::string wavelet;
    MetricsReport metrics;
    double wall_ms = 0.0;
};

struct ItemStatus {
    std::string image_id;
    std::string path;
    std::string status;  // "ok" or "error: ..."
};

std::string render_csv(std::vector<ReportRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
        return std::tie(a.image_id, a.op, a.wavelet) < std::tie(b.image_id, b.op, b.wavelet);
    });
    std::string csv = "image_id,operator,wavelet,mse,psnr_db,ssim,entropy,wall_ms\n";
    for (const ReportRow& r : rows) {
        csv += r.image_id + ',' + r.op + ',' + r.wavelet + ',';
        csv += fmt6(r.metrics.mse) + ',' + fmt6(r.metrics.psnr_db) + ',';
        csv += fmt6(r.metrics.ssim) + ',' + fmt6(r.metrics.entropy) + ',';
        csv += fmt6(r.wall_ms) + '\n';
    }
    return csv;
}

int resolve_jobs(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("EDBSW_JOBS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
    }
    return 1;
}

// Work-stealing loop over [0, n) with at most `jobs` threads. Results land
// in caller-owned per-index slots, so output assembly stays deterministic.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    const std::size_t lanes = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    for (std::size_t lane = 0; lane < lanes; ++lane)
        workers.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        }));
    for (auto& w : workers) w.get();
}

// ---------------------------------------------------------------------------
// detect
// ---------------------------------------------------------------------------

struct DetectOpts {
    std::string input;
    std::string output;
    std::string trace_dir;
    PipelineFlags flags;
};

void dump_trace(const PipelineTrace& trace, const std::string& dir) {
    fs::create_directories(dir);
    const std::pair<const char*, const ImageGrid*> items[] = {
        {"E_d", &trace.E_d}, {"E_h", &trace.E_h}, {"E_l", &trace.E_l}, {"E_m", &trace.E_m},
        {"CH", &trace.CH},   {"CV", &trace.CV},   {"CD", &trace.CD},   {"M_f", &trace.M_f},
        {"E_r", &trace.E_r}, {"F_d", &trace.F_d}, {"G", &trace.G},     {"E_u", &trace.E_u},
    };
    for (const auto& [name, grid] : items) {
        if (grid->size() == 0) continue;  // ablations leave skipped maps empty
        // Subband intermediates have arbitrary scale; max-normalize everything
        // uniformly so each dump uses the full 8-bit range.
        write_png(normalize_by_max(*grid), dir + "/" + std::string(name) + ".png");
    }
}

int cmd_detect(const DetectOpts& opts) {
    const auto t0 = Clock::now();
    const PipelineConfig cfg = materialize_config(opts.flags);
    const ImageGrid img = read_image(opts.input);
    auto [edge, trace] = edbsw_detect(img, cfg);
    if (fs::path(opts.output).extension() == ".pgm")
        write_pgm(edge, opts.output);
    else
        write_png(edge, opts.output);
    if (!opts.trace_dir.empty()) dump_trace(trace, opts.trace_dir);

    ordered_json manifest{
        {"command", "detect"},
        {"inputs", {opts.input}},
        {"output", opts.output},
        {"trace_dir", opts.trace_dir},
        {"config", config_json(cfg)},
        {"items",
         {ordered_json{{"image_id", fs::path(opts.input).stem().string()},
                       {"path", opts.input},
                       {"status", "ok"}}}},
    };
    write_manifest(opts.output + ".manifest.json", std::move(manifest), elapsed_ms(t0));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// compare / ablate (shared batch driver)
// ---------------------------------------------------------------------------

struct BatchOpts {
    std::string input_dir;
    std::string truth_dir;
    std::string output;
    std::vector<std::string> operators;
    std::vector<std::string> wavelets;
    int jobs = 0;
    PipelineFlags flags;
};

int run_batch(const char* command, const BatchOpts& opts) {
    const auto t0 = Clock::now();
    const PipelineConfig cfg = materialize_config(opts.flags);
    if (opts.operators.empty()) throw ParamError("operator list must not be empty");
    if (opts.wavelets.empty()) throw ParamError("wavelet list must not be empty");
    const std::vector<fs::path> files = list_images(opts.input_dir);
    if (files.empty()) throw IoError("no .png/.pgm images in " + opts.input_dir);
    const int jobs = resolve_jobs(opts.jobs);

    // Reference policy: ground truth when provided, otherwise the full
    // pipeline's own map under the first listed wavelet.
    const bool has_truth = !opts.truth_dir.empty();
    const std::string reference_name =
        has_truth ? "ground_truth" : "edbsw[" + opts.wavelets.front() + "]";

    std::vector<std::vector<ReportRow>> row_slots(files.size());
    std::vector<ItemStatus> statuses(files.size());

    parallel_for(files.size(), jobs, [&](std::size_t i) {
        const fs::path& path = files[i];
        ItemStatus& st = statuses[i];
        st.image_id = path.stem().string();
        st.path = path.string();
        ImageGrid img, reference;
        try {
            img = read_image(path.string());
            if (has_truth) {
                auto truth_path = find_truth(opts.truth_dir, st.image_id);
                if (!truth_path)
                    throw IoError("no ground-truth image for '" + st.image_id + "' in " +
                                  opts.truth_dir);
                reference = read_image(truth_path->string());
                require_same_size(img, reference, "ground truth");
            } else {
                PipelineConfig ref_cfg = cfg;
                ref_cfg.wavelet.name = opts.wavelets.front();
                ref_cfg.ablation = {};
                reference = edbsw_detect(img, ref_cfg).first;
            }
        } catch (const std::exception& e) {
            st.status = std::string("error: ") + e.what();
            return;
        }
        std::string errors;
        for (const std::string& wavelet : opts.wavelets) {
            for (const std::string& op : opts.operators) {
                try {
                    const auto cell0 = Clock::now();
                    EdgeMap edge = run_operator(op, img, wavelet, cfg);
                    const double wall = elapsed_ms(cell0);
                    MetricsReport m = evaluate_pair(reference, edge);
                    m.operator_name = op;
                    m.image_id = st.image_id;
                    row_slots[i].push_back({st.image_id, op, wavelet, m, wall});
                } catch (const std::exception& e) {
                    errors += std::string(errors.empty() ? "" : "; ") + op + "/" + wavelet +
                              ": " + e.what();
                }
            }
        }
        st.status = errors.empty() ? "ok" : "error: " + errors;
    });

    std::vector<ReportRow> rows;
    for (const auto& slot : row_slots) rows.insert(rows.end(), slot.begin(), slot.end());
    write_text_atomic(opts.output, render_csv(std::move(rows)));

    ordered_json manifest{
        {"command", command},
        {"input_dir", opts.input_dir},
        {"truth_dir", opts.truth_dir},
        {"output", opts.output},
        {"operators", opts.operators},
        {"wavelets", opts.wavelets},
        {"mse_reference", reference_name},
        {"jobs", jobs},
        {"config", config_json(cfg)},
    };
    ordered_json items = ordered_json::array();
    for (const ItemStatus& st : statuses)
        items.push_back(ordered_json{
            {"image_id", st.image_id}, {"path", st.path}, {"status", st.status}});
    manifest["items"] = std::move(items);
    write_manifest(opts.output + ".manifest.json", std::move(manifest), elapsed_ms(t0));
    return kExitOk;
}

// ---------------------------------------------------------------------------
// filters
// ---------------------------------------------------------------------------

struct FiltersOpts {
    std::string wavelet = "bcssw";
    int L = 4;
    int degree = 10;
    int taps = 15;
    std::string output;  // empty = stdout
};

int cmd_filters(const FiltersOpts& opts) {
    const auto t0 = Clock::now();
    PRReport report;
    FilterBank bank = bank_by_name(opts.wavelet, opts.L, opts.degree, opts.taps, &report);
    const std::string json = filterbank_json(bank, report);
    if (opts.output.empty()) {
        std::cout << json;
        return kExitOk;
    }
    write_text_atomic(opts.output, json);
    ordered_json manifest{
        {"command", "filters"},
        {"output", opts.output},
        {"wavelet",
         {{"name", opts.wavelet}, {"L", opts.L}, {"degree", opts.degree}, {"taps", opts.taps}}},
        {"pr_max_deviation", report.max_deviation},
    };
    write_manifest(opts.output + ".manifest.json", std::move(manifest), elapsed_ms(t0));
    return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"EDBSW edge detection: special-spline wavelet + anti-noise morphology"};
    app.require_subcommand(1);

    DetectOpts detect;
    CLI::App* cmd_d = app.add_subcommand("detect", "detect edges in one image");
    cmd_d->add_option("input", detect.input, "input image (PNG or binary PGM)")->required();
    cmd_d->add_option("-o,--output", detect.output, "output edge map (PNG; .pgm writes PGM)")
        ->required();
    cmd_d->add_option("--trace-dir", detect.trace_dir,
                      "dump every pipeline intermediate as PNG into this directory");
    add_pipeline_flags(cmd_d, detect.flags, true);

    BatchOpts compare;
    compare.operators = {"sobel", "prewitt", "canny", "wtmm", "edbsw"};
    compare.wavelets = {"bcssw"};
    CLI::App* cmd_c = app.add_subcommand("compare", "run an operator x wavelet matrix over a directory");
    cmd_c->add_option("-i,--input", compare.input_dir, "directory of input images")->required();
    cmd_c->add_option("--truth", compare.truth_dir, "directory of ground-truth edge maps (matched by stem)");
    cmd_c->add_option("-o,--output", compare.output, "output CSV path")->required();
    cmd_c->add_option("--operators", compare.operators,
                      "comma-separated: sobel | prewitt | canny | wtmm | edbsw")
        ->delimiter(',');
    cmd_c->add_option("--wavelets", compare.wavelets, "comma-separated wavelet names")
        ->delimiter(',');
    cmd_c->add_option("-j,--jobs", compare.jobs, "parallel image jobs (default: EDBSW_JOBS or 1)");
    add_pipeline_flags(cmd_c, compare.flags, false);

    FiltersOpts filters;
    CLI::App* cmd_f = app.add_subcommand("filters", "export a filter bank as JSON");
    cmd_f->add_option("--wavelet", filters.wavelet, "bank name (bcssw derives on the fly)");
    cmd_f->add_option("--L", filters.L, "vanishing-moment sum (bcssw)");
    cmd_f->add_option("--degree", filters.degree, "cosine-fit degree (bcssw)");
    cmd_f->add_option("--taps", filters.taps, "truncation length (bcssw)");
    cmd_f->add_option("-o,--output", filters.output, "output JSON path (default: stdout)");

    BatchOpts ablate_opts;
    std::vector<std::string> variants = {"full", "woI", "woIII", "woI-II"};
    CLI::App* cmd_a = app.add_subcommand("ablate", "run the ablation matrix over a directory");
    cmd_a->add_option("-i,--input", ablate_opts.input_dir, "directory of input images")->required();
    cmd_a->add_option("--truth", ablate_opts.truth_dir, "directory of ground-truth edge maps");
    cmd_a->add_option("-o,--output", ablate_opts.output, "output CSV path")->required();
    cmd_a->add_option("--variants", variants, "comma-separated: full | woI | woIII | woI-II")
        ->delimiter(',');
    cmd_a->add_option("-j,--jobs", ablate_opts.jobs, "parallel image jobs (default: EDBSW_JOBS or 1)");
    add_pipeline_flags(cmd_a, ablate_opts.flags, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (cmd_d->parsed()) return cmd_detect(detect);
        if (cmd_c->parsed()) return run_batch("compare", compare);
        if (cmd_f->parsed()) return cmd_filters(filters);
        if (cmd_a->parsed()) {
            if (variants.empty()) throw ParamError("ablation variant list must not be empty");
            ablate_opts.operators.clear();
            for (const std::string& v : variants)
                ablate_opts.operators.push_back(resolve_variant(v).op);
            ablate_opts.wavelets = {ablate_opts.flags.wavelet};
            return run_batch("ablate", ablate_opts);
        }
    } catch (const PipelineError& e) {
        // what() already carries the "[stage] message" form.
        std::cerr << "pipeline error " << e.what() << "\n";
        return kExitPipelineError;
    } catch (const FilterConstructionError& e) {
        std::cerr << "filter construction failed: " << e.what() << " (max deviation "
                  << e.deviation() << ")\n";
        return kExitFilterError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (...) {
        std::cerr << "error: unknown failure\n";
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace edbsw::cli
