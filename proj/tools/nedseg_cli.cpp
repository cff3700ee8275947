// Command-line surface for the image-group similarity and segmentation
// pipeline: compare, segment, eval, histdemo, corpus.
//
// Exit codes: 0 success, 2 invalid arguments or inputs, 3 segmentation
// stopped by the iteration cap.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nedseg/image.hpp"
#include "nedseg/io.hpp"
#include "nedseg/mshi.hpp"
#include "nedseg/segmentation_eval.hpp"
#include "nedseg/similarity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitHitCap = 3;

nedseg::CriterionKind parse_criterion(const std::string& s) {
    if (s == "ned")
        return nedseg::CriterionKind::ned;
    if (s == "we" || s == "weak" || s == "weak-entropy")
        return nedseg::CriterionKind::weak_entropy;
    throw nedseg::Error("unknown criterion '" + s + "' (expected ned|we)");
}

nedseg::Connectivity parse_connectivity(int c) {
    if (c == 4)
        return nedseg::Connectivity::four;
    if (c == 8)
        return nedseg::Connectivity::eight;
    throw nedseg::Error("connectivity must be 4 or 8");
}

int run_compare(const std::string& a_path, const std::string& b_path,
                const std::string& index) {
    const auto a = nedseg::read_pgm(a_path);
    const auto b = nedseg::read_pgm(b_path);
    double value;
    if (index == "ned")
        value = nedseg::ned(a, b).value;
    else if (index == "weak")
        value = nedseg::weak_distance(a, b).value;
    else if (index == "ned-norm")
        value = nedseg::ned_normalized(a, b).value;
    else
        throw nedseg::Error("unknown index '" + index +
                            "' (expected ned|weak|ned-norm)");
    std::cout << nedseg::format_real(value) << '\n';
    return kExitOk;
}

struct SegmentOptions {
    std::string input;
    std::string output;
    nedseg::Bandwidths bandwidths;
    std::string criterion = "ned";
    std::optional<double> epsilon;
    std::size_t max_iterations = 500;
    std::string trace_path;
};

int run_segment(const SegmentOptions& opt) {
    const auto image = nedseg::read_pgm(opt.input);
    nedseg::StoppingRule rule;
    rule.kind = parse_criterion(opt.criterion);
    rule.epsilon = opt.epsilon.value_or(nedseg::default_epsilon(rule.kind));
    rule.max_iterations = opt.max_iterations;

    const auto result = nedseg::mshi_segment(image, opt.bandwidths, rule);
    nedseg::write_pgm(result.image, opt.output);
    if (!opt.trace_path.empty())
        nedseg::write_trace_csv(result.trace, opt.trace_path);
    std::cout << "iterations=" << result.trace.entries.size() << " terminated_by="
              << (result.trace.terminated_by == nedseg::Termination::threshold
                      ? "threshold"
                      : "cap")
              << '\n';
    return result.trace.terminated_by == nedseg::Termination::cap ? kExitHitCap
                                                                  : kExitOk;
}

int run_eval(const std::string& seg_path,
             const std::vector<std::string>& gt_paths,
             const std::string& metric, int connectivity) {
    const auto seg = nedseg::read_pgm(seg_path);
    const auto labels =
        nedseg::label_regions(seg, parse_connectivity(connectivity));
    nedseg::GroundTruthSet gts;
    for (const auto& p : gt_paths)
        gts.members.push_back(nedseg::read_labelmap(p));
    double value;
    if (metric == "ri")
        value = nedseg::rand_index(labels, gts.members.front());
    else if (metric == "pri")
        value = nedseg::pri(labels, gts);
    else if (metric == "npri")
        value = nedseg::npri(labels, gts);
    else
        throw nedseg::Error("unknown metric '" + metric +
                            "' (expected ri|pri|npri)");
    std::cout << nedseg::format_real(value) << '\n';
    return kExitOk;
}

// Emits four per-level histograms of the input against the scalar image of
// intensity s: the original, the truncated difference, the absolute
// difference, and the group (modular) difference.
int run_histdemo(const std::string& input, unsigned shift,
                 const std::string& prefix) {
    const auto a = nedseg::read_pgm(input);
    const auto s = nedseg::scalar_image(a.width(), a.height(), a.levels(),
                                        static_cast<nedseg::pixel_t>(shift));
    nedseg::write_histogram_csv(nedseg::histogram(a), prefix + "_original.csv");
    nedseg::write_histogram_csv(nedseg::histogram(nedseg::sub_truncate(a, s)),
                                prefix + "_truncated.csv");
    nedseg::write_histogram_csv(nedseg::histogram(nedseg::sub_abs(a, s)),
                                prefix + "_absolute.csv");
    nedseg::write_histogram_csv(nedseg::histogram(nedseg::sub_mod(a, s)),
                                prefix + "_group.csv");
    return kExitOk;
}

struct CorpusConfig {
    nedseg::Bandwidths bandwidths;
    std::string criterion = "ned";
    std::optional<double> epsilon;
    std::size_t max_iterations = 500;
    int connectivity = 4;
    std::string out_dir;
    std::string gt_dir;
};

CorpusConfig load_corpus_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw nedseg::IoError("cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw nedseg::IoError("malformed config " + path + ": " + e.what());
    }
    CorpusConfig cfg;
    cfg.bandwidths.range = j.value("hr", 15.0);
    cfg.bandwidths.spatial = j.value("hs", std::size_t{12});
    cfg.criterion = j.value("criterion", std::string("ned"));
    if (j.contains("eps"))
        cfg.epsilon = j["eps"].get<double>();
    cfg.max_iterations = j.value("max_iter", std::size_t{500});
    cfg.connectivity = j.value("connectivity", 4);
    cfg.out_dir = j.value("out_dir", std::string());
    cfg.gt_dir = j.value("gt_dir", std::string());
    return cfg;
}

// Ground truths for image <stem>.pgm are label maps named <stem>*.lm in
// the ground-truth directory.
std::vector<std::string> find_ground_truths(const fs::path& gt_dir,
                                            const std::string& stem) {
    std::vector<std::string> paths;
    if (gt_dir.empty() || !fs::is_directory(gt_dir))
        return paths;
    for (const auto& e : fs::directory_iterator(gt_dir)) {
        if (!e.is_regular_file() || e.path().extension() != ".lm")
            continue;
        if (e.path().filename().string().rfind(stem, 0) == 0)
            paths.push_back(e.path().string());
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

int run_corpus(const std::string& dir, const std::string& config_path) {
    const CorpusConfig cfg = load_corpus_config(config_path);
    nedseg::StoppingRule rule;
    rule.kind = parse_criterion(cfg.criterion);
    rule.epsilon = cfg.epsilon.value_or(nedseg::default_epsilon(rule.kind));
    rule.max_iterations = cfg.max_iterations;
    const auto conn = parse_connectivity(cfg.connectivity);

    const fs::path out_dir = cfg.out_dir.empty() ? fs::path(dir) : fs::path(cfg.out_dir);
    fs::create_directories(out_dir);
    const fs::path gt_dir = cfg.gt_dir.empty() ? fs::path(dir) : fs::path(cfg.gt_dir);

    std::vector<fs::path> inputs;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".pgm")
            inputs.push_back(e.path());
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty())
        throw nedseg::Error("no .pgm images in " + dir);

    std::ofstream summary(out_dir / "summary.csv");
    if (!summary)
        throw nedseg::IoError("cannot write summary.csv in " +
                              out_dir.string());
    summary << "image,criterion,iterations,ri,pri,npri\n";

    bool any_cap = false;
    for (const auto& path : inputs) {
        const auto image = nedseg::read_pgm(path);
        const auto result =
            nedseg::mshi_segment(image, cfg.bandwidths, rule);
        any_cap |= result.trace.terminated_by == nedseg::Termination::cap;
        const std::string stem = path.stem().string();
        nedseg::write_pgm(result.image, out_dir / (stem + "_seg.pgm"));
        nedseg::write_trace_csv(result.trace,
                                out_dir / (stem + "_trace.csv"));

        summary << stem << ','
                << nedseg::format_real(result.trace.entries.back().criterion)
                << ',' << result.trace.entries.size();

        const auto gt_paths = find_ground_truths(gt_dir, stem);
        if (!gt_paths.empty()) {
            const auto labels = nedseg::label_regions(result.image, conn);
            nedseg::GroundTruthSet gts;
            for (const auto& p : gt_paths)
                gts.members.push_back(nedseg::read_labelmap(p));
            summary << ','
                    << nedseg::format_real(
                           nedseg::rand_index(labels, gts.members.front()))
                    << ',' << nedseg::format_real(nedseg::pri(labels, gts));
            try {
                summary << ',' << nedseg::format_real(nedseg::npri(labels, gts));
            } catch (const nedseg::DegenerateNormalizationError&) {
                summary << ",";
            }
        } else {
            summary << ",,,";
        }
        summary << '\n';
        std::cout << stem << ": " << result.trace.entries.size()
                  << " iterations\n";
    }
    std::cout << "summary: " << (out_dir / "summary.csv").string() << '\n';
    return any_cap ? kExitHitCap : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Image-group similarity (NED) and mean shift iterative "
                 "segmentation"};
    app.require_subcommand(1);

    // compare
    std::string cmp_a, cmp_b, cmp_index = "ned";
    auto* compare = app.add_subcommand("compare",
                                       "Similarity index between two images");
    compare->add_option("A", cmp_a, "First PGM image")->required();
    compare->add_option("B", cmp_b, "Second PGM image")->required();
    compare->add_option("--index", cmp_index, "ned|weak|ned-norm");

    // segment
    SegmentOptions seg;
    auto* segment =
        app.add_subcommand("segment", "Mean shift iterative segmentation");
    segment->add_option("input", seg.input, "Input PGM image")->required();
    segment->add_option("--out", seg.output, "Output PGM path")->required();
    segment->add_option("--hr", seg.bandwidths.range, "Range bandwidth");
    segment->add_option("--hs", seg.bandwidths.spatial, "Spatial bandwidth");
    segment->add_option("--criterion", seg.criterion, "ned|we");
    double seg_eps = -1.0;
    auto* eps_opt = segment->add_option("--eps", seg_eps, "Stopping threshold");
    segment->add_option("--max-iter", seg.max_iterations, "Iteration cap");
    segment->add_option("--trace", seg.trace_path, "Trace CSV path");

    // eval
    std::string eval_seg, eval_metric = "ri";
    std::vector<std::string> eval_gts;
    int eval_conn = 4;
    auto* eval = app.add_subcommand("eval",
                                    "Score a segmentation against ground truth");
    eval->add_option("segmentation", eval_seg, "Segmented PGM image")
        ->required();
    eval->add_option("groundtruth", eval_gts, "Label-map files")->required();
    eval->add_option("--metric", eval_metric, "ri|pri|npri");
    eval->add_option("--connectivity", eval_conn, "4|8");

    // histdemo
    std::string hd_input, hd_prefix;
    unsigned hd_shift = 0;
    auto* histdemo = app.add_subcommand(
        "histdemo", "Histograms of the three subtraction regimes");
    histdemo->add_option("input", hd_input, "Input PGM image")->required();
    histdemo->add_option("--shift", hd_shift, "Scalar intensity")->required();
    histdemo->add_option("--out-prefix", hd_prefix, "Output CSV prefix")
        ->required();

    // corpus
    std::string corpus_dir, corpus_cfg;
    auto* corpus =
        app.add_subcommand("corpus", "Segment and score a directory of images");
    corpus->add_option("dir", corpus_dir, "Directory of .pgm images")
        ->required();
    corpus->add_option("--config", corpus_cfg, "JSON config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (compare->parsed())
            return run_compare(cmp_a, cmp_b, cmp_index);
        if (segment->parsed()) {
            if (eps_opt->count())
                seg.epsilon = seg_eps;
            return run_segment(seg);
        }
        if (eval->parsed())
            return run_eval(eval_seg, eval_gts, eval_metric, eval_conn);
        if (histdemo->parsed())
            return run_histdemo(hd_input, hd_shift, hd_prefix);
        if (corpus->parsed())
            return run_corpus(corpus_dir, corpus_cfg);
    } catch (const nedseg::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    return kExitBadInput;
}
