#include "codi/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "codi/image_io.hpp"
#include "codi/recipe.hpp"

namespace codi {

void PipelineConfig::validate() const {
    if (!(downsample_factor > 0.0 && downsample_factor <= 1.0)) {
        throw ConfigError("downsample must be in (0,1]");
    }
    if (counter == Counter::Scalar && p != 1) {
        throw ConfigError("counter=scalar requires p=1");
    }
    if (counter == Counter::Multi && p < 3) {
        throw ConfigError("counter=multi requires p>=3");
    }
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (!(sigma > 0.0)) throw ConfigError("sigma must be > 0");
    if (r < 1) throw ConfigError("r must be >= 1");
    if (!(eps > 0.0)) throw ConfigError("eps must be > 0");
    if (min_pts < 1) throw ConfigError("minpts must be >= 1");
    if (border_width < 1) throw ConfigError("border must be >= 1");
    solver.validate();
}

SeedSpec PipelineConfig::resolve_seed_spec(int width, int height) const {
    SeedSpec spec;
    spec.d = d;
    spec.l = l;
    spec.p = p;
    spec.rng_seed = rng_seed;
    const auto fit = [&](int extent) {
        const int usable = extent - 2 * border_width;
        if (usable < d) throw ConfigError("seed layout does not fit the image");
        return (usable - d) / (d + l) + 1;
    };
    spec.n1 = n1 > 0 ? n1 : fit(height);
    spec.n2 = n2 > 0 ? n2 : fit(width);
    return spec;
}

namespace {

double to_real(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + value);
    }
}

int to_int(const std::string& key, const std::string& value) {
    const double v = to_real(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v) throw ConfigError("'" + key + "' expects an integer");
    return i;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "no") return false;
    throw ConfigError("'" + key + "' expects a boolean");
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// "lo:hi:count" log-spaced, or an explicit comma list.
std::vector<double> parse_lambda_grid(const std::string& value) {
    std::vector<double> grid;
    if (value.find(':') != std::string::npos) {
        std::istringstream ss(value);
        std::string lo_s, hi_s, n_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
            !std::getline(ss, n_s)) {
            throw ConfigError("lambda_grid expects lo:hi:count or a comma list");
        }
        const double lo = to_real("lambda_grid", lo_s);
        const double hi = to_real("lambda_grid", hi_s);
        const int n = to_int("lambda_grid", n_s);
        if (!(lo > 0.0 && hi > lo && n >= 2)) throw ConfigError("bad lambda_grid range");
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / (n - 1);
            grid.push_back(std::pow(10.0, std::log10(lo) + t * (std::log10(hi) - std::log10(lo))));
        }
    } else {
        std::istringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) grid.push_back(to_real("lambda_grid", item));
        std::sort(grid.begin(), grid.end());
    }
    return grid;
}

}  // namespace

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "input") cfg.input = value;
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "downsample") cfg.downsample_factor = to_real(key, value);
    else if (key == "recipe") cfg.recipe = value;
    else if (key == "n1") cfg.n1 = to_int(key, value);
    else if (key == "n2") cfg.n2 = to_int(key, value);
    else if (key == "d") cfg.d = to_int(key, value);
    else if (key == "l") cfg.l = to_int(key, value);
    else if (key == "p") { cfg.p = to_int(key, value); cfg.p_explicit = true; }
    else if (key == "rng_seed") cfg.rng_seed = static_cast<uint64_t>(to_real(key, value));
    else if (key == "mu") cfg.solver.mu = to_real(key, value);
    else if (key == "theta") cfg.solver.theta = to_real(key, value);
    else if (key == "eta") cfg.solver.eta = to_real(key, value);
    else if (key == "a") cfg.solver.a = to_real(key, value);
    else if (key == "b") cfg.solver.b = to_real(key, value);
    else if (key == "r_stop") cfg.solver.r_stop = to_real(key, value);
    else if (key == "max_iters") cfg.solver.max_iters = to_int(key, value);
    else if (key == "fidelity") {
        if (value == "seeds") cfg.solver.fidelity_on_seeds = true;
        else if (value == "complement") cfg.solver.fidelity_on_seeds = false;
        else throw ConfigError("fidelity expects 'seeds' or 'complement'");
    } else if (key == "border") cfg.border_width = to_int(key, value);
    else if (key == "counter") {
        if (value == "scalar") cfg.counter = PipelineConfig::Counter::Scalar;
        else if (value == "multi") cfg.counter = PipelineConfig::Counter::Multi;
        else throw ConfigError("counter expects 'scalar' or 'multi'");
        if (!cfg.p_explicit) cfg.p = cfg.counter == PipelineConfig::Counter::Scalar ? 1 : 4;
    } else if (key == "sigma") cfg.sigma = to_real(key, value);
    else if (key == "r") cfg.r = to_int(key, value);
    else if (key == "eps") cfg.eps = to_real(key, value);
    else if (key == "minpts") cfg.min_pts = to_int(key, value);
    else if (key == "trials") cfg.trials = to_int(key, value);
    else if (key == "group") cfg.group = to_bool(key, value);
    else if (key == "lambda_grid") cfg.lambda_grid = parse_lambda_grid(value);
    else throw ConfigError("unknown config key '" + key + "'");
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig cfg;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got: " + line);
        apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

namespace {

RgbImage downsample_rgb(const RgbImage& img, double factor) {
    if (factor == 1.0) return img;
    const auto plane = [&](const std::vector<uint8_t>& chan) {
        ScalarField f(img.width, img.height);
        for (size_t i = 0; i < f.size(); ++i) f.data[i] = chan[i];
        return downsample(f, factor);
    };
    const ScalarField r = plane(img.r), g = plane(img.g), b = plane(img.b);
    RgbImage out(r.width, r.height);
    for (size_t i = 0; i < r.size(); ++i) {
        out.r[i] = static_cast<uint8_t>(std::clamp(std::lround(r.data[i]), 0l, 255l));
        out.g[i] = static_cast<uint8_t>(std::clamp(std::lround(g.data[i]), 0l, 255l));
        out.b[i] = static_cast<uint8_t>(std::clamp(std::lround(b.data[i]), 0l, 255l));
    }
    return out;
}

void clear_mask_ring(BinaryMask& mask, int width) {
    for (int i = 0; i < mask.height; ++i) {
        for (int j = 0; j < mask.width; ++j) {
            const int dist = std::min({i, j, mask.height - 1 - i, mask.width - 1 - j});
            if (dist < width) mask.set(i, j, false);
        }
    }
}

int mode_count(const std::vector<TrialResult>& trials) {
    std::map<int, int> freq;
    for (const auto& t : trials) freq[t.count]++;
    int best = trials.front().count, best_freq = 0;
    for (const auto& [count, f] : freq) {
        if (f > best_freq) {
            best = count;
            best_freq = f;
        }
    }
    return best;
}

template <typename Fn>
auto at_stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(std::string("[") + name + "] " + e.what());
    }
}

void write_trace_csv(const std::string& path, const DiffusionState& state) {
    std::ofstream out(path);
    out << "k,channel,E_n,R_n,dU,dV,dLambda\n";
    for (size_t c = 0; c < state.trace.size(); ++c) {
        for (size_t k = 0; k < state.trace[c].size(); ++k) {
            const auto& rec = state.trace[c][k];
            out << k + 1 << "," << c + 1 << "," << rec.energy << "," << rec.ratio << ","
                << rec.du << "," << rec.dv << "," << rec.dlambda << "\n";
        }
    }
}

void write_groups_txt(const std::string& path, const LambdaSweep& sweep,
                      const SizeGrouping& grouping) {
    std::ofstream out(path);
    out << "lambda sweep (lambda k):\n";
    for (size_t i = 0; i < sweep.lambdas.size(); ++i) {
        out << "  " << sweep.lambdas[i] << " " << sweep.ks[i] << "\n";
    }
    out << "\nplateaus (k [lambda_lo, lambda_hi] width):\n";
    for (const auto& p : sweep.plateaus) {
        out << "  k=" << p.k << " [" << p.lambda_lo << ", " << p.lambda_hi << "] " << p.width()
            << "\n";
    }
    out << "\ngrouping at lambda=" << grouping.lambda << " (I_i c_i |I_i|):\n";
    for (size_t i = 0; i < grouping.groups.size(); ++i) {
        out << "  " << i + 1 << "  " << grouping.groups[i].centroid << "  "
            << grouping.groups[i].count << "\n";
    }
}

}  // namespace

RunReport run_pipeline_on(const RgbImage& input, const PipelineConfig& cfg) {
    cfg.validate();

    const RgbImage img = at_stage("downsample", [&] {
        return downsample_rgb(input, cfg.downsample_factor);
    });

    RecipeResult recipe = at_stage("weight", [&] { return eval_recipe(img, cfg.recipe); });
    at_stage("border", [&]() -> int {
        recipe.weight = EdgeWeight::from_field(
            add_border_outline(recipe.weight.g, cfg.border_width));
        clear_mask_ring(recipe.object_mask, cfg.border_width);
        return 0;
    });

    RunReport report;
    report.width = img.width;
    report.height = img.height;

    const SeedSpec base_spec = cfg.resolve_seed_spec(img.width, img.height);
    report.seed_report =
        at_stage("seed-rules", [&] { return check_seed_rules(base_spec, recipe.object_mask); });

    const bool want_artifacts = !cfg.output_dir.empty();
    if (want_artifacts) std::filesystem::create_directories(cfg.output_dir);
    const auto artifact = [&](const char* name) {
        return (std::filesystem::path(cfg.output_dir) / name).string();
    };

    for (int trial = 0; trial < cfg.trials; ++trial) {
        SeedSpec spec = base_spec;
        spec.rng_seed = cfg.rng_seed + static_cast<uint64_t>(trial);
        const auto t0 = std::chrono::steady_clock::now();

        const SeedImage seed =
            at_stage("seeding", [&] { return make_seed_image(spec, img.width, img.height); });
        const DiffusionState state = at_stage("diffusion", [&] {
            return run_diffusion(seed, recipe.weight, recipe.object_mask, cfg.solver);
        });

        int count = 0;
        if (cfg.counter == PipelineConfig::Counter::Scalar) {
            const auto result = at_stage("codi-s", [&] {
                IndexHistogram hist = build_histogram(state.U.channels[0], recipe.object_mask);
                hist = smooth_histogram(hist, cfg.sigma, cfg.r);
                const PeakCount peaks = count_peaks(hist);
                const ScalarField labels =
                    label_pixels_1d(state.U.channels[0], recipe.object_mask, peaks.minima);
                return std::tuple{hist, peaks, labels};
            });
            const auto& [hist, peaks, labels] = result;
            count = peaks.K;
            const auto sizes = label_sizes(labels, peaks.K);
            report.object_sizes.assign(sizes.begin() + 1, sizes.end());
            if (want_artifacts && trial == cfg.trials - 1) {
                std::ofstream csv(artifact("histogram.csv"));
                csv << "bin,count,smoothed\n";
                for (int bin = 0; bin < 256; ++bin) {
                    csv << bin << "," << hist.bins[static_cast<size_t>(bin)] << ","
                        << hist.smoothed[static_cast<size_t>(bin)] << "\n";
                }
                save_ppm(colorize_labels(labels), artifact("labels.ppm"));
                write_trace_csv(artifact("trace.csv"), state);
            }
        } else {
            const PointSet pts = PointSet::from_field(state.U, recipe.object_mask);
            const ClusterResult clusters = at_stage("codi-m", [&] {
                if (pts.size() == 0) throw EmptyDomainError("no masked pixels to cluster");
                return dbscan(pts, cfg.eps, cfg.min_pts);
            });
            count = clusters.K;
            report.object_sizes = clusters.sizes;
            if (want_artifacts && trial == cfg.trials - 1) {
                std::ofstream csv(artifact("clusters.csv"));
                csv << "row,col,label\n";
                for (size_t i = 0; i < pts.size(); ++i) {
                    csv << pts.origin[i].first << "," << pts.origin[i].second << ","
                        << clusters.labels[i] << "\n";
                }
                save_ppm(label_image_multi(clusters, pts, img.width, img.height),
                         artifact("labels.ppm"));
                write_trace_csv(artifact("trace.csv"), state);
            }
        }

        const auto t1 = std::chrono::steady_clock::now();
        report.trials.push_back(
            {count, spec.rng_seed, std::chrono::duration<double>(t1 - t0).count()});
    }

    report.count_min = report.trials.front().count;
    report.count_max = report.trials.front().count;
    double total_seconds = 0.0;
    for (const auto& t : report.trials) {
        report.count_min = std::min(report.count_min, t.count);
        report.count_max = std::max(report.count_max, t.count);
        total_seconds += t.seconds;
    }
    report.count = mode_count(report.trials);
    report.mean_seconds = total_seconds / static_cast<double>(report.trials.size());

    if (cfg.group && !report.object_sizes.empty()) {
        std::vector<double> sizes(report.object_sizes.begin(), report.object_sizes.end());
        const auto grid = cfg.lambda_grid.empty() ? default_lambda_grid() : cfg.lambda_grid;
        report.sweep = at_stage("grouping", [&] { return lambda_sweep(sizes, grid); });
        const double pick = report.sweep.plateaus.empty()
                                ? grid.front()
                                : report.sweep.plateaus.front().lambda_lo;
        report.grouping = regularized_kmeans(sizes, pick);
        if (want_artifacts) write_groups_txt(artifact("groups.txt"), report.sweep, report.grouping);
    }

    std::ostringstream text;
    text << "image: " << report.width << "x" << report.height << "\n"
         << "counter: " << (cfg.counter == PipelineConfig::Counter::Scalar ? "scalar" : "multi")
         << "\n"
         << "count: " << report.count << "\n";
    if (cfg.trials > 1) {
        text << "trials: " << cfg.trials << "  min: " << report.count_min
             << "  max: " << report.count_max << "  mode: " << report.count << "\n"
             << "counts:";
        for (const auto& t : report.trials) text << " " << t.count;
        text << "\n";
    }
    text << "mean seconds: " << report.mean_seconds << "\n";
    if (!report.seed_report.ok()) {
        text << "seed rule warnings:\n";
        for (const auto& v : report.seed_report.violations) {
            text << "  rule " << v.rule << ": " << v.detail << "\n";
        }
    }
    report.report_text = text.str();
    if (want_artifacts) {
        std::ofstream rep(artifact("report.txt"));
        rep << report.report_text;
    }
    return report;
}

RunReport run_pipeline(const PipelineConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("no input image configured");
    const RgbImage img = at_stage("load", [&] { return load_image(cfg.input); });
    return run_pipeline_on(img, cfg);
}

}  // namespace codi
