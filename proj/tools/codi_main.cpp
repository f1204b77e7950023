#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "codi/fixtures.hpp"
#include "codi/image_io.hpp"
#include "codi/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw codi::IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> read_sizes_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw codi::IoError("cannot open " + path);
    std::vector<double> sizes;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto begin = item.find_first_not_of(" \t\r");
            if (begin == std::string::npos) continue;
            try {
                sizes.push_back(std::stod(item));
            } catch (const std::exception&) {
                // Header row or stray text; skip.
            }
        }
    }
    if (sizes.empty()) throw codi::ParamError("no sizes found in " + path);
    return sizes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"codi - count objects in images by diffused index"};
    app.require_subcommand(1);

    // count
    auto* count = app.add_subcommand("count", "run the counting pipeline on an image");
    std::string image_path, config_path;
    std::vector<std::string> overrides;
    count->add_option("image", image_path, "input image (PGM/PPM/PNG)")->required();
    count->add_option("--config", config_path, "key=value config file");
    count->add_option("--set", overrides, "config override, key=value (repeatable)");

    // gen-fixture
    auto* gen = app.add_subcommand("gen-fixture", "write a synthetic test image");
    std::string fixture_name, fixture_out;
    gen->add_option("name", fixture_name,
                    "two-squares-{a,b,c}, ten-squares, hexagons, three-cells, object-grid")
        ->required();
    gen->add_option("out", fixture_out, "output path (.pgm)")->required();

    // group
    auto* group = app.add_subcommand("group", "size-group a list of object sizes");
    std::string sizes_path, grid_spec = "1e2:1e6:60";
    group->add_option("--sizes", sizes_path, "CSV of object sizes")->required();
    group->add_option("--lambda-grid", grid_spec, "lo:hi:count (log-spaced) or comma list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*count) {
            codi::PipelineConfig cfg;
            if (!config_path.empty()) cfg = codi::parse_config(read_file(config_path));
            for (const auto& entry : overrides) {
                const auto eq = entry.find('=');
                if (eq == std::string::npos) {
                    throw codi::ConfigError("--set expects key=value, got: " + entry);
                }
                codi::apply_config_entry(cfg, entry.substr(0, eq), entry.substr(eq + 1));
            }
            cfg.input = image_path;
            cfg.validate();
            const codi::RunReport report = codi::run_pipeline(cfg);
            std::cout << report.report_text;
        } else if (*gen) {
            codi::save_field(codi::gen_fixture(fixture_name), fixture_out);
            std::cout << "wrote " << fixture_out << "\n";
        } else if (*group) {
            codi::PipelineConfig grid_holder;
            codi::apply_config_entry(grid_holder, "lambda_grid", grid_spec);
            const auto sizes = read_sizes_csv(sizes_path);
            const codi::LambdaSweep sweep = codi::lambda_sweep(sizes, grid_holder.lambda_grid);
            std::cout << "lambda,k\n";
            for (size_t i = 0; i < sweep.lambdas.size(); ++i) {
                std::cout << sweep.lambdas[i] << "," << sweep.ks[i] << "\n";
            }
            std::cout << "\nplateaus (widest first):\n";
            for (const auto& p : sweep.plateaus) {
                std::cout << "  k=" << p.k << "  lambda in [" << p.lambda_lo << ", "
                          << p.lambda_hi << "]  width " << p.width() << "\n";
            }
            if (!sweep.plateaus.empty()) {
                const auto g = codi::regularized_kmeans(sizes, sweep.plateaus.front().lambda_lo);
                std::cout << "\ngrouping at lambda=" << g.lambda << ":\n";
                std::cout << "  I_i  c_i  |I_i|\n";
                for (size_t i = 0; i < g.groups.size(); ++i) {
                    std::cout << "  " << i + 1 << "  " << g.groups[i].centroid << "  "
                              << g.groups[i].count << "\n";
                }
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
