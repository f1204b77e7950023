#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "codi/codi_m.hpp"
#include "codi/codi_s.hpp"
#include "codi/diffusion.hpp"
#include "codi/fixtures.hpp"
#include "codi/pipeline.hpp"
#include "codi/recipe.hpp"
#include "codi/size_grouping.hpp"

namespace py = pybind11;
using namespace codi;

namespace {

ScalarField field_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw ParamError("expected a 2-D array");
    ScalarField f(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::copy(arr.data(), arr.data() + f.size(), f.data.begin());
    return f;
}

py::array_t<double> array_from_field(const ScalarField& f) {
    py::array_t<double> arr({f.height, f.width});
    std::copy(f.data.begin(), f.data.end(), arr.mutable_data());
    return arr;
}

BinaryMask mask_from_array(py::array_t<bool, py::array::c_style | py::array::forcecast> arr) {
    if (arr.ndim() != 2) throw ParamError("expected a 2-D mask");
    BinaryMask m(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    for (size_t i = 0; i < m.data.size(); ++i) m.data[i] = arr.data()[i] ? 1 : 0;
    return m;
}

RgbImage rgb_from_gray(const ScalarField& f) {
    RgbImage img(f.width, f.height);
    for (size_t i = 0; i < f.size(); ++i) {
        const double v = std::round(f.data[i]);
        const auto u = static_cast<uint8_t>(v < 0 ? 0 : (v > 255 ? 255 : v));
        img.r[i] = img.g[i] = img.b[i] = u;
    }
    return img;
}

}  // namespace

PYBIND11_MODULE(_codi, m) {
    m.doc() = "Object counting by diffused index";

    py::register_exception<Error>(m, "CodiError");

    m.def("gen_fixture", [](const std::string& name) { return array_from_field(gen_fixture(name)); },
          py::arg("name"));

    m.def(
        "count",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> image,
           const std::string& config_text) {
            const PipelineConfig cfg = parse_config(config_text);
            const RunReport report = run_pipeline_on(rgb_from_gray(field_from_array(image)), cfg);
            py::dict out;
            out["count"] = report.count;
            out["count_min"] = report.count_min;
            out["count_max"] = report.count_max;
            std::vector<int> counts;
            for (const auto& t : report.trials) counts.push_back(t.count);
            out["counts"] = counts;
            out["mean_seconds"] = report.mean_seconds;
            out["sizes"] = report.object_sizes;
            out["report"] = report.report_text;
            return out;
        },
        py::arg("image"), py::arg("config") = "",
        "Run the full pipeline on a grayscale image array; config is a key=value document.");

    m.def(
        "diffuse",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> weight,
           py::array_t<bool, py::array::c_style | py::array::forcecast> mask, int n1, int n2,
           int d, int l, int p, uint64_t rng_seed, int max_iters, double r_stop, double theta,
           double mu, double eta) {
            const ScalarField g_field = field_from_array(weight);
            const EdgeWeight g = EdgeWeight::from_field(g_field);
            SeedSpec spec;
            spec.n1 = n1;
            spec.n2 = n2;
            spec.d = d;
            spec.l = l;
            spec.p = p;
            spec.rng_seed = rng_seed;
            const SeedImage seed = make_seed_image(spec, g_field.width, g_field.height);
            SolverParams params;
            params.max_iters = max_iters;
            params.r_stop = r_stop;
            params.theta = theta;
            params.mu = mu;
            params.eta = eta;
            const DiffusionState state = run_diffusion(seed, g, mask_from_array(mask), params);
            py::list channels;
            for (const auto& ch : state.U.channels) channels.append(array_from_field(ch));
            py::dict out;
            out["channels"] = channels;
            out["iterations"] = state.k;
            out["energy"] = state.energy_trace();
            return out;
        },
        py::arg("weight"), py::arg("mask"), py::arg("n1"), py::arg("n2"), py::arg("d") = 2,
        py::arg("l") = 6, py::arg("p") = 1, py::arg("rng_seed") = 0, py::arg("max_iters") = 100,
        py::arg("r_stop") = 0.05, py::arg("theta") = 1.0, py::arg("mu") = 5e-5,
        py::arg("eta") = 1e-4,
        "Seed and diffuse over an edge-weight array; returns the index channels.");

    m.def(
        "count_peaks",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> U,
           py::array_t<bool, py::array::c_style | py::array::forcecast> mask, double sigma,
           int r) {
            IndexHistogram h = build_histogram(field_from_array(U), mask_from_array(mask));
            h = smooth_histogram(h, sigma, r);
            const PeakCount peaks = count_peaks(h);
            return py::make_tuple(peaks.K, peaks.minima);
        },
        py::arg("U"), py::arg("mask"), py::arg("sigma") = 0.6, py::arg("r") = 5,
        "Scalar counting: histogram, Gaussian smoothing, local-maximum count.");

    m.def(
        "dbscan",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> points, double eps,
           int min_pts) {
            if (points.ndim() != 2) throw ParamError("expected an n x p point array");
            PointSet pts;
            pts.dim = static_cast<int>(points.shape(1));
            const size_t n = static_cast<size_t>(points.shape(0));
            pts.coords.assign(points.data(), points.data() + n * static_cast<size_t>(pts.dim));
            pts.origin.assign(n, {0, 0});
            const ClusterResult result = dbscan(pts, eps, min_pts);
            py::dict out;
            out["labels"] = result.labels;
            out["k"] = result.K;
            out["sizes"] = result.sizes;
            out["noise"] = result.noise_count;
            return out;
        },
        py::arg("points"), py::arg("eps") = 1.1, py::arg("min_pts") = 15);

    m.def(
        "regularized_kmeans",
        [](const std::vector<double>& sizes, double lam) {
            const SizeGrouping g = regularized_kmeans(sizes, lam);
            py::list groups;
            for (const auto& grp : g.groups) {
                groups.append(py::make_tuple(grp.centroid, grp.count));
            }
            py::dict out;
            out["k"] = g.k;
            out["groups"] = groups;
            out["energy"] = g.energy;
            return out;
        },
        py::arg("sizes"), py::arg("lam"));

    m.def(
        "lambda_sweep",
        [](const std::vector<double>& sizes, const std::vector<double>& grid) {
            const LambdaSweep sweep =
                lambda_sweep(sizes, grid.empty() ? default_lambda_grid() : grid);
            py::list plateaus;
            for (const auto& p : sweep.plateaus) {
                plateaus.append(py::make_tuple(p.k, p.lambda_lo, p.lambda_hi, p.width()));
            }
            py::dict out;
            out["lambdas"] = sweep.lambdas;
            out["ks"] = sweep.ks;
            out["plateaus"] = plateaus;
            return out;
        },
        py::arg("sizes"), py::arg("grid") = std::vector<double>{});
}
