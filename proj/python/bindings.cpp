#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "toporad/complex.hpp"
#include "toporad/growth.hpp"
#include "toporad/io.hpp"
#include "toporad/persistence.hpp"
#include "toporad/stats.hpp"
#include "toporad/texture.hpp"
#include "toporad/topo_stats.hpp"

namespace py = pybind11;
using namespace toporad;

namespace {

GrayImage image_from_array(const py::array_t<uint16_t, py::array::c_style | py::array::forcecast>& a,
                           int maxval) {
    if (a.ndim() != 2) throw Error("expected a 2D array");
    std::vector<uint16_t> values(a.data(), a.data() + a.size());
    return GrayImage(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)),
                     std::move(values), maxval);
}

PointCloud2D cloud_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(1) != 2) throw Error("expected an (n, 2) array");
    PointCloud2D cloud;
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        cloud.points.push_back({a.at(i, 0), a.at(i, 1)});
    return cloud;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Topological radiomics toolkit: persistence barcodes, barcode "
              "statistics, GLCM texture features, tumour-growth simulation.";

    py::class_<Interval>(m, "Interval")
        .def_readonly("dim", &Interval::dim)
        .def_readonly("birth", &Interval::birth)
        .def_readonly("death", &Interval::death)
        .def_readonly("generator", &Interval::generator)
        .def("__repr__", [](const Interval& i) {
            return "Interval(dim=" + std::to_string(i.dim) + ", birth=" + std::to_string(i.birth) +
                   ", death=" + std::to_string(i.death) + ")";
        });

    py::class_<Barcode>(m, "Barcode")
        .def_readonly("intervals", &Barcode::intervals)
        .def_readonly("t_max", &Barcode::t_max)
        .def("count", &Barcode::count, py::arg("dim"));

    m.def(
        "image_barcode",
        [](const py::array_t<uint16_t, py::array::c_style | py::array::forcecast>& image,
           int maxval) { return compute_persistence(lower_star_filtration(image_from_array(image, maxval))); },
        py::arg("image"), py::arg("maxval") = 0,
        "Lower-star persistence barcode of a 2D intensity array.");

    m.def(
        "cloud_barcode",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& points,
           double t_max, size_t max_points) {
            return compute_persistence(rips_filtration(cloud_from_array(points), t_max, max_points));
        },
        py::arg("points"), py::arg("t_max"), py::arg("max_points") = 5000,
        "Vietoris-Rips persistence barcode of an (n, 2) point array.");

    m.def("persistent_entropy", &persistent_entropy, py::arg("barcode"), py::arg("dim"));
    m.def("generator_entropy", &generator_entropy, py::arg("barcode"));
    m.def(
        "euler_characteristic",
        [](const Barcode& barcode, bool persistent_only) {
            return euler_characteristic(barcode, persistent_only ? EulerMode::persistent_only
                                                                 : EulerMode::all_intervals);
        },
        py::arg("barcode"), py::arg("persistent_only") = false);
    m.def("betti_curve", &betti_curve, py::arg("barcode"), py::arg("dim"), py::arg("thresholds"));

    m.def(
        "topo_features",
        [](const py::array_t<uint16_t, py::array::c_style | py::array::forcecast>& image,
           int maxval) {
            TopoFeatures f = topo_feature_vector(image_from_array(image, maxval));
            py::dict d;
            d["euler"] = f.euler;
            d["pe_h0"] = f.pe_h0;
            d["pe_h1"] = f.pe_h1;
            d["hgen"] = f.hgen;
            return d;
        },
        py::arg("image"), py::arg("maxval") = 0,
        "The four topological features of one patch.");

    m.def(
        "texture_features",
        [](const py::array_t<uint16_t, py::array::c_style | py::array::forcecast>& image,
           int levels, int maxval) {
            TextureFeatures f = haralick_features(compute_glcm(image_from_array(image, maxval), levels));
            py::dict d;
            d["contrast"] = f.contrast;
            d["correlation"] = f.correlation;
            d["homogeneity"] = f.homogeneity;
            d["energy"] = f.energy;
            return d;
        },
        py::arg("image"), py::arg("levels") = 32, py::arg("maxval") = 0,
        "GLCM contrast, correlation, homogeneity and energy of one patch.");

    m.def(
        "welch_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
            WelchResult r = welch_t_test(a, b);
            py::dict d;
            d["t"] = r.t;
            d["df"] = r.df;
            d["p"] = r.p;
            d["mean_a"] = r.mean_a;
            d["mean_b"] = r.mean_b;
            d["sd_a"] = r.sd_a;
            d["sd_b"] = r.sd_b;
            return d;
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "spearman",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            SpearmanResult r = spearman(x, y);
            return py::make_tuple(r.rho, r.p);
        },
        py::arg("x"), py::arg("y"));

    m.def(
        "growth_onsets",
        [](double alpha, double t_end, double kappa) {
            GrowthParams params;
            params.alpha = alpha;
            params.t_end = t_end;
            std::vector<GrowthState> frames = simulate(params);
            auto q = onset_analysis(frames, CellType::quiescent, kappa);
            auto n = onset_analysis(frames, CellType::necrotic, kappa);
            py::dict d;
            d["quiescent"] = q ? py::cast(*q) : py::none();
            d["necrotic"] = n ? py::cast(*n) : py::none();
            return d;
        },
        py::arg("alpha"), py::arg("t_end") = 20.0, py::arg("kappa") = 8.0,
        "First recorded frame with a non-empty sampled cloud per cell type.");

    m.def("load_grayscale", [](const std::string& path) {
        GrayImage image = load_grayscale(path);
        py::array_t<uint16_t> out({image.height, image.width});
        std::copy(image.values.begin(), image.values.end(), out.mutable_data());
        return out;
    });
}
