#include "esd/curve.hpp"
#include "esd/dp.hpp"
#include "esd/errors.hpp"
#include "esd/fft_rotation.hpp"
#include "esd/pipeline.hpp"
#include "esd/rotation.hpp"
#include "esd/srvf.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <optional>
#include <sstream>

namespace py = pybind11;
using namespace esd;

namespace {

// Points come in as (N, d) arrays; the core stores one point per column.
Curve make_curve(const Eigen::MatrixXd& points, std::optional<Eigen::VectorXd> partition,
                 std::optional<bool> closed) {
    Curve c;
    c.points = points.transpose();
    const int n = c.size();
    if (partition.has_value()) {
        c.partition = *partition;
    } else {
        c.partition = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    }
    if (closed.has_value()) {
        c.closed = *closed;
    } else if (n >= 2) {
        const Eigen::VectorXd lo = c.points.rowwise().minCoeff();
        const Eigen::VectorXd hi = c.points.rowwise().maxCoeff();
        const double gap = (c.points.col(0) - c.points.col(n - 1)).norm();
        c.closed = gap <= 1e-6 * (hi - lo).norm();
    }
    c.validate();
    return c;
}

PipelineConfig make_config(int itop, int iten, double tol, int layrs, int lstrp, bool use_fft,
                           bool both_directions, bool use_procedure1, int stride) {
    PipelineConfig cfg;
    cfg.itop = itop;
    cfg.iten = iten;
    cfg.tol = tol;
    cfg.dp.layrs = layrs;
    cfg.dp.lstrp = lstrp;
    cfg.use_fft = use_fft;
    cfg.try_both_directions = both_directions;
    cfg.use_procedure1 = use_procedure1;
    cfg.stride = stride;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_esd, m) {
    m.doc() = "Elastic shape distance and registration between curves in R^d";

    py::register_exception<Error>(m, "EsdError");

    py::class_<Curve>(m, "Curve")
        .def(py::init([](const Eigen::MatrixXd& points, std::optional<Eigen::VectorXd> partition,
                         std::optional<bool> closed) {
                 return make_curve(points, std::move(partition), closed);
             }),
             py::arg("points"), py::arg("partition") = std::nullopt,
             py::arg("closed") = std::nullopt,
             "Curve from an (N, d) point array; partition defaults to the "
             "uniform grid on [0, 1], closedness to endpoint proximity.")
        .def_property_readonly("points",
                               [](const Curve& c) { return Eigen::MatrixXd(c.points.transpose()); })
        .def_property_readonly("partition", [](const Curve& c) { return c.partition; })
        .def_property_readonly("closed", [](const Curve& c) { return c.closed; })
        .def_property_readonly("dim", &Curve::dim)
        .def("__len__", &Curve::size);

    py::class_<RegistrationResult>(m, "RegistrationResult")
        .def_property_readonly("distance", [](const RegistrationResult& r) { return r.distance; })
        .def_property_readonly("t0", [](const RegistrationResult& r) { return r.t0; })
        .def_property_readonly("rotation",
                               [](const RegistrationResult& r) { return r.rotation.matrix(); })
        .def_property_readonly("gamma", [](const RegistrationResult& r) { return r.gamma.gamma; })
        .def_property_readonly("partition",
                               [](const RegistrationResult& r) { return r.partition; })
        .def_property_readonly(
            "registered_curve1",
            [](const RegistrationResult& r) { return Eigen::MatrixXd(r.registered_curve1.transpose()); })
        .def_property_readonly(
            "registered_curve2",
            [](const RegistrationResult& r) { return Eigen::MatrixXd(r.registered_curve2.transpose()); })
        .def_property_readonly("direction_reversed",
                               [](const RegistrationResult& r) { return r.direction_reversed; })
        .def_property_readonly("curves_swapped",
                               [](const RegistrationResult& r) { return r.curves_swapped; })
        .def_property_readonly("iterations",
                               [](const RegistrationResult& r) { return r.iterations; })
        .def("__repr__", [](const RegistrationResult& r) {
            std::ostringstream os;
            os << "RegistrationResult(distance=" << r.distance << ", t0=" << r.t0
               << ", iterations=" << r.iterations << ")";
            return os.str();
        });

    m.def(
        "load_curve",
        [](const std::string& path, std::optional<bool> closed) {
            std::ifstream in(path);
            if (!in) throw MalformedInput("cannot open curve file: " + path);
            return load_curve(in, closed);
        },
        py::arg("path"), py::arg("closed") = std::nullopt);

    m.def("polyline_length", &polyline_length, py::arg("curve"));
    m.def("normalize", &normalize, py::arg("curve"));
    m.def("reverse_direction", &reverse_direction, py::arg("curve"));

    m.def(
        "resample",
        [](const Curve& c, const Eigen::VectorXd& partition) {
            PartitionSpec p;
            p.values = partition;
            const int n = p.size();
            double dev = 0.0;
            for (int i = 0; i + 1 < n; ++i) {
                dev = std::max(dev, std::abs((p.values[i + 1] - p.values[i]) - 1.0 / (n - 1)));
            }
            p.uniform = dev <= 1e-12;
            return resample(c, p);
        },
        py::arg("curve"), py::arg("partition"));

    m.def(
        "srvf",
        [](const Curve& c) { return Eigen::MatrixXd(compute_srvf(c).values.transpose()); },
        py::arg("curve"), "Square-root velocity samples of a normalized curve, shape (N, d).");

    m.def(
        "ku_rotation",
        [](const Eigen::MatrixXd& a) {
            auto [rot, maxtrace] = ku_rotation(CrossMatrix{a});
            return py::make_tuple(rot.matrix(), maxtrace);
        },
        py::arg("cross_matrix"),
        "Rotation maximizing tr(R A^T) and the attained trace value.");

    m.def(
        "fit_rigid_motion",
        [](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
           std::optional<Eigen::VectorXd> weights) {
            const int n = static_cast<int>(x.rows());
            Eigen::VectorXd w =
                weights.value_or(Eigen::VectorXd::Constant(n, 1.0 / std::max(n, 1)));
            auto [motion, delta] =
                fit_rigid_motion(x.transpose(), y.transpose(), w);
            return py::make_tuple(motion.rotation.matrix(), motion.translation, delta);
        },
        py::arg("x"), py::arg("y"), py::arg("weights") = std::nullopt,
        "Weighted orientation-preserving rigid fit y -> x for (N, d) point arrays; "
        "returns (rotation, translation, residual).");

    m.def(
        "compute_esd",
        [](const Curve& c1, const Curve& c2, int itop, int iten, double tol, int layrs,
           int lstrp, bool use_fft, bool both_directions, bool use_procedure1, int stride) {
            return compute_esd(c1, c2,
                               make_config(itop, iten, tol, layrs, lstrp, use_fft,
                                           both_directions, use_procedure1, stride));
        },
        py::arg("curve1"), py::arg("curve2"), py::arg("itop") = 1, py::arg("iten") = 10,
        py::arg("tol") = 1e-6, py::arg("layrs") = 5, py::arg("lstrp") = 30,
        py::arg("fft") = false, py::arg("both_directions") = false,
        py::arg("procedure1") = false, py::arg("stride") = 1,
        "Elastic shape distance and registration of two curves.");
}
