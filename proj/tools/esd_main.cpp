#include "esd/curve.hpp"
#include "esd/errors.hpp"
#include "esd/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

esd::Curve load_file(const std::string& path, const std::string& closed_flag) {
    std::ifstream in(path);
    if (!in) throw esd::MalformedInput("cannot open curve file: " + path);
    std::optional<bool> hint;
    if (closed_flag == "yes") hint = true;
    else if (closed_flag == "no") hint = false;
    return esd::load_curve(in, hint);
}

void write_result(std::ostream& os, const esd::RegistrationResult& res, double wall_ms) {
    const auto& r = res.rotation.matrix();
    os << "{\n";
    os << "  \"distance\": " << fmt(res.distance) << ",\n";
    os << "  \"t0\": " << fmt(res.t0) << ",\n";
    os << "  \"rotation\": [";
    for (int i = 0; i < r.rows(); ++i) {
        for (int j = 0; j < r.cols(); ++j) {
            if (i + j > 0) os << ", ";
            os << fmt(r(i, j));
        }
    }
    os << "],\n";
    os << "  \"gamma\": [";
    for (int l = 0; l < res.gamma.size(); ++l) {
        if (l > 0) os << ", ";
        os << fmt(res.gamma.gamma[l]);
    }
    os << "],\n";
    os << "  \"direction_reversed\": " << (res.direction_reversed ? "true" : "false") << ",\n";
    os << "  \"iterations\": " << res.iterations << ",\n";
    os << "  \"wall_time_ms\": " << fmt(wall_ms) << "\n";
    os << "}\n";
}

void write_points(const std::string& path, const Eigen::MatrixXd& pts) {
    std::ofstream out(path);
    if (!out) throw esd::MalformedInput("cannot write plot file: " + path);
    for (int l = 0; l < pts.cols(); ++l) {
        for (int k = 0; k < pts.rows(); ++k) {
            if (k > 0) out << ' ';
            out << fmt(pts(k, l));
        }
        out << '\n';
    }
}

void write_gamma(const std::string& path, const esd::RegistrationResult& res) {
    std::ofstream out(path);
    if (!out) throw esd::MalformedInput("cannot write plot file: " + path);
    for (int l = 0; l < res.gamma.size(); ++l) {
        out << fmt(res.partition[l]) << ' ' << fmt(res.gamma.gamma[l]) << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elastic shape distance and registration between curves in R^d"};

    std::string path1, path2;
    std::string closed1 = "auto", closed2 = "auto";
    std::string out_prefix;
    bool use_fft = false, both_directions = false, emit_plots = false;
    esd::PipelineConfig cfg;

    app.add_option("--curve1", path1, "First curve file")->required();
    app.add_option("--curve2", path2, "Second curve file")->required();
    app.add_option("--closed1", closed1, "Closedness override for curve 1 (yes|no)")
        ->check(CLI::IsMember({"yes", "no"}));
    app.add_option("--closed2", closed2, "Closedness override for curve 2 (yes|no)")
        ->check(CLI::IsMember({"yes", "no"}));
    app.add_flag("--fft", use_fft, "Use the FFT all-shifts rotation pass (closed curves)");
    app.add_flag("--both-directions", both_directions,
                 "Also try the second curve reversed, report the smaller distance");
    app.add_option("--itop", cfg.itop, "Couples retained per iteration")->check(CLI::PositiveNumber);
    app.add_option("--layrs", cfg.dp.layrs, "DP trailing-neighborhood size")
        ->check(CLI::PositiveNumber);
    app.add_option("--lstrp", cfg.dp.lstrp, "DP adapting-strip width in bins")
        ->check(CLI::PositiveNumber);
    app.add_option("--stride", cfg.stride, "Starting-point subsampling stride")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_prefix, "Output prefix for plot data files");
    app.add_flag("--plots", emit_plots, "Write <prefix>.curve1.dat/.curve2.dat/.gamma.dat");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (emit_plots && out_prefix.empty()) {
            throw esd::MalformedInput("--plots requires --out <prefix>");
        }
        cfg.use_fft = use_fft;
        cfg.try_both_directions = both_directions;

        const esd::Curve c1 = load_file(path1, closed1);
        const esd::Curve c2 = load_file(path2, closed2);

        const auto start = std::chrono::steady_clock::now();
        const esd::RegistrationResult res = esd::compute_esd(c1, c2, cfg);
        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();

        write_result(std::cout, res, wall_ms);
        if (emit_plots) {
            write_points(out_prefix + ".curve1.dat", res.registered_curve1);
            write_points(out_prefix + ".curve2.dat", res.registered_curve2);
            write_gamma(out_prefix + ".gamma.dat", res);
        }
        return 0;
    } catch (const esd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.category() == esd::Error::Category::Numeric ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
