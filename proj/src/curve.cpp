#include "esd/curve.hpp"

#include "esd/errors.hpp"
#include "esd/spline.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace esd {

void Curve::validate() const {
    const int n = size();
    if (n < 3) throw MalformedInput("curve needs at least 3 points");
    if (partition.size() != n) throw MalformedInput("points/partition size mismatch");
    if (partition[0] != 0.0) throw MalformedInput("partition must start at 0");
    for (int i = 0; i + 1 < n; ++i) {
        if (!(partition[i] < partition[i + 1])) {
            throw DuplicateParameter("partition must be strictly increasing");
        }
    }
    if (!points.allFinite()) throw MalformedInput("non-finite point coordinates");
    if (closed) {
        const double len = polyline_length(*this);
        const double gap = (points.col(0) - points.col(n - 1)).norm();
        if (gap > 1e-8 * std::max(len, 1e-300)) {
            throw MalformedInput("closed curve endpoints do not coincide");
        }
    }
}

namespace {

bool is_partition_directive(const std::string& line) {
    std::size_t i = 1; // caller guarantees line[0] == '#'
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] != 't') return false;
    ++i;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    return i == line.size();
}

} // namespace

Curve load_curve(std::istream& source, std::optional<bool> closed_hint) {
    std::vector<std::vector<double>> rows;
    bool has_parameter_column = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        std::size_t start = line.find_first_not_of(" \t\r\n");
        if (start == std::string::npos) continue;
        if (line[start] == '#') {
            if (rows.empty() && is_partition_directive(line.substr(start))) {
                has_parameter_column = true;
            }
            continue;
        }
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!ls.eof()) {
            throw MalformedInput("line " + std::to_string(line_no) + ": not numeric");
        }
        for (double x : row) {
            if (!std::isfinite(x)) {
                throw MalformedInput("line " + std::to_string(line_no) + ": non-finite value");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw MalformedInput("line " + std::to_string(line_no) + ": inconsistent row width");
        }
        if (row.empty()) {
            throw MalformedInput("line " + std::to_string(line_no) + ": empty row");
        }
        rows.push_back(std::move(row));
    }

    const int n = static_cast<int>(rows.size());
    if (n < 3) throw MalformedInput("need at least 3 points, got " + std::to_string(n));
    const int width = static_cast<int>(rows.front().size());
    const int d = has_parameter_column ? width - 1 : width;
    if (d < 1) throw MalformedInput("no coordinate columns");

    Curve c;
    c.points.resize(d, n);
    c.partition.resize(n);
    for (int i = 0; i < n; ++i) {
        if (has_parameter_column) {
            c.partition[i] = rows[i][0];
        } else {
            c.partition[i] = static_cast<double>(i) / (n - 1);
        }
        for (int k = 0; k < d; ++k) {
            c.points(k, i) = rows[i][has_parameter_column ? k + 1 : k];
        }
    }
    if (has_parameter_column) {
        for (int i = 0; i + 1 < n; ++i) {
            if (!(c.partition[i] < c.partition[i + 1])) {
                throw DuplicateParameter("supplied partition is not increasing at row " +
                                         std::to_string(i + 2));
            }
        }
        // Anchor the supplied partition at 0.
        c.partition.array() -= c.partition[0];
    }

    if (closed_hint.has_value()) {
        c.closed = *closed_hint;
    } else {
        const Eigen::VectorXd lo = c.points.rowwise().minCoeff();
        const Eigen::VectorXd hi = c.points.rowwise().maxCoeff();
        const double diag = (hi - lo).norm();
        const double gap = (c.points.col(0) - c.points.col(n - 1)).norm();
        c.closed = gap <= 1e-6 * diag;
    }
    return c;
}

double polyline_length(const Curve& c) {
    double len = 0.0;
    for (int i = 0; i + 1 < c.size(); ++i) {
        len += (c.points.col(i + 1) - c.points.col(i)).norm();
    }
    return len;
}

Curve normalize(const Curve& c) {
    const double len = polyline_length(c);
    if (len <= 0.0) throw ZeroLengthCurve("cannot normalize a curve of zero length");
    Curve out;
    out.points = c.points / len;
    const double t0 = c.partition[0];
    const double span = c.partition[c.size() - 1] - t0;
    out.partition = (c.partition.array() - t0) / span;
    out.partition[0] = 0.0;
    out.partition[c.size() - 1] = 1.0;
    out.closed = c.closed;
    return out;
}

std::optional<PartitionSpec> build_common_partition(const Curve& c1, const Curve& c2) {
    const int n = c1.size();
    const int m = c2.size();
    if (c1.closed || c2.closed) {
        const int l = std::max(n, m);
        PartitionSpec p;
        p.values = Eigen::VectorXd::LinSpaced(l, 0.0, 1.0);
        p.uniform = true;
        return p;
    }
    if (c1.dim() == 1 && c2.dim() == 1) {
        return std::nullopt; // both open scalar curves keep their own partitions
    }

    std::vector<double> merged(n + m);
    std::merge(c1.partition.data(), c1.partition.data() + n, c2.partition.data(),
               c2.partition.data() + m, merged.begin());

    // Drop union points closer than eps to the previous kept point (or to
    // the final endpoint); both endpoints are always kept.
    const double eps = 0.25 / std::max(n, m);
    std::vector<double> kept;
    kept.reserve(merged.size());
    kept.push_back(0.0);
    for (double v : merged) {
        if (v - kept.back() >= eps && 1.0 - v >= eps) kept.push_back(v);
    }
    kept.push_back(1.0);

    PartitionSpec p;
    p.values = Eigen::Map<Eigen::VectorXd>(kept.data(), static_cast<int>(kept.size()));
    p.uniform = false;
    return p;
}

Curve resample(const Curve& c, const PartitionSpec& p) {
    VectorSpline spline(c.partition, c.points, c.closed);
    const int n = p.size();
    Curve out;
    out.points.resize(c.dim(), n);
    out.partition = p.values;
    out.closed = c.closed;
    int hint = 0;
    for (int i = 0; i < n; ++i) {
        spline.eval(p.values[i], hint, out.points.col(i).data());
    }
    if (c.closed) {
        out.points.col(n - 1) = out.points.col(0);
    }
    return out;
}

Curve reverse_direction(const Curve& c) {
    const int n = c.size();
    Curve out;
    out.points = c.points.rowwise().reverse();
    out.partition.resize(n);
    const double t_end = c.partition[n - 1];
    for (int i = 0; i < n; ++i) {
        out.partition[i] = t_end - c.partition[n - 1 - i];
    }
    out.closed = c.closed;
    return out;
}

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& partition) {
    const int n = static_cast<int>(partition.size());
    Eigen::VectorXd w(n);
    w[0] = (partition[1] - partition[0]) / 2.0;
    w[n - 1] = (partition[n - 1] - partition[n - 2]) / 2.0;
    for (int i = 1; i + 1 < n; ++i) {
        w[i] = (partition[i + 1] - partition[i - 1]) / 2.0;
    }
    return w;
}

} // namespace esd
