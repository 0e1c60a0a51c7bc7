#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <optional>

namespace esd {

// Discretized curve in R^d: one point per column, a strictly increasing
// parameter partition starting at 0, and a closed/open flag.
struct Curve {
    Eigen::MatrixXd points;    // d x N
    Eigen::VectorXd partition; // N, partition[0] == 0
    bool closed = false;

    int dim() const { return static_cast<int>(points.rows()); }
    int size() const { return static_cast<int>(points.cols()); }

    // Throws if the basic invariants do not hold (N >= 3, increasing
    // partition, matching sizes, closed seam within tolerance).
    void validate() const;
};

struct PartitionSpec {
    Eigen::VectorXd values; // strictly increasing, values[0] == 0, back() == 1
    bool uniform = false;

    int size() const { return static_cast<int>(values.size()); }
};

// Parses whitespace-separated numeric text, one point per line. Lines
// starting with '#' are comments; a leading "# t" directive marks column 1
// as the parameter value. When no partition is supplied the parameter is
// index-proportional on [0,1]. Closedness is taken from the hint when
// given, otherwise auto-detected from the endpoint gap.
Curve load_curve(std::istream& source, std::optional<bool> closed_hint = std::nullopt);

double polyline_length(const Curve& c);

// Scales points by 1/length and maps the partition affinely onto [0,1].
Curve normalize(const Curve& c);

// Common partition for two normalized curves. Returns nullopt in the one
// case where no common partition is needed (d == 1 and both curves open);
// callers then keep the original partitions.
std::optional<PartitionSpec> build_common_partition(const Curve& c1, const Curve& c2);

// Componentwise cubic-spline resampling onto p (periodic spline for
// closed curves, not-a-knot otherwise).
Curve resample(const Curve& c, const PartitionSpec& p);

// Reverses the traversal direction: points reversed, partition mirrored.
Curve reverse_direction(const Curve& c);

// Trapezoidal quadrature weights of a partition: half gaps at the ends,
// averaged gaps inside. They sum to the partition span.
Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& partition);

} // namespace esd
