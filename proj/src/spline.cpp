#include "esd/spline.hpp"

#include "esd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace esd {

namespace {

// Solves a tridiagonal system in place (Thomas algorithm). All systems
// assembled below are diagonally dominant, so no pivoting is needed.
void solve_tridiagonal(Eigen::VectorXd& sub, Eigen::VectorXd& diag, Eigen::VectorXd& sup,
                       Eigen::MatrixXd& rhs) {
    const int n = static_cast<int>(diag.size());
    for (int i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs.col(i) -= w * rhs.col(i - 1);
    }
    rhs.col(n - 1) /= diag[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        rhs.col(i) = (rhs.col(i) - sup[i] * rhs.col(i + 1)) / diag[i];
    }
}

// Second derivatives (moments) of the not-a-knot spline, one row per
// component of f. Knot count n >= 4 here; smaller n handled by callers.
Eigen::MatrixXd open_moments(const Eigen::VectorXd& t, const Eigen::MatrixXd& f) {
    const int n = static_cast<int>(t.size());
    const int d = static_cast<int>(f.rows());
    Eigen::VectorXd h = t.tail(n - 1) - t.head(n - 1);

    // Unknowns M_1..M_{n-2}; M_0 and M_{n-1} are eliminated through the
    // not-a-knot conditions  h1*M0 - (h0+h1)*M1 + h0*M2 = 0  (and mirrored).
    const int m = n - 2;
    Eigen::VectorXd sub(m), diag(m), sup(m);
    Eigen::MatrixXd rhs(d, m);
    for (int i = 1; i <= n - 2; ++i) {
        const int r = i - 1;
        sub[r] = h[i - 1] / 6.0;
        diag[r] = (h[i - 1] + h[i]) / 3.0;
        sup[r] = h[i] / 6.0;
        rhs.col(r) = (f.col(i + 1) - f.col(i)) / h[i] - (f.col(i) - f.col(i - 1)) / h[i - 1];
    }
    // Fold M_0 = ((h0+h1)M_1 - h0*M_2)/h1 into the first row.
    diag[0] += (h[0] / 6.0) * (h[0] + h[1]) / h[1];
    sup[0] -= (h[0] / 6.0) * h[0] / h[1];
    // Fold M_{n-1} = ((h_{n-2}+h_{n-3})M_{n-2} - h_{n-2}*M_{n-3})/h_{n-3}.
    diag[m - 1] += (h[n - 2] / 6.0) * (h[n - 2] + h[n - 3]) / h[n - 3];
    sub[m - 1] -= (h[n - 2] / 6.0) * h[n - 2] / h[n - 3];

    solve_tridiagonal(sub, diag, sup, rhs);

    Eigen::MatrixXd moments(d, n);
    moments.block(0, 1, d, m) = rhs;
    moments.col(0) =
        ((h[0] + h[1]) * rhs.col(0) - h[0] * rhs.col(1)) / h[1];
    moments.col(n - 1) =
        ((h[n - 2] + h[n - 3]) * rhs.col(m - 1) - h[n - 2] * rhs.col(m - 2)) / h[n - 3];
    return moments;
}

// Moments of the periodic spline. The last sample is identified with the
// first; m = n-1 cyclic unknowns, solved via Sherman-Morrison.
Eigen::MatrixXd periodic_moments(const Eigen::VectorXd& t, const Eigen::MatrixXd& f) {
    const int n = static_cast<int>(t.size());
    const int d = static_cast<int>(f.rows());
    const int m = n - 1;
    Eigen::VectorXd h = t.tail(m) - t.head(m);

    auto value = [&](int i) { return f.col(i % m); };

    Eigen::VectorXd a(m), b(m), c(m);
    Eigen::MatrixXd rhs(d, m);
    for (int i = 0; i < m; ++i) {
        const int ip = (i + m - 1) % m;
        a[i] = h[ip] / 6.0;
        b[i] = (h[ip] + h[i]) / 3.0;
        c[i] = h[i] / 6.0;
        rhs.col(i) = (value(i + 1) - value(i)) / h[i] - (value(i) - value(ip)) / h[ip];
    }

    Eigen::MatrixXd moments(d, n);
    if (m == 2) {
        // Two cyclic unknowns; the sub/sup entries overlap the corners.
        const double a00 = b[0], a01 = a[0] + c[0];
        const double a10 = a[1] + c[1], a11 = b[1];
        const double det = a00 * a11 - a01 * a10;
        for (int k = 0; k < d; ++k) {
            moments(k, 0) = (a11 * rhs(k, 0) - a01 * rhs(k, 1)) / det;
            moments(k, 1) = (a00 * rhs(k, 1) - a10 * rhs(k, 0)) / det;
        }
    } else {
        const double gamma = -b[0];
        Eigen::VectorXd sub = a, diag = b, sup = c;
        sub[0] = 0.0;
        sup[m - 1] = 0.0;
        diag[0] -= gamma;
        diag[m - 1] -= c[m - 1] * a[0] / gamma;

        Eigen::MatrixXd work(d + 1, m);
        work.topRows(d) = rhs;
        work.bottomRows(1).setZero();
        work(d, 0) = gamma;
        work(d, m - 1) = c[m - 1];
        solve_tridiagonal(sub, diag, sup, work);

        Eigen::MatrixXd y = work.topRows(d);
        Eigen::VectorXd z = work.bottomRows(1).transpose();
        const double denom = 1.0 + z[0] + (a[0] / gamma) * z[m - 1];
        for (int k = 0; k < d; ++k) {
            const double factor = (y(k, 0) + (a[0] / gamma) * y(k, m - 1)) / denom;
            moments.row(k).head(m) = y.row(k) - factor * z.transpose();
        }
    }
    moments.col(n - 1) = moments.col(0);
    return moments;
}

} // namespace

VectorSpline::VectorSpline(Eigen::VectorXd knots, const Eigen::MatrixXd& values, bool periodic)
    : knots_(std::move(knots)), periodic_(periodic) {
    const int n = static_cast<int>(knots_.size());
    const int d = static_cast<int>(values.rows());
    if (n < 2 || values.cols() != n) {
        throw MalformedInput("spline needs at least two knots and matching values");
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (!(knots_[i] < knots_[i + 1])) {
            throw DuplicateParameter("spline knots must be strictly increasing");
        }
    }
    period_ = knots_[n - 1] - knots_[0];

    Eigen::MatrixXd f = values;
    if (periodic_) {
        f.col(n - 1) = f.col(0); // identify the seam sample
    }

    Eigen::MatrixXd moments;
    if (n == 2) {
        moments = Eigen::MatrixXd::Zero(d, n);
    } else if (!periodic_ && n == 3) {
        // Not-a-knot with three knots degenerates to the parabola.
        Eigen::VectorXd dd1 = (f.col(1) - f.col(0)) / (knots_[1] - knots_[0]);
        Eigen::VectorXd dd2 = (f.col(2) - f.col(1)) / (knots_[2] - knots_[1]);
        Eigen::VectorXd m2 = 2.0 * (dd2 - dd1) / (knots_[2] - knots_[0]);
        moments.resize(d, n);
        moments.col(0) = m2;
        moments.col(1) = m2;
        moments.col(2) = m2;
    } else if (periodic_) {
        moments = periodic_moments(knots_, f);
    } else {
        moments = open_moments(knots_, f);
    }

    const int ni = n - 1;
    coef0_.resize(d, ni);
    coef1_.resize(d, ni);
    coef2_.resize(d, ni);
    coef3_.resize(d, ni);
    for (int i = 0; i < ni; ++i) {
        const double h = knots_[i + 1] - knots_[i];
        coef0_.col(i) = f.col(i);
        coef1_.col(i) = (f.col(i + 1) - f.col(i)) / h -
                        h * (2.0 * moments.col(i) + moments.col(i + 1)) / 6.0;
        coef2_.col(i) = moments.col(i) / 2.0;
        coef3_.col(i) = (moments.col(i + 1) - moments.col(i)) / (6.0 * h);
    }

    double max_dev = 0.0;
    const double mean_h = period_ / ni;
    for (int i = 0; i < ni; ++i) {
        max_dev = std::max(max_dev, std::abs((knots_[i + 1] - knots_[i]) - mean_h));
    }
    uniform_ = max_dev <= 1e-12 * std::max(1.0, period_);
    inv_h_ = uniform_ ? 1.0 / mean_h : 0.0;
}

int VectorSpline::find_interval(double x, int hint) const {
    const int ni = static_cast<int>(coef0_.cols());
    if (uniform_) {
        int i = static_cast<int>((x - knots_[0]) * inv_h_);
        i = std::clamp(i, 0, ni - 1);
        if (x < knots_[i] && i > 0) --i;
        else if (i + 1 < ni && x >= knots_[i + 1]) ++i;
        return i;
    }
    int i = std::clamp(hint, 0, ni - 1);
    for (int step = 0; step < 2; ++step) {
        if (x < knots_[i] && i > 0) --i;
        else if (i + 1 < ni && x >= knots_[i + 1]) ++i;
        else return i;
    }
    if (x >= knots_[i] && (i + 1 >= ni || x < knots_[i + 1])) return i;
    const double* begin = knots_.data();
    const double* pos = std::upper_bound(begin, begin + ni, x);
    i = static_cast<int>(pos - begin) - 1;
    return std::clamp(i, 0, ni - 1);
}

void VectorSpline::eval(double x, int& hint, double* out) const {
    if (periodic_) {
        x = knots_[0] + (x - knots_[0]) - std::floor((x - knots_[0]) / period_) * period_;
    }
    const int i = find_interval(x, hint);
    hint = i;
    const double xi = x - knots_[i];
    const int d = dim();
    for (int k = 0; k < d; ++k) {
        out[k] = coef0_(k, i) + xi * (coef1_(k, i) + xi * (coef2_(k, i) + xi * coef3_(k, i)));
    }
}

Eigen::VectorXd VectorSpline::operator()(double x) const {
    Eigen::VectorXd out(dim());
    int hint = 0;
    eval(x, hint, out.data());
    return out;
}

} // namespace esd
