#include "gmlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "gmlab/errors.hpp"

namespace gmlab {

namespace {

void check_nodes(int n, const char* axis) {
    if (n < 3) {
        std::ostringstream msg;
        msg << "grid needs at least 3 nodes along " << axis << ", got " << n;
        throw Error(ErrorKind::InvalidGrid, msg.str());
    }
}

// 1D mirror-ghost second difference along one axis, unscaled.
inline double second_diff(const double* base, int i, int n, int stride) {
    const double c = base[i * stride];
    if (i == 0) return 2.0 * (base[stride] - c);
    if (i == n - 1) return 2.0 * (base[(n - 2) * stride] - c);
    return base[(i - 1) * stride] - 2.0 * c + base[(i + 1) * stride];
}

}  // namespace

Grid::Grid(DomainGeometry geom, int nx, int ny)
    : geom_(geom), nx_(nx), ny_(ny), hx_(geom.lx / (nx - 1)),
      hy_(geom.kind == DomainGeometry::Kind::Interval ? 0.0 : geom.ly / (ny - 1)) {}

Grid Grid::interval(double length, int n) {
    check_nodes(n, "x");
    return Grid(DomainGeometry::interval(length), n, 1);
}

Grid Grid::rectangle(double lx, double ly, int nx, int ny) {
    check_nodes(nx, "x");
    check_nodes(ny, "y");
    return Grid(DomainGeometry::rectangle(lx, ly), nx, ny);
}

Grid Grid::on(const DomainGeometry& geom, int nx, int ny) {
    if (geom.kind == DomainGeometry::Kind::Interval) return interval(geom.lx, nx);
    return rectangle(geom.lx, geom.ly, nx, ny > 0 ? ny : nx);
}

double Grid::min_spacing() const noexcept {
    return dimension() == 1 ? hx_ : std::min(hx_, hy_);
}

double Grid::max_spacing() const noexcept {
    return dimension() == 1 ? hx_ : std::max(hx_, hy_);
}

Eigen::VectorXd Grid::weights() const {
    Eigen::VectorXd wx = Eigen::VectorXd::Constant(nx_, hx_);
    wx(0) *= 0.5;
    wx(nx_ - 1) *= 0.5;
    if (dimension() == 1) return wx;
    Eigen::VectorXd wy = Eigen::VectorXd::Constant(ny_, hy_);
    wy(0) *= 0.5;
    wy(ny_ - 1) *= 0.5;
    Eigen::VectorXd w(size());
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) w(index(i, j)) = wx(i) * wy(j);
    return w;
}

double Grid::integrate(const Eigen::VectorXd& f) const { return weights().dot(f); }

Eigen::VectorXd Grid::apply_laplacian(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(size());
    const double ax = 1.0 / (hx_ * hx_);
    if (dimension() == 1) {
        for (int i = 0; i < nx_; ++i) out(i) = ax * second_diff(u.data(), i, nx_, 1);
        return out;
    }
    const double ay = 1.0 / (hy_ * hy_);
    for (int j = 0; j < ny_; ++j) {
        const double* row = u.data() + index(0, j);
        for (int i = 0; i < nx_; ++i) {
            out(index(i, j)) = ax * second_diff(row, i, nx_, 1) +
                               ay * second_diff(u.data() + i, j, ny_, nx_);
        }
    }
    return out;
}

Eigen::SparseMatrix<double> Grid::laplacian() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(size()) * (dimension() == 1 ? 3 : 5));
    auto axis = [&](int k, int n, int stride, int node, double a) {
        trip.emplace_back(node, node, -2.0 * a);
        if (k == 0) {
            trip.emplace_back(node, node + stride, 2.0 * a);
        } else if (k == n - 1) {
            trip.emplace_back(node, node - stride, 2.0 * a);
        } else {
            trip.emplace_back(node, node - stride, a);
            trip.emplace_back(node, node + stride, a);
        }
    };
    const double ax = 1.0 / (hx_ * hx_);
    const double ay = dimension() == 1 ? 0.0 : 1.0 / (hy_ * hy_);
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const int node = index(i, j);
            axis(i, nx_, 1, node, ax);
            if (dimension() == 2) axis(j, ny_, nx_, node, ay);
        }
    }
    Eigen::SparseMatrix<double> lap(size(), size());
    lap.setFromTriplets(trip.begin(), trip.end());
    lap.makeCompressed();
    return lap;
}

double Grid::discrete_eigenvalue(int i, int j) const noexcept {
    const double pi = std::numbers::pi;
    const double sx = std::sin(i * pi * hx_ / (2.0 * geom_.lx));
    double val = 4.0 / (hx_ * hx_) * sx * sx;
    if (dimension() == 2) {
        const double sy = std::sin(j * pi * hy_ / (2.0 * geom_.ly));
        val += 4.0 / (hy_ * hy_) * sy * sy;
    }
    return val;
}

}  // namespace gmlab
