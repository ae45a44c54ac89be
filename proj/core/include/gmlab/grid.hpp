#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gmlab/spectrum.hpp"

namespace gmlab {

/// Uniform node-centred grid on an interval or rectangle. Nodes sit on the
/// boundary; Neumann conditions are imposed with mirror ghosts, so the
/// boundary stencil reads 2 (u_1 - u_0)/h^2.
class Grid {
public:
    /// n >= 3 nodes per axis, otherwise InvalidGrid.
    static Grid interval(double length, int n);
    static Grid rectangle(double lx, double ly, int nx, int ny);
    static Grid on(const DomainGeometry& geom, int nx, int ny = 0);

    const DomainGeometry& geometry() const noexcept { return geom_; }
    int dimension() const noexcept { return geom_.dimension(); }
    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }  // 1 for intervals
    int size() const noexcept { return nx_ * ny_; }
    double hx() const noexcept { return hx_; }
    double hy() const noexcept { return hy_; }
    double min_spacing() const noexcept;
    double max_spacing() const noexcept;

    int index(int i, int j = 0) const noexcept { return j * nx_ + i; }
    double x(int i) const noexcept { return i * hx_; }
    double y(int j) const noexcept { return j * hy_; }

    /// Trapezoid weights; they sum to |Omega|.
    Eigen::VectorXd weights() const;
    double integrate(const Eigen::VectorXd& f) const;

    Eigen::VectorXd apply_laplacian(const Eigen::VectorXd& u) const;
    Eigen::SparseMatrix<double> laplacian() const;

    /// Eigenvalue of -Delta_h on the cosine mode cos(i pi x / lx) (cos(j pi y / ly)).
    double discrete_eigenvalue(int i, int j = 0) const noexcept;

    bool operator==(const Grid& o) const noexcept {
        return geom_ == o.geom_ && nx_ == o.nx_ && ny_ == o.ny_;
    }

private:
    Grid(DomainGeometry geom, int nx, int ny);

    DomainGeometry geom_;
    int nx_;
    int ny_;
    double hx_;
    double hy_;
};

}  // namespace gmlab
