#pragma once

#include <cstddef>
#include <vector>

namespace smwss {

/// Real symmetric tridiagonal matrix: diagonal d (n), off-diagonal e (n-1).
class SymTridiagonal {
public:
    SymTridiagonal(std::vector<double> d, std::vector<double> e);

    std::size_t size() const { return d_.size(); }
    const std::vector<double>& diag() const { return d_; }
    const std::vector<double>& off() const { return e_; }

    /// Number of eigenvalues strictly below sigma (Sturm count from the LDL^T pivots).
    std::size_t count_below(double sigma) const;

    /// Eigenvalues in [lo, hi) by bisection, ascending, each to absolute width `tol`.
    std::vector<double> eigenvalues(double lo, double hi, double tol) const;

    /// Eigenvectors for given (ascending) eigenvalues by inverse iteration; vectors of
    /// eigenvalues closer than `cluster_gap` are Gram-Schmidt orthogonalised.
    std::vector<std::vector<double>> eigenvectors(const std::vector<double>& lambdas,
                                                  double cluster_gap = 1e-5) const;

    /// x^T T x / x^T x accumulated in extended precision.
    double rayleigh(const std::vector<double>& x) const;

    /// y = T x.
    std::vector<double> apply(const std::vector<double>& x) const;

    /// Gerschgorin bounds on the spectrum.
    double lower_bound() const;
    double upper_bound() const;

private:
    std::vector<double> d_, e_, e2_;
    double pivmin_ = 0;
};

} // namespace smwss
