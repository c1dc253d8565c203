#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace smwss {

/// Nodes and weights of a Gauss rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Laguerre rule for int_0^inf e^{-u} f(u) du (Golub-Welsch, Newton polished).
/// Rules are cached per order; safe to call from several threads.
const QuadratureRule& gauss_laguerre(int order);

/// Gauss-Legendre rule on [0, 1].
const QuadratureRule& gauss_legendre_unit(int order);

/// Neumaier compensated accumulator. Summation order is fixed by the caller,
/// so results are reproducible regardless of threading.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// processed exactly once; callers write results into per-index slots.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// Default worker count (hardware concurrency, at least 1); overridable globally.
int default_threads();
void set_default_threads(int n);

} // namespace smwss
