#include "smwss/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "smwss/errors.hpp"

namespace smwss {
namespace {

// Golub-Welsch from the Jacobi matrix with diagonal `a` and off-diagonal `b`;
// mu0 is the total mass of the weight function.
QuadratureRule golub_welsch(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double mu0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(a, b, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw AccuracyError("Golub-Welsch eigensolve failed");
    QuadratureRule rule;
    const auto n = a.size();
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

QuadratureRule make_laguerre(int n) {
    Eigen::VectorXd a(n), b(n - 1);
    for (int i = 0; i < n; ++i) a(i) = 2.0 * i + 1.0;
    for (int i = 0; i + 1 < n; ++i) b(i) = i + 1.0;
    QuadratureRule rule = golub_welsch(a, b, 1.0);
    // Newton polish of nodes on L_n, then weights w = x / ((n+1) L_{n+1}(x))^2,
    // which keeps relative accuracy for the tiny trailing weights.
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        double ln = 0, ln1 = 0;
        for (int it = 0; it < 4; ++it) {
            double p0 = 1.0, p1 = 1.0 - x;
            for (int k = 1; k < n; ++k) {
                const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            ln = p1;
            ln1 = p0;  // L_{n-1}
            const double dp = n * (ln - ln1) / x;
            const double dx = ln / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15 * std::max(1.0, x)) break;
        }
        // L_{n+1}(x) = ((2n+1-x) L_n - n L_{n-1}) / (n+1)
        double p0 = 1.0, p1 = 1.0 - x;
        for (int k = 1; k < n; ++k) {
            const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
            p0 = p1;
            p1 = p2;
        }
        const double lnp1 = ((2.0 * n + 1.0 - x) * p1 - n * p0) / (n + 1.0);
        const double w = x / std::pow((n + 1.0) * lnp1, 2);
        rule.nodes[i] = x;
        if (std::isfinite(w) && w > 0) rule.weights[i] = w;
    }
    return rule;
}

QuadratureRule make_legendre_unit(int n) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n), b(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        const double k = i + 1.0;
        b(i) = k / std::sqrt(4 * k * k - 1);
    }
    QuadratureRule rule = golub_welsch(a, b, 2.0);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
        rule.weights[i] *= 0.5;
    }
    return rule;
}

template <class Make>
const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache, std::mutex& m,
                             int order, Make make) {
    if (order < 2) throw DomainError("quadrature order must be >= 2");
    std::lock_guard lock(m);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<QuadratureRule>(make(order));
    return *slot;
}

std::atomic<int> g_default_threads{0};

} // namespace

const QuadratureRule& gauss_laguerre(int order) {
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex m;
    return cached(cache, m, order, make_laguerre);
}

const QuadratureRule& gauss_legendre_unit(int order) {
    static std::map<int, std::unique_ptr<QuadratureRule>> cache;
    static std::mutex m;
    return cached(cache, m, order, make_legendre_unit);
}

int default_threads() {
    const int n = g_default_threads.load();
    if (n > 0) return n;
    return std::max(1u, std::thread::hardware_concurrency());
}

void set_default_threads(int n) { g_default_threads.store(std::max(0, n)); }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 0) threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(n);
                    return;
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace smwss
