#include "smwss/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "smwss/errors.hpp"

namespace smwss {

SymTridiagonal::SymTridiagonal(std::vector<double> d, std::vector<double> e)
    : d_(std::move(d)), e_(std::move(e)) {
    if (d_.empty() || e_.size() + 1 != d_.size()) throw InputError("SymTridiagonal: need |e| = |d| - 1");
    e2_.resize(e_.size());
    double emax = 0;
    for (std::size_t i = 0; i < e_.size(); ++i) {
        e2_[i] = e_[i] * e_[i];
        emax = std::max(emax, e2_[i]);
    }
    pivmin_ = std::numeric_limits<double>::min() * std::max(1.0, emax);
}

std::size_t SymTridiagonal::count_below(double sigma) const {
    std::size_t count = 0;
    double q = d_[0] - sigma;
    if (std::abs(q) < pivmin_) q = -pivmin_;
    if (q < 0) ++count;
    for (std::size_t i = 1; i < d_.size(); ++i) {
        q = d_[i] - sigma - e2_[i - 1] / q;
        if (std::abs(q) < pivmin_) q = -pivmin_;
        if (q < 0) ++count;
    }
    return count;
}

double SymTridiagonal::lower_bound() const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d_.size(); ++i) {
        const double r = (i ? std::abs(e_[i - 1]) : 0.0) + (i < e_.size() ? std::abs(e_[i]) : 0.0);
        lo = std::min(lo, d_[i] - r);
    }
    return lo;
}

double SymTridiagonal::upper_bound() const {
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d_.size(); ++i) {
        const double r = (i ? std::abs(e_[i - 1]) : 0.0) + (i < e_.size() ? std::abs(e_[i]) : 0.0);
        hi = std::max(hi, d_[i] + r);
    }
    return hi;
}

std::vector<double> SymTridiagonal::eigenvalues(double lo, double hi, double tol) const {
    if (!(hi > lo)) throw DomainError("eigenvalues: empty interval");
    if (!(tol > 0)) throw DomainError("eigenvalues: tolerance must be positive");
    std::vector<double> out;
    struct Bracket {
        double a, b;
        std::size_t ca, cb;
    };
    std::vector<Bracket> stack{{lo, hi, count_below(lo), count_below(hi)}};
    while (!stack.empty()) {
        const Bracket br = stack.back();
        stack.pop_back();
        if (br.cb <= br.ca) continue;
        const double m = 0.5 * (br.a + br.b);
        if (br.b - br.a <= tol || m <= br.a || m >= br.b) {
            out.insert(out.end(), br.cb - br.ca, m);
            continue;
        }
        const std::size_t cm = count_below(m);
        // Push the upper half first so the lower half is refined next.
        stack.push_back({m, br.b, cm, br.cb});
        stack.push_back({br.a, m, br.ca, cm});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> SymTridiagonal::apply(const std::vector<double>& x) const {
    const std::size_t n = d_.size();
    if (x.size() != n) throw InputError("SymTridiagonal::apply: size mismatch");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = d_[i] * x[i];
        if (i) s += e_[i - 1] * x[i - 1];
        if (i + 1 < n) s += e_[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

double SymTridiagonal::rayleigh(const std::vector<double>& x) const {
    const std::size_t n = d_.size();
    if (x.size() != n) throw InputError("SymTridiagonal::rayleigh: size mismatch");
    long double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double xi = x[i];
        num += xi * xi * d_[i];
        if (i + 1 < n) num += 2 * xi * x[i + 1] * e_[i];
        den += xi * xi;
    }
    return static_cast<double>(num / den);
}

namespace {

// LU of (T - lambda I) with partial pivoting; U has two superdiagonals.
struct ShiftedLU {
    std::vector<double> u0, u1, u2, mult;
    std::vector<char> swapped;

    ShiftedLU(const std::vector<double>& d, const std::vector<double>& e, double lambda, double tiny) {
        const std::size_t n = d.size();
        u0.resize(n);
        u1.assign(n, 0.0);
        u2.assign(n, 0.0);
        mult.assign(n, 0.0);
        swapped.assign(n, 0);
        double diag = d[0] - lambda;
        double sup = n > 1 ? e[0] : 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double below_sub = e[i];
            const double below_diag = d[i + 1] - lambda;
            const double below_sup = i + 2 < n ? e[i + 1] : 0.0;
            if (std::abs(diag) >= std::abs(below_sub)) {
                if (diag == 0) diag = tiny;
                u0[i] = diag;
                u1[i] = sup;
                u2[i] = 0.0;
                const double m = below_sub / diag;
                mult[i] = m;
                diag = below_diag - m * sup;
                sup = below_sup;
            } else {
                swapped[i] = 1;
                u0[i] = below_sub;
                u1[i] = below_diag;
                u2[i] = below_sup;
                const double m = diag / below_sub;
                mult[i] = m;
                diag = sup - m * below_diag;
                sup = -m * below_sup;
            }
        }
        u0[n - 1] = diag == 0 ? tiny : diag;
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = b.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (swapped[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= mult[i] * b[i];
        }
        for (std::size_t k = n; k-- > 0;) {
            double s = b[k];
            if (k + 1 < n) s -= u1[k] * b[k + 1];
            if (k + 2 < n) s -= u2[k] * b[k + 2];
            b[k] = s / u0[k];
        }
    }
};

double norm2(const std::vector<double>& v) {
    double scale = 0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0) return 0;
    double s = 0;
    for (double x : v) s += (x / scale) * (x / scale);
    return scale * std::sqrt(s);
}

void normalize(std::vector<double>& v) {
    const double n = norm2(v);
    if (!(n > 0) || !std::isfinite(n)) throw AccuracyError("inverse iteration produced a zero or non-finite vector");
    for (double& x : v) x /= n;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

std::vector<std::vector<double>> SymTridiagonal::eigenvectors(const std::vector<double>& lambdas,
                                                              double cluster_gap) const {
    const std::size_t n = d_.size();
    const double scale = std::max(std::abs(lower_bound()), std::abs(upper_bound()));
    const double tiny = std::numeric_limits<double>::epsilon() * scale;
    std::vector<std::vector<double>> out;
    out.reserve(lambdas.size());
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::size_t cluster_start = 0;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (k && lambdas[k] - lambdas[k - 1] > cluster_gap) cluster_start = k;
        // Coincident eigenvalues get nudged so the factorizations differ.
        double shift = lambdas[k];
        for (std::size_t j = cluster_start; j < k; ++j)
            if (lambdas[j] == lambdas[k]) shift += 10 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(shift));
        const ShiftedLU lu(d_, e_, shift, tiny);
        std::vector<double> v(n);
        for (double& x : v) x = uni(rng);
        normalize(v);
        for (int it = 0; it < 4; ++it) {
            lu.solve(v);
            normalize(v);
            for (std::size_t j = cluster_start; j < k; ++j) {
                const double c = dot(v, out[j]);
                for (std::size_t i = 0; i < n; ++i) v[i] -= c * out[j][i];
            }
            normalize(v);
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace smwss
