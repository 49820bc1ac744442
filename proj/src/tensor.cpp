#include "routelab/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace routelab {

bool all_finite(const Tensor1& t) {
    for (double x : t)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Tensor2& t) {
    for (double x : t.v)
        if (!std::isfinite(x)) return false;
    return true;
}

void assert_finite(const Tensor1& t, const std::string& what) {
    if (!all_finite(t)) throw std::runtime_error("non-finite values in " + what);
}

void assert_finite(const Tensor2& t, const std::string& what) {
    if (!all_finite(t)) throw std::runtime_error("non-finite values in " + what);
}

namespace {

// Dot product with four fixed interleaved partial sums. The summation order
// is part of the function's definition, so results are reproducible run to
// run while the independent accumulators still vectorize.
inline double dot(const double* a, const double* b, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int j = 0;
    for (; j + 4 <= n; j += 4) {
        s0 += a[j] * b[j];
        s1 += a[j + 1] * b[j + 1];
        s2 += a[j + 2] * b[j + 2];
        s3 += a[j + 3] * b[j + 3];
    }
    for (; j < n; ++j) s0 += a[j] * b[j];
    return (s0 + s1) + (s2 + s3);
}

inline void axpy(double* y, double a, const double* x, int n) {
    for (int j = 0; j < n; ++j) y[j] += a * x[j];
}

}  // namespace

void gemv(const Tensor2& w, const double* x, double* y, bool accumulate) {
    const int r = w.rows, c = w.cols;
    for (int i = 0; i < r; ++i) {
        const double acc = dot(w.row(i), x, c);
        y[i] = accumulate ? y[i] + acc : acc;
    }
}

void gemv_t(const Tensor2& w, const double* x, double* y) {
    const int r = w.rows, c = w.cols;
    for (int i = 0; i < r; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        axpy(y, xi, w.row(i), c);
    }
}

void add_outer(Tensor2& w, const double* u, const double* v) {
    const int r = w.rows, c = w.cols;
    for (int i = 0; i < r; ++i) {
        if (u[i] == 0.0) continue;
        axpy(w.row(i), u[i], v, c);
    }
}

// Row-of-W stays in registers across a block of four steps so the weight
// matrix streams through memory once per call, not once per step.
void gemm_rows(const Tensor2& w, const Tensor2& x, Tensor2& out) {
    const int steps = x.rows, r = w.rows, c = w.cols;
    int t = 0;
    for (; t + 4 <= steps; t += 4) {
        const double* x0 = x.row(t);
        const double* x1 = x.row(t + 1);
        const double* x2 = x.row(t + 2);
        const double* x3 = x.row(t + 3);
        for (int i = 0; i < r; ++i) {
            const double* wi = w.row(i);
            double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
            for (int j = 0; j < c; ++j) {
                const double wij = wi[j];
                a0 += wij * x0[j];
                a1 += wij * x1[j];
                a2 += wij * x2[j];
                a3 += wij * x3[j];
            }
            out(t, i) = a0;
            out(t + 1, i) = a1;
            out(t + 2, i) = a2;
            out(t + 3, i) = a3;
        }
    }
    for (; t < steps; ++t) gemv(w, x.row(t), out.row(t), false);
}

void gemm_rows_t(const Tensor2& w, const Tensor2& x, Tensor2& out) {
    const int steps = x.rows, r = w.rows, c = w.cols;
    for (int i = 0; i < r; ++i) {
        const double* wi = w.row(i);
        for (int t = 0; t < steps; ++t) {
            const double xi = x(t, i);
            if (xi == 0.0) continue;
            axpy(out.row(t), xi, wi, c);
        }
    }
}

void accumulate_outer_rows(Tensor2& w, const Tensor2& u, const Tensor2& v,
                           int t_begin, int t_end) {
    const int r = w.rows, c = w.cols;
    for (int i = 0; i < r; ++i) {
        double* wi = w.row(i);
        for (int t = t_begin; t < t_end; ++t) {
            const double ut = u(t, i);
            if (ut == 0.0) continue;
            axpy(wi, ut, v.row(t), c);
        }
    }
}

Tensor1 log_softmax(const Tensor1& z) {
    if (z.empty()) throw std::invalid_argument("log_softmax: empty input");
    Tensor1 out = z;
    log_softmax_inplace(out.data(), static_cast<int>(out.size()));
    return out;
}

void log_softmax_inplace(double* z, int n) {
    if (n <= 0) throw std::invalid_argument("log_softmax: empty input");
    double m = z[0];
    for (int i = 1; i < n; ++i) m = std::max(m, z[i]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::exp(z[i] - m);
    const double lse = m + std::log(sum);
    for (int i = 0; i < n; ++i) z[i] -= lse;
}

}  // namespace routelab
