#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace routelab {

using Tensor1 = std::vector<double>;

// Dense row-major matrix of doubles.
struct Tensor2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Tensor2() = default;
    Tensor2(int r, int c) : rows(r), cols(c), v(static_cast<size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return v[static_cast<size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return v[static_cast<size_t>(i) * cols + j]; }
    double* row(int i) { return v.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return v.data() + static_cast<size_t>(i) * cols; }
    size_t size() const { return v.size(); }
    void fill(double x) { std::fill(v.begin(), v.end(), x); }
};

bool all_finite(const Tensor1& t);
bool all_finite(const Tensor2& t);
void assert_finite(const Tensor1& t, const std::string& what);
void assert_finite(const Tensor2& t, const std::string& what);

// y = W x (accumulate=false) or y += W x (accumulate=true); y must not alias x.
void gemv(const Tensor2& w, const double* x, double* y, bool accumulate);
// y += W^T x
void gemv_t(const Tensor2& w, const double* x, double* y);
// W += u v^T
void add_outer(Tensor2& w, const double* u, const double* v);

// Batched kernels over step-major buffers (each row of X/Y is one step).
//
// out[t,:] = W * X[t,:]       out is T x rows(W), X is T x cols(W)
void gemm_rows(const Tensor2& w, const Tensor2& x, Tensor2& out);
// out[t,:] += W^T * X[t,:]    out is T x cols(W), X is T x rows(W)
void gemm_rows_t(const Tensor2& w, const Tensor2& x, Tensor2& out);
// W += sum_t U[t,:]^T outer V[t,:]  (i.e. W(r,c) += sum_t U[t,r] V[t,c])
void accumulate_outer_rows(Tensor2& w, const Tensor2& u, const Tensor2& v,
                           int t_begin, int t_end);

// z - max(z) - log(sum exp(z - max(z))); exponentials of the result sum to 1.
Tensor1 log_softmax(const Tensor1& z);
void log_softmax_inplace(double* z, int n);

}  // namespace routelab
