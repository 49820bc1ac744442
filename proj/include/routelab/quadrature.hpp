#pragma once

#include <functional>
#include <vector>

namespace routelab {

// Physicists' Gauss-Hermite rule: integral of exp(-t^2) f(t) dt
// ~= sum w_i f(t_i). Nodes ascend; weights are all positive.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermite gauss_hermite(int n);

// E[f(mu + sigma Z)] for Z ~ N(0,1) via the substitution z = sqrt(2) t.
double gauss_expectation(const GaussHermite& rule, double mu, double sigma,
                         const std::function<double(double)>& f);

}  // namespace routelab
