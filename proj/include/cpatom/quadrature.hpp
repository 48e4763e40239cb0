#pragma once

#include <functional>
#include <vector>

namespace cpatom::quad {

// Adaptive Gauss-Kronrod on [a, b]; b may be +inf. Throws IntegrationError
// when the error estimate stays above tol * max(|I|, abs_floor).
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double abs_floor = 0.0);

// Same, split at the given interior breakpoints.
double integrate_pieces(const std::function<double(double)>& f, std::vector<double> pts, double tol,
                        double abs_floor = 0.0);

// Wynn epsilon extrapolation of a sequence of partial sums.
class Wynn {
public:
    void push(double partial_sum);
    double estimate() const { return best_; }
    double error() const { return err_; }
    int size() const { return static_cast<int>(sums_.size()); }

private:
    std::vector<double> sums_;
    double best_ = 0.0;
    double err_ = 1e300;
};

// Integral of f over [a, inf) where f oscillates with half-period `half`.
// The range is cut at a + k*half and the chunk sums are accelerated.
double oscillatory_tail(const std::function<double(double)>& f, double a, double half, double tol,
                        double abs_floor = 0.0, int max_chunks = 20000);

}  // namespace cpatom::quad
