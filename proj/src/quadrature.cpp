#include "cpatom/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include <fmt/format.h>

#include "cpatom/errors.hpp"

namespace cpatom::quad {

namespace {

struct Piece {
    double a, b, value, err, l1;
    bool operator<(const Piece& o) const { return err < o.err; }
};

Piece gk31(const std::function<double(double)>& f, double a, double b) {
    Piece p{a, b, 0, 0, 0};
    p.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &p.err, &p.l1);
    return p;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double abs_floor) {
    if (a == b) return 0.0;
    if (std::isinf(b)) {
        // s = a + t/(1-t) maps [0, 1) onto [a, inf).
        auto g = [&](double t) {
            double u = 1.0 - t;
            return f(a + t / u) / (u * u);
        };
        return integrate(g, 0.0, 1.0, tol, abs_floor);
    }
    std::priority_queue<Piece> heap;
    heap.push(gk31(f, a, b));
    double value = heap.top().value, err = heap.top().err, l1 = heap.top().l1;
    const int max_pieces = 4000;
    for (int n = 1; n < max_pieces; ++n) {
        double target = tol * std::max(std::abs(value), abs_floor);
        if (err <= target || err <= 2048 * std::numeric_limits<double>::epsilon() * l1) return value;
        Piece worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Piece left = gk31(f, worst.a, mid), right = gk31(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }
    throw IntegrationError(fmt::format(
        "quadrature did not converge on [{:g}, {:g}]: estimate {:g}, error {:g}", a, b, value, err));
}

double integrate_pieces(const std::function<double(double)>& f, std::vector<double> pts, double tol,
                        double abs_floor) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double sum = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) sum += integrate(f, pts[i], pts[i + 1], tol, abs_floor);
    return sum;
}

void Wynn::push(double s) {
    sums_.push_back(s);
    const size_t m = std::min<size_t>(sums_.size(), 20);
    std::vector<double> e0(sums_.end() - m, sums_.end());
    std::vector<double> em1(m, 0.0);
    best_ = e0.back();
    err_ = m >= 2 ? std::abs(e0[m - 1] - e0[m - 2]) : 1e300;
    for (int k = 0; e0.size() > 1; ++k) {
        std::vector<double> e1(e0.size() - 1);
        for (size_t i = 0; i + 1 < e0.size(); ++i) {
            double d = e0[i + 1] - e0[i];
            if (d == 0.0) return;
            e1[i] = em1[i + 1] + 1.0 / d;
        }
        // Odd columns are auxiliary; even columns carry the extrapolated limit.
        if ((k + 1) % 2 == 0) {
            if (!std::isfinite(e1.back())) return;
            err_ = std::abs(e1.back() - best_);
            best_ = e1.back();
        }
        em1 = std::move(e0);
        e0 = std::move(e1);
    }
}

double oscillatory_tail(const std::function<double(double)>& f, double a, double half, double tol,
                        double abs_floor, int max_chunks) {
    Wynn w;
    double sum = 0.0, lo = a;
    double prev_est = std::numeric_limits<double>::quiet_NaN();
    int stable = 0;
    for (int k = 0; k < max_chunks; ++k) {
        double hi = lo + half;
        double c = integrate(f, lo, hi, tol * 1e-2, std::max(abs_floor, std::abs(sum)) + 1e-300);
        sum += c;
        lo = hi;
        w.push(sum);
        double est = w.size() >= 5 ? w.estimate() : sum;
        double scale = std::max(std::abs(est), abs_floor);
        if (std::abs(c) <= 1e-3 * tol * scale) return sum;
        if (std::isfinite(prev_est) && std::abs(est - prev_est) <= tol * scale) {
            if (++stable >= 3) return est;
        } else {
            stable = 0;
        }
        prev_est = est;
    }
    throw IntegrationError("oscillatory tail did not converge after " + std::to_string(max_chunks) +
                           " half periods");
}

}  // namespace cpatom::quad
