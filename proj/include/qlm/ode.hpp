#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace qlm {

struct OdeTrace {
    std::vector<double> t;
    std::vector<double> y;

    /// Linear interpolation of the trace at time s (clamped to the span).
    double eval(double s) const {
        if (t.empty()) return 0.0;
        if (s <= t.front()) return y.front();
        if (s >= t.back()) return y.back();
        size_t lo = 0, hi = t.size() - 1;
        while (hi - lo > 1) {
            const size_t mid = (lo + hi) / 2;
            (t[mid] <= s ? lo : hi) = mid;
        }
        const double w = (s - t[lo]) / (t[hi] - t[lo]);
        return y[lo] + w * (y[hi] - y[lo]);
    }
};

/// Classical fixed-step RK4 for the scalar IVP y' = f(t, y), y(t0) = y0.
inline OdeTrace rk4(const std::function<double(double, double)>& f, double y0, double t0, double t1,
                    int steps) {
    OdeTrace tr;
    tr.t.reserve(size_t(steps) + 1);
    tr.y.reserve(size_t(steps) + 1);
    const double dt = (t1 - t0) / steps;
    double y = y0;
    tr.t.push_back(t0);
    tr.y.push_back(y);
    for (int i = 0; i < steps; ++i) {
        const double t = t0 + i * dt;
        const double k1 = f(t, y);
        const double k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1);
        const double k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2);
        const double k4 = f(t + dt, y + dt * k3);
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tr.t.push_back(t0 + (i + 1) * dt);
        tr.y.push_back(y);
    }
    return tr;
}

}  // namespace qlm
