#include "vk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "vk/errors.hpp"

namespace vk::coeffs {
namespace {

// Kronrod abscissae (nonnegative half) and weights; odd indices are the
// embedded 7-point Gauss nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t k = 0; k < 7; ++k) {
        const double dx = half * kNodes[k];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[k] * pair;
        if (k % 2 == 1) gauss += kGaussWeights[k / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts) {
    if (a == b) return {};

    std::priority_queue<Segment> work;
    work.push(gauss_kronrod(f, a, b));
    double total = work.top().value;
    double error = work.top().error;

    while (error > opts.abs_tol) {
        if (work.size() >= opts.max_intervals) {
            throw QuadratureError("integrate: tolerance not reached within interval budget");
        }
        const Segment worst = work.top();
        work.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        work.push(left);
        work.push(right);
    }

    // Re-sum from the pieces so the running updates leave no rounding residue.
    QuadResult result;
    result.intervals = work.size();
    std::vector<Segment> pieces;
    pieces.reserve(work.size());
    while (!work.empty()) {
        pieces.push_back(work.top());
        work.pop();
    }
    std::sort(pieces.begin(), pieces.end(),
              [](const Segment& x, const Segment& y) { return x.a < y.a; });
    for (const auto& s : pieces) {
        result.value += s.value;
        result.abs_error += s.error;
    }
    return result;
}

}  // namespace vk::coeffs
