#include "uniformize/triangle.hpp"

#include "uniformize/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace uniformize {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTerms = 30;

// Coefficients of the expansion
//   Cl2(t) = t - t log t + sum_n c_n t^(2n+1),  0 < t < 2 pi,
// with c_n = |B_2n| / (2n (2n+1)!) = 2 zeta(2n) / (2n (2n+1) (2 pi)^(2n)).
struct ClausenCoefficients {
    std::array<double, kTerms> c{};

    ClausenCoefficients()
    {
        const double pi2 = kPi * kPi;
        for (int n = 1; n <= kTerms; ++n) {
            double zeta;
            switch (n) {
            case 1: zeta = pi2 / 6.0; break;
            case 2: zeta = pi2 * pi2 / 90.0; break;
            case 3: zeta = pi2 * pi2 * pi2 / 945.0; break;
            default: {
                zeta = 0.0;
                for (int k = 2000; k >= 1; --k)
                    zeta += std::pow(static_cast<double>(k), -2.0 * n);
            }
            }
            c[n - 1] = 2.0 * zeta / (2.0 * n * (2.0 * n + 1.0) * std::pow(2.0 * kPi, 2.0 * n));
        }
    }
};

const ClausenCoefficients& coefficients()
{
    static const ClausenCoefficients k;
    return k;
}

} // namespace

double clausen2(double theta)
{
    if (!std::isfinite(theta))
        return std::numeric_limits<double>::quiet_NaN();
    double t = std::remainder(theta, 2.0 * kPi); // in [-pi, pi]
    const double sign = t < 0 ? -1.0 : 1.0;
    t = std::abs(t);
    if (t == 0.0)
        return 0.0;
    const auto& c = coefficients().c;
    const double t2 = t * t;
    double poly = 0.0;
    for (int n = kTerms - 1; n >= 0; --n)
        poly = poly * t2 + c[n];
    return sign * (t - t * std::log(t) + t * t2 * poly);
}

double lobachevsky(double x) { return 0.5 * clausen2(2.0 * x); }

TriangleAngles euclidean_angles(double l1, double l2, double l3)
{
    const double t1 = l2 + l3 - l1;
    const double t2 = l3 + l1 - l2;
    const double t3 = l1 + l2 - l3;
    if (!(l1 > 0 && l2 > 0 && l3 > 0 && t1 > 0 && t2 > 0 && t3 > 0))
        throw Error(ErrorCode::TriangleInequalityViolated, "side lengths violate the triangle inequality");
    const double s = l1 + l2 + l3;
    // 4 * area
    const double denom = std::sqrt(t1 * t2 * t3 * s);
    TriangleAngles out;
    out.angle[0] = 2.0 * std::atan2(t2 * t3, denom);
    out.angle[1] = 2.0 * std::atan2(t3 * t1, denom);
    out.angle[2] = 2.0 * std::atan2(t1 * t2, denom);
    out.cot[0] = (t1 * s - t2 * t3) / (2.0 * denom);
    out.cot[1] = (t2 * s - t3 * t1) / (2.0 * denom);
    out.cot[2] = (t3 * s - t1 * t2) / (2.0 * denom);
    return out;
}

TriangleAngles angles_from_log_lengths(const std::array<double, 3>& x)
{
    const double m = std::max({x[0], x[1], x[2]});
    return euclidean_angles(std::exp(x[0] - m), std::exp(x[1] - m), std::exp(x[2] - m));
}

bool in_domain_a(const std::array<double, 3>& x)
{
    const double m = std::max({x[0], x[1], x[2]});
    const double l1 = std::exp(x[0] - m), l2 = std::exp(x[1] - m), l3 = std::exp(x[2] - m);
    return l2 + l3 - l1 > 0 && l3 + l1 - l2 > 0 && l1 + l2 - l3 > 0;
}

TriangleF triangle_f(const std::array<double, 3>& x)
{
    if (!in_domain_a(x))
        throw Error(ErrorCode::OutsideDomainA, "exp(x) violates the triangle inequality");
    const TriangleAngles a = angles_from_log_lengths(x);
    TriangleF out;
    out.value = 0.0;
    for (int i = 0; i < 3; ++i) {
        out.value += a.angle[i] * x[i] + lobachevsky(a.angle[i]);
        out.gradient[i] = a.angle[i];
    }
    // D^2 f = sum_i cot(alpha_i) (dx_j - dx_k)^2
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        out.hessian[i][i] = a.cot[j] + a.cot[k];
        out.hessian[j][k] = out.hessian[k][j] = -a.cot[i];
    }
    return out;
}

} // namespace uniformize
