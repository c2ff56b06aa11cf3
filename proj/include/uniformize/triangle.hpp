#pragma once

#include <array>

namespace uniformize {

/// Milnor's Lobachevsky function, -int_0^x log|2 sin t| dt.
double lobachevsky(double x);

/// Clausen's function Cl2; lobachevsky(x) = clausen2(2x) / 2.
double clausen2(double theta);

/// Angles (and their cotangents) of a euclidean triangle, angle i opposite side i.
struct TriangleAngles {
    std::array<double, 3> angle;
    std::array<double, 3> cot;
};

/// Angles from side lengths; throws TriangleInequalityViolated unless all three
/// strict triangle inequalities hold.
TriangleAngles euclidean_angles(double l1, double l2, double l3);

/// Same, with sides exp(x_i).  Scale-invariant evaluation, safe for large |x|.
TriangleAngles angles_from_log_lengths(const std::array<double, 3>& x);

/// True iff exp(x) satisfies the strict triangle inequalities.
bool in_domain_a(const std::array<double, 3>& x);

struct TriangleF {
    double value;
    std::array<double, 3> gradient;
    std::array<std::array<double, 3>, 3> hessian;
};

/// f(x) = sum alpha_i x_i + sum Л(alpha_i), with its gradient (the angles) and
/// Hessian (cotangent form).  Throws OutsideDomainA outside the domain.
TriangleF triangle_f(const std::array<double, 3>& x);

} // namespace uniformize
