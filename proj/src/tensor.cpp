#include "biohybrid/tensor.hpp"

#include <cmath>

#include "biohybrid/errors.hpp"

namespace biohybrid {

namespace {

constexpr double kSingularDet = 1e-14;

inline double delta(int i, int j) { return i == j ? 1.0 : 0.0; }

} // namespace

Direction::Direction(const Vec3& v)
{
    const double n = norm(v);
    if (!(n > 1e-12))
        throw ParameterDomainError("direction vector has zero length");
    // already unit vectors are kept bit for bit
    v_ = std::abs(n - 1.0) <= 4e-16 ? v : Vec3{v[0] / n, v[1] / n, v[2] / n};
}

//------------------------------------------------------------------------------
// Tensor3
//------------------------------------------------------------------------------

Tensor3 Tensor3::diag(double a, double b, double c)
{
    Tensor3 t;
    t(0, 0) = a;
    t(1, 1) = b;
    t(2, 2) = c;
    return t;
}

Tensor3 Tensor3::outer(const Vec3& a, const Vec3& b)
{
    Tensor3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = a[i] * b[j];
    return t;
}

double Tensor3::det() const noexcept
{
    const auto& m = a_;
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Tensor3 Tensor3::transpose() const noexcept
{
    Tensor3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = (*this)(j, i);
    return t;
}

Tensor3 Tensor3::inverse() const
{
    const double d = det();
    if (std::abs(d) <= kSingularDet)
        throw InvalidDeformation("tensor is singular (|det| <= 1e-14)");
    const auto& m = a_;
    const double s = 1.0 / d;
    return Tensor3({(m[4] * m[8] - m[5] * m[7]) * s, (m[2] * m[7] - m[1] * m[8]) * s,
                    (m[1] * m[5] - m[2] * m[4]) * s, (m[5] * m[6] - m[3] * m[8]) * s,
                    (m[0] * m[8] - m[2] * m[6]) * s, (m[2] * m[3] - m[0] * m[5]) * s,
                    (m[3] * m[7] - m[4] * m[6]) * s, (m[1] * m[6] - m[0] * m[7]) * s,
                    (m[0] * m[4] - m[1] * m[3]) * s});
}

Tensor3& Tensor3::operator+=(const Tensor3& o) noexcept
{
    for (int k = 0; k < 9; ++k)
        a_[k] += o.a_[k];
    return *this;
}

Tensor3& Tensor3::operator-=(const Tensor3& o) noexcept
{
    for (int k = 0; k < 9; ++k)
        a_[k] -= o.a_[k];
    return *this;
}

Tensor3& Tensor3::operator*=(double s) noexcept
{
    for (auto& x : a_)
        x *= s;
    return *this;
}

Tensor3 operator*(const Tensor3& a, const Tensor3& b) noexcept
{
    Tensor3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return c;
}

Vec3 operator*(const Tensor3& a, const Vec3& v) noexcept
{
    return {a(0, 0) * v[0] + a(0, 1) * v[1] + a(0, 2) * v[2],
            a(1, 0) * v[0] + a(1, 1) * v[1] + a(1, 2) * v[2],
            a(2, 0) * v[0] + a(2, 1) * v[1] + a(2, 2) * v[2]};
}

//------------------------------------------------------------------------------
// SymTensor3
//------------------------------------------------------------------------------

SymTensor3 SymTensor3::dyad(const Vec3& a)
{
    return SymTensor3({a[0] * a[0], a[1] * a[1], a[2] * a[2], a[0] * a[1], a[0] * a[2], a[1] * a[2]});
}

SymTensor3 SymTensor3::symmetric_part(const Tensor3& a)
{
    return SymTensor3({a(0, 0), a(1, 1), a(2, 2), 0.5 * (a(0, 1) + a(1, 0)), 0.5 * (a(0, 2) + a(2, 0)),
                       0.5 * (a(1, 2) + a(2, 1))});
}

SymTensor3 SymTensor3::from_voigt(const Voigt6& v)
{
    return SymTensor3({v(0), v(1), v(2), v(3), v(4), v(5)});
}

double SymTensor3::det() const noexcept
{
    const auto& s = v_;
    return s[0] * (s[1] * s[2] - s[5] * s[5]) - s[3] * (s[3] * s[2] - s[5] * s[4]) +
           s[4] * (s[3] * s[5] - s[1] * s[4]);
}

SymTensor3 SymTensor3::inverse() const
{
    const double d = det();
    if (std::abs(d) <= kSingularDet)
        throw InvalidDeformation("symmetric tensor is singular (|det| <= 1e-14)");
    const auto& s = v_;
    const double r = 1.0 / d;
    return SymTensor3({(s[1] * s[2] - s[5] * s[5]) * r, (s[0] * s[2] - s[4] * s[4]) * r,
                       (s[0] * s[1] - s[3] * s[3]) * r, (s[4] * s[5] - s[3] * s[2]) * r,
                       (s[3] * s[5] - s[4] * s[1]) * r, (s[3] * s[4] - s[0] * s[5]) * r});
}

Tensor3 SymTensor3::full() const noexcept
{
    Tensor3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t(i, j) = (*this)(i, j);
    return t;
}

Voigt6 SymTensor3::voigt() const noexcept
{
    Voigt6 v;
    for (int k = 0; k < 6; ++k)
        v(k) = v_[k];
    return v;
}

SymTensor3& SymTensor3::operator+=(const SymTensor3& o) noexcept
{
    for (int k = 0; k < 6; ++k)
        v_[k] += o.v_[k];
    return *this;
}

SymTensor3& SymTensor3::operator-=(const SymTensor3& o) noexcept
{
    for (int k = 0; k < 6; ++k)
        v_[k] -= o.v_[k];
    return *this;
}

SymTensor3& SymTensor3::operator*=(double s) noexcept
{
    for (auto& x : v_)
        x *= s;
    return *this;
}

Tensor3 operator*(const SymTensor3& a, const SymTensor3& b) noexcept
{
    Tensor3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return c;
}

Tensor3 operator*(const Tensor3& a, const SymTensor3& b) noexcept
{
    Tensor3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return c;
}

double trace_product(const SymTensor3& a, const SymTensor3& b) noexcept
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5]);
}

SymTensor3 square(const SymTensor3& a) noexcept
{
    return SymTensor3::symmetric_part(a * a);
}

SymTensor3 sym_product(const SymTensor3& a, const SymTensor3& b) noexcept
{
    return 2.0 * SymTensor3::symmetric_part(a * b);
}

SymTensor3 push_forward(const Tensor3& f, const SymTensor3& s) noexcept
{
    return SymTensor3::symmetric_part(f * s * f.transpose());
}

Tangent outer(const SymTensor3& a, const SymTensor3& b) noexcept
{
    return a.voigt() * b.voigt().transpose();
}

Tangent sym_outer_product(const SymTensor3& a) noexcept
{
    Tangent t;
    for (int I = 0; I < 6; ++I) {
        const auto [i, j] = kVoigtPair[I];
        for (int J = 0; J < 6; ++J) {
            const auto [k, l] = kVoigtPair[J];
            t(I, J) = 0.5 * (a(i, k) * a(j, l) + a(i, l) * a(j, k));
        }
    }
    return t;
}

Tangent square_product_derivative(const SymTensor3& m) noexcept
{
    Tangent t;
    for (int I = 0; I < 6; ++I) {
        const auto [i, j] = kVoigtPair[I];
        for (int J = 0; J < 6; ++J) {
            const auto [p, q] = kVoigtPair[J];
            t(I, J) = 0.5 * (delta(i, p) * m(q, j) + delta(i, q) * m(p, j) + m(i, p) * delta(j, q) +
                             m(i, q) * delta(j, p));
        }
    }
    return t;
}

} // namespace biohybrid
