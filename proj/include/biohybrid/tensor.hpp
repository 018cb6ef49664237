#pragma once

#include <array>
#include <cmath>

#include <Eigen/Core>

namespace biohybrid {

using Vec3 = std::array<double, 3>;

//------------------------------------------------------------------------------
// Voigt convention used everywhere in the library.
//
//   index : 0   1   2   3   4   5
//   pair  : 11  22  33  12  13  23
//
// SymTensor3 stores the tensor components themselves (no factor 2 on shear).
// A fourth-order tangent CC is stored as Tangent(I, J) = CC_ijkl with
// I = (ij), J = (kl).  Contracting a Tangent with the engineering Voigt vector
// of a strain increment (dE11, dE22, dE33, 2dE12, 2dE13, 2dE23) gives the
// stress increment in component storage, i.e. dS = CC : dE.
//------------------------------------------------------------------------------
using Tangent = Eigen::Matrix<double, 6, 6>;
using Voigt6 = Eigen::Matrix<double, 6, 1>;

constexpr std::array<std::array<int, 3>, 3> kVoigtIndex{{{0, 3, 4}, {3, 1, 5}, {4, 5, 2}}};
constexpr std::array<std::array<int, 2>, 6> kVoigtPair{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

constexpr int voigt_index(int i, int j) { return kVoigtIndex[i][j]; }

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Unit vector.  Construction from a (near) zero vector throws instead of
// silently picking a direction.
class Direction
{
public:
    Direction() = default; // e1
    explicit Direction(const Vec3& v);
    Direction(double x, double y, double z) : Direction(Vec3{x, y, z}) {}

    const Vec3& vec() const noexcept { return v_; }
    double operator[](int i) const noexcept { return v_[i]; }

    bool operator==(const Direction&) const = default;

private:
    Vec3 v_{1.0, 0.0, 0.0};
};

// General (non-symmetric) 3x3 tensor, row-major.
class Tensor3
{
public:
    Tensor3() = default;
    explicit Tensor3(const std::array<double, 9>& a) : a_(a) {}

    static Tensor3 identity() { return diag(1.0, 1.0, 1.0); }
    static Tensor3 diag(double a, double b, double c);
    static Tensor3 outer(const Vec3& a, const Vec3& b);

    double& operator()(int i, int j) noexcept { return a_[3 * i + j]; }
    double operator()(int i, int j) const noexcept { return a_[3 * i + j]; }
    const std::array<double, 9>& data() const noexcept { return a_; }

    double det() const noexcept;
    double trace() const noexcept { return a_[0] + a_[4] + a_[8]; }
    Tensor3 transpose() const noexcept;
    // Throws InvalidDeformation when |det| <= 1e-14.
    Tensor3 inverse() const;

    Tensor3& operator+=(const Tensor3& o) noexcept;
    Tensor3& operator-=(const Tensor3& o) noexcept;
    Tensor3& operator*=(double s) noexcept;

    bool operator==(const Tensor3&) const = default;

private:
    std::array<double, 9> a_{};
};

Tensor3 operator*(const Tensor3& a, const Tensor3& b) noexcept;
Vec3 operator*(const Tensor3& a, const Vec3& v) noexcept;
inline Tensor3 operator+(Tensor3 a, const Tensor3& b) noexcept { return a += b; }
inline Tensor3 operator-(Tensor3 a, const Tensor3& b) noexcept { return a -= b; }
inline Tensor3 operator*(double s, Tensor3 a) noexcept { return a *= s; }

// Symmetric 3x3 tensor in six-component storage (order 11, 22, 33, 12, 13, 23).
class SymTensor3
{
public:
    SymTensor3() = default;
    explicit SymTensor3(const std::array<double, 6>& v) : v_(v) {}

    static SymTensor3 identity() { return diag(1.0, 1.0, 1.0); }
    static SymTensor3 diag(double a, double b, double c) { return SymTensor3({a, b, c, 0.0, 0.0, 0.0}); }
    // a (x) a
    static SymTensor3 dyad(const Vec3& a);
    // (A + A^T) / 2
    static SymTensor3 symmetric_part(const Tensor3& a);
    static SymTensor3 from_voigt(const Voigt6& v);

    double operator()(int i, int j) const noexcept { return v_[voigt_index(i, j)]; }
    double& operator[](int k) noexcept { return v_[k]; }
    double operator[](int k) const noexcept { return v_[k]; }
    const std::array<double, 6>& data() const noexcept { return v_; }

    double trace() const noexcept { return v_[0] + v_[1] + v_[2]; }
    double det() const noexcept;
    // Throws InvalidDeformation when |det| <= 1e-14.
    SymTensor3 inverse() const;
    Tensor3 full() const noexcept;
    Voigt6 voigt() const noexcept;

    SymTensor3& operator+=(const SymTensor3& o) noexcept;
    SymTensor3& operator-=(const SymTensor3& o) noexcept;
    SymTensor3& operator*=(double s) noexcept;

    bool operator==(const SymTensor3&) const = default;

private:
    std::array<double, 6> v_{};
};

inline SymTensor3 operator+(SymTensor3 a, const SymTensor3& b) noexcept { return a += b; }
inline SymTensor3 operator-(SymTensor3 a, const SymTensor3& b) noexcept { return a -= b; }
inline SymTensor3 operator*(double s, SymTensor3 a) noexcept { return a *= s; }
inline SymTensor3 operator*(SymTensor3 a, double s) noexcept { return a *= s; }

Tensor3 operator*(const SymTensor3& a, const SymTensor3& b) noexcept;
Tensor3 operator*(const Tensor3& a, const SymTensor3& b) noexcept;

// tr(A B) for symmetric A, B (= A : B).
double trace_product(const SymTensor3& a, const SymTensor3& b) noexcept;
// A A
SymTensor3 square(const SymTensor3& a) noexcept;
// A B + B A
SymTensor3 sym_product(const SymTensor3& a, const SymTensor3& b) noexcept;
// F S F^T
SymTensor3 push_forward(const Tensor3& f, const SymTensor3& s) noexcept;

// Fourth-order helpers, returned in the Tangent layout described above.
// A (x) B
Tangent outer(const SymTensor3& a, const SymTensor3& b) noexcept;
// (A_ik A_jl + A_il A_jk) / 2 ; minus the derivative of A^-1 w.r.t. A is this
// tensor evaluated at A^-1.
Tangent sym_outer_product(const SymTensor3& a) noexcept;
// d(C M + M C)/dC for symmetric M.
Tangent square_product_derivative(const SymTensor3& m) noexcept;

} // namespace biohybrid
