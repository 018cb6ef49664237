#include "biohybrid/element.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "biohybrid/errors.hpp"
#include "hex8_shape.hpp"

namespace biohybrid {

namespace {

using Mat3 = Eigen::Matrix3d;

Mat3 to_eigen(const Tensor3& t)
{
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m(i, j) = t(i, j);
    return m;
}

[[noreturn]] void inverted(int element, const char* where)
{
    std::ostringstream os;
    os << "element " << element << " inverted (" << where << ")";
    throw ElementInversion(os.str(), element);
}

} // namespace

ElementOutput element_residual_stiffness(const std::array<Vec3, 8>& X, const std::array<Vec3, 8>& u,
                                         const ElementGaussData& history, const MaterialParams& params,
                                         double dt, double t, int element_id, const ElementOptions& opt)
{
    ElementOutput out;
    const auto& gps = detail::hex_gauss_points();

    struct Point
    {
        double wdet;                  // weight * det J0
        std::array<Eigen::Vector3d, 8> g0; // reference gradients
        Mat3 F;
        double J;
    };
    std::array<Point, 8> pts;

    double V = 0.0, v = 0.0;
    for (int q = 0; q < 8; ++q) {
        const Tensor3 j0 = detail::hex_jacobian(X, gps[q]);
        const double det0 = j0.det();
        if (!(det0 > 0.0))
            inverted(element_id, "reference Jacobian");
        const Mat3 j0inv = to_eigen(j0).inverse();
        Point& p = pts[q];
        p.wdet = det0;
        p.F = Mat3::Identity();
        for (int a = 0; a < 8; ++a) {
            const Eigen::Vector3d dxi(gps[q].dN[a][0], gps[q].dN[a][1], gps[q].dN[a][2]);
            p.g0[a] = j0inv.transpose() * dxi;
            p.F += Eigen::Vector3d(u[a][0], u[a][1], u[a][2]) * p.g0[a].transpose();
        }
        p.J = p.F.determinant();
        if (!(p.J > 0.0))
            inverted(element_id, "det F <= 0 at a Gauss point");
        V += p.wdet;
        v += p.wdet * p.J;
    }

    ResponseOptions ropt;
    ropt.include_matrix_volumetric = !opt.mean_dilatation;
    ropt.local = opt.local;

    ElementVector dv = ElementVector::Zero();
    ElementMatrix d2v = ElementMatrix::Zero();

    for (int q = 0; q < 8; ++q) {
        const Point& p = pts[q];
        Tensor3 f;
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                f(i, k) = p.F(i, k);

        const PointResponse resp = total_response(f, params, history[q].state, dt, t, ropt);

        Eigen::Matrix<double, 6, 24> B;
        for (int a = 0; a < 8; ++a) {
            const Eigen::Vector3d& g = p.g0[a];
            for (int k = 0; k < 3; ++k) {
                const int c = 3 * a + k;
                B(0, c) = p.F(k, 0) * g(0);
                B(1, c) = p.F(k, 1) * g(1);
                B(2, c) = p.F(k, 2) * g(2);
                B(3, c) = p.F(k, 0) * g(1) + p.F(k, 1) * g(0);
                B(4, c) = p.F(k, 0) * g(2) + p.F(k, 2) * g(0);
                B(5, c) = p.F(k, 1) * g(2) + p.F(k, 2) * g(1);
            }
        }
        Voigt6 s;
        for (int I = 0; I < 6; ++I)
            s(I) = resp.st.S[I];

        out.r += p.wdet * B.transpose() * s;
        out.energy += p.wdet * resp.psi;

        if (opt.want_tangent) {
            out.K += p.wdet * B.transpose() * resp.st.CC * B;
            const Mat3 S = to_eigen(resp.st.S.full());
            for (int a = 0; a < 8; ++a)
                for (int b = 0; b < 8; ++b) {
                    const double kg = p.wdet * p.g0[a].dot(S * p.g0[b]);
                    for (int k = 0; k < 3; ++k)
                        out.K(3 * a + k, 3 * b + k) += kg;
                }
        }

        if (opt.mean_dilatation) {
            const Mat3 finvT = p.F.inverse().transpose();
            std::array<Eigen::Vector3d, 8> n;
            for (int a = 0; a < 8; ++a)
                n[a] = finvT * p.g0[a];
            const double wj = p.wdet * p.J;
            for (int a = 0; a < 8; ++a)
                for (int k = 0; k < 3; ++k)
                    dv(3 * a + k) += wj * n[a](k);
            if (opt.want_tangent)
                for (int a = 0; a < 8; ++a)
                    for (int b = 0; b < 8; ++b)
                        for (int k = 0; k < 3; ++k)
                            for (int l = 0; l < 3; ++l)
                                d2v(3 * a + k, 3 * b + l) += wj * (n[a](k) * n[b](l) - n[a](l) * n[b](k));
        }

        GaussPointData& gd = out.gauss[q];
        gd.state = resp.state;
        gd.F = f;
        gd.S = resp.st.S;
        gd.sigma = cauchy_stress(f, resp.st.S);
        gd.psi_m = resp.psi_m;
        gd.fiber_strain = resp.fiber_strain;
    }

    if (opt.mean_dilatation) {
        const double Jbar = v / V;
        if (!(Jbar > 0.0))
            inverted(element_id, "mean volume ratio <= 0");
        const VolumetricResponse vol = matrix_volumetric(Jbar, params.matrix);
        out.r += vol.dU * dv;
        out.energy += V * vol.U;
        if (opt.want_tangent)
            out.K += (vol.d2U / V) * dv * dv.transpose() + vol.dU * d2v;
        for (auto& gd : out.gauss) {
            // volumetric stress of the averaged field: sigma_vol = U'(Jbar) I
            const double J = gd.F.det();
            const SymTensor3 cinv = right_cauchy_green(gd.F).inverse();
            gd.S = gd.S + (vol.dU * J) * cinv;
            gd.sigma = gd.sigma + vol.dU * SymTensor3::identity();
        }
    }
    return out;
}

FaceLoad pressure_load(const std::array<Vec3, 4>& x, double P)
{
    static const double nat[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    const double g = 1.0 / std::sqrt(3.0);
    std::array<Eigen::Vector3d, 4> xe;
    for (int a = 0; a < 4; ++a)
        xe[a] = Eigen::Vector3d(x[a][0], x[a][1], x[a][2]);

    auto skew = [](const Eigen::Vector3d& w) {
        Mat3 m;
        m << 0, -w(2), w(1), w(2), 0, -w(0), -w(1), w(0), 0;
        return m;
    };

    FaceLoad out;
    for (int q = 0; q < 4; ++q) {
        const double s = g * nat[q][0], tt = g * nat[q][1];
        double N[4], Ns[4], Nt[4];
        Eigen::Vector3d xs = Eigen::Vector3d::Zero(), xt = Eigen::Vector3d::Zero();
        for (int a = 0; a < 4; ++a) {
            N[a] = 0.25 * (1 + s * nat[a][0]) * (1 + tt * nat[a][1]);
            Ns[a] = 0.25 * nat[a][0] * (1 + tt * nat[a][1]);
            Nt[a] = 0.25 * nat[a][1] * (1 + s * nat[a][0]);
            xs += Ns[a] * xe[a];
            xt += Nt[a] * xe[a];
        }
        const Eigen::Vector3d n = xs.cross(xt);
        if (!(n.norm() > 1e-14))
            throw ParameterDomainError("degenerate pressure face");
        const Mat3 sxs = skew(xs), sxt = skew(xt);
        for (int a = 0; a < 4; ++a) {
            out.f.segment<3>(3 * a) += -P * N[a] * n;
            for (int b = 0; b < 4; ++b)
                out.K.block<3, 3>(3 * a, 3 * b) += -P * N[a] * (-Ns[b] * sxt + Nt[b] * sxs);
        }
    }
    return out;
}

} // namespace biohybrid
