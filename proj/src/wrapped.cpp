#include "sqid/wrapped.hpp"

#include <cmath>
#include <stdexcept>

namespace sqid {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kUnitTol = 1e-9;

void check_unit(const Eigen::VectorXd& s, int n) {
    if (s.size() != n) throw std::domain_error("wrapped: dimension mismatch");
    if (std::fabs(s.norm() - 1.0) > kUnitTol)
        throw std::domain_error("wrapped: input is not a unit vector");
}
}  // namespace

double WrappedCode::alpha(int i) const {
    return kPi * (static_cast<double>(i) / annuli - 0.5);
}

double WrappedCode::anchor_latitude(int i) const {
    return north(i) ? alpha(i) : alpha(i + 1);
}

WrappedCode WrappedCode::make(int n, LatticeSpec lattice) {
    const auto raw = static_cast<int>(std::ceil(kPi / std::sqrt(lattice.d_min)));
    return make_with_annuli(n, std::move(lattice), raw + raw % 2);
}

WrappedCode WrappedCode::make_with_annuli(int n, LatticeSpec lattice, int annuli) {
    if (n < 3) throw std::domain_error("wrapped: ambient dimension must be >= 3");
    if (lattice.dim != n - 1)
        throw std::domain_error("wrapped: lattice dimension must be n - 1");
    if (annuli < 2 || annuli % 2 != 0)
        throw std::domain_error("wrapped: annulus count must be even and >= 2");
    WrappedCode code;
    code.n = n;
    code.lattice = std::move(lattice);
    code.annuli = annuli;
    return code;
}

int annulus_index(const WrappedCode& code, const Eigen::VectorXd& s) {
    check_unit(s, code.n);
    const double sn = std::clamp(s(code.n - 1), -1.0, 1.0);
    const double lat = std::asin(sn);
    const int N = code.annuli;
    int i = static_cast<int>(std::floor((lat / kPi + 0.5) * N));
    i = std::clamp(i, 0, N - 1);
    while (i > 0 && lat < code.alpha(i)) --i;
    while (i < N - 1 && lat >= code.alpha(i + 1)) ++i;
    return i;
}

Eigen::VectorXd boundary_projection(const WrappedCode& code, const Eigen::VectorXd& s,
                                    int i) {
    check_unit(s, code.n);
    const int n = code.n;
    const double a = code.anchor_latitude(i);
    Eigen::VectorXd head = s.head(n - 1);
    const double hn = head.norm();
    Eigen::VectorXd out(n);
    if (hn == 0.0) {
        out.setZero();
        out(0) = std::cos(a);  // arbitrary fixed direction at the poles
    } else {
        out.head(n - 1) = head * (std::cos(a) / hn);
    }
    out(n - 1) = std::sin(a);
    return out;
}

Eigen::VectorXd map_to_plane(const WrappedCode& code, const Eigen::VectorXd& s) {
    check_unit(s, code.n);
    const int n = code.n;
    const int i = annulus_index(code, s);
    const double a = code.anchor_latitude(i);
    const double lat = std::asin(std::clamp(s(n - 1), -1.0, 1.0));
    const double radius = std::cos(a) - 2.0 * std::sin(0.5 * std::fabs(lat - a));
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n - 1);
    if (radius <= 0.0) return y;  // polar cap
    const Eigen::VectorXd head = s.head(n - 1);
    y = head * (radius / head.norm());
    return y;
}

Eigen::VectorXd inverse_map(const WrappedCode& code, const Eigen::VectorXd& y, int i,
                            bool north_hemisphere) {
    const int n = code.n;
    if (y.size() != n - 1) throw std::domain_error("inverse_map: dimension mismatch");
    const double ny = y.norm();
    if (ny <= 0.0)
        throw std::domain_error("inverse_map: zero point (pole codeword handled by caller)");
    if (ny > 1.0 + kUnitTol)
        throw std::domain_error("inverse_map: point outside the unit ball");
    const double a = code.anchor_latitude(i);
    const double shift = 2.0 * std::asin(0.5 * (std::cos(a) - std::min(ny, 1.0)));
    const double lat = north_hemisphere ? a + shift : a - shift;
    Eigen::VectorXd s(n);
    s.head(n - 1) = y * (std::cos(lat) / ny);
    s(n - 1) = std::sin(lat);
    return s;
}

ShapeCodeword reconstruct_codeword(const WrappedCode& code, int annulus,
                                   const Eigen::VectorXi& coords) {
    if (annulus < 0 || annulus >= code.annuli)
        throw std::domain_error("reconstruct_codeword: bad annulus index");
    ShapeCodeword cw;
    cw.annulus = annulus;
    cw.coords = coords;
    const int n = code.n;
    if (coords.isZero()) {
        cw.s_hat = Eigen::VectorXd::Zero(n);
        cw.s_hat(n - 1) = code.north(annulus) ? 1.0 : -1.0;
        return cw;
    }
    Eigen::VectorXd v = code.lattice.basis * coords.cast<double>();
    const double nv = v.norm();
    if (nv > 1.0) v /= nv;  // back onto the unit ball
    cw.s_hat = inverse_map(code, v, annulus, code.north(annulus));
    return cw;
}

ShapeCodeword quantize_shape(const WrappedCode& code, const Eigen::VectorXd& s) {
    check_unit(s, code.n);
    const int i = annulus_index(code, s);
    const Eigen::VectorXd y = map_to_plane(code, s);
    Eigen::VectorXi b;
    if (y.isZero()) {
        b = Eigen::VectorXi::Zero(code.n - 1);
    } else {
        b = nearest_point(code.lattice, y);
    }
    return reconstruct_codeword(code, i, b);
}

CoveringBound covering_angle_bound(const WrappedCode& code, const ShapeCodeword& cw) {
    const double r_cov = code.lattice.r_cov;
    const double a = code.anchor_latitude(cw.annulus);
    CoveringBound out;
    if (cw.pole()) {
        const double arg = 0.5 * (std::cos(a) - r_cov);
        out.degenerate = arg < -1.0;
        out.angle = 0.5 * kPi - 2.0 * std::asin(std::clamp(arg, -1.0, 1.0));
        out.angle = std::clamp(out.angle, 0.0, kPi);
        return out;
    }
    const double w =
        std::min((code.lattice.basis * cw.coords.cast<double>()).norm(), 1.0);
    const double lat = std::asin(std::clamp(cw.s_hat(code.n - 1), -1.0, 1.0));
    const double chord = 2.0 * std::sin(0.5 * std::fabs(lat - a));
    const double a1 = r_cov / (2.0 * w);
    const double a2 = 0.5 * (chord + r_cov);
    out.degenerate = a1 > 1.0 || a2 > 1.0;
    out.angle = 2.0 * std::asin(std::min(a1, 1.0)) + 2.0 * std::asin(std::min(a2, 1.0)) -
                2.0 * std::asin(0.5 * chord);
    out.angle = std::clamp(out.angle, 0.0, kPi);
    return out;
}

AnnulusShell annulus_shell(const WrappedCode& code, int i) {
    const double r_cov = code.lattice.r_cov;
    const double c = std::cos(code.anchor_latitude(i));
    const double band = 2.0 * std::sin(0.5 * kPi / code.annuli);
    AnnulusShell shell;
    shell.r_lo = std::max(0.0, c - band - r_cov);
    shell.r_hi = std::min(1.0 + r_cov, c + r_cov);
    return shell;
}

ShapeRate shape_rate(const WrappedCode& code) {
    const int N = code.annuli;
    BigCount total = 0;
    // hemispheres mirror each other, so count the northern shells once
    for (int i = N / 2; i < N; ++i) {
        const AnnulusShell sh = annulus_shell(code, i);
        total += 2 * count_points_in_shell(code.lattice, sh.r_lo, sh.r_hi);
    }
    ShapeRate rate;
    rate.codepoints = total;
    rate.bits_per_dim = big_count_log2(total) / code.n;
    return rate;
}

double scale_for_rate(int n, const LatticeSpec& base_lattice, double target_bits_per_dim) {
    auto rate_at = [&](double s) {
        return shape_rate(WrappedCode::make(n, rescale(base_lattice, s))).bits_per_dim;
    };
    double hi = 1.0;
    while (rate_at(hi) > target_bits_per_dim) {
        hi *= 2.0;
        if (hi > 1e6) throw std::domain_error("scale_for_rate: target rate unreachable");
    }
    double lo = hi;
    while (rate_at(lo) <= target_bits_per_dim) {
        lo *= 0.5;
        if (lo < 1e-6)
            return lo;  // even the finest sane scale stays below the target
    }
    for (int iter = 0; iter < 60 && hi - lo > 1e-6 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (rate_at(mid) <= target_bits_per_dim ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace sqid
