#include "sqid/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sqid/leech_basis.hpp"
#include "sqid/theta.hpp"

namespace sqid {

namespace {

constexpr double kShellTol = 1e-9;  // tolerance band on shell boundaries

void attach_decompositions(LatticeSpec& lat) {
    const Eigen::MatrixXd gram = lat.basis.transpose() * lat.basis;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("lattice: basis is singular or ill conditioned");
    lat.chol_r = llt.matrixL().transpose();
    lat.basis_inv = lat.basis.inverse();
}

int sign_of(int v) { return v > 0 ? 1 : (v < 0 ? -1 : 1); }

bool lex_less(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(),
                                        b.data(), b.data() + b.size());
}

// Depth-first Schnorr-Euchner tree walk over b with ||R (b - t)||^2
// bounded. Callbacks handle leaves; `shrinking` turns on closest-point
// mode where the radius tracks the best leaf found.
struct Enumerator {
    const Eigen::MatrixXd& R;
    const Eigen::VectorXd& t;
    int m;
    std::uint64_t budget;
    std::uint64_t visited = 0;

    Eigen::VectorXd c;        // per-level center
    Eigen::VectorXi b;        // current candidate
    Eigen::VectorXi step;     // zig-zag increment
    Eigen::VectorXd partial;  // partial[k] = cost contributed by levels > k-1

    Enumerator(const Eigen::MatrixXd& r, const Eigen::VectorXd& tt, std::uint64_t bud)
        : R(r), t(tt), m(static_cast<int>(r.cols())), budget(bud),
          c(m), b(m), step(m), partial(m + 1) {
        partial(m) = 0.0;
    }

    void charge() {
        if (++visited > budget)
            throw ResourceError("lattice enumeration exceeded node budget", budget);
    }

    void descend_to(int k) {
        double acc = 0.0;
        for (int j = k + 1; j < m; ++j) acc += R(k, j) * (b(j) - t(j));
        c(k) = t(k) - acc / R(k, k);
        b(k) = static_cast<int>(std::lround(c(k)));
        step(k) = (c(k) >= b(k)) ? 1 : -1;
    }

    void next_sibling(int k) {
        b(k) += step(k);
        step(k) = -step(k) - sign_of(step(k));
    }
};

// Exact closest point; ties resolved toward the lexicographically
// smallest coordinate vector.
Eigen::VectorXi decode_nn(const Eigen::MatrixXd& R, const Eigen::VectorXd& t,
                          std::uint64_t budget) {
    Enumerator e(R, t, budget);
    const int m = e.m;
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXi best_b = Eigen::VectorXi::Zero(m);
    bool have_best = false;

    int k = m - 1;
    e.descend_to(k);
    while (true) {
        e.charge();
        const double term = R(k, k) * (e.b(k) - e.c(k));
        const double cost = e.partial(k + 1) + term * term;
        if (cost <= best) {
            if (k == 0) {
                if (!have_best || cost < best ||
                    (cost == best && lex_less(e.b, best_b))) {
                    best = cost;
                    best_b = e.b;
                    have_best = true;
                }
                e.next_sibling(0);
            } else {
                e.partial(k) = cost;
                --k;
                e.descend_to(k);
            }
        } else {
            ++k;
            if (k == m) break;
            e.next_sibling(k);
        }
    }
    return best_b;
}

// Number of b with ||R b||^2 <= c_sq (t = 0); bottom level counted in
// closed form.
BigCount ball_count(const Eigen::MatrixXd& R, double c_sq, std::uint64_t budget) {
    const int m = static_cast<int>(R.cols());
    if (c_sq < 0.0) return 0;
    const Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
    Enumerator e(R, t, budget);
    BigCount total = 0;

    auto count_bottom = [&](double used) {
        double acc = 0.0;
        for (int j = 1; j < m; ++j) acc += R(0, j) * e.b(j);
        const double c0 = -acc / R(0, 0);
        const double w2 = c_sq - used;
        if (w2 < 0.0) return;
        const double w = std::sqrt(w2) / R(0, 0);
        const double eps = 1e-12 * (std::fabs(c0) + w + 1.0);
        const auto lo = static_cast<long long>(std::ceil(c0 - w - eps));
        const auto hi = static_cast<long long>(std::floor(c0 + w + eps));
        if (hi >= lo) total += static_cast<BigCount>(hi - lo + 1);
    };

    if (m == 1) {
        e.charge();
        count_bottom(0.0);
        return total;
    }

    int k = m - 1;
    e.descend_to(k);
    while (true) {
        e.charge();
        const double term = R(k, k) * (e.b(k) - e.c(k));
        const double cost = e.partial(k + 1) + term * term;
        if (cost <= c_sq) {
            if (k == 1) {
                e.partial(1) = cost;
                e.charge();
                count_bottom(cost);
                e.next_sibling(1);
            } else {
                e.partial(k) = cost;
                --k;
                e.descend_to(k);
            }
        } else {
            ++k;
            if (k == m) break;
            e.next_sibling(k);
        }
    }
    return total;
}

// All b with lo_sq <= ||R b||^2 <= hi_sq.
std::vector<Eigen::VectorXi> ball_list(const Eigen::MatrixXd& R, double lo_sq,
                                       double hi_sq, std::uint64_t budget) {
    const int m = static_cast<int>(R.cols());
    const Eigen::VectorXd t = Eigen::VectorXd::Zero(m);
    Enumerator e(R, t, budget);
    std::vector<Eigen::VectorXi> out;

    int k = m - 1;
    e.descend_to(k);
    while (true) {
        e.charge();
        const double term = R(k, k) * (e.b(k) - e.c(k));
        const double cost = e.partial(k + 1) + term * term;
        if (cost <= hi_sq) {
            if (k == 0) {
                if (cost >= lo_sq) out.push_back(e.b);
                e.next_sibling(0);
            } else {
                e.partial(k) = cost;
                --k;
                e.descend_to(k);
            }
        } else {
            ++k;
            if (k == m) break;
            e.next_sibling(k);
        }
    }
    return out;
}

}  // namespace

std::uint64_t default_point_budget() {
    static const std::uint64_t budget = [] {
        if (const char* env = std::getenv("SQID_POINT_BUDGET")) {
            const auto v = std::strtoull(env, nullptr, 10);
            if (v > 0) return static_cast<std::uint64_t>(v);
        }
        return std::uint64_t{100000000};
    }();
    return budget;
}

std::string big_count_to_string(BigCount v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

double big_count_log2(BigCount v) {
    if (v == 0) return -std::numeric_limits<double>::infinity();
    int shift = 0;
    while ((v >> shift) > (BigCount{1} << 52)) ++shift;
    return std::log2(static_cast<double>(static_cast<std::uint64_t>(v >> shift))) + shift;
}

LatticeSpec LatticeSpec::leech() {
    LatticeSpec lat;
    lat.dim = 24;
    lat.basis.resize(24, 24);
    const double inv_sqrt8 = 1.0 / std::sqrt(8.0);
    for (int r = 0; r < 24; ++r)
        for (int c = 0; c < 24; ++c)
            lat.basis(c, r) = detail::kLeechRows[r][c] * inv_sqrt8;  // rows -> columns
    lat.d_min = 2.0;
    lat.r_cov = std::sqrt(2.0);
    lat.scale = 1.0;
    lat.kind = Kind::kLeech;
    attach_decompositions(lat);
    const double det = std::fabs(lat.basis.determinant());
    if (std::fabs(det - 1.0) > 1e-9)
        throw std::logic_error("leech: generator determinant check failed");
    return lat;
}

LatticeSpec LatticeSpec::zn(int m) {
    if (m < 1) throw std::domain_error("zn: dimension must be positive");
    LatticeSpec lat;
    lat.dim = m;
    lat.basis = Eigen::MatrixXd::Identity(m, m);
    lat.d_min = 1.0;
    lat.r_cov = 0.5 * std::sqrt(static_cast<double>(m));
    lat.scale = 1.0;
    lat.kind = Kind::kZn;
    attach_decompositions(lat);
    return lat;
}

LatticeSpec LatticeSpec::custom(Eigen::MatrixXd basis, double d_min, double r_cov) {
    LatticeSpec lat;
    lat.dim = static_cast<int>(basis.cols());
    if (basis.rows() != basis.cols() || lat.dim < 1)
        throw std::domain_error("custom lattice: basis must be square");
    lat.basis = std::move(basis);
    if (std::fabs(lat.basis.determinant()) <= 0.0)
        throw std::domain_error("custom lattice: basis is singular");
    if (!(d_min > 0.0) || !(r_cov >= 0.5 * d_min))
        throw std::domain_error("custom lattice: need r_cov >= d_min / 2 > 0");
    lat.d_min = d_min;
    lat.r_cov = r_cov;
    lat.scale = 1.0;
    lat.kind = Kind::kCustom;
    attach_decompositions(lat);
    return lat;
}

LatticeSpec rescale(const LatticeSpec& lat, double s) {
    if (!(s > 0.0)) throw std::domain_error("rescale: factor must be positive");
    LatticeSpec out = lat;
    out.basis *= s;
    out.d_min *= s;
    out.r_cov *= s;
    out.scale *= s;
    out.chol_r *= s;
    out.basis_inv /= s;
    return out;
}

LatticeSpec load_lattice_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("lattice file: cannot open " + path, 0);
    int m = 0;
    if (!(in >> m) || m < 1) throw FormatError("lattice file: bad dimension", 0);
    Eigen::MatrixXd basis(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            if (!(in >> basis(r, c)))
                throw FormatError("lattice file: truncated matrix",
                                  static_cast<std::uint64_t>(in.tellg()));
    double d_min = 0.0, r_cov = 0.0;
    if (!(in >> d_min >> r_cov))
        throw FormatError("lattice file: missing d_min / r_cov",
                          static_cast<std::uint64_t>(in.tellg()));
    if (!(r_cov >= 0.5 * d_min))
        throw FormatError("lattice file: r_cov < d_min / 2", 0);
    return LatticeSpec::custom(std::move(basis), d_min, r_cov);
}

Eigen::VectorXi nearest_point(const LatticeSpec& lat, const Eigen::VectorXd& y) {
    if (y.size() != lat.dim) throw std::domain_error("nearest_point: dimension mismatch");
    if (!y.allFinite()) throw std::domain_error("nearest_point: non-finite input");
    const Eigen::VectorXd t = lat.basis_inv * y;
    return decode_nn(lat.chol_r, t, default_point_budget());
}

BigCount count_points_in_shell_enumerated(const LatticeSpec& lat, double r_lo,
                                          double r_hi, std::uint64_t node_budget) {
    if (!(r_lo >= 0.0) || !(r_hi >= r_lo))
        throw std::domain_error("count_points_in_shell: need 0 <= r_lo <= r_hi");
    const double hi = r_hi + kShellTol;
    const double lo = r_lo - kShellTol;
    BigCount n = ball_count(lat.chol_r, hi * hi, node_budget);
    if (lo > 0.0) n -= ball_count(lat.chol_r, lo * lo, node_budget);
    return n;
}

BigCount count_points_in_shell(const LatticeSpec& lat, double r_lo, double r_hi,
                               std::uint64_t node_budget) {
    if (!(r_lo >= 0.0) || !(r_hi >= r_lo))
        throw std::domain_error("count_points_in_shell: need 0 <= r_lo <= r_hi");
    if (lat.kind == LatticeSpec::Kind::kCustom)
        return count_points_in_shell_enumerated(lat, r_lo, r_hi, node_budget);

    // theta-series path: points sit at norms sqrt(m) * scale
    const double hi = (r_hi + kShellTol) / lat.scale;
    const double lo = std::max(0.0, r_lo - kShellTol) / lat.scale;
    const double m_hi_f = hi * hi + kShellTol;
    if (m_hi_f > 2.0e5)
        throw ResourceError("count_points_in_shell: theta series bound too large",
                            node_budget);
    const int m_hi = static_cast<int>(std::floor(m_hi_f));
    const auto coeff = lat.kind == LatticeSpec::Kind::kLeech
                           ? leech_theta_coefficients(m_hi)
                           : zn_theta_coefficients(lat.dim, m_hi);
    const double lo_sq = lo * lo - kShellTol;
    BigCount total = 0;
    for (int m = 0; m <= m_hi; ++m) {
        if (static_cast<double>(m) >= lo_sq) total += coeff[m];
    }
    return total;
}

double shell_point_key(const LatticeSpec& lat, const Eigen::VectorXi& coords) {
    if (lat.kind != LatticeSpec::Kind::kCustom) {
        const Eigen::MatrixXd gram_base =
            lat.basis.transpose() * lat.basis / (lat.scale * lat.scale);
        long long q = 0;
        for (int i = 0; i < lat.dim; ++i)
            for (int j = 0; j < lat.dim; ++j)
                q += static_cast<long long>(std::llround(gram_base(i, j))) * coords(i) *
                     coords(j);
        return static_cast<double>(q);
    }
    const double sq = (lat.basis * coords.cast<double>()).squaredNorm();
    return std::round(sq * 1e9) / 1e9;
}

std::vector<ShellPoint> list_shell_points(const LatticeSpec& lat, double r_lo,
                                          double r_hi, std::uint64_t node_budget) {
    if (!(r_lo >= 0.0) || !(r_hi >= r_lo))
        throw std::domain_error("list_shell_points: need 0 <= r_lo <= r_hi");
    const double hi = r_hi + kShellTol;
    const double lo = std::max(0.0, r_lo - kShellTol);
    auto points = ball_list(lat.chol_r, lo * lo, hi * hi, node_budget);

    std::vector<ShellPoint> out;
    out.reserve(points.size());
    for (auto& b : points) {
        const double key = shell_point_key(lat, b);
        out.push_back({std::move(b), key});
    }
    std::sort(out.begin(), out.end(), [](const ShellPoint& a, const ShellPoint& c) {
        if (a.sq_norm_key != c.sq_norm_key) return a.sq_norm_key < c.sq_norm_key;
        return lex_less(a.coords, c.coords);
    });
    return out;
}

}  // namespace sqid
