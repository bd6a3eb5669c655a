#include "sqid/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <thread>

#include "sqid/errors.hpp"

namespace sqid {

namespace {

// ---- little-endian packing ----------------------------------------------

void put_bytes(std::string& buf, const void* p, std::size_t len) {
    buf.append(static_cast<const char*>(p), len);
}

void put_u8(std::string& buf, std::uint8_t v) { put_bytes(buf, &v, 1); }

void put_u16(std::string& buf, std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    put_bytes(buf, b, 2);
}

void put_u32(std::string& buf, std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    put_bytes(buf, b, 4);
}

void put_u64(std::string& buf, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    put_bytes(buf, b, 8);
}

void put_i32(std::string& buf, std::int32_t v) { put_u32(buf, static_cast<std::uint32_t>(v)); }

void put_f64(std::string& buf, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(buf, bits);
}

struct Cursor {
    const std::string& data;
    std::uint64_t pos = 0;

    void need(std::uint64_t len, const char* what) const {
        if (pos + len > data.size()) throw FormatError(std::string("truncated ") + what, pos);
    }
    std::uint8_t u8(const char* what) {
        need(1, what);
        return static_cast<std::uint8_t>(data[pos++]);
    }
    std::uint16_t u16(const char* what) {
        need(2, what);
        std::uint16_t v = 0;
        for (int i = 1; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(data[pos + i]);
        pos += 2;
        return v;
    }
    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(data[pos + i]);
        pos += 4;
        return v;
    }
    std::uint64_t u64(const char* what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(data[pos + i]);
        pos += 8;
        return v;
    }
    std::int32_t i32(const char* what) { return static_cast<std::int32_t>(u32(what)); }
    double f64(const char* what) {
        const std::uint64_t bits = u64(what);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path, 0);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void dump(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path, 0);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw FormatError("short write to " + path, 0);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void hex_double(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a,", v);
    out += buf;
}

void run_parallel(std::uint64_t count, int workers, const std::function<void(std::uint64_t)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const auto w = static_cast<std::uint64_t>(workers);
    for (std::uint64_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            for (std::uint64_t i = t; i < count; i += w) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

std::uint64_t SchemeConfig::hash() const {
    std::string s = "sqid-v1;";
    s += "n=" + std::to_string(n) + ";D=";
    hex_double(s, D);
    s += "K=" + std::to_string(gain.levels()) + ";b=";
    for (double b : gain.boundaries) hex_double(s, b);
    s += "r=";
    for (double r : gain.representatives) hex_double(s, r);
    s += "lat=" + std::to_string(static_cast<int>(shape.lattice.kind)) + ";dim=" +
         std::to_string(shape.lattice.dim) + ";scale=";
    hex_double(s, shape.lattice.scale);
    if (shape.lattice.kind == LatticeSpec::Kind::kCustom) {
        for (int c = 0; c < shape.lattice.dim; ++c)
            for (int r = 0; r < shape.lattice.dim; ++r)
                hex_double(s, shape.lattice.basis(r, c));
    }
    s += "N=" + std::to_string(shape.annuli) + ";";
    return fnv1a(s);
}

SchemeConfig make_scheme(int n, double D, int gain_levels, LatticeSpec lattice,
                         int annuli_override) {
    if (!(D > 0.0)) throw std::domain_error("make_scheme: D must be positive");
    SchemeConfig cfg;
    cfg.n = n;
    cfg.D = D;
    cfg.gain = train_gain_codebook(n, gain_levels);
    cfg.shape = annuli_override > 0
                    ? WrappedCode::make_with_annuli(n, std::move(lattice), annuli_override)
                    : WrappedCode::make(n, std::move(lattice));
    return cfg;
}

Signature sign(const SchemeConfig& cfg, const Eigen::VectorXd& x) {
    if (x.size() != cfg.n) throw std::domain_error("sign: dimension mismatch");
    Signature sig;
    const double r = x.norm();
    if (r == 0.0) {
        sig.gain_cell = 1;
        sig.annulus = static_cast<std::uint32_t>(cfg.shape.annuli - 1);
        sig.coords = Eigen::VectorXi::Zero(cfg.n - 1);
        return sig;
    }
    sig.gain_cell = static_cast<std::uint32_t>(quantize_gain(cfg.gain, r));
    const ShapeCodeword cw = quantize_shape(cfg.shape, x / r);
    sig.annulus = static_cast<std::uint32_t>(cw.annulus);
    sig.coords = cw.coords;
    return sig;
}

ThickCap signature_cap(const SchemeConfig& cfg, const Signature& sig) {
    const ShapeCodeword cw =
        reconstruct_codeword(cfg.shape, static_cast<int>(sig.annulus), sig.coords);
    const CoveringBound bound = covering_angle_bound(cfg.shape, cw);
    const auto k = static_cast<int>(sig.gain_cell);
    if (k < 1 || k > cfg.gain.levels())
        throw std::domain_error("signature_cap: gain cell out of range");
    return ThickCap(cw.s_hat, bound.angle, cfg.gain.boundaries[k - 1],
                    cfg.gain.boundaries[k]);
}

Decision decide(const SchemeConfig& cfg, const Signature& sig, const Eigen::VectorXd& y,
                double D) {
    if (y.size() != cfg.n) throw std::domain_error("decide: dimension mismatch");
    if (D < 0.0) D = cfg.D;
    const ThickCap cap = signature_cap(cfg, sig);
    const double r_y = y.norm();
    const double phi = r_y == 0.0 ? 0.0 : angle_between(y, cap.center);
    Decision d;
    d.min_dist = min_dist_to_thick_cap(r_y, phi, cap);
    d.maybe = d.min_dist <= std::sqrt(cfg.n * D);
    return d;
}

FlatIndexer FlatIndexer::build(const SchemeConfig& cfg, std::uint64_t node_budget) {
    FlatIndexer fi;
    fi.cfg_ = &cfg;
    const int N = cfg.shape.annuli;
    fi.per_annulus_.resize(N);
    fi.offsets_.assign(N + 1, 0);
    for (int i = 0; i < N; ++i) {
        const AnnulusShell sh = annulus_shell(cfg.shape, i);
        fi.per_annulus_[i] = list_shell_points(cfg.shape.lattice, sh.r_lo, sh.r_hi,
                                               node_budget);
        const std::uint64_t count = fi.per_annulus_[i].size();
        fi.offsets_[i + 1] = fi.offsets_[i] + count;
    }
    fi.shape_total_ = fi.offsets_[N];
    const auto levels = static_cast<std::uint64_t>(cfg.gain.levels());
    if (fi.shape_total_ > 0 &&
        levels > std::numeric_limits<std::uint64_t>::max() / fi.shape_total_)
        throw ResourceError("flat index space exceeds 64 bits", node_budget);
    fi.total_ = levels * fi.shape_total_;
    return fi;
}

std::uint64_t FlatIndexer::encode(const Signature& sig) const {
    const auto i = static_cast<int>(sig.annulus);
    if (i < 0 || i >= static_cast<int>(per_annulus_.size()))
        throw std::domain_error("flat encode: bad annulus");
    const auto& pts = per_annulus_[i];
    const double key = shell_point_key(cfg_->shape.lattice, sig.coords);
    const auto it = std::lower_bound(
        pts.begin(), pts.end(), std::make_pair(key, &sig.coords),
        [](const ShellPoint& a, const std::pair<double, const Eigen::VectorXi*>& probe) {
            if (a.sq_norm_key != probe.first) return a.sq_norm_key < probe.first;
            return std::lexicographical_compare(a.coords.data(),
                                                a.coords.data() + a.coords.size(),
                                                probe.second->data(),
                                                probe.second->data() + probe.second->size());
        });
    if (it == pts.end() || it->coords != sig.coords)
        throw std::domain_error("flat encode: signature outside the annulus shell");
    const std::uint64_t rank = static_cast<std::uint64_t>(it - pts.begin());
    return (static_cast<std::uint64_t>(sig.gain_cell) - 1) * shape_total_ +
           offsets_[i] + rank;
}

Signature FlatIndexer::decode(std::uint64_t index) const {
    if (index >= total_) throw std::domain_error("flat decode: index out of range");
    Signature sig;
    sig.gain_cell = static_cast<std::uint32_t>(index / shape_total_) + 1;
    std::uint64_t rem = index % shape_total_;
    const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), rem);
    const auto i = static_cast<int>(it - offsets_.begin()) - 1;
    sig.annulus = static_cast<std::uint32_t>(i);
    sig.coords = per_annulus_[i][rem - offsets_[i]].coords;
    return sig;
}

// ---- file formats --------------------------------------------------------

void write_vector_file(const std::string& path, const std::vector<Eigen::VectorXd>& xs) {
    const int n = xs.empty() ? 0 : static_cast<int>(xs.front().size());
    std::string buf;
    buf.reserve(18 + xs.size() * n * 8);
    put_bytes(buf, "SQID", 4);
    put_u16(buf, kFormatVersion);
    put_u32(buf, static_cast<std::uint32_t>(n));
    put_u64(buf, xs.size());
    for (const auto& x : xs) {
        if (x.size() != n) throw std::domain_error("write_vector_file: ragged records");
        for (int j = 0; j < n; ++j) put_f64(buf, x(j));
    }
    dump(path, buf);
}

std::vector<Eigen::VectorXd> read_vector_file(const std::string& path) {
    const std::string data = slurp(path);
    Cursor cur{data};
    cur.need(4, "magic");
    if (data.compare(0, 4, "SQID") != 0) throw FormatError("bad vector file magic", 0);
    cur.pos = 4;
    const std::uint16_t version = cur.u16("version");
    if (version != kFormatVersion) throw FormatError("unsupported vector file version", 4);
    const std::uint32_t n = cur.u32("dimension");
    const std::uint64_t count = cur.u64("count");
    std::vector<Eigen::VectorXd> xs;
    xs.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Eigen::VectorXd x(n);
        for (std::uint32_t j = 0; j < n; ++j) x(j) = cur.f64("record");
        xs.push_back(std::move(x));
    }
    if (cur.pos != data.size()) throw FormatError("trailing bytes in vector file", cur.pos);
    return xs;
}

void write_signature_file(const std::string& path, const SchemeConfig& cfg,
                          const std::vector<Signature>& sigs, SignatureLayout layout) {
    std::string buf;
    put_bytes(buf, "SQSG", 4);
    put_u16(buf, kFormatVersion);
    put_u64(buf, cfg.hash());
    put_u8(buf, static_cast<std::uint8_t>(layout));
    put_u32(buf, static_cast<std::uint32_t>(cfg.n));
    put_u32(buf, static_cast<std::uint32_t>(cfg.shape.lattice.dim));
    put_u64(buf, sigs.size());
    if (layout == SignatureLayout::kFlat) {
        const FlatIndexer fi = FlatIndexer::build(cfg);
        for (const auto& sig : sigs) put_u64(buf, fi.encode(sig));
    } else {
        for (const auto& sig : sigs) {
            put_u32(buf, sig.gain_cell);
            put_u32(buf, sig.annulus);
            put_u8(buf, sig.pole() ? 1 : 0);
            for (int j = 0; j < sig.coords.size(); ++j) put_i32(buf, sig.coords(j));
        }
    }
    dump(path, buf);
}

SignatureFileData read_signature_file(const std::string& path, const SchemeConfig& cfg) {
    const std::string data = slurp(path);
    Cursor cur{data};
    cur.need(4, "magic");
    if (data.compare(0, 4, "SQSG") != 0) throw FormatError("bad signature file magic", 0);
    cur.pos = 4;
    const std::uint16_t version = cur.u16("version");
    if (version != kFormatVersion) throw FormatError("unsupported signature file version", 4);
    SignatureFileData out;
    out.config_hash = cur.u64("config hash");
    if (out.config_hash != cfg.hash())
        throw FormatError("signature file was written with a different config", 6);
    const std::uint8_t layout = cur.u8("layout");
    if (layout > 1) throw FormatError("unknown signature layout", cur.pos - 1);
    out.layout = static_cast<SignatureLayout>(layout);
    const std::uint32_t n = cur.u32("dimension");
    const std::uint32_t dim = cur.u32("lattice dimension");
    if (n != static_cast<std::uint32_t>(cfg.n) ||
        dim != static_cast<std::uint32_t>(cfg.shape.lattice.dim))
        throw FormatError("signature file dimensions do not match config", cur.pos - 8);
    const std::uint64_t count = cur.u64("count");
    out.records.reserve(count);
    if (out.layout == SignatureLayout::kFlat) {
        const FlatIndexer fi = FlatIndexer::build(cfg);
        for (std::uint64_t i = 0; i < count; ++i)
            out.records.push_back(fi.decode(cur.u64("flat record")));
    } else {
        for (std::uint64_t i = 0; i < count; ++i) {
            Signature sig;
            sig.gain_cell = cur.u32("record gain cell");
            sig.annulus = cur.u32("record annulus");
            const std::uint8_t pole = cur.u8("record pole flag");
            sig.coords.resize(dim);
            for (std::uint32_t j = 0; j < dim; ++j) sig.coords(j) = cur.i32("record coords");
            if (pole != (sig.coords.isZero() ? 1 : 0))
                throw FormatError("pole flag disagrees with coordinates", cur.pos - 1);
            out.records.push_back(std::move(sig));
        }
    }
    if (cur.pos != data.size())
        throw FormatError("trailing bytes in signature file", cur.pos);
    return out;
}

void encode_database(const SchemeConfig& cfg, const std::string& in_path,
                     const std::string& out_path, SignatureLayout layout, int workers) {
    const auto xs = read_vector_file(in_path);
    if (!xs.empty() && xs.front().size() != cfg.n)
        throw std::domain_error("encode_database: vector file dimension differs from config");
    std::vector<Signature> sigs(xs.size());
    run_parallel(xs.size(), workers, [&](std::uint64_t i) { sigs[i] = sign(cfg, xs[i]); });
    write_signature_file(out_path, cfg, sigs, layout);
}

ScanStats scan_query(const SchemeConfig& cfg, const std::string& signature_path,
                     const Eigen::VectorXd& y, double D, std::ostream& csv_out,
                     int workers) {
    const SignatureFileData file = read_signature_file(signature_path, cfg);
    std::vector<Decision> decisions(file.records.size());
    run_parallel(file.records.size(), workers, [&](std::uint64_t i) {
        decisions[i] = decide(cfg, file.records[i], y, D);
    });
    ScanStats stats;
    stats.records = file.records.size();
    csv_out << "record_id,verdict,min_dist_bound\n";
    char buf[64];
    for (std::uint64_t i = 0; i < decisions.size(); ++i) {
        if (decisions[i].maybe) ++stats.maybes;
        std::snprintf(buf, sizeof buf, "%.17g", decisions[i].min_dist);
        csv_out << i << ',' << (decisions[i].maybe ? "maybe" : "no") << ',' << buf << '\n';
    }
    return stats;
}

}  // namespace sqid
