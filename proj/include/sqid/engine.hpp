#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqid/gain.hpp"
#include "sqid/geometry.hpp"
#include "sqid/wrapped.hpp"

// The user-facing identification system: signature assignment, the
// admissible maybe/no query rule, optional flat integer encoding, and
// the database file formats.

namespace sqid {

inline constexpr std::uint16_t kFormatVersion = 1;

struct SchemeConfig {
    int n = 0;
    double D = 0.0;
    GainCodebook gain;
    WrappedCode shape;

    /// Hash of every parameter that affects signatures (bit-exact).
    std::uint64_t hash() const;
};

/// Trains the gain codebook and assembles the wrapped code for the
/// given (already scaled) lattice of dimension n - 1.
SchemeConfig make_scheme(int n, double D, int gain_levels, LatticeSpec lattice,
                         int annuli_override = 0);

struct Signature {
    std::uint32_t gain_cell = 1;  // 1-based
    std::uint32_t annulus = 0;
    Eigen::VectorXi coords;       // all-zero = pole codeword

    bool pole() const { return coords.isZero(); }
    bool operator==(const Signature& o) const {
        return gain_cell == o.gain_cell && annulus == o.annulus && coords == o.coords;
    }
};

/// Quantize a database vector. The zero vector gets gain cell 1 and the
/// north pole codeword.
Signature sign(const SchemeConfig& cfg, const Eigen::VectorXd& x);

/// The thick cap guaranteed to contain every x mapped to sig,
/// reconstructed from the signature alone.
ThickCap signature_cap(const SchemeConfig& cfg, const Signature& sig);

struct Decision {
    bool maybe = false;
    double min_dist = 0.0;  // distance from y to the signature cap
};

/// maybe iff y lies within sqrt(n D) of the signature cap; admissible by
/// construction: d(x, y) <= D implies maybe. D defaults to cfg.D when
/// negative.
Decision decide(const SchemeConfig& cfg, const Signature& sig, const Eigen::VectorXd& y,
                double D = -1.0);

/// Bijection between signatures and [0, K*M): gain cells are the outer
/// digit, then annuli, then the rank of the lattice point inside its
/// annulus shell (sorted by squared norm, then lexicographically).
class FlatIndexer {
public:
    static FlatIndexer build(const SchemeConfig& cfg,
                             std::uint64_t node_budget = default_point_budget());

    std::uint64_t encode(const Signature& sig) const;
    Signature decode(std::uint64_t index) const;

    std::uint64_t total() const { return total_; }        // K * M
    std::uint64_t shape_total() const { return shape_total_; }  // M

private:
    const SchemeConfig* cfg_ = nullptr;
    std::vector<std::vector<ShellPoint>> per_annulus_;
    std::vector<std::uint64_t> offsets_;  // cumulative codepoints below annulus i
    std::uint64_t shape_total_ = 0;
    std::uint64_t total_ = 0;
};

enum class SignatureLayout : std::uint8_t { kStructured = 0, kFlat = 1 };

// ---- binary file formats (little-endian) --------------------------------
// vectors:    "SQID" | version u16 | n u32 | count u64 | count*n f64
// signatures: "SQSG" | version u16 | config hash u64 | layout u8 |
//             n u32 | lattice dim u32 | count u64 | records
//   structured record: gain_cell u32 | annulus u32 | pole u8 | dim * i32
//   flat record:       index u64

void write_vector_file(const std::string& path, const std::vector<Eigen::VectorXd>& xs);
std::vector<Eigen::VectorXd> read_vector_file(const std::string& path);

void write_signature_file(const std::string& path, const SchemeConfig& cfg,
                          const std::vector<Signature>& sigs, SignatureLayout layout);

struct SignatureFileData {
    std::uint64_t config_hash = 0;
    SignatureLayout layout = SignatureLayout::kStructured;
    std::vector<Signature> records;
};
/// cfg is needed to decode flat records and to verify the config hash.
SignatureFileData read_signature_file(const std::string& path, const SchemeConfig& cfg);

/// Read vectors from in_path, sign each record (order preserving,
/// parallel over records), write the signature file.
void encode_database(const SchemeConfig& cfg, const std::string& in_path,
                     const std::string& out_path, SignatureLayout layout, int workers);

struct ScanStats {
    std::uint64_t records = 0;
    std::uint64_t maybes = 0;
};

/// Per-record verdicts for one query vector as CSV
/// (record_id,verdict,min_dist_bound); returns the maybe-rate summary.
ScanStats scan_query(const SchemeConfig& cfg, const std::string& signature_path,
                     const Eigen::VectorXd& y, double D, std::ostream& csv_out,
                     int workers);

}  // namespace sqid
