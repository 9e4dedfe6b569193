#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "petition/dkg.hpp"
#include "petition/elgamal.hpp"
#include "petition/group.hpp"
#include "petition/vss.hpp"

namespace petition::chain {

using Tick = std::int64_t;

/// The public petition header: text, group, key material, counts, optional
/// expiry and threshold menu, and the full ceremony transcript needed to
/// re-verify everything from the file alone.
struct PetitionParams {
    std::string backend;
    Bytes petition_text;
    dkg::PetitionPublicKey pk;
    std::uint32_t n = 0, k = 0, t = 0, v = 1;
    std::vector<std::uint32_t> thresholds;  // empty = single-threshold mode
    std::optional<Tick> expiry;
    Bytes petition_id;
    GroupElement hash_base;  // g_P
    vss::FeldmanCommitment hash_key_commitment;
    dkg::CommitmentGrid ceremony;  // [j-1][i-1]
    std::uint8_t hybrid_alg = 1;

    bool multi_threshold() const { return !thresholds.empty(); }

    /// Checks every header invariant, including that p and the fragment
    /// publics recompute from the ceremony commitments and that g_P derives
    /// from the petition id. Throws verification_error.
    void validate(const Group& group) const;
};

struct ValidationRecord {
    std::string validator;
    std::vector<HybridCiphertext> shares;  // exactly k encrypted u-shares
    GroupElement dup_hash;                 // h_P(u)
    std::optional<std::uint32_t> threshold;
    Tick tick = 0;
};

struct FragmentRelease {
    std::uint32_t index = 0;  // j
    Scalar value;             // s_j
};

struct Cyphersignature {
    HybridCiphertext testimony;
    std::vector<HybridCiphertext> shares;
    GroupElement dup_hash;
    std::optional<FragmentRelease> fragment;
    std::optional<std::uint32_t> threshold;  // n_U, multi-threshold mode only
    Tick tick = 0;
};

struct ExpiryMarker {
    Tick tick = 0;
};

using RecordBody = std::variant<ValidationRecord, Cyphersignature, ExpiryMarker>;

/// One chain line: the body plus its link fields and the exact serialized
/// form. hash = SHA-256 of the canonical line without the hash key; prev is
/// the predecessor's hash (the header's for the first record).
struct Record {
    RecordBody body;
    std::string prev;
    std::string hash;
    std::string line;
};

struct TriggerReport {
    bool triggered = false;
    std::uint32_t cascade_level = 0;        // largest m with >= m signatures of threshold <= m
    std::vector<std::size_t> cascade_set;   // record indices in the triggered set
    std::vector<std::size_t> decryptable;   // record indices whose fragment prefix is released
};

struct DecryptedSignature {
    std::size_t record_index = 0;
    std::string status;  // "ok", "authentication failure", "share inconsistency", "hash mismatch"
    Scalar identity;
    Bytes testimony;
};

/// Append-only, hash-linked log of validation records and cyphersignatures.
/// All mutation goes through the append operations, which enforce the
/// protocol rules; records are never edited or removed. Single writer;
/// concurrent readers may share a const chain.
class SignatureChain {
public:
    SignatureChain(std::shared_ptr<const Group> group, PetitionParams header);

    const Group& group() const { return *group_; }
    std::shared_ptr<const Group> group_ptr() const { return group_; }
    const PetitionParams& header() const { return header_; }
    const std::vector<Record>& records() const { return records_; }
    const std::string& header_hash() const { return header_hash_; }
    const std::string& header_line() const { return header_line_; }

    bool frozen() const { return frozen_; }
    /// Released fragments by index, in release order preserved in records.
    const std::map<std::uint32_t, Scalar>& released() const { return released_; }

    /// Accept/reject for one more occurrence of dup_hash: rejects when the
    /// validation-record count would exceed v or a cyphersignature with the
    /// same hash already exists.
    bool check_duplicate(const GroupElement& dup_hash) const;

    std::uint32_t validation_count(const GroupElement& dup_hash) const;
    std::uint32_t distinct_validators(const GroupElement& dup_hash) const;
    bool has_cyphersignature(const GroupElement& dup_hash) const;

    void append_validation(ValidationRecord rec);
    void append_cyphersignature(Cyphersignature sig);

    /// Freezes the chain once the expiry tick has been reached; refuses when
    /// the petition already triggered.
    void expire(Tick now);

    /// Largest unreleased fragment index <= the user's threshold (n in
    /// single-threshold mode); nullopt when all are released.
    std::optional<std::uint32_t> select_fragment(
        std::optional<std::uint32_t> user_threshold) const;

    /// Sum of s_1..s_prefix when all of them are released.
    std::optional<Scalar> prefix_key(std::uint32_t prefix) const;

    TriggerReport trigger_check() const;

    /// Decrypts every decryptable cyphersignature. Throws "not triggered"
    /// when nothing is decryptable. oracle_key, when supplied by tests,
    /// cross-checks each identity against the duplicate hash.
    std::vector<DecryptedSignature> decrypt_all(
        const std::optional<Scalar>& oracle_key = {}) const;

    std::string serialize() const;

    /// Parses and fully re-verifies a chain file by replaying every append;
    /// throws verification_error naming the first bad record.
    static SignatureChain load(const std::string& text);

    /// All problems found in a chain file; empty means verify-clean.
    static std::vector<std::string> verify_text(const std::string& text);

private:
    std::shared_ptr<const Group> group_;
    PetitionParams header_;
    std::string header_line_;
    std::string header_hash_;
    std::vector<Record> records_;
    bool frozen_ = false;
    std::map<std::uint32_t, Scalar> released_;

    std::uint32_t effective_threshold(const std::optional<std::uint32_t>& t) const;
    void require_appendable(Tick tick) const;
    void push_record(RecordBody body);
};

}  // namespace petition::chain
