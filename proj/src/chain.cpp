#include "petition/chain.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

#include "petition/dist_hash.hpp"
#include "petition/errors.hpp"
#include "petition/hash.hpp"

namespace petition::chain {

using nlohmann::json;

namespace {

constexpr const char* kHashBaseTag = "petition-hash";

std::string element_hex(const GroupElement& e) { return to_hex(e.encoding); }

GroupElement element_from_hex(const Group& g, const json& j, const char* what) {
    if (!j.is_string()) throw verification_error("malformed chain file", what);
    return g.decode_element(from_hex(j.get<std::string>()));
}

Scalar scalar_from_hex(const Group& g, const json& j, const char* what) {
    if (!j.is_string()) throw verification_error("malformed chain file", what);
    return g.scalar_decode(from_hex(j.get<std::string>()));
}

HybridCiphertext ct_from_hex(const Group& g, const json& j, const char* what) {
    if (!j.is_string()) throw verification_error("malformed chain file", what);
    return HybridCiphertext::deserialize(g, from_hex(j.get<std::string>()));
}

json commitment_to_json(const vss::FeldmanCommitment& c) {
    json arr = json::array();
    for (const auto& e : c.coeff_commits) arr.push_back(element_hex(e));
    return arr;
}

vss::FeldmanCommitment commitment_from_json(const Group& g, const json& j) {
    if (!j.is_array()) throw verification_error("malformed chain file", "commitment");
    vss::FeldmanCommitment c;
    for (const auto& e : j) c.coeff_commits.push_back(element_from_hex(g, e, "commitment"));
    return c;
}

json header_to_json(const Group& g, const PetitionParams& h) {
    json j;
    j["type"] = "header";
    j["backend"] = h.backend;
    j["pet"] = to_hex(h.petition_text);
    j["petition_id"] = to_hex(h.petition_id);
    j["n"] = h.n;
    j["k"] = h.k;
    j["t"] = h.t;
    j["v"] = h.v;
    if (!h.thresholds.empty()) j["thresholds"] = h.thresholds;
    if (h.expiry) j["expiry"] = *h.expiry;
    j["p"] = element_hex(h.pk.p);
    json frags = json::array();
    for (const auto& f : h.pk.fragment_publics) frags.push_back(element_hex(f));
    j["fragments"] = frags;
    j["hash_base"] = element_hex(h.hash_base);
    j["key_commit"] = commitment_to_json(h.hash_key_commitment);
    json grid = json::array();
    for (const auto& row : h.ceremony) {
        json jrow = json::array();
        for (const auto& c : row) jrow.push_back(commitment_to_json(c));
        grid.push_back(jrow);
    }
    j["ceremony"] = grid;
    j["hybrid_alg"] = h.hybrid_alg;
    j["prev"] = "";
    (void)g;
    return j;
}

PetitionParams header_from_json(const json& j, const Group& g) {
    PetitionParams h;
    h.backend = j.at("backend").get<std::string>();
    h.petition_text = from_hex(j.at("pet").get<std::string>());
    h.petition_id = from_hex(j.at("petition_id").get<std::string>());
    h.n = j.at("n").get<std::uint32_t>();
    h.k = j.at("k").get<std::uint32_t>();
    h.t = j.at("t").get<std::uint32_t>();
    h.v = j.at("v").get<std::uint32_t>();
    if (j.contains("thresholds")) h.thresholds = j.at("thresholds").get<std::vector<std::uint32_t>>();
    if (j.contains("expiry")) h.expiry = j.at("expiry").get<Tick>();
    h.pk.p = element_from_hex(g, j.at("p"), "p");
    for (const auto& f : j.at("fragments")) {
        h.pk.fragment_publics.push_back(element_from_hex(g, f, "fragment public"));
    }
    h.hash_base = element_from_hex(g, j.at("hash_base"), "hash_base");
    h.hash_key_commitment = commitment_from_json(g, j.at("key_commit"));
    for (const auto& row : j.at("ceremony")) {
        std::vector<vss::FeldmanCommitment> r;
        for (const auto& c : row) r.push_back(commitment_from_json(g, c));
        h.ceremony.push_back(std::move(r));
    }
    h.hybrid_alg = j.at("hybrid_alg").get<std::uint8_t>();
    return h;
}

json body_to_json(const RecordBody& body) {
    json j;
    if (const auto* vr = std::get_if<ValidationRecord>(&body)) {
        j["type"] = "validation";
        j["validator"] = vr->validator;
        json shares = json::array();
        for (const auto& ct : vr->shares) shares.push_back(to_hex(ct.serialize()));
        j["shares"] = shares;
        j["dup"] = element_hex(vr->dup_hash);
        if (vr->threshold) j["threshold"] = *vr->threshold;
        j["tick"] = vr->tick;
    } else if (const auto* cs = std::get_if<Cyphersignature>(&body)) {
        j["type"] = "cyphersignature";
        j["testimony"] = to_hex(cs->testimony.serialize());
        json shares = json::array();
        for (const auto& ct : cs->shares) shares.push_back(to_hex(ct.serialize()));
        j["shares"] = shares;
        j["dup"] = element_hex(cs->dup_hash);
        if (cs->fragment) {
            j["fragment"] = {{"index", cs->fragment->index}};
        }
        if (cs->threshold) j["threshold"] = *cs->threshold;
        j["tick"] = cs->tick;
    } else {
        j["type"] = "expired";
        j["tick"] = std::get<ExpiryMarker>(body).tick;
    }
    return j;
}

}  // namespace

void PetitionParams::validate(const Group& group) const {
    auto bad = [](const std::string& msg) { return verification_error("invalid header", msg); };
    if (n == 0) throw bad("n must be >= 1");
    if (t == 0 || t > k) throw bad("need 1 <= t <= k");
    if (Int(k) >= group.order()) throw bad("k must be below the group order");
    if (v == 0) throw bad("v must be >= 1");
    if (group.id() != backend) throw bad("backend mismatch");

    std::uint32_t prev_threshold = 0;
    for (std::uint32_t th : thresholds) {
        if (th <= prev_threshold) throw bad("thresholds must be strictly increasing");
        if (th < 1 || th > n) throw bad("thresholds must lie in [1, n]");
        prev_threshold = th;
    }

    if (pk.fragment_publics.size() != n) throw bad("fragment public count mismatch");
    auto diag = dkg::verify_ceremony(group, ceremony, pk, k, n, t);
    if (!diag.ok) throw bad(diag.failures.front());

    if (hash_key_commitment.coeff_commits.size() != t) throw bad("hash key commitment length");
    if (group.is_identity(hash_key_commitment.coeff_commits[0])) {
        throw bad("hash key commitment is degenerate");
    }
    if (hash_base != group.hash_to_group(to_bytes(kHashBaseTag), petition_id)) {
        throw bad("hash base does not derive from petition id");
    }
    if (hybrid_alg != 1) throw bad("unknown hybrid algorithm");
}

SignatureChain::SignatureChain(std::shared_ptr<const Group> group, PetitionParams header)
    : group_(std::move(group)), header_(std::move(header)) {
    header_.validate(*group_);
    json j = header_to_json(*group_, header_);
    std::string core = j.dump();
    header_hash_ = to_hex(sha256(to_bytes(core)));
    j["hash"] = header_hash_;
    header_line_ = j.dump();
}

std::uint32_t SignatureChain::effective_threshold(const std::optional<std::uint32_t>& t) const {
    return header_.multi_threshold() ? t.value() : header_.n;
}

std::uint32_t SignatureChain::validation_count(const GroupElement& dup_hash) const {
    std::uint32_t count = 0;
    for (const auto& r : records_) {
        if (const auto* vr = std::get_if<ValidationRecord>(&r.body)) {
            if (vr->dup_hash == dup_hash) ++count;
        }
    }
    return count;
}

std::uint32_t SignatureChain::distinct_validators(const GroupElement& dup_hash) const {
    std::set<std::string> ids;
    for (const auto& r : records_) {
        if (const auto* vr = std::get_if<ValidationRecord>(&r.body)) {
            if (vr->dup_hash == dup_hash) ids.insert(vr->validator);
        }
    }
    return static_cast<std::uint32_t>(ids.size());
}

bool SignatureChain::has_cyphersignature(const GroupElement& dup_hash) const {
    for (const auto& r : records_) {
        if (const auto* cs = std::get_if<Cyphersignature>(&r.body)) {
            if (cs->dup_hash == dup_hash) return true;
        }
    }
    return false;
}

bool SignatureChain::check_duplicate(const GroupElement& dup_hash) const {
    if (has_cyphersignature(dup_hash)) return false;
    return validation_count(dup_hash) + 1 <= header_.v;
}

void SignatureChain::require_appendable(Tick tick) const {
    if (frozen_) throw protocol_error("expired");
    if (header_.expiry && tick >= *header_.expiry) throw protocol_error("expired");
}

void SignatureChain::push_record(RecordBody body) {
    Record rec;
    rec.prev = records_.empty() ? header_hash_ : records_.back().hash;
    json j = body_to_json(body);
    if (const auto* cs = std::get_if<Cyphersignature>(&body); cs && cs->fragment) {
        j["fragment"]["value"] = to_hex(group_->scalar_encode(cs->fragment->value));
    }
    j["prev"] = rec.prev;
    std::string core = j.dump();
    rec.hash = to_hex(sha256(to_bytes(core)));
    j["hash"] = rec.hash;
    rec.line = j.dump();
    rec.body = std::move(body);
    records_.push_back(std::move(rec));
}

void SignatureChain::append_validation(ValidationRecord rec) {
    require_appendable(rec.tick);
    if (rec.shares.size() != header_.k) {
        throw parameter_error("malformed record", "expected k share ciphertexts");
    }
    if (rec.validator.empty()) throw parameter_error("malformed record", "missing validator");
    if (header_.multi_threshold()) {
        if (!rec.threshold) throw parameter_error("malformed record", "missing threshold");
        if (std::find(header_.thresholds.begin(), header_.thresholds.end(), *rec.threshold) ==
            header_.thresholds.end()) {
            throw parameter_error("malformed record", "threshold not in the petition menu");
        }
    } else if (rec.threshold) {
        throw parameter_error("malformed record", "threshold on a single-threshold petition");
    }
    if (!check_duplicate(rec.dup_hash)) throw protocol_error("duplicate user");
    push_record(std::move(rec));
}

std::optional<std::uint32_t> SignatureChain::select_fragment(
    std::optional<std::uint32_t> user_threshold) const {
    std::uint32_t bound = user_threshold.value_or(header_.n);
    for (std::uint32_t j = bound; j >= 1; --j) {
        if (!released_.contains(j)) return j;
    }
    return std::nullopt;
}

void SignatureChain::append_cyphersignature(Cyphersignature sig) {
    require_appendable(sig.tick);
    if (sig.shares.size() != header_.k) {
        throw parameter_error("malformed record", "expected k share ciphertexts");
    }
    if (header_.multi_threshold()) {
        if (!sig.threshold) throw parameter_error("malformed record", "missing threshold");
        if (std::find(header_.thresholds.begin(), header_.thresholds.end(), *sig.threshold) ==
            header_.thresholds.end()) {
            throw parameter_error("malformed record", "threshold not in the petition menu");
        }
    } else if (sig.threshold) {
        throw parameter_error("malformed record", "threshold on a single-threshold petition");
    }

    if (has_cyphersignature(sig.dup_hash)) throw protocol_error("duplicate user");
    if (distinct_validators(sig.dup_hash) < header_.v) {
        throw protocol_error("insufficient validations");
    }

    std::optional<std::uint32_t> expected = select_fragment(sig.threshold);
    if (expected) {
        if (!sig.fragment) {
            throw parameter_error("malformed record", "fragment release required");
        }
        if (sig.fragment->index != *expected) {
            if (released_.contains(sig.fragment->index)) {
                throw protocol_error("fragment already released");
            }
            throw parameter_error("malformed record", "wrong fragment index");
        }
        if (group_->exp_g(sig.fragment->value) !=
            header_.pk.fragment_publics[sig.fragment->index - 1]) {
            throw verification_error("fragment verification failed");
        }
    } else if (sig.fragment) {
        throw protocol_error("fragment already released");
    }

    if (sig.fragment) released_.emplace(sig.fragment->index, sig.fragment->value);
    push_record(std::move(sig));
}

void SignatureChain::expire(Tick now) {
    if (trigger_check().triggered) throw protocol_error("already triggered");
    if (frozen_) throw protocol_error("expired");
    if (!header_.expiry) throw parameter_error("no expiry configured");
    if (now < *header_.expiry) throw parameter_error("expiry not reached");
    push_record(ExpiryMarker{now});
    frozen_ = true;
}

std::optional<Scalar> SignatureChain::prefix_key(std::uint32_t prefix) const {
    Scalar sum = group_->scalar_from_u64(0);
    for (std::uint32_t j = 1; j <= prefix; ++j) {
        auto it = released_.find(j);
        if (it == released_.end()) return std::nullopt;
        sum = group_->scalar_add(sum, it->second);
    }
    return sum;
}

TriggerReport SignatureChain::trigger_check() const {
    TriggerReport report;
    std::vector<std::pair<std::size_t, std::uint32_t>> sigs;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (const auto* cs = std::get_if<Cyphersignature>(&records_[i].body)) {
            sigs.emplace_back(i, effective_threshold(cs->threshold));
        }
    }

    // Cascade level: the largest m such that at least m signatures carry a
    // threshold <= m. Brute force over every candidate m.
    for (std::uint32_t m = 1; m <= header_.n; ++m) {
        std::uint32_t count = 0;
        for (const auto& [idx, nu] : sigs) {
            if (nu <= m) ++count;
        }
        if (count >= m) report.cascade_level = m;
    }
    if (report.cascade_level > 0) {
        for (const auto& [idx, nu] : sigs) {
            if (nu <= report.cascade_level) report.cascade_set.push_back(idx);
        }
    }
    for (const auto& [idx, nu] : sigs) {
        if (prefix_key(nu)) report.decryptable.push_back(idx);
    }
    report.triggered = header_.multi_threshold() ? report.cascade_level > 0
                                                 : released_.size() == header_.n;
    return report;
}

std::vector<DecryptedSignature> SignatureChain::decrypt_all(
    const std::optional<Scalar>& oracle_key) const {
    TriggerReport report = trigger_check();
    if (report.decryptable.empty()) throw protocol_error("not triggered");

    std::vector<DecryptedSignature> results;
    for (std::size_t idx : report.decryptable) {
        const auto& sig = std::get<Cyphersignature>(records_[idx].body);
        Scalar key = prefix_key(effective_threshold(sig.threshold)).value();

        DecryptedSignature out;
        out.record_index = idx;
        out.status = "ok";

        std::vector<vss::ShamirShare> shares;
        bool failed = false;
        for (std::uint32_t i = 0; i < header_.k && !failed; ++i) {
            try {
                Bytes plain = elgamal::hybrid_decrypt(*group_, key, sig.shares[i]);
                shares.push_back({i + 1, group_->scalar_decode(plain)});
            } catch (const Error& e) {
                out.status = e.code() == "authentication failure" ? "authentication failure"
                                                                  : "share inconsistency";
                failed = true;
            }
        }
        if (failed) {
            results.push_back(std::move(out));
            continue;
        }

        // Every t-subset must agree on the reconstructed identity; a corrupt
        // rabbit's bad encrypted share is only detectable this way.
        std::optional<Scalar> identity;
        bool consistent = true;
        std::vector<std::uint32_t> pick(header_.t);
        for (std::uint32_t i = 0; i < header_.t; ++i) pick[i] = i;
        for (;;) {
            std::vector<vss::ShamirShare> subset;
            for (std::uint32_t i : pick) subset.push_back(shares[i]);
            Scalar u = vss::reconstruct(*group_, subset, header_.t);
            if (!identity) {
                identity = u;
            } else if (*identity != u) {
                consistent = false;
                break;
            }
            // Advance the combination.
            std::int64_t pos = header_.t - 1;
            while (pos >= 0 && pick[static_cast<std::size_t>(pos)] ==
                                   header_.k - header_.t + static_cast<std::uint32_t>(pos)) {
                --pos;
            }
            if (pos < 0) break;
            ++pick[static_cast<std::size_t>(pos)];
            for (auto i = static_cast<std::size_t>(pos) + 1; i < header_.t; ++i) {
                pick[i] = pick[i - 1] + 1;
            }
        }
        if (!consistent) {
            out.status = "share inconsistency";
            results.push_back(std::move(out));
            continue;
        }
        out.identity = *identity;

        try {
            out.testimony = elgamal::hybrid_decrypt(*group_, key, sig.testimony);
        } catch (const Error&) {
            out.status = "authentication failure";
            results.push_back(std::move(out));
            continue;
        }

        if (oracle_key &&
            dhash::local_hash_oracle(*group_, *identity, *oracle_key, header_.hash_base) !=
                sig.dup_hash) {
            out.status = "hash mismatch";
        }
        results.push_back(std::move(out));
    }
    return results;
}

std::string SignatureChain::serialize() const {
    std::string out = header_line_;
    out.push_back('\n');
    for (const auto& r : records_) {
        out += r.line;
        out.push_back('\n');
    }
    return out;
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

/// Parses one line, checks its self-hash, and returns the parsed object.
json parse_checked_line(const std::string& line, const std::string& what) {
    json j;
    try {
        j = json::parse(line);
    } catch (const std::exception& e) {
        throw verification_error("malformed chain file", what + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("hash") || !j.at("hash").is_string()) {
        throw verification_error("malformed chain file", what + ": missing hash");
    }
    std::string stored = j.at("hash").get<std::string>();
    json core = j;
    core.erase("hash");
    if (to_hex(sha256(to_bytes(core.dump()))) != stored) {
        throw verification_error("hash mismatch", what);
    }
    return j;
}

RecordBody record_body_from_json(const Group& g, const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "validation") {
        ValidationRecord vr;
        vr.validator = j.at("validator").get<std::string>();
        for (const auto& s : j.at("shares")) vr.shares.push_back(ct_from_hex(g, s, "share"));
        vr.dup_hash = element_from_hex(g, j.at("dup"), "dup");
        if (j.contains("threshold")) vr.threshold = j.at("threshold").get<std::uint32_t>();
        vr.tick = j.at("tick").get<Tick>();
        return vr;
    }
    if (type == "cyphersignature") {
        Cyphersignature cs;
        cs.testimony = ct_from_hex(g, j.at("testimony"), "testimony");
        for (const auto& s : j.at("shares")) cs.shares.push_back(ct_from_hex(g, s, "share"));
        cs.dup_hash = element_from_hex(g, j.at("dup"), "dup");
        if (j.contains("fragment")) {
            FragmentRelease fr;
            fr.index = j.at("fragment").at("index").get<std::uint32_t>();
            fr.value = scalar_from_hex(g, j.at("fragment").at("value"), "fragment value");
            cs.fragment = fr;
        }
        if (j.contains("threshold")) cs.threshold = j.at("threshold").get<std::uint32_t>();
        cs.tick = j.at("tick").get<Tick>();
        return cs;
    }
    if (type == "expired") {
        return ExpiryMarker{j.at("tick").get<Tick>()};
    }
    throw verification_error("malformed chain file", "unknown record type " + type);
}

SignatureChain replay(const std::string& text,
                      std::vector<std::string>* problems_or_null) {
    auto fail = [&](const std::string& msg) {
        if (problems_or_null) {
            problems_or_null->push_back(msg);
            return false;
        }
        throw verification_error("chain verification failed", msg);
    };

    std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) {
        throw verification_error("malformed chain file", "empty file");
    }

    json header_json = parse_checked_line(lines[0], "header");
    std::shared_ptr<const Group> group = make_group(header_json.at("backend").get<std::string>());
    PetitionParams header = header_from_json(header_json, *group);
    SignatureChain chain(std::move(group), std::move(header));
    if (chain.header_line() != lines[0]) {
        throw verification_error("chain verification failed", "header is not canonical");
    }

    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string what = "record " + std::to_string(i);
        try {
            json j = parse_checked_line(lines[i], what);
            std::string prev = j.at("prev").get<std::string>();
            std::string expected_prev =
                chain.records().empty() ? chain.header_hash() : chain.records().back().hash;
            if (prev != expected_prev) {
                throw verification_error("broken link", what);
            }
            RecordBody body = record_body_from_json(chain.group(), j);
            if (auto* vr = std::get_if<ValidationRecord>(&body)) {
                chain.append_validation(std::move(*vr));
            } else if (auto* cs = std::get_if<Cyphersignature>(&body)) {
                chain.append_cyphersignature(std::move(*cs));
            } else {
                chain.expire(std::get<ExpiryMarker>(body).tick);
            }
            if (chain.records().back().line != lines[i]) {
                throw verification_error("chain verification failed",
                                         what + " is not canonical");
            }
        } catch (const std::exception& e) {
            fail(what + ": " + e.what());
            return chain;
        }
    }
    return chain;
}

}  // namespace

SignatureChain SignatureChain::load(const std::string& text) { return replay(text, nullptr); }

std::vector<std::string> SignatureChain::verify_text(const std::string& text) {
    std::vector<std::string> problems;

    // Structural pass: every line must parse, self-hash, and link to its
    // predecessor, regardless of where the semantic replay stops.
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty()) return {"empty file"};
    std::string prev_hash;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string what = i == 0 ? "header" : "record " + std::to_string(i);
        json j;
        bool parsed = true;
        try {
            j = json::parse(lines[i]);
            if (!j.is_object()) throw verification_error("malformed chain file", what);
        } catch (const std::exception& e) {
            problems.push_back(what + ": " + std::string(e.what()));
            parsed = false;
        }
        if (!parsed) {
            prev_hash.clear();
            continue;
        }
        std::string stored = j.value("hash", "");
        json core = j;
        core.erase("hash");
        if (stored.empty() || to_hex(sha256(to_bytes(core.dump()))) != stored) {
            problems.push_back(what + ": hash mismatch");
        }
        std::string expected_prev = i == 0 ? "" : prev_hash;
        if (j.value("prev", std::string("?")) != expected_prev) {
            problems.push_back(what + ": broken link");
        }
        prev_hash = stored;
    }

    // Semantic replay (stops at the first failure).
    try {
        replay(text, &problems);
    } catch (const Error& e) {
        problems.emplace_back(e.what());
    } catch (const std::exception& e) {
        problems.emplace_back(e.what());
    }

    // Deduplicate while preserving order.
    std::vector<std::string> unique;
    std::set<std::string> seen;
    for (auto& p : problems) {
        if (seen.insert(p).second) unique.push_back(std::move(p));
    }
    return unique;
}

}  // namespace petition::chain
