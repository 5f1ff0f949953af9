#include "qbc/transcript_json.hpp"

#include <json.hpp>

namespace qbc {

namespace {

using Json = nlohmann::ordered_json;

Json code_to_json(const Code& code) {
    Json j;
    j["id"] = code.id();
    if (!code.checks().empty()) {
        Json rows = Json::array();
        for (const auto& row : code.checks()) rows.push_back(to_string(row));
        j["checks"] = rows;
    }
    return j;
}

Code code_from_json(const Json& j) {
    const std::string id = j.at("id").get<std::string>();
    if (id == "all") return Code::all_strings();
    if (id == "parity_check") {
        std::vector<Bits> rows;
        for (const auto& row : j.at("checks"))
            rows.push_back(bits_from_string(row.get<std::string>()));
        return Code::parity_check(std::move(rows));
    }
    throw std::invalid_argument("unknown code id: " + id);
}

}  // namespace

std::string transcript_to_json(const Transcript& t) {
    Json j;
    j["params"] = {{"n", t.params.n},
                   {"code", code_to_json(t.params.code)},
                   {"r", to_string(t.params.r)},
                   {"rounds", t.params.rounds},
                   {"master_seed", t.params.master_seed}};
    if (t.bob_secret) {
        j["bob_secret"] = {{"bits", to_string(t.bob_secret->bits)},
                           {"bases", to_string(t.bob_secret->bases)}};
    } else {
        j["bob_secret"] = nullptr;
    }
    if (t.evidence) {
        j["evidence"] = {{"x", t.evidence->x}};
    } else {
        j["evidence"] = nullptr;
    }
    if (t.unveil) {
        j["unveil"] = {{"bit", t.unveil->bit},
                       {"claimed_outcomes", to_string(t.unveil->claimed_outcomes)},
                       {"bases", to_string(t.unveil->bases)}};
    } else {
        j["unveil"] = nullptr;
    }
    j["verdict"] = {{"kind", to_string(t.verdict.kind)},
                    {"reason", t.verdict.reason}};
    j["round_seed"] = t.round_seed;
    return j.dump();
}

Transcript transcript_from_json(const std::string& text) {
    const Json j = Json::parse(text);
    Transcript t;

    const Json& params = j.at("params");
    t.params.n = params.at("n").get<int>();
    t.params.code = code_from_json(params.at("code"));
    t.params.r = bits_from_string(params.at("r").get<std::string>());
    t.params.rounds = params.at("rounds").get<int>();
    t.params.master_seed = params.at("master_seed").get<std::uint64_t>();

    if (!j.at("bob_secret").is_null()) {
        BobSecret secret;
        secret.bits =
            bits_from_string(j["bob_secret"].at("bits").get<std::string>());
        secret.bases =
            bases_from_string(j["bob_secret"].at("bases").get<std::string>());
        t.bob_secret = std::move(secret);
    }
    if (!j.at("evidence").is_null())
        t.evidence = EvidenceAnnouncement{j["evidence"].at("x").get<int>()};
    if (!j.at("unveil").is_null()) {
        UnveilAnnouncement unveil;
        unveil.bit = j["unveil"].at("bit").get<int>();
        unveil.claimed_outcomes = bits_from_string(
            j["unveil"].at("claimed_outcomes").get<std::string>());
        unveil.bases =
            bases_from_string(j["unveil"].at("bases").get<std::string>());
        t.unveil = std::move(unveil);
    }

    const std::string kind = j.at("verdict").at("kind").get<std::string>();
    if (kind == "accept") t.verdict.kind = VerdictKind::Accept;
    else if (kind == "reject_parity") t.verdict.kind = VerdictKind::RejectParity;
    else if (kind == "reject_consistency")
        t.verdict.kind = VerdictKind::RejectConsistency;
    else if (kind == "abort") t.verdict.kind = VerdictKind::Abort;
    else throw std::invalid_argument("unknown verdict kind: " + kind);
    t.verdict.reason = j.at("verdict").at("reason").get<std::string>();

    t.round_seed = j.at("round_seed").get<std::uint64_t>();
    return t;
}

}  // namespace qbc
