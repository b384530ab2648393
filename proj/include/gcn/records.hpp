#pragma once

// Line-oriented JSON encodings. Every Natural is a decimal string.

#include "gcn/core.hpp"
#include "gcn/search.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace gcn {

using Json = nlohmann::json;

/// {"schema_version": 1, "b": "...", "n": "...", "p": "...", "K": "..."}
Json certificate_to_json(const PrimalityCertificate& cert);
/// Throws ValidationError on missing fields, wrong types or non-decimal values.
PrimalityCertificate certificate_from_json(const Json& j);

void write_certificate(const PrimalityCertificate& cert, const std::filesystem::path& path);
/// Throws ValidationError when the file is unreadable or not a certificate.
PrimalityCertificate read_certificate(const std::filesystem::path& path);

/// Verdict fields merged into an object: "verdict", and when relevant
/// "reason", "reason_prime", "bases", "certificate".
void put_verdict(Json& j, const Verdict& v);
Verdict get_verdict(const Json& j);

Json k_map_to_json(const std::map<Natural, Natural>& k_by_base);
std::map<Natural, Natural> k_map_from_json(const Json& j);

Json scan_record_to_json(const ScanRecord& r);
ScanRecord scan_record_from_json(const Json& j);

Json pseudoprime_record_to_json(const PseudoprimeRecord& r);

/// Natural <-> JSON string with strict decimal parsing.
Json natural_json(const Natural& x);
Natural natural_from_json(const Json& j, const char* field);

}  // namespace gcn
