#include "gcn/records.hpp"

#include <fstream>
#include <sstream>

namespace gcn {

Json natural_json(const Natural& x)
{
    return to_decimal(x);
}

Natural natural_from_json(const Json& j, const char* field)
{
    if (!j.is_string()) throw ValidationError(std::string("field '") + field + "' must be a decimal string");
    try {
        return parse_natural(j.get<std::string>());
    } catch (const std::invalid_argument&) {
        throw ValidationError(std::string("field '") + field + "' is not a decimal natural");
    }
}

namespace {

const Json& require_field(const Json& j, const char* field)
{
    if (!j.is_object() || !j.contains(field)) throw ValidationError(std::string("missing field '") + field + "'");
    return j.at(field);
}

CompositeKind composite_kind_from_name(const std::string& name)
{
    for (auto kind : {CompositeKind::ParityPrefilter, CompositeKind::Test1Failure, CompositeKind::Test2Failure,
                      CompositeKind::SieveDivisor}) {
        if (composite_kind_name(kind) == name) return kind;
    }
    throw ValidationError("unknown composite reason '" + name + "'");
}

}  // namespace

Json certificate_to_json(const PrimalityCertificate& cert)
{
    return Json{
        {"schema_version", cert.schema_version},
        {"b", natural_json(cert.b)},
        {"n", natural_json(cert.n)},
        {"p", natural_json(cert.p)},
        {"K", natural_json(cert.K)},
    };
}

PrimalityCertificate certificate_from_json(const Json& j)
{
    if (!j.is_object()) throw ValidationError("certificate must be a JSON object");
    const Json& version = require_field(j, "schema_version");
    if (!version.is_number_integer()) throw ValidationError("schema_version must be an integer");
    PrimalityCertificate cert;
    cert.schema_version = version.get<int>();
    cert.b = natural_from_json(require_field(j, "b"), "b");
    cert.n = natural_from_json(require_field(j, "n"), "n");
    cert.p = natural_from_json(require_field(j, "p"), "p");
    cert.K = natural_from_json(require_field(j, "K"), "K");
    return cert;
}

void write_certificate(const PrimalityCertificate& cert, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << certificate_to_json(cert).dump() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("cannot write certificate to " + path.string());
}

PrimalityCertificate read_certificate(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open certificate " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    Json j = Json::parse(buffer.str(), nullptr, false);
    if (j.is_discarded()) throw ValidationError("certificate " + path.string() + " is not valid JSON");
    return certificate_from_json(j);
}

void put_verdict(Json& j, const Verdict& v)
{
    j["verdict"] = verdict_tag(v);
    if (const auto* c = std::get_if<Composite>(&v)) {
        j["reason"] = composite_kind_name(c->kind);
        j["reason_prime"] = c->prime ? natural_json(*c->prime) : Json(nullptr);
    }
    if (const auto* pp = std::get_if<ProbablePrimeTest2>(&v)) {
        Json bases = Json::array();
        for (const auto& p : pp->bases) bases.push_back(natural_json(p));
        j["bases"] = bases;
    }
    j["certificate"] = nullptr;
    if (const auto* proven = std::get_if<ProvenPrime>(&v)) j["certificate"] = certificate_to_json(proven->certificate);
}

Verdict get_verdict(const Json& j)
{
    const Json& tag_json = require_field(j, "verdict");
    if (!tag_json.is_string()) throw ValidationError("verdict must be a string");
    const std::string tag = tag_json.get<std::string>();
    if (tag == "Composite") {
        Composite c;
        const Json& reason = require_field(j, "reason");
        if (!reason.is_string()) throw ValidationError("reason must be a string");
        c.kind = composite_kind_from_name(reason.get<std::string>());
        if (j.contains("reason_prime") && !j.at("reason_prime").is_null()) {
            c.prime = natural_from_json(j.at("reason_prime"), "reason_prime");
        }
        return c;
    }
    if (tag == "ProbablePrimeTest1") return ProbablePrimeTest1{};
    if (tag == "ProbablePrimeTest2") {
        ProbablePrimeTest2 pp;
        const Json& bases = require_field(j, "bases");
        if (!bases.is_array()) throw ValidationError("bases must be an array");
        for (const auto& b : bases) pp.bases.insert(natural_from_json(b, "bases"));
        return pp;
    }
    if (tag == "ProvenPrime") {
        const Json& cert = require_field(j, "certificate");
        return ProvenPrime{certificate_from_json(cert)};
    }
    throw ValidationError("unknown verdict '" + tag + "'");
}

Json k_map_to_json(const std::map<Natural, Natural>& k_by_base)
{
    Json j = Json::object();
    for (const auto& [p, k] : k_by_base) j[to_decimal(p)] = natural_json(k);
    return j;
}

std::map<Natural, Natural> k_map_from_json(const Json& j)
{
    if (!j.is_object()) throw ValidationError("K_by_base must be an object");
    std::map<Natural, Natural> out;
    for (const auto& [key, value] : j.items()) {
        Natural p;
        try {
            p = parse_natural(key);
        } catch (const std::invalid_argument&) {
            throw ValidationError("K_by_base key '" + key + "' is not a decimal natural");
        }
        out[p] = natural_from_json(value, "K_by_base");
    }
    return out;
}

Json scan_record_to_json(const ScanRecord& r)
{
    Json j = {
        {"kind", "record"},
        {"b", natural_json(r.b)},
        {"n", natural_json(r.n)},
        {"digits", natural_json(r.digits)},
        {"K_by_base", k_map_to_json(r.k_by_base)},
        {"sieve_hit", r.sieve_hit ? Json(std::to_string(*r.sieve_hit)) : Json(nullptr)},
        {"elapsed_ms", r.elapsed_ms},
    };
    put_verdict(j, r.verdict);
    return j;
}

ScanRecord scan_record_from_json(const Json& j)
{
    if (!j.is_object() || j.value("kind", "") != "record") throw ValidationError("not a scan record");
    ScanRecord r;
    r.b = natural_from_json(require_field(j, "b"), "b");
    r.n = natural_from_json(require_field(j, "n"), "n");
    r.digits = natural_from_json(require_field(j, "digits"), "digits");
    r.k_by_base = k_map_from_json(require_field(j, "K_by_base"));
    const Json& hit = require_field(j, "sieve_hit");
    if (!hit.is_null()) r.sieve_hit = to_ulong(natural_from_json(hit, "sieve_hit"), "sieve_hit");
    const Json& elapsed = require_field(j, "elapsed_ms");
    if (!elapsed.is_number_unsigned()) throw ValidationError("elapsed_ms must be a non-negative integer");
    r.elapsed_ms = elapsed.get<std::uint64_t>();
    r.verdict = get_verdict(j);
    return r;
}

Json pseudoprime_record_to_json(const PseudoprimeRecord& r)
{
    Json passed = Json::array(), failed = Json::array();
    for (const auto& o : r.outcomes) (o.passed ? passed : failed).push_back(o.label());
    Json oracle = {{"verdict", "Composite"}};
    oracle["smallest_factor"] = r.smallest_factor ? Json(std::to_string(r.smallest_factor)) : Json(nullptr);
    return Json{
        {"kind", "pseudoprime"},
        {"b", natural_json(r.b)},
        {"n", natural_json(r.n)},
        {"N", natural_json(r.value)},
        {"passed", passed},
        {"failed", failed},
        {"oracle", oracle},
    };
}

}  // namespace gcn
