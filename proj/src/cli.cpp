#include "gcn/cli.hpp"

#include "gcn/records.hpp"
#include "gcn/search.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>

namespace gcn::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Natural flag_natural(const std::string& text, const char* flag, long minimum)
{
    Natural v;
    try {
        v = parse_natural(text);
    } catch (const std::invalid_argument&) {
        throw UsageError(std::string(flag) + ": expected a decimal integer, got '" + text + "'");
    }
    if (v < minimum) throw UsageError(std::string(flag) + " must be >= " + std::to_string(minimum));
    return v;
}

std::uint64_t flag_u64(const std::string& text, const char* flag, long minimum)
{
    const Natural v = flag_natural(text, flag, minimum);
    if (!v.fits_ulong_p()) throw UsageError(std::string(flag) + " is too large");
    return v.get_ui();
}

unsigned default_workers()
{
    const char* env = std::getenv("GCN_WORKERS");
    if (env == nullptr || *env == '\0') return 1;
    const auto w = flag_u64(env, "GCN_WORKERS", 1);
    if (w > 1024) throw UsageError("GCN_WORKERS must be <= 1024");
    return static_cast<unsigned>(w);
}

unsigned resolve_workers(const std::string& flag)
{
    if (flag.empty()) return default_workers();
    const auto w = flag_u64(flag, "--workers", 1);
    if (w > 1024) throw UsageError("--workers must be <= 1024");
    return static_cast<unsigned>(w);
}

std::string join_bases(const std::set<Natural>& bases)
{
    std::string s;
    for (const auto& p : bases) {
        if (!s.empty()) s += ", ";
        s += to_decimal(p);
    }
    return s;
}

// Human-readable result line using the RETURN wording of the test pipeline.
std::string result_line(const Verdict& v)
{
    if (const auto* c = std::get_if<Composite>(&v)) {
        switch (c->kind) {
        case CompositeKind::ParityPrefilter: return "COMPOSITE NUMBER (even: b and n both odd)";
        case CompositeKind::Test1Failure: return "COMPOSITE NUMBER (TEST1 failure)";
        case CompositeKind::Test2Failure: return "COMPOSITE NUMBER (TEST2 failure at base " + to_decimal(*c->prime) + ")";
        case CompositeKind::SieveDivisor: return "COMPOSITE NUMBER (divisible by " + to_decimal(*c->prime) + ")";
        }
    }
    if (std::holds_alternative<ProbablePrimeTest1>(v)) return "PROBABLE PRIME for TEST1";
    if (const auto* pp = std::get_if<ProbablePrimeTest2>(&v)) {
        return "PROBABLE PRIME for TEST2 to bases " + join_bases(pp->bases) + " (not certified)";
    }
    return "PRIME NUMBER";
}

Json evaluation_json(const GcnCandidate& c, const Evaluation& ev)
{
    Json j = {
        {"b", natural_json(c.b())},
        {"n", natural_json(c.n())},
        {"digits", natural_json(digit_count(c.value()))},
        {"K_by_base", k_map_to_json(ev.k_by_base)},
    };
    put_verdict(j, ev.verdict);
    return j;
}

void print_evaluation(const GcnCandidate& c, const Evaluation& ev, std::ostream& out)
{
    out << "N = C_" << c.b() << "(" << c.n() << "), " << digit_count(c.value()) << " digits\n";
    for (const auto& [p, k] : ev.k_by_base) {
        out << "TEST2 base " << p << ": K = " << k << " (K+1 = " << (k + 1) << ")\n";
    }
    out << "RESULT: " << result_line(ev.verdict) << '\n';
    if (const auto* proven = std::get_if<ProvenPrime>(&ev.verdict)) {
        out << "certificate: " << certificate_to_json(proven->certificate).dump() << '\n';
    }
}

// Opens --out or falls back to `fallback`.
struct Sink {
    std::unique_ptr<std::ofstream> file;
    std::ostream* stream = nullptr;

    Sink(const std::string& path, std::ostream& fallback)
    {
        if (path.empty()) {
            stream = &fallback;
            return;
        }
        file = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file) throw ScanIoError("cannot open " + path + " for writing");
        stream = file.get();
    }

    void finish()
    {
        stream->flush();
        if (!*stream) throw ScanIoError("write failed");
    }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Primality tests, certificates and search harnesses for n*b^n+1", "gcn"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    std::string b_s, n_s, cert_path, out_path, workers_s, b_from_s, b_to_s, n_from_s, n_to_s, limit_s;
    std::vector<std::string> ns_s;
    bool json = false, resume = false, no_timing = false;

    auto* value_cmd = app.add_subcommand("value", "Print C_b(n) and its digit count");
    value_cmd->add_option("--b", b_s, "base b >= 2")->required();
    value_cmd->add_option("--n", n_s, "index n >= 1")->required();

    auto* test_cmd = app.add_subcommand("test", "Run TEST1, TEST2 at every prime p | b, and certification");
    test_cmd->add_option("--b", b_s, "base b >= 2")->required();
    test_cmd->add_option("--n", n_s, "index n >= 1")->required();
    test_cmd->add_flag("--json", json, "machine-readable output");

    auto* certify_cmd = app.add_subcommand("certify", "Prove primality; exit 0 proven, 1 composite, 2 probable prime");
    certify_cmd->add_option("--b", b_s, "base b >= 2")->required();
    certify_cmd->add_option("--n", n_s, "index n >= 1")->required();
    certify_cmd->add_option("--emit-cert", cert_path, "certificate output path")->required();

    auto* verify_cmd = app.add_subcommand("verify", "Check a certificate; exit 0 valid, 1 invalid, 3 malformed");
    verify_cmd->add_option("--cert", cert_path, "certificate path")->required();

    auto* scan_cmd = app.add_subcommand("scan", "Sieve and test C_b(n) for n in a range");
    scan_cmd->add_option("--b", b_s, "base b >= 2")->required();
    scan_cmd->add_option("--n-from", n_from_s)->required();
    scan_cmd->add_option("--n-to", n_to_s)->required();
    scan_cmd->add_option("--sieve-limit", limit_s, "largest sieving prime")->required();
    scan_cmd->add_option("--workers", workers_s, "worker threads (default $GCN_WORKERS or 1)");
    scan_cmd->add_option("--out", out_path, "output / checkpoint file");
    scan_cmd->add_flag("--resume", resume, "continue an interrupted --out file");
    scan_cmd->add_flag("--no-timing", no_timing, "write elapsed_ms as 0 for byte-stable output");

    auto* hunt_cmd = app.add_subcommand("hunt", "List composites passing TEST1, Fermat, Miller-Rabin or TEST2");
    hunt_cmd->add_option("--b-from", b_from_s)->required();
    hunt_cmd->add_option("--b-to", b_to_s)->required();
    hunt_cmd->add_option("--n-from", n_from_s)->required();
    hunt_cmd->add_option("--n-to", n_to_s)->required();
    hunt_cmd->add_option("--workers", workers_s);
    hunt_cmd->add_option("--out", out_path);

    auto* sieve_cmd = app.add_subcommand("sieve", "Print sieve patterns 'p period residues'");
    sieve_cmd->add_option("--b", b_s, "base b >= 2")->required();
    sieve_cmd->add_option("--prime-limit", limit_s)->required();

    auto* monitor_cmd = app.add_subcommand("monitor", "Report primes with n > b that are not certified");
    monitor_cmd->add_option("--b-from", b_from_s)->required();
    monitor_cmd->add_option("--b-to", b_to_s)->required();
    monitor_cmd->add_option("--n-from", n_from_s)->required();
    monitor_cmd->add_option("--n-to", n_to_s)->required();
    monitor_cmd->add_option("--workers", workers_s);
    monitor_cmd->add_option("--out", out_path);

    auto* bench_cmd = app.add_subcommand("bench", "Time the full test against the oracle");
    bench_cmd->add_option("--b", b_s, "base b >= 2")->required();
    bench_cmd->add_option("--ns", ns_s, "comma-separated indices")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << tool_version() << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (value_cmd->parsed()) {
            const Natural b = flag_natural(b_s, "--b", 2), n = flag_natural(n_s, "--n", 1);
            const Natural N = gcn_value(b, n);
            out << N << '\n' << "digits " << digit_count(N) << '\n';
            return kOk;
        }
        if (test_cmd->parsed()) {
            const GcnCandidate c(flag_natural(b_s, "--b", 2), flag_natural(n_s, "--n", 1));
            const Evaluation ev = evaluate(c);
            if (json) {
                out << evaluation_json(c, ev).dump() << '\n';
            } else {
                print_evaluation(c, ev, out);
            }
            return kOk;
        }
        if (certify_cmd->parsed()) {
            const GcnCandidate c(flag_natural(b_s, "--b", 2), flag_natural(n_s, "--n", 1));
            const Evaluation ev = evaluate(c);
            print_evaluation(c, ev, out);
            if (const auto* proven = std::get_if<ProvenPrime>(&ev.verdict)) {
                try {
                    write_certificate(proven->certificate, cert_path);
                } catch (const std::runtime_error& e) {
                    err << "error: " << e.what() << '\n';
                    return kIoError;
                }
                return kOk;
            }
            return std::holds_alternative<Composite>(ev.verdict) ? kNegative : kProbablePrime;
        }
        if (verify_cmd->parsed()) {
            PrimalityCertificate cert;
            bool valid = false;
            try {
                cert = read_certificate(cert_path);
                valid = verify_certificate(cert);
            } catch (const ValidationError& e) {
                err << "malformed certificate: " << e.what() << '\n';
                return kMalformed;
            }
            out << (valid ? "VALID" : "INVALID") << ": C_" << cert.b << "(" << cert.n << ") base p = " << cert.p
                << ", K = " << cert.K << '\n';
            return valid ? kOk : kNegative;
        }
        if (scan_cmd->parsed()) {
            ScanParams params;
            params.b = flag_natural(b_s, "--b", 2);
            params.n_from = flag_u64(n_from_s, "--n-from", 1);
            params.n_to = flag_u64(n_to_s, "--n-to", 0);
            params.sieve_limit = flag_u64(limit_s, "--sieve-limit", 2);
            params.workers = resolve_workers(workers_s);
            params.record_timing = !no_timing;
            if (resume && out_path.empty()) throw UsageError("--resume requires --out");
            if (out_path.empty()) {
                scan_to_stream(params, out);
            } else {
                const auto summary = scan_to_file(params, out_path, resume);
                err << "scan: " << summary.resumed_records << " records resumed, " << summary.new_records
                    << " written\n";
            }
            return kOk;
        }
        if (hunt_cmd->parsed()) {
            HuntParams params;
            params.b_from = flag_natural(b_from_s, "--b-from", 2);
            params.b_to = flag_natural(b_to_s, "--b-to", 2);
            params.n_from = flag_natural(n_from_s, "--n-from", 1);
            params.n_to = flag_natural(n_to_s, "--n-to", 1);
            params.workers = resolve_workers(workers_s);
            if (params.b_from > params.b_to || params.n_from > params.n_to) throw UsageError("empty search box");
            const auto records = hunt_pseudoprimes(params);

            Sink sink(out_path, out);
            std::ostream& os = *sink.stream;
            os << Json{{"kind", "hunt-header"},
                       {"tool", "gcn"},
                       {"version", tool_version()},
                       {"b_from", natural_json(params.b_from)},
                       {"b_to", natural_json(params.b_to)},
                       {"n_from", natural_json(params.n_from)},
                       {"n_to", natural_json(params.n_to)}}
                      .dump()
               << '\n';
            Json test1_set = Json::array();
            for (const auto& r : records) {
                os << pseudoprime_record_to_json(r).dump() << '\n';
                if (r.passed(HuntTest::Test1)) {
                    test1_set.push_back({{"b", natural_json(r.b)}, {"n", natural_json(r.n)}, {"N", natural_json(r.value)}});
                }
            }
            os << Json{{"kind", "summary"}, {"records", records.size()}, {"test1_pseudoprimes", test1_set}}.dump()
               << '\n';
            sink.finish();
            return kOk;
        }
        if (sieve_cmd->parsed()) {
            const Natural b = flag_natural(b_s, "--b", 2);
            const auto limit = flag_u64(limit_s, "--prime-limit", 2);
            if (limit > 100'000) throw UsageError("--prime-limit must be <= 100000");
            out << "# p period residues (b = " << b << ")\n";
            for (const auto& pattern : sieve_patterns(b, limit)) out << pattern.to_row() << '\n';
            return kOk;
        }
        if (monitor_cmd->parsed()) {
            MonitorParams params;
            params.b_from = flag_natural(b_from_s, "--b-from", 2);
            params.b_to = flag_natural(b_to_s, "--b-to", 2);
            params.n_from = flag_natural(n_from_s, "--n-from", 1);
            params.n_to = flag_natural(n_to_s, "--n-to", 1);
            params.workers = resolve_workers(workers_s);
            const MonitorReport report = conjecture_monitor(params);
            Sink sink(out_path, out);
            write_monitor_report(params, report, *sink.stream);
            sink.finish();
            return report.violations.empty() && report.unsound.empty() ? kOk : kNegative;
        }
        if (bench_cmd->parsed()) {
            const Natural b = flag_natural(b_s, "--b", 2);
            std::vector<Natural> ns;
            for (const auto& s : ns_s) ns.push_back(flag_natural(s, "--ns", 1));
            write_bench_table(b, bench(b, ns), out);
            return kOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const ScanIoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return kIoError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    err << app.help();
    return kUsage;
}

}  // namespace gcn::cli
