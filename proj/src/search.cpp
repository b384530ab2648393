#include "gcn/search.hpp"

#include "gcn/records.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#ifndef GCN_VERSION
#define GCN_VERSION "1.0.0"
#endif

namespace gcn {

namespace {

using Clock = std::chrono::steady_clock;

// Runs produce(i) for i in [0, count) on `workers` threads and hands the
// results to consume() strictly in index order on the calling thread.
// consume() returns false to stop early. Returns the number consumed.
template <class T, class Produce, class Consume>
std::size_t ordered_parallel(std::size_t count, unsigned workers, Produce produce, Consume consume)
{
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            if (!consume(produce(i))) return i + 1;
        }
        return count;
    }

    const std::size_t window = static_cast<std::size_t>(workers) * 64;
    std::mutex mu;
    std::condition_variable ready, room;
    std::map<std::size_t, T> pending;
    std::size_t next_task = 0, next_emit = 0;
    bool stopping = false;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t task;
            {
                std::unique_lock lock(mu);
                room.wait(lock, [&] { return stopping || next_task >= count || next_task < next_emit + window; });
                if (stopping || next_task >= count) return;
                task = next_task++;
            }
            try {
                T result = produce(task);
                std::lock_guard lock(mu);
                pending.emplace(task, std::move(result));
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                stopping = true;
            }
            ready.notify_all();
            room.notify_all();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);

    std::size_t consumed = 0;
    std::exception_ptr consume_failure;
    while (consumed < count) {
        T item;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return failure || pending.count(next_emit) > 0; });
            if (failure) break;
            auto it = pending.find(next_emit);
            item = std::move(it->second);
            pending.erase(it);
            ++next_emit;
        }
        room.notify_all();
        ++consumed;
        bool keep_going = false;
        try {
            keep_going = consume(std::move(item));
        } catch (...) {
            consume_failure = std::current_exception();
        }
        if (!keep_going) break;
    }
    {
        std::lock_guard lock(mu);
        stopping = true;
    }
    room.notify_all();
    pool.clear();

    if (consume_failure) std::rethrow_exception(consume_failure);
    if (failure) std::rethrow_exception(failure);
    return consumed;
}

std::uint64_t milliseconds_since(Clock::time_point start)
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count());
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Json scan_header(const ScanParams& params)
{
    return Json{
        {"kind", "header"},
        {"tool", "gcn"},
        {"version", tool_version()},
        {"b", natural_json(params.b)},
        {"n_from", std::to_string(params.n_from)},
        {"n_to", std::to_string(params.n_to)},
        {"sieve_limit", std::to_string(params.sieve_limit)},
        {"timing", params.record_timing},
    };
}

void validate(const ScanParams& params)
{
    if (params.b < 2) throw std::domain_error("scan: b must be >= 2");
    if (params.n_from < 1) throw std::domain_error("scan: n_from must be >= 1");
    if (params.sieve_limit < 2) throw std::domain_error("scan: sieve_limit must be >= 2");
}

std::vector<std::uint64_t> box_values(const Natural& from, const Natural& to, const char* what)
{
    std::vector<std::uint64_t> values;
    const auto lo = to_ulong(from, what), hi = to_ulong(to, what);
    for (auto v = lo; v <= hi && hi >= lo; ++v) {
        values.push_back(v);
        if (v == hi) break;
    }
    return values;
}

}  // namespace

const char* tool_version()
{
    return GCN_VERSION;
}

std::optional<PrimalityCertificate> ScanRecord::certificate() const
{
    if (const auto* proven = std::get_if<ProvenPrime>(&verdict)) return proven->certificate;
    return std::nullopt;
}

ScanRecord examine_candidate(const Natural& b, std::uint64_t n, std::optional<std::uint64_t> sieve_hit,
                             bool record_timing)
{
    const auto start = Clock::now();
    ScanRecord rec;
    rec.b = b;
    rec.n = n;
    rec.digits = digit_count(gcn_value(b, rec.n));

    if (mpz_odd_p(b.get_mpz_t()) && (n % 2) == 1) {
        rec.verdict = Composite{CompositeKind::ParityPrefilter, std::nullopt};
    } else if (sieve_hit) {
        rec.sieve_hit = sieve_hit;
        rec.verdict = Composite{CompositeKind::SieveDivisor, Natural(*sieve_hit)};
    } else {
        Evaluation ev = evaluate(GcnCandidate(b, rec.n));
        rec.verdict = std::move(ev.verdict);
        rec.k_by_base = std::move(ev.k_by_base);
    }
    rec.elapsed_ms = record_timing ? milliseconds_since(start) : 0;
    return rec;
}

std::size_t scan_gcp(const ScanParams& params, std::uint64_t first_n, const std::function<void(const ScanRecord&)>& sink,
                     const StopRequested& stop)
{
    validate(params);
    if (first_n < params.n_from) first_n = params.n_from;
    if (first_n > params.n_to) return 0;

    const auto hits = sieve_hits(params.b, first_n, params.n_to, sieve_patterns(params.b, params.sieve_limit));
    const std::size_t count = hits.size();
    return ordered_parallel<ScanRecord>(
        count, params.workers,
        [&](std::size_t i) { return examine_candidate(params.b, first_n + i, hits[i], params.record_timing); },
        [&](ScanRecord&& rec) {
            sink(rec);
            return !(stop && stop());
        });
}

std::vector<ScanRecord> scan_gcp(const ScanParams& params)
{
    std::vector<ScanRecord> out;
    scan_gcp(params, params.n_from, [&](const ScanRecord& r) { out.push_back(r); });
    return out;
}

void scan_to_stream(const ScanParams& params, std::ostream& out)
{
    out << scan_header(params).dump() << '\n';
    scan_gcp(params, params.n_from, [&](const ScanRecord& r) { out << scan_record_to_json(r).dump() << '\n'; });
    out.flush();
}

ScanFileSummary scan_to_file(const ScanParams& params, const std::filesystem::path& path, bool resume,
                             const StopRequested& stop)
{
    validate(params);
    const std::string header = scan_header(params).dump();
    ScanFileSummary summary;
    std::uint64_t next_n = params.n_from;
    bool fresh = true;

    std::error_code ec;
    if (resume && std::filesystem::exists(path, ec) && std::filesystem::file_size(path, ec) > 0) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ScanIoError("cannot read checkpoint " + path.string());
        std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        in.close();

        std::size_t pos = content.find('\n');
        if (pos == std::string::npos || content.substr(0, pos) != header) {
            throw ScanIoError("checkpoint " + path.string() + " was written with different scan parameters");
        }
        std::size_t keep = pos + 1;
        // Accept complete lines that decode to the expected next record.
        while (keep < content.size()) {
            const std::size_t end = content.find('\n', keep);
            if (end == std::string::npos) break;
            Json j = Json::parse(content.begin() + static_cast<std::ptrdiff_t>(keep),
                                 content.begin() + static_cast<std::ptrdiff_t>(end), nullptr, false);
            if (j.is_discarded()) break;
            try {
                const ScanRecord rec = scan_record_from_json(j);
                if (rec.b != params.b || rec.n != next_n) break;
            } catch (const std::exception&) {
                break;
            }
            ++next_n;
            ++summary.resumed_records;
            keep = end + 1;
        }
        if (keep < content.size()) {
            std::filesystem::resize_file(path, keep, ec);
            if (ec) throw ScanIoError("cannot truncate checkpoint " + path.string() + ": " + ec.message());
        }
        fresh = false;
    }

    std::ofstream out(path, fresh ? (std::ios::binary | std::ios::trunc) : (std::ios::binary | std::ios::app));
    if (!out) throw ScanIoError("cannot open " + path.string() + " for writing");
    if (fresh) {
        out << header << '\n';
        out.flush();
        if (!out) throw ScanIoError("write failed on " + path.string());
    }

    bool stopped = false;
    summary.new_records = scan_gcp(
        params, next_n,
        [&](const ScanRecord& r) {
            out << scan_record_to_json(r).dump() << '\n';
            out.flush();
            if (!out) throw ScanIoError("write failed on " + path.string());
        },
        [&] {
            stopped = stop && stop();
            return stopped;
        });
    summary.completed = next_n + summary.new_records > params.n_to;
    return summary;
}

std::string HuntTestOutcome::label() const
{
    switch (test) {
    case HuntTest::Test1: return "TEST1";
    case HuntTest::FermatBaseN: return "FermatBaseN";
    case HuntTest::FermatBaseB: return "FermatBaseB";
    case HuntTest::MillerRabinBaseN: return "MillerRabinBaseN";
    case HuntTest::Test2: return "TEST2(" + (base ? to_decimal(*base) : std::string("?")) + ")";
    }
    return "?";
}

bool PseudoprimeRecord::passed(HuntTest test, const std::optional<Natural>& base) const
{
    for (const auto& o : outcomes) {
        if (o.test == test && (!base || o.base == base)) return o.passed;
    }
    return false;
}

std::vector<std::string> PseudoprimeRecord::passed_labels() const
{
    std::vector<std::string> out;
    for (const auto& o : outcomes) {
        if (o.passed) out.push_back(o.label());
    }
    return out;
}

std::vector<PseudoprimeRecord> hunt_pseudoprimes(const HuntParams& params)
{
    if (params.b_from < 2 || params.n_from < 1) throw std::domain_error("hunt: need b >= 2 and n >= 1");
    const auto bs = box_values(params.b_from, params.b_to, "hunt b");
    const auto ns = box_values(params.n_from, params.n_to, "hunt n");

    std::vector<PseudoprimeRecord> out;
    if (bs.empty() || ns.empty()) return out;

    ordered_parallel<std::optional<PseudoprimeRecord>>(
        bs.size() * ns.size(), params.workers,
        [&](std::size_t i) -> std::optional<PseudoprimeRecord> {
            const Natural b = bs[i / ns.size()];
            const Natural n = ns[i % ns.size()];
            if (mpz_odd_p(b.get_mpz_t()) && mpz_odd_p(n.get_mpz_t())) return std::nullopt;  // N even

            const GcnCandidate c(b, n);
            const Natural& N = c.value();
            PseudoprimeRecord rec{b, n, N, {}, 0};
            const bool t1 = std::holds_alternative<ProbablePrimeTest1>(test1(c));
            rec.outcomes.push_back({HuntTest::Test1, std::nullopt, t1});
            rec.outcomes.push_back({HuntTest::FermatBaseN, std::nullopt, fermat_probable_prime(N, n)});
            rec.outcomes.push_back({HuntTest::FermatBaseB, std::nullopt, fermat_probable_prime(N, b)});
            rec.outcomes.push_back({HuntTest::MillerRabinBaseN, std::nullopt, strong_probable_prime(N, n)});
            for (const auto& f : c.base_factors().factors()) {
                // TEST2 starts from level 0, which is exactly TEST1.
                const bool t2 = t1 && test2_base(c, f.prime).passed();
                rec.outcomes.push_back({HuntTest::Test2, f.prime, t2});
            }
            if (rec.passed_labels().empty()) return std::nullopt;
            if (oracle_says_prime(trusted_is_prime(N, params.oracle))) return std::nullopt;
            rec.smallest_factor = small_factor(N, 1'000'000);
            return rec;
        },
        [&](std::optional<PseudoprimeRecord>&& rec) {
            if (rec) out.push_back(std::move(*rec));
            return true;
        });
    return out;
}

MonitorReport conjecture_monitor(const MonitorParams& params)
{
    if (params.b_from < 2 || params.n_from < 1) throw std::domain_error("monitor: need b >= 2 and n >= 1");
    const auto bs = box_values(params.b_from, params.b_to, "monitor b");
    const auto ns = box_values(params.n_from, params.n_to, "monitor n");
    MonitorReport report;
    if (bs.empty() || ns.empty()) return report;

    struct Item {
        Natural b, n;
        bool prime = false;
        Verdict verdict;
    };
    ordered_parallel<Item>(
        bs.size() * ns.size(), params.workers,
        [&](std::size_t i) {
            Item item{bs[i / ns.size()], ns[i % ns.size()], false, {}};
            const GcnCandidate c(item.b, item.n);
            item.verdict = run_full_test(c);
            // An even N (> 2) needs no oracle call.
            if (!std::holds_alternative<Composite>(item.verdict) ||
                std::get<Composite>(item.verdict).kind != CompositeKind::ParityPrefilter) {
                item.prime = oracle_says_prime(trusted_is_prime(c.value(), params.oracle));
            }
            return item;
        },
        [&](Item&& item) {
            ++report.checked;
            const bool proven = std::holds_alternative<ProvenPrime>(item.verdict);
            if (proven) ++report.proven;
            if (item.prime) ++report.oracle_primes;
            if (proven && !item.prime) report.unsound.push_back({item.b, item.n, item.verdict});
            if (item.prime && !proven) {
                auto& list = item.n > item.b ? report.violations : report.uncertified_outside;
                list.push_back({item.b, item.n, item.verdict});
            }
            return true;
        });
    return report;
}

void write_monitor_report(const MonitorParams& params, const MonitorReport& report, std::ostream& out)
{
    out << Json{{"kind", "monitor-header"},
                {"b_from", natural_json(params.b_from)},
                {"b_to", natural_json(params.b_to)},
                {"n_from", natural_json(params.n_from)},
                {"n_to", natural_json(params.n_to)},
                {"oracle_rounds", params.oracle.random_rounds},
                {"oracle_seed", std::to_string(params.oracle.seed)}}
               .dump()
        << '\n';
    auto emit = [&](const char* kind, const MonitorEntry& e) {
        Json j = {{"kind", kind}, {"b", natural_json(e.b)}, {"n", natural_json(e.n)}};
        put_verdict(j, e.verdict);
        out << j.dump() << '\n';
    };
    for (const auto& e : report.violations) emit("violation", e);
    for (const auto& e : report.unsound) emit("unsound", e);
    for (const auto& e : report.uncertified_outside) emit("uncertified-n-le-b", e);
    out << Json{{"kind", "summary"},
                {"checked", report.checked},
                {"oracle_primes", report.oracle_primes},
                {"proven", report.proven},
                {"violations", report.violations.size()},
                {"unsound", report.unsound.size()}}
               .dump()
        << '\n';
}

std::vector<BenchRow> bench(const Natural& b, const std::vector<Natural>& ns, const OracleOptions& oracle)
{
    std::vector<BenchRow> rows;
    for (const auto& n : ns) {
        BenchRow row;
        row.n = n;
        const GcnCandidate c(b, n);
        row.digits = digit_count(c.value());

        auto start = Clock::now();
        Evaluation ev = evaluate(c);
        row.full_test_seconds = seconds_since(start);
        row.verdict = std::move(ev.verdict);
        row.k_by_base = std::move(ev.k_by_base);

        start = Clock::now();
        (void)trusted_is_prime(c.value(), oracle);
        row.oracle_seconds = seconds_since(start);
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_bench_table(const Natural& b, const std::vector<BenchRow>& rows, std::ostream& out)
{
    std::vector<std::vector<std::string>> table;
    auto add_row = [&](std::string head, auto cell) {
        std::vector<std::string> line{std::move(head)};
        for (const auto& r : rows) line.push_back(cell(r));
        table.push_back(std::move(line));
    };
    add_row("b=" + to_decimal(b) + ", n =", [](const BenchRow& r) { return to_decimal(r.n); });
    add_row("digits", [](const BenchRow& r) { return to_decimal(r.digits); });

    std::set<Natural> bases;
    for (const auto& r : rows) {
        for (const auto& [p, k] : r.k_by_base) bases.insert(p);
    }
    for (const auto& p : bases) {
        add_row("K+1 (base " + to_decimal(p) + ")", [&p](const BenchRow& r) {
            auto it = r.k_by_base.find(p);
            return it == r.k_by_base.end() ? std::string("-") : to_decimal(it->second + 1);
        });
    }
    add_row("verdict", [](const BenchRow& r) { return verdict_tag(r.verdict); });
    auto seconds = [](double s) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(3) << s;
        return os.str();
    };
    add_row("full test (s)", [&](const BenchRow& r) { return seconds(r.full_test_seconds); });
    add_row("oracle (s)", [&](const BenchRow& r) { return seconds(r.oracle_seconds); });

    std::vector<std::size_t> width;
    for (const auto& line : table) {
        width.resize(std::max(width.size(), line.size()));
        for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
    }
    for (const auto& line : table) {
        out << '|';
        for (std::size_t i = 0; i < line.size(); ++i) out << ' ' << std::left << std::setw(static_cast<int>(width[i])) << line[i] << " |";
        out << '\n';
    }
}

}  // namespace gcn
