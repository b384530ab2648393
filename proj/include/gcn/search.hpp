#pragma once

// Batch harnesses over ranges of (b, n): GCP scanning with checkpointed
// output, pseudoprime hunting, the n > b certification monitor, and timing.

#include "gcn/baselines.hpp"
#include "gcn/core.hpp"
#include "gcn/divisibility.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gcn {

/// Checkpoint or output file failures. Records already flushed stay intact.
class ScanIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScanRecord {
    Natural b;
    Natural n;
    Natural digits;
    Verdict verdict;
    std::map<Natural, Natural> k_by_base;
    std::optional<std::uint64_t> sieve_hit;
    std::uint64_t elapsed_ms = 0;

    /// Present exactly when the verdict is ProvenPrime.
    std::optional<PrimalityCertificate> certificate() const;

    friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

struct ScanParams {
    Natural b;
    std::uint64_t n_from = 1;
    std::uint64_t n_to = 0;
    std::uint64_t sieve_limit = 1000;
    unsigned workers = 1;
    /// When false every elapsed_ms is written as 0, making output byte-stable.
    bool record_timing = true;
};

using StopRequested = std::function<bool()>;

/// Parity prefilter, then the smallest sieving prime, then the full test.
ScanRecord examine_candidate(const Natural& b, std::uint64_t n, std::optional<std::uint64_t> sieve_hit,
                             bool record_timing);

/// Streams one record per n in [first_n, params.n_to] in ascending order,
/// whatever the worker count. `stop` is polled after every emitted record.
/// Returns the number of records emitted.
std::size_t scan_gcp(const ScanParams& params, std::uint64_t first_n, const std::function<void(const ScanRecord&)>& sink,
                     const StopRequested& stop = {});

/// Convenience overload scanning the full range into a vector.
std::vector<ScanRecord> scan_gcp(const ScanParams& params);

struct ScanFileSummary {
    std::size_t resumed_records = 0;
    std::size_t new_records = 0;
    bool completed = false;
};

/// Header line then one flushed record per line. With resume, an existing
/// file whose header matches is truncated after its last complete record
/// and the scan continues from the following n.
ScanFileSummary scan_to_file(const ScanParams& params, const std::filesystem::path& path, bool resume,
                             const StopRequested& stop = {});

/// Same line format on an arbitrary stream (no resume).
void scan_to_stream(const ScanParams& params, std::ostream& out);

enum class HuntTest { Test1, FermatBaseN, FermatBaseB, MillerRabinBaseN, Test2 };

struct HuntTestOutcome {
    HuntTest test = HuntTest::Test1;
    std::optional<Natural> base;  // set for Test2
    bool passed = false;

    std::string label() const;
    friend bool operator==(const HuntTestOutcome&, const HuntTestOutcome&) = default;
};

struct PseudoprimeRecord {
    Natural b;
    Natural n;
    Natural value;
    std::vector<HuntTestOutcome> outcomes;
    /// Smallest prime factor when it is <= 10^6, else 0 (the oracle alone
    /// witnesses compositeness).
    std::uint64_t smallest_factor = 0;

    bool passed(HuntTest test, const std::optional<Natural>& base = std::nullopt) const;
    std::vector<std::string> passed_labels() const;
};

struct HuntParams {
    Natural b_from, b_to, n_from, n_to;
    unsigned workers = 1;
    OracleOptions oracle;
};

/// Every composite odd C_b(n) in the box that passes at least one of
/// TEST1, Fermat base n, Fermat base b, Miller-Rabin base n, TEST2 at a prime
/// p | b. Ordered by (b, n).
std::vector<PseudoprimeRecord> hunt_pseudoprimes(const HuntParams& params);

struct MonitorEntry {
    Natural b;
    Natural n;
    Verdict verdict;
};

struct MonitorReport {
    std::uint64_t checked = 0;
    std::uint64_t oracle_primes = 0;
    std::uint64_t proven = 0;
    /// n > b, oracle prime, not ProvenPrime.
    std::vector<MonitorEntry> violations;
    /// n <= b, oracle prime, not ProvenPrime (outside the monitored region).
    std::vector<MonitorEntry> uncertified_outside;
    /// ProvenPrime but oracle composite. Must stay empty.
    std::vector<MonitorEntry> unsound;
};

struct MonitorParams {
    Natural b_from, b_to, n_from, n_to;
    unsigned workers = 1;
    OracleOptions oracle;
};

MonitorReport conjecture_monitor(const MonitorParams& params);

/// Header, one line per entry and a summary line; byte-stable for a given
/// parameter set.
void write_monitor_report(const MonitorParams& params, const MonitorReport& report, std::ostream& out);

struct BenchRow {
    Natural n;
    Natural digits;
    Verdict verdict;
    std::map<Natural, Natural> k_by_base;
    double full_test_seconds = 0;
    double oracle_seconds = 0;
};

std::vector<BenchRow> bench(const Natural& b, const std::vector<Natural>& ns, const OracleOptions& oracle = {});
void write_bench_table(const Natural& b, const std::vector<BenchRow>& rows, std::ostream& out);

/// Version string written into output headers.
const char* tool_version();

}  // namespace gcn
