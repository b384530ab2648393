#include <doctest.h>

#include "gcn/records.hpp"
#include "gcn/search.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using gcn::Natural;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name)
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

gcn::ScanParams params_for(unsigned long b, std::uint64_t from, std::uint64_t to, unsigned workers)
{
    gcn::ScanParams p;
    p.b = b;
    p.n_from = from;
    p.n_to = to;
    p.sieve_limit = 100;
    p.workers = workers;
    p.record_timing = false;
    return p;
}

}  // namespace

TEST_CASE("scan_gcp flags exactly the oracle primes for b = 3, n <= 10")
{
    auto params = params_for(3, 1, 10, 1);
    const auto records = gcn::scan_gcp(params);
    REQUIRE(records.size() == 10);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        CHECK(r.n == i + 1);
        const Natural N = gcn::gcn_value(3, r.n);
        const bool prime = std::holds_alternative<gcn::OraclePrime>(gcn::trusted_is_prime(N));
        CHECK(gcn::digit_count(N) == r.digits);
        if (prime) {
            CHECK(gcn::verdict_rank(r.verdict) >= 2);
        } else {
            CHECK_FALSE(std::holds_alternative<gcn::ProvenPrime>(r.verdict));
        }
        if (r.n.get_ui() % 2 == 1) {
            CHECK(std::get<gcn::Composite>(r.verdict).kind == gcn::CompositeKind::ParityPrefilter);
        }
        CHECK(r.certificate().has_value() == std::holds_alternative<gcn::ProvenPrime>(r.verdict));
    }
}

TEST_CASE("scan_gcp on the Cullen prime n = 141")
{
    gcn::ScanParams params = params_for(2, 141, 141, 1);
    params.sieve_limit = 1000;
    const auto records = gcn::scan_gcp(params);
    REQUIRE(records.size() == 1);
    CHECK(std::holds_alternative<gcn::ProvenPrime>(records[0].verdict));
    CHECK_FALSE(records[0].sieve_hit.has_value());
    CHECK(gcn::verify_certificate(*records[0].certificate()));
}

TEST_CASE("scan_gcp empty range")
{
    CHECK(gcn::scan_gcp(params_for(5, 5, 4, 1)).empty());
}

TEST_CASE("sieved candidates carry the sieve divisor")
{
    const auto records = gcn::scan_gcp(params_for(2, 1, 10, 1));
    // C_2(2) = 9 and C_2(7) = 897 are divisible by 3.
    CHECK(records[1].sieve_hit == std::optional<std::uint64_t>{3});
    CHECK(std::get<gcn::Composite>(records[1].verdict) == gcn::Composite{gcn::CompositeKind::SieveDivisor, Natural(3)});
    CHECK(records[6].sieve_hit == std::optional<std::uint64_t>{3});
    // C_2(1) = 3 is not discarded by its own prime.
    CHECK_FALSE(records[0].sieve_hit.has_value());
}

TEST_CASE("scan output is identical for any worker count")
{
    std::ostringstream one, four, seven;
    scan_to_stream(params_for(3, 1, 400, 1), one);
    scan_to_stream(params_for(3, 1, 400, 4), four);
    scan_to_stream(params_for(3, 1, 400, 7), seven);
    CHECK(one.str() == four.str());
    CHECK(one.str() == seven.str());
    const std::string text = one.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 401);
}

TEST_CASE("scan resumes after a stop and after a torn final line")
{
    TempDir dir("gcn_search_resume");
    const auto full_path = dir.path / "full.jsonl";
    const auto part_path = dir.path / "part.jsonl";
    const auto params = params_for(3, 1, 300, 3);

    const auto full = gcn::scan_to_file(params, full_path, false);
    CHECK(full.completed);
    CHECK(full.new_records == 300);

    // Interrupted after 120 records.
    std::size_t emitted = 0;
    const auto first = gcn::scan_to_file(params, part_path, false, [&] { return ++emitted >= 120; });
    CHECK_FALSE(first.completed);
    CHECK(first.new_records == 120);

    // Simulate a crash in the middle of writing the next line.
    {
        std::ofstream torn(part_path, std::ios::binary | std::ios::app);
        torn << R"({"kind":"record","b":"3","n":"121","dig)";
    }
    const auto second = gcn::scan_to_file(params, part_path, true);
    CHECK(second.resumed_records == 120);
    CHECK(second.new_records == 180);
    CHECK(second.completed);
    CHECK(slurp(part_path) == slurp(full_path));

    // Resuming a finished file is a no-op.
    const auto third = gcn::scan_to_file(params, part_path, true);
    CHECK(third.resumed_records == 300);
    CHECK(third.new_records == 0);
    CHECK(slurp(part_path) == slurp(full_path));
}

TEST_CASE("resume rejects a checkpoint written with other parameters")
{
    TempDir dir("gcn_search_mismatch");
    const auto path = dir.path / "scan.jsonl";
    gcn::scan_to_file(params_for(3, 1, 20, 1), path, false);
    const std::string before = slurp(path);
    CHECK_THROWS_AS(gcn::scan_to_file(params_for(5, 1, 20, 1), path, true), gcn::ScanIoError);
    CHECK(slurp(path) == before);
}

TEST_CASE("write failures surface as ScanIoError")
{
    TempDir dir("gcn_search_io");
    CHECK_THROWS_AS(gcn::scan_to_file(params_for(3, 1, 5, 1), dir.path, false), gcn::ScanIoError);
    CHECK_THROWS_AS(gcn::scan_to_file(params_for(3, 1, 5, 1), dir.path / "missing" / "x.jsonl", false),
                    gcn::ScanIoError);
}

TEST_CASE("scan records round-trip through JSON")
{
    const auto records = gcn::scan_gcp(params_for(8, 1, 60, 2));
    bool saw_proven = false, saw_test2_failure = false;
    for (const auto& r : records) {
        const std::string line = gcn::scan_record_to_json(r).dump();
        const auto back = gcn::scan_record_from_json(gcn::Json::parse(line));
        REQUIRE(back == r);
        saw_proven = saw_proven || r.certificate().has_value();
        if (const auto* c = std::get_if<gcn::Composite>(&r.verdict)) {
            saw_test2_failure = saw_test2_failure || c->kind == gcn::CompositeKind::Test2Failure;
        }
    }
    CHECK(saw_proven);
    // A ProbablePrimeTest2 verdict with its bases survives too.
    gcn::ScanRecord pp{20, 3, 5, gcn::ProbablePrimeTest2{{2, 5}}, {{2, 1}, {5, 0}}, std::nullopt, 12};
    CHECK(gcn::scan_record_from_json(gcn::scan_record_to_json(pp)) == pp);
    CHECK_THROWS_AS(gcn::scan_record_from_json(gcn::Json::parse(R"({"kind":"record","b":"x"})")), gcn::ValidationError);
}

TEST_CASE("hunt reproduces the TEST1 pseudoprimes for n in [2, 4]")
{
    gcn::HuntParams params{2, 600, 2, 4, 2, {}};
    const auto records = gcn::hunt_pseudoprimes(params);
    std::vector<std::pair<Natural, Natural>> test1;
    for (const auto& r : records) {
        CHECK_FALSE(gcn::oracle_says_prime(gcn::trusted_is_prime(r.value)));
        CHECK_FALSE(r.passed_labels().empty());
        if (r.passed(gcn::HuntTest::Test1)) test1.emplace_back(r.b, r.n);
    }
    CHECK(test1 == std::vector<std::pair<Natural, Natural>>{{80, 2}, {570, 4}});
}

TEST_CASE("hunt records for C_7(4) and C_1470(4)")
{
    const auto r7 = gcn::hunt_pseudoprimes({7, 7, 4, 4, 1, {}});
    REQUIRE(r7.size() == 1);
    CHECK(r7[0].passed(gcn::HuntTest::FermatBaseN));
    CHECK_FALSE(r7[0].passed(gcn::HuntTest::Test1));
    CHECK(r7[0].value == 9605);
    CHECK(r7[0].smallest_factor == 5);

    const auto r1470 = gcn::hunt_pseudoprimes({1470, 1470, 4, 4, 1, {}});
    REQUIRE(r1470.size() == 1);
    CHECK(r1470[0].passed(gcn::HuntTest::Test1));
    CHECK(r1470[0].passed(gcn::HuntTest::Test2, Natural(2)));
    CHECK_FALSE(r1470[0].passed(gcn::HuntTest::Test2, Natural(3)));
    CHECK_FALSE(r1470[0].passed(gcn::HuntTest::Test2, Natural(5)));
    CHECK_FALSE(r1470[0].passed(gcn::HuntTest::Test2, Natural(7)));
    const auto j = gcn::pseudoprime_record_to_json(r1470[0]);
    CHECK(j["N"] == "18677955240001");
    CHECK(j["passed"] == gcn::Json::array({"TEST1", "FermatBaseN", "FermatBaseB", "MillerRabinBaseN", "TEST2(2)"}));
}

TEST_CASE("hunt over an empty box")
{
    CHECK(gcn::hunt_pseudoprimes({10, 9, 2, 4, 1, {}}).empty());
}

TEST_CASE("conjecture monitor small boxes")
{
    const auto report = gcn::conjecture_monitor({2, 12, 1, 60, 2, {}});
    CHECK(report.violations.empty());
    CHECK(report.unsound.empty());
    CHECK(report.checked == 11 * 60);
    CHECK(report.proven > 0);

    // n < b is outside the monitored region: C_20(3) is prime but uncertified.
    const auto r20 = gcn::conjecture_monitor({20, 20, 3, 3, 1, {}});
    CHECK(r20.violations.empty());
    REQUIRE(r20.uncertified_outside.size() == 1);
    CHECK(r20.uncertified_outside[0].n == 3);

    CHECK(gcn::conjecture_monitor({5, 4, 1, 3, 1, {}}).checked == 0);
}

TEST_CASE("bench reports digits and K")
{
    const auto rows = gcn::bench(8, {5, 17, 23});
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.k_by_base.at(2) + 1 == 2);
        CHECK(std::holds_alternative<gcn::ProvenPrime>(row.verdict));
    }
    CHECK(rows[0].digits == 6);
    CHECK(rows[1].digits == 17);
    CHECK(rows[2].digits == 23);

    const auto r20 = gcn::bench(20, {3});
    CHECK(r20[0].digits == 5);
    CHECK(r20[0].k_by_base.at(5) + 1 == 1);

    std::ostringstream table;
    gcn::write_bench_table(8, rows, table);
    CHECK(table.str().find("K+1 (base 2)") != std::string::npos);
    CHECK(table.str().find("| digits") != std::string::npos);
}
