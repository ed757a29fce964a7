#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>

#include "ibnet/errors.hpp"
#include "ibnet/ingest.hpp"

using namespace ibnet;

namespace {

ParseResult parse(const std::string& text) {
    std::istringstream in(text);
    return parse_transactions(in);
}

const char* kHeader = "timestamp,lender,borrower,amount,category\n";

} // namespace

TEST_CASE("parse_transactions: well-formed rows") {
    const auto result = parse(std::string(kHeader) +
                              "2001-03-05 09:15,BANK_A,BANK_B,12.5,ON\n"
                              "2001-03-05 10:00,BANK_C,BANK_A,100,ONL\n"
                              "2001-03-06 17:59,BANK_B,BANK_C,3.25,1W\n");
    CHECK(result.records.size() == 3);
    CHECK(result.rejects.empty());
    CHECK(result.records[0].date == "2001-03-05");
    CHECK(result.records[0].minute_of_day == 9 * 60 + 15);
    CHECK(result.records[0].amount == doctest::Approx(12.5));
    CHECK(result.records[2].category == "1W");
}

TEST_CASE("parse_transactions: empty file with header is fine, missing header is not") {
    const auto result = parse(kHeader);
    CHECK(result.records.empty());
    CHECK(result.rejects.empty());

    std::istringstream bad("time,from,to,amt,cat\n1,2,3,4,5\n");
    CHECK_THROWS_AS(parse_transactions(bad), FormatError);
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_transactions(empty), FormatError);
}

TEST_CASE("parse_transactions: malformed rows are rejected with reasons") {
    const auto result = parse(std::string(kHeader) +
                              "2001-03-05 09:15,BANK_A,BANK_A,12.5,ON\n"  // self-loop
                              "2001-13-05 09:15,BANK_A,BANK_B,12.5,ON\n"  // bad month
                              "2001-03-05 25:15,BANK_A,BANK_B,12.5,ON\n"  // bad hour
                              "2001-03-05 09:15,BANK_A,BANK_B,zero,ON\n"  // bad amount
                              "2001-03-05 09:15,BANK_A,BANK_B,-4,ON\n"    // nonpositive
                              "2001-03-05 09:15,BANK_A,BANK_B,1\n"        // field count
                              "2001-03-05 09:15,BANK_A,BANK_B,5,ON\n");   // good
    REQUIRE(result.records.size() == 1);
    REQUIRE(result.rejects.size() == 6);
    std::map<std::string, int> reasons;
    for (const auto& r : result.rejects) ++reasons[r.reason];
    CHECK(reasons["self-loop"] == 1);
    CHECK(reasons["bad-timestamp"] == 2);
    CHECK(reasons["bad-amount"] == 1);
    CHECK(reasons["nonpositive-amount"] == 1);
    CHECK(reasons["field-count"] == 1);
    CHECK(result.rejects[0].line == 2); // 1-based, after the header
}

TEST_CASE("filter_overnight: allow-set semantics") {
    const auto parsed = parse(std::string(kHeader) +
                              "2001-03-05 09:15,A,B,1,ON\n"
                              "2001-03-05 09:16,B,C,1,ONL\n"
                              "2001-03-05 09:17,C,A,1,1W\n");
    const auto kept = filter_overnight(parsed.records);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].category == "ON");
    CHECK(kept[1].category == "ONL");

    CHECK(filter_overnight(parsed.records, {}).empty());
    CHECK(filter_overnight(parsed.records, {"1W"}).size() == 1);
}

TEST_CASE("build_daily_networks: window boundaries are half-open") {
    const auto parsed = parse(std::string(kHeader) +
                              "2001-03-05 07:59,A,B,1,ON\n"  // before window
                              "2001-03-05 08:00,A,B,2,ON\n"  // first included minute
                              "2001-03-05 17:59,A,B,4,ON\n"  // last included minute
                              "2001-03-05 18:00,A,B,8,ON\n"); // excluded exactly at end
    const auto result = build_daily_networks(parsed.records, {});
    REQUIRE(result.series.day_count() == 1);
    REQUIRE(result.series.days[0].edges.size() == 1);
    CHECK(result.series.days[0].edges[0].weight == doctest::Approx(6.0)); // 2 + 4
}

TEST_CASE("build_daily_networks: multi-edge simplification sums amounts") {
    const auto parsed = parse(std::string(kHeader) +
                              "2001-03-05 09:00,A,B,5,ON\n"
                              "2001-03-05 11:30,A,B,7,ON\n");
    const auto result = build_daily_networks(parsed.records, {});
    REQUIRE(result.series.days[0].edges.size() == 1);
    CHECK(result.series.days[0].edges[0].weight == doctest::Approx(12.0));
}

TEST_CASE("build_daily_networks: keeps the larger component and compresses days") {
    const auto parsed = parse(std::string(kHeader) +
                              "2001-03-05 09:00,A,B,100,ON\n"
                              "2001-03-05 09:10,C,D,1,ON\n"
                              "2001-03-05 09:20,D,E,1,ON\n"
                              // empty business day 2001-03-06 (no records)
                              "2001-03-07 09:00,A,B,1,ON\n");
    const auto result = build_daily_networks(parsed.records, {});
    REQUIRE(result.series.day_count() == 2);
    // day 0 keeps {C,D,E}: size 3 beats size 2 despite smaller weight
    REQUIRE(result.series.days[0].edges.size() == 2);
    for (const Edge& e : result.series.days[0].edges) CHECK(e.weight == 1.0);
    // the skipped calendar day does not leave a hole in the clock
    CHECK(result.series.days[1].day == 1);
    CHECK(result.dates == std::vector<std::string>{"2001-03-05", "2001-03-07"});
}

TEST_CASE("largest_weakly_connected_component: ties break by weight then min id") {
    DailyNetwork net;
    net.day = 0;
    net.edges = {{1, 2, 5.0}, {3, 4, 9.0}};
    net.sort_edges();
    const DailyNetwork kept = largest_weakly_connected_component(net);
    REQUIRE(kept.edges.size() == 1);
    CHECK(kept.edges[0].lender == 3); // equal size, higher total weight

    DailyNetwork net2;
    net2.day = 0;
    net2.edges = {{5, 6, 2.0}, {1, 2, 2.0}};
    net2.sort_edges();
    const DailyNetwork kept2 = largest_weakly_connected_component(net2);
    REQUIRE(kept2.edges.size() == 1);
    CHECK(kept2.edges[0].lender == 1); // equal size and weight: min bank id

    DailyNetwork connected;
    connected.day = 0;
    connected.edges = {{1, 2, 1.0}, {2, 3, 1.0}};
    connected.sort_edges();
    CHECK(largest_weakly_connected_component(connected).edges.size() == 2);

    CHECK_THROWS_AS(largest_weakly_connected_component(DailyNetwork{}),
                    UndefinedMetricError);
}

TEST_CASE("build_daily_networks: volume conservation and connectivity re-check") {
    // weave a few days with mixed in/out-of-window rows
    std::string text(kHeader);
    double expected_total = 0.0;
    const char* days[] = {"2001-03-05", "2001-03-06", "2001-03-08"};
    int bank = 0;
    for (const char* date : days) {
        for (int k = 0; k < 6; ++k) {
            const int hour = 9 + k;
            const char a = static_cast<char>('A' + (bank % 5));
            const char b = static_cast<char>('A' + ((bank + 1 + k) % 5 == (bank % 5)
                                                        ? (bank + 2) % 5
                                                        : (bank + 1 + k) % 5));
            if (a == b) continue;
            const double amount = 1.0 + k;
            text += std::string(date) + " " + (hour < 10 ? "0" : "") +
                    std::to_string(hour) + ":00," + a + "," + b + "," +
                    std::to_string(amount) + ",ON\n";
            ++bank;
        }
        text += std::string(date) + " 19:00,A,B,1000,ON\n"; // out of window
    }
    const auto parsed = parse(text);
    REQUIRE(parsed.rejects.empty());
    const auto result = build_daily_networks(parsed.records, {});

    // independent recount: sum in-window amounts whose endpoints landed in
    // the retained component of their day
    std::map<std::string, int> day_of_date;
    for (std::size_t d = 0; d < result.dates.size(); ++d)
        day_of_date[result.dates[d]] = static_cast<int>(d);
    std::map<std::string, int> id_of;
    for (std::size_t i = 0; i < result.bank_names.size(); ++i)
        id_of[result.bank_names[i]] = static_cast<int>(i) + 1;

    for (const TransactionRecord& rec : parsed.records) {
        if (rec.minute_of_day < 8 * 60 || rec.minute_of_day >= 18 * 60) continue;
        const DailyNetwork& net = result.series.days[day_of_date.at(rec.date)];
        const auto active = net.active_banks();
        const bool lender_in =
            std::find(active.begin(), active.end(), id_of.at(rec.lender)) != active.end();
        const bool borrower_in =
            std::find(active.begin(), active.end(), id_of.at(rec.borrower)) != active.end();
        if (lender_in && borrower_in) expected_total += rec.amount;
    }
    double got_total = 0.0;
    for (const DailyNetwork& net : result.series.days)
        for (const Edge& e : net.edges) got_total += e.weight;
    CHECK(got_total == doctest::Approx(expected_total).epsilon(1e-12));

    // every retained daily network is weakly connected
    for (const DailyNetwork& net : result.series.days) {
        const DailyNetwork again = largest_weakly_connected_component(net);
        CHECK(again.edges.size() == net.edges.size());
    }
}

TEST_CASE("build_daily_networks: deterministic for identical input bytes") {
    const std::string text = std::string(kHeader) +
                             "2001-03-05 09:00,X,Y,5,ON\n"
                             "2001-03-05 10:00,Z,X,2,ONL\n"
                             "2001-03-06 11:00,Y,Z,1,ON\n";
    const auto a = build_daily_networks(parse(text).records, {});
    const auto b = build_daily_networks(parse(text).records, {});
    REQUIRE(a.series.day_count() == b.series.day_count());
    CHECK(a.bank_names == b.bank_names);
    for (std::size_t d = 0; d < a.series.day_count(); ++d) {
        REQUIRE(a.series.days[d].edges.size() == b.series.days[d].edges.size());
        for (std::size_t e = 0; e < a.series.days[d].edges.size(); ++e) {
            CHECK(a.series.days[d].edges[e].lender == b.series.days[d].edges[e].lender);
            CHECK(a.series.days[d].edges[e].weight == b.series.days[d].edges[e].weight);
        }
    }
}
