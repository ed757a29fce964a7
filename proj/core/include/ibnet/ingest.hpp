#ifndef IBNET_INGEST_HPP
#define IBNET_INGEST_HPP

#include <cstddef>
#include <istream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ibnet/types.hpp"

namespace ibnet {

// Converts time-stamped transaction logs into a NetworkSeries: in-window
// grouping by calendar date, multi-edge simplification by amount summation,
// and reduction to the largest weakly connected component per day.

struct TransactionRecord {
    std::string date;      // YYYY-MM-DD
    int minute_of_day = 0; // 0..1439
    std::string lender;
    std::string borrower;
    double amount = 0.0;   // millions of currency units
    std::string category;  // e.g. "ON", "ONL"
};

struct RejectedRow {
    std::size_t line = 0; // 1-based line number in the input
    std::string reason;
};

struct ParseResult {
    std::vector<TransactionRecord> records; // input order
    std::vector<RejectedRow> rejects;
};

// Parses CSV with header `timestamp,lender,borrower,amount,category` and
// timestamps formatted `YYYY-MM-DD HH:MM`. Malformed rows (bad field count,
// unparseable timestamp or amount, nonpositive amount, lender == borrower)
// are collected as rejects, not dropped silently. A missing or wrong header
// raises FormatError.
ParseResult parse_transactions(std::istream& in);

// Keeps records whose category is in the allow-set.
std::vector<TransactionRecord> filter_overnight(
    std::vector<TransactionRecord> records,
    const std::set<std::string>& allow = {"ON", "ONL"});

struct DailyWindow {
    int start_minute = 8 * 60;  // inclusive
    int end_minute = 18 * 60;   // exclusive
};

struct IngestResult {
    NetworkSeries series;
    std::vector<std::string> bank_names; // bank_names[i] is the name of id i+1
    std::vector<std::string> dates;      // dates[d] is the calendar date of series day d
};

// Groups in-window records by calendar date, sums amounts over repeated
// ordered pairs, keeps the largest weakly connected component per day
// (ties: larger total weight, then smallest minimum bank id) and compresses
// skipped empty days out of the business-day clock. Bank ids are assigned
// 1..K by lexicographic order of the names appearing in in-window records.
IngestResult build_daily_networks(std::span<const TransactionRecord> records,
                                  const DailyWindow& window = {});

// Subgraph induced by the largest direction-blind component. Throws
// UndefinedMetricError on an empty network.
DailyNetwork largest_weakly_connected_component(const DailyNetwork& net);

} // namespace ibnet

#endif
