#include "ibnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ibnet/errors.hpp"

namespace ibnet {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

bool all_digits(const std::string& s, std::size_t from, std::size_t to) {
    if (to > s.size()) return false;
    for (std::size_t i = from; i < to; ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// `YYYY-MM-DD HH:MM` -> (date, minute of day); false on malformed input.
bool parse_timestamp(const std::string& ts, std::string& date, int& minute) {
    if (ts.size() != 16 || ts[4] != '-' || ts[7] != '-' || ts[10] != ' ' || ts[13] != ':')
        return false;
    if (!all_digits(ts, 0, 4) || !all_digits(ts, 5, 7) || !all_digits(ts, 8, 10) ||
        !all_digits(ts, 11, 13) || !all_digits(ts, 14, 16))
        return false;
    const int month = std::stoi(ts.substr(5, 2));
    const int day = std::stoi(ts.substr(8, 2));
    const int hour = std::stoi(ts.substr(11, 2));
    const int min = std::stoi(ts.substr(14, 2));
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || min > 59)
        return false;
    date = ts.substr(0, 10);
    minute = hour * 60 + min;
    return true;
}

bool parse_amount(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

ParseResult parse_transactions(std::istream& in) {
    ParseResult result;
    std::string line;
    if (!std::getline(in, line)) throw FormatError("parse_transactions: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "timestamp,lender,borrower,amount,category")
        throw FormatError(
            "parse_transactions: expected header `timestamp,lender,borrower,amount,category`");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5) {
            result.rejects.push_back({line_no, "field-count"});
            continue;
        }
        TransactionRecord rec;
        if (!parse_timestamp(fields[0], rec.date, rec.minute_of_day)) {
            result.rejects.push_back({line_no, "bad-timestamp"});
            continue;
        }
        rec.lender = fields[1];
        rec.borrower = fields[2];
        if (rec.lender.empty() || rec.borrower.empty()) {
            result.rejects.push_back({line_no, "empty-bank-id"});
            continue;
        }
        if (rec.lender == rec.borrower) {
            result.rejects.push_back({line_no, "self-loop"});
            continue;
        }
        if (!parse_amount(fields[3], rec.amount)) {
            result.rejects.push_back({line_no, "bad-amount"});
            continue;
        }
        if (!(rec.amount > 0.0)) {
            result.rejects.push_back({line_no, "nonpositive-amount"});
            continue;
        }
        rec.category = fields[4];
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::vector<TransactionRecord> filter_overnight(std::vector<TransactionRecord> records,
                                                const std::set<std::string>& allow) {
    std::erase_if(records, [&](const TransactionRecord& r) {
        return allow.find(r.category) == allow.end();
    });
    return records;
}

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

DailyNetwork largest_weakly_connected_component(const DailyNetwork& net) {
    if (net.edges.empty())
        throw UndefinedMetricError("largest_weakly_connected_component: empty network");

    const std::vector<int> banks = net.active_banks();
    std::unordered_map<int, int> index;
    for (std::size_t i = 0; i < banks.size(); ++i) index[banks[i]] = static_cast<int>(i);

    DisjointSet ds(banks.size());
    for (const Edge& e : net.edges) ds.unite(index[e.lender], index[e.borrower]);

    struct ComponentStats {
        int size = 0;
        double weight = 0.0;
        int min_id = 0;
    };
    std::map<int, ComponentStats> comps;
    for (std::size_t i = 0; i < banks.size(); ++i) {
        auto& c = comps[ds.find(static_cast<int>(i))];
        if (c.size == 0) c.min_id = banks[i];
        c.size += 1;
        c.min_id = std::min(c.min_id, banks[i]);
    }
    for (const Edge& e : net.edges) comps[ds.find(index[e.lender])].weight += e.weight;

    // Largest by size; ties by larger total weight, then by smallest
    // minimum bank id.
    int best_root = -1;
    for (const auto& [root, c] : comps) {
        if (best_root == -1) {
            best_root = root;
            continue;
        }
        const auto& b = comps[best_root];
        if (c.size != b.size) {
            if (c.size > b.size) best_root = root;
        } else if (c.weight != b.weight) {
            if (c.weight > b.weight) best_root = root;
        } else if (c.min_id < b.min_id) {
            best_root = root;
        }
    }

    DailyNetwork out;
    out.day = net.day;
    for (const Edge& e : net.edges)
        if (ds.find(index[e.lender]) == best_root) out.edges.push_back(e);
    out.sort_edges();
    return out;
}

IngestResult build_daily_networks(std::span<const TransactionRecord> records,
                                  const DailyWindow& window) {
    if (window.start_minute < 0 || window.end_minute > 24 * 60 ||
        window.start_minute >= window.end_minute)
        throw ParameterError("build_daily_networks: invalid time window");

    // In-window records grouped by calendar date; ISO dates sort correctly
    // as strings.
    std::map<std::string, std::vector<const TransactionRecord*>> by_date;
    std::set<std::string> names;
    for (const TransactionRecord& rec : records) {
        if (rec.minute_of_day < window.start_minute ||
            rec.minute_of_day >= window.end_minute)
            continue;
        by_date[rec.date].push_back(&rec);
        names.insert(rec.lender);
        names.insert(rec.borrower);
    }

    IngestResult result;
    result.bank_names.assign(names.begin(), names.end());
    std::unordered_map<std::string, int> id_of;
    for (std::size_t i = 0; i < result.bank_names.size(); ++i)
        id_of[result.bank_names[i]] = static_cast<int>(i) + 1;

    result.series.weighted = true;
    result.series.provenance = IngestedProvenance{"transaction-log"};
    int day_index = 0;
    for (const auto& [date, rows] : by_date) {
        std::map<std::pair<int, int>, double> pair_weight;
        for (const TransactionRecord* rec : rows)
            pair_weight[{id_of[rec->lender], id_of[rec->borrower]}] += rec->amount;
        DailyNetwork net;
        net.day = day_index;
        net.edges.reserve(pair_weight.size());
        for (const auto& [pair, w] : pair_weight)
            net.edges.push_back(Edge{pair.first, pair.second, w});
        net = largest_weakly_connected_component(net);
        result.series.days.push_back(std::move(net));
        result.dates.push_back(date);
        ++day_index;
    }
    return result;
}

} // namespace ibnet
